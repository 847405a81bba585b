#include "fredev/evans.hpp"

#include <algorithm>
#include <cmath>

#include "fredev/errors.hpp"
#include "fredev/linalg.hpp"

namespace fredev::evans {

namespace {

using Matrix = std::function<CMatrix(double)>;

struct Start {
  CMatrix values;       // normalized columns
  CVector renorm_log;   // raw = values * diag(exp(renorm_log))
  std::vector<cplx> rates;
  CMatrix direction;    // unnormalized eigenvector columns (for the closed form when R = 0)
};

Start start_from(const CMatrix& vecs, const std::vector<cplx>& rates, double x) {
  Start s;
  s.values = vecs;
  s.renorm_log = CVector(vecs.cols());
  for (Eigen::Index l = 0; l < vecs.cols(); ++l) {
    const double nrm = vecs.col(l).norm();
    s.values.col(l) /= nrm;
    s.renorm_log(l) = rates[static_cast<std::size_t>(l)] * x + std::log(nrm);
  }
  s.rates = rates;
  s.direction = vecs;
  return s;
}

void normalize_factor(CMatrix& t, CVector& logs) {
  for (Eigen::Index l = 0; l < t.cols(); ++l) {
    const double m = t.col(l).cwiseAbs().maxCoeff();
    if (m > 0.0 && m != 1.0) {
      t.col(l) /= m;
      logs(l) += std::log(m);
    }
  }
}

// Integrates Y' = M(x) Y from x_start through `stops` (all on one side of
// x_start), keeping the state well scaled.
JostSolution integrate(const Matrix& m, double x_start, const Start& start, std::vector<double> stops,
                       const IntegrationParams& params, JostSolution::Direction direction, bool unperturbed) {
  const bool forward = direction == JostSolution::Direction::Minus;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  if (!forward) std::reverse(stops.begin(), stops.end());

  JostSolution sol;
  sol.direction = direction;
  sol.rates = start.rates;
  const Eigen::Index c = start.values.cols();

  auto record = [&](double x, const CMatrix& y, const CMatrix& t, const CVector& logs) {
    sol.xs.push_back(x);
    sol.values.push_back(y);
    sol.factor.push_back(t);
    sol.renorm_log.push_back(logs);
  };

  if (unperturbed) {
    // closed form: the columns are exact exponential solutions
    record(x_start, start.values, CMatrix::Identity(c, c), start.renorm_log);
    for (double x : stops) {
      if (x == x_start) continue;
      CVector logs = start.renorm_log;
      for (Eigen::Index l = 0; l < c; ++l) logs(l) += start.rates[static_cast<std::size_t>(l)] * (x - x_start);
      record(x, start.values, CMatrix::Identity(c, c), logs);
    }
  } else {
    ode::Options opts = params.ode_options();
    ode::DormandPrince stepper([&m](double x, const CMatrix& y, CMatrix& dy) { dy.noalias() = m(x) * y; }, opts);
    stepper.reset(x_start, start.values);
    CMatrix t = CMatrix::Identity(c, c);
    CVector logs = start.renorm_log;
    double last_qr = x_start;
    const double hi = params.renorm_threshold, lo = 1.0 / params.renorm_threshold;

    auto maintain = [&](bool force) {
      CMatrix& y = stepper.state();
      bool changed = false;
      if (c >= 2 && (force || std::abs(stepper.x() - last_qr) >= params.reorth_interval)) {
        Eigen::HouseholderQR<CMatrix> qr(y);
        const CMatrix q = qr.householderQ() * CMatrix::Identity(y.rows(), c);
        const CMatrix r = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
        y = q;
        t = r * t;
        last_qr = stepper.x();
        changed = true;
      } else {
        for (Eigen::Index l = 0; l < c; ++l) {
          const double nrm = y.col(l).norm();
          if (nrm > hi || nrm < lo || force) {
            y.col(l) /= nrm;
            t.row(l) *= nrm;
            changed = true;
          }
        }
      }
      if (changed) {
        normalize_factor(t, logs);
        stepper.state_changed();
      }
    };

    record(x_start, start.values, t, logs);
    for (double x : stops) {
      if (x == x_start) continue;
      while (!stepper.step_toward(x)) maintain(false);
      maintain(true);
      record(x, stepper.state(), t, logs);
    }
  }

  if (!forward) {
    std::reverse(sol.xs.begin(), sol.xs.end());
    std::reverse(sol.values.begin(), sol.values.end());
    std::reverse(sol.factor.begin(), sol.factor.end());
    std::reverse(sol.renorm_log.begin(), sol.renorm_log.end());
  }
  return sol;
}

Matrix system_matrix(const model::SystemProblem& system, cplx lambda) {
  const CMatrix a0 = system.base_matrix(lambda);
  return [a0, &system](double x) { return (a0 + system.perturbation_at(x)).eval(); };
}

Matrix adjoint_matrix(const model::SystemProblem& system, cplx lambda) {
  const CMatrix a0 = system.base_matrix(lambda);
  return [a0, &system](double x) { return (-(a0 + system.perturbation_at(x)).transpose()).eval(); };
}

std::vector<double> default_stops(const IntegrationParams& params, const std::vector<double>& extra) {
  std::vector<double> s = params.grid().nodes;
  s.push_back(-params.half_width);
  s.push_back(params.half_width);
  s.insert(s.end(), extra.begin(), extra.end());
  return s;
}

std::vector<cplx> slice(const std::vector<cplx>& v, int lo, int cnt) {
  return {v.begin() + lo, v.begin() + lo + cnt};
}

// sum_l (A)_{ql} exp(logs_l - rate_q x) as a k x c matrix, where A = W Y^ T~.
CMatrix unwind(const CMatrix& a, const CVector& logs, const std::vector<cplx>& rates, double x) {
  CMatrix out(a.rows(), a.cols());
  for (Eigen::Index q = 0; q < a.rows(); ++q)
    for (Eigen::Index l = 0; l < a.cols(); ++l)
      out(q, l) = a(q, l) * std::exp(logs(l) - rates[static_cast<std::size_t>(q)] * x);
  return out;
}

double rel_gap(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace

ode::Options IntegrationParams::ode_options() const {
  ode::Options o;
  o.rtol = rtol;
  o.atol = atol;
  o.min_step = min_step;
  return o;
}

QuadratureGrid IntegrationParams::grid(bool split_at_zero) const {
  return build_grid(half_width, quad_points, QuadratureRule::GaussLegendre, panel_order, split_at_zero);
}

std::size_t JostSolution::index_of(double x) const {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x) return i;
  fail(ErrorKind::Config, "abscissa was not a sample point of the Jost solution");
}

CMatrix JostSolution::raw(std::size_t i) const {
  CMatrix r = values[i] * factor[i];
  for (Eigen::Index l = 0; l < r.cols(); ++l) r.col(l) *= std::exp(renorm_log[i](l));
  return r;
}

cplx JostSolution::log_scale(std::size_t i) const {
  return std::log(factor[i].determinant()) + renorm_log[i].sum();
}

greens::UnperturbedBasis end_basis(const model::SystemProblem& system, cplx lambda, int side, const Tolerances& tol) {
  const CMatrix& r = side < 0 ? system.r_minus : system.r_plus;
  const int n = system.dim;
  if (system.companion_coeffs) {
    // A0 + R+- is again a companion matrix when R+- lives in the bottom row
    bool bottom_only = true;
    for (int i = 0; i + 1 < n; ++i)
      for (int j = 0; j < n; ++j) bottom_only = bottom_only && r(i, j) == cplx(0.0);
    if (bottom_only) {
      std::vector<cplx> c = *system.companion_coeffs;
      for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] -= r(n - 1, j);
      return greens::UnperturbedBasis::from_roots(greens::classify_roots(c, lambda, tol), tol);
    }
  }
  return greens::UnperturbedBasis::from_matrix(system.base_matrix(lambda) + r, tol);
}

JostSolution jost_minus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                        const std::vector<double>& extra_stops) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, -1, params.tol);
  const double X = params.half_width;
  const Start s = start_from(b.vectors().leftCols(b.k()), slice(b.rates(), 0, b.k()), -X);
  return integrate(system_matrix(system, lambda), -X, s, default_stops(params, extra_stops), params,
                   JostSolution::Direction::Minus, system.zero_perturbation);
}

JostSolution jost_plus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                       const std::vector<double>& extra_stops) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, +1, params.tol);
  const double X = params.half_width;
  const int n = b.dim(), k = b.k();
  const Start s = start_from(b.vectors().rightCols(n - k), slice(b.rates(), k, n - k), X);
  return integrate(system_matrix(system, lambda), X, s, default_stops(params, extra_stops), params,
                   JostSolution::Direction::Plus, system.zero_perturbation);
}

AdjointJost adjoint_jost_plus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                              const std::vector<double>& extra_stops) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, +1, params.tol);
  const double X = params.half_width;
  const int k = b.k();
  // rows of Z0+ are W_q e^{-kappa_q x}: transpose to columns with rates -kappa
  std::vector<cplx> rates = slice(b.rates(), 0, k);
  for (auto& r : rates) r = -r;
  const Start s = start_from(b.inverse().topRows(k).transpose(), rates, X);
  AdjointJost z;
  z.transposed = integrate(adjoint_matrix(system, lambda), X, s, default_stops(params, extra_stops), params,
                           JostSolution::Direction::Plus, system.zero_perturbation);
  return z;
}

double truncation_estimate(const model::SystemProblem& system, double X) {
  std::vector<double> x, w;
  composite_gauss(X, X + 40.0, 80, 8, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * (system.perturbation_at(x[i]) - system.r_plus).norm();
    s += w[i] * (system.perturbation_at(-x[i]) - system.r_minus).norm();
  }
  return s;
}

CMatrix transmission_matrix(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, -1, params.tol);
  const int k = b.k();
  const QuadratureGrid grid = params.grid();
  CMatrix d = CMatrix::Identity(k, k);
  if (system.zero_perturbation) return d;
  const JostSolution y = jost_minus(system, lambda, params);
  const CMatrix w = b.inverse().topRows(k);
  const std::vector<cplx> rates = slice(b.rates(), 0, k);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    const std::size_t j = y.index_of(x);
    const CMatrix a = w * system.perturbation_at(x) * y.values[j] * y.factor[j];
    d += grid.weights[i] * unwind(a, y.renorm_log[j], rates, x);
  }
  return d;
}

CMatrix gram_transmission(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, -1, params.tol);
  const int k = b.k();
  const JostSolution y = jost_minus(system, lambda, params);
  const double X = params.half_width;
  const std::size_t j = y.index_of(X);
  const CMatrix a = b.inverse().topRows(k) * y.values[j] * y.factor[j];
  return unwind(a, y.renorm_log[j], slice(b.rates(), 0, k), X);
}

CMatrix swinton_matrix(const model::SystemProblem& system, cplx lambda, double x0, const IntegrationParams& params) {
  const JostSolution y = jost_minus(system, lambda, params, {x0});
  const AdjointJost z = adjoint_jost_plus(system, lambda, params, {x0});
  const std::size_t iy = y.index_of(x0), iz = z.transposed.index_of(x0);
  const CMatrix a = (z.transposed.values[iz] * z.transposed.factor[iz]).transpose() * y.values[iy] * y.factor[iy];
  CMatrix out(a.rows(), a.cols());
  for (Eigen::Index q = 0; q < a.rows(); ++q)
    for (Eigen::Index l = 0; l < a.cols(); ++l)
      out(q, l) = a(q, l) * std::exp(z.transposed.renorm_log[iz](q) + y.renorm_log[iy](l));
  return out;
}

CMatrix born_transmission(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params) {
  const greens::UnperturbedBasis b = end_basis(system, lambda, -1, params.tol);
  const int k = b.k();
  const QuadratureGrid grid = params.grid();
  CMatrix d = CMatrix::Identity(k, k);
  const CMatrix w = b.inverse().topRows(k);
  const CMatrix v = b.vectors().leftCols(k);
  // Z0+(x) R Y0-(x) = diag(e^{-kappa x}) W R V diag(e^{kappa x})
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    const CMatrix a = w * system.perturbation_at(x) * v;
    for (int q = 0; q < k; ++q)
      for (int l = 0; l < k; ++l)
        d(q, l) += grid.weights[i] * a(q, l) * std::exp((b.rates()[static_cast<std::size_t>(l)] - b.rates()[static_cast<std::size_t>(q)]) * x);
  }
  return d;
}

namespace {

EvansResult matched(const model::SystemProblem& system, cplx lambda, double x0, const IntegrationParams& params) {
  const greens::UnperturbedBasis bm = end_basis(system, lambda, -1, params.tol);
  const greens::UnperturbedBasis bp = end_basis(system, lambda, +1, params.tol);
  if (bm.k() != bp.k())
    fail(ErrorKind::CountMismatch, "the two asymptotic matrices split with different numbers of growing modes");
  const int n = system.dim, k = bm.k();
  const double X = params.half_width;
  if (!(x0 > -X && x0 < X)) fail(ErrorKind::Config, "matching point must lie inside (-X, X)");

  const Start sm = start_from(bm.vectors().leftCols(k), slice(bm.rates(), 0, k), -X);
  const Start sp = start_from(bp.vectors().rightCols(n - k), slice(bp.rates(), k, n - k), X);
  const bool zero = system.zero_perturbation;
  const Matrix m = system_matrix(system, lambda);
  const JostSolution ym = integrate(m, -X, sm, {x0}, params, JostSolution::Direction::Minus, zero);
  const JostSolution yp = integrate(m, X, sp, {x0}, params, JostSolution::Direction::Plus, zero);
  const std::size_t im = ym.index_of(x0), ip = yp.index_of(x0);

  CMatrix joined(n, n);
  joined << ym.values[im], yp.values[ip];
  const cplx det_joined = joined.determinant();
  const cplx scale = ym.factor[im].determinant() * yp.factor[ip].determinant();

  // c = det[V- e^{kappa- x0}, V+ e^{tau+ x0}]
  CMatrix vjoined(n, n);
  vjoined << bm.vectors().leftCols(k), bp.vectors().rightCols(n - k);
  const cplx det_v = vjoined.determinant();
  cplx rate_sum(0.0);
  for (int j = 0; j < k; ++j) rate_sum += bm.rates()[static_cast<std::size_t>(j)];
  for (int j = k; j < n; ++j) rate_sum += bp.rates()[static_cast<std::size_t>(j)];
  const cplx log_sum = ym.renorm_log[im].sum() + yp.renorm_log[ip].sum();

  EvansResult r;
  r.matching_point = x0;
  r.log_evans = std::log(det_joined * scale) + log_sum;
  r.log_c = std::log(det_v) + rate_sum * x0;
  r.evans = det_joined * scale * std::exp(log_sum);
  r.c_lambda = det_v * std::exp(rate_sum * x0);
  r.ratio = det_joined * scale / det_v * std::exp(log_sum - rate_sum * x0);
  r.truncation_estimate = zero ? 0.0 : truncation_estimate(system, X);
  return r;
}

}  // namespace

EvansResult evans_function(const model::SystemProblem& system, cplx lambda, double x0, const IntegrationParams& params) {
  EvansResult r = matched(system, lambda, x0, params);
  r.transmission = transmission_matrix(system, lambda, params);
  r.det_transmission = r.transmission.determinant();
  return r;
}

cplx evans_ratio(const model::SystemProblem& system, cplx lambda, double x0, const IntegrationParams& params) {
  return matched(system, lambda, x0, params).ratio;
}

std::vector<cplx> wronskian_profile(const greens::UnperturbedBasis& basis, const CMatrix& a0, const std::vector<double>& xs) {
  std::vector<cplx> out;
  const cplx tr = a0.trace();
  for (double x : xs) out.push_back(basis.fundamental(x).determinant() * std::exp(-tr * x));
  return out;
}

IdentityReport identity_report(const model::ScalarProblem& problem, cplx lambda, const IntegrationParams& params,
                               double x0) {
  if (problem.is_front()) fail(ErrorKind::Config, "identity_report requires a pulse problem");
  IdentityReport rep;
  const QuadratureGrid grid = params.grid();
  rep.d = fredholm::det1(problem, lambda, grid, params.tol).value;
  const model::SystemProblem system = model::to_system(problem);
  const EvansResult ev = evans_function(system, lambda, x0, params);
  rep.det_transmission = ev.det_transmission;
  rep.evans_ratio = ev.ratio;
  const greens::UnperturbedBasis basis = greens::unperturbed_bases(system, lambda, params.tol);
  rep.system_trace = fredholm::trace_system(system, lambda, grid, basis, params.tol);
  rep.det2 = fredholm::det2(system, lambda, grid, basis, params.tol).value;
  rep.det2_relation_residual = rel_gap(rep.det_transmission, std::exp(rep.system_trace) * rep.det2);
  rep.max_pairwise_gap = std::max({rel_gap(rep.d, rep.det_transmission), rel_gap(rep.d, rep.evans_ratio),
                                   rel_gap(rep.det_transmission, rep.evans_ratio)});
  return rep;
}

}  // namespace fredev::evans
