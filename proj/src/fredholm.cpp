#include "fredev/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fredev/errors.hpp"
#include "fredev/linalg.hpp"

namespace fredev::fredholm {

namespace {

// Barycentric Lagrange basis on the reference Gauss-Legendre panel.
struct PanelInterpolant {
  std::vector<double> nodes, weights, bary;

  explicit PanelInterpolant(int order) {
    gauss_legendre(order, nodes, weights);
    bary.assign(nodes.size(), 1.0);
    for (std::size_t j = 0; j < nodes.size(); ++j)
      for (std::size_t r = 0; r < nodes.size(); ++r)
        if (r != j) bary[j] /= nodes[j] - nodes[r];
  }

  // values of every basis polynomial at reference coordinate u
  void basis(double u, std::vector<double>& out) const {
    const std::size_t q = nodes.size();
    out.assign(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
      if (u == nodes[j]) {
        out[j] = 1.0;
        return;
      }
    }
    double den = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      out[j] = bary[j] / (u - nodes[j]);
      den += out[j];
    }
    for (auto& v : out) v /= den;
  }
};

// Node-wise factors a_i = left(x_i) U and c_i = Vt right(x_i).
struct NodeFactors {
  CMatrix a;  // block x terms
  CMatrix c;  // terms x block
};

NodeFactors factors_at(const KernelSource& src, double x) {
  NodeFactors f;
  f.a = src.left(x) * src.U;
  f.c = src.Vt * src.right(x);
  return f;
}

// out += scale * sum_{q in branch} e^{r_q t} a[:, q] c[q, :]
void accumulate_block(const KernelSource& src, const NodeFactors& fx, const NodeFactors& fy, double t, bool upper,
                      cplx scale, cplx* out, Eigen::Index stride) {
  const int b = src.block;
  const int lo = upper ? 0 : src.k;
  const int hi = upper ? src.k : src.terms();
  for (int q = lo; q < hi; ++q) {
    const cplx e = scale * std::exp(src.rates[static_cast<std::size_t>(q)] * t);
    for (int r = 0; r < b; ++r) {
      const cplx ar = e * fx.a(r, q);
      if (ar == cplx(0.0)) continue;
      for (int s = 0; s < b; ++s) out[r * stride + s] += ar * fy.c(q, s);
    }
  }
}

// Number of sub-panels per side needed to resolve e^{rate t} over `len`.
int sub_panels(double len, double rate) { return std::max(1, static_cast<int>(std::ceil(len * rate / 4.0))); }

// tr(K(x, s) K(s, x)) for t = x - s on the branch of K(x, s).
cplx product_trace(const KernelSource& src, const CMatrix& mx, const CMatrix& ms, double t, bool upper) {
  // mx = c_x a_x, ms = c_s a_s (terms x terms)
  const int lo1 = upper ? 0 : src.k, hi1 = upper ? src.k : src.terms();
  const int lo2 = upper ? src.k : 0, hi2 = upper ? src.terms() : src.k;
  cplx sum(0.0);
  for (int q = lo1; q < hi1; ++q)
    for (int r = lo2; r < hi2; ++r)
      sum += std::exp((src.rates[static_cast<std::size_t>(q)] - src.rates[static_cast<std::size_t>(r)]) * t) * ms(q, r) * mx(r, q);
  return sum;
}

GridSignature signature(const QuadratureGrid& g) {
  return {g.half_width, static_cast<int>(g.size()), g.rule};
}

}  // namespace

double KernelSource::max_rate() const {
  double m = 0.0;
  for (const auto& r : rates) m = std::max(m, std::abs(r));
  return m;
}

CMatrix KernelSource::core(double t, bool upper) const {
  const int lo = upper ? 0 : k, cnt = upper ? k : terms() - k;
  CMatrix u = U.middleCols(lo, cnt);
  for (int q = 0; q < cnt; ++q) u.col(q) *= std::exp(rates[static_cast<std::size_t>(lo + q)] * t);
  return u * Vt.middleRows(lo, cnt);
}

CMatrix KernelSource::operator()(double x, double xi) const {
  return left(x) * core(x - xi, x <= xi) * right(xi);
}

cplx KernelSource::diagonal_trace(double x, bool upper) const {
  return (left(x) * core(0.0, upper) * right(x)).trace();
}

KernelSource scalar_source(const greens::ScalarKernel& kernel) {
  KernelSource s;
  s.block = 1;
  s.inner = 1;
  const greens::RootSplit& roots = kernel.roots();
  s.rates = roots.all();
  s.k = roots.k();
  const int n = roots.n();
  s.U = CMatrix::Ones(1, n);
  s.Vt = CMatrix(n, 1);
  const int m = kernel.problem().deriv_order;
  for (int q = 0; q < n; ++q) {
    cplx w = kernel.alpha().alpha[static_cast<std::size_t>(q)];
    for (int p = 0; p < m; ++p) w *= s.rates[static_cast<std::size_t>(q)];
    s.Vt(q, 0) = w;
  }
  s.zero = kernel.problem().potential_is_zero();
  auto problem = std::make_shared<model::ScalarProblem>(kernel.problem());
  s.left = [problem](double x) {
    CMatrix l(1, 1);
    l(0, 0) = std::sqrt(std::abs(problem->potential(x)));
    return l;
  };
  s.right = [problem](double x) {
    CMatrix r(1, 1);
    const cplx v = problem->potential(x);
    const double a = std::abs(v);
    r(0, 0) = a == 0.0 ? cplx(0.0) : v / std::sqrt(a);
    return r;
  };
  return s;
}

KernelSource system_source(const greens::UnperturbedBasis& basis, std::function<CMatrix(double)> perturbation,
                           bool zero) {
  KernelSource s;
  const int n = basis.dim();
  s.block = n;
  s.inner = n;
  s.rates = basis.rates();
  s.k = basis.k();
  s.U = basis.vectors();
  for (int q = 0; q < s.k; ++q) s.U.col(q) = -s.U.col(q);
  s.Vt = basis.inverse();
  s.zero = zero;
  auto pert = std::make_shared<std::function<CMatrix(double)>>(std::move(perturbation));
  s.left = [pert](double x) { return (-greens::polar_factors((*pert)(x)).left).eval(); };
  s.right = [pert](double x) { return greens::polar_factors((*pert)(x)).right; };
  return s;
}

std::string to_string(Scheme scheme) { return scheme == Scheme::Plain ? "plain" : "kink_corrected"; }

std::string to_string(DiagonalConvention c) {
  switch (c) {
    case DiagonalConvention::ContinuousKernel: return "continuous_kernel";
    case DiagonalConvention::LowerBranch: return "lower_branch";
    case DiagonalConvention::ProductIntegration: return "product_integration";
  }
  return "product_integration";
}

std::string to_string(DetKind kind) {
  switch (kind) {
    case DetKind::Det1: return "det1";
    case DetKind::Det2: return "det2";
    case DetKind::DetP: return "detp";
  }
  return "det1";
}

Scheme default_scheme(QuadratureRule rule) {
  return rule == QuadratureRule::GaussLegendre ? Scheme::KinkCorrected : Scheme::Plain;
}

DiscretizedOperator discretize(const KernelSource& src, const QuadratureGrid& grid, Scheme scheme) {
  if (grid.rule != QuadratureRule::GaussLegendre) scheme = Scheme::Plain;
  const int b = src.block;
  const Eigen::Index N = static_cast<Eigen::Index>(grid.size());
  DiscretizedOperator op;
  op.block = b;
  op.grid = signature(grid);
  op.scheme = scheme;
  op.matrix = CMatrixRM::Zero(N * b, N * b);
  if (src.zero) {
    op.diagonal = scheme == Scheme::Plain ? (b == 1 ? DiagonalConvention::ContinuousKernel : DiagonalConvention::LowerBranch)
                                          : DiagonalConvention::ProductIntegration;
    return op;
  }

  std::vector<NodeFactors> f(static_cast<std::size_t>(N));
  std::vector<double> sw(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) {
    f[static_cast<std::size_t>(i)] = factors_at(src, grid.nodes[static_cast<std::size_t>(i)]);
    sw[static_cast<std::size_t>(i)] = std::sqrt(grid.weights[static_cast<std::size_t>(i)]);
  }
  const Eigen::Index stride = N * b;
  const bool corrected = scheme == Scheme::KinkCorrected;

  // plain entries (all pairs for Plain, off-panel pairs otherwise)
  for (Eigen::Index i = 0; i < N; ++i) {
    const double xi = grid.nodes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < N; ++j) {
      if (corrected && grid.panel_of[static_cast<std::size_t>(i)] == grid.panel_of[static_cast<std::size_t>(j)]) continue;
      const double xj = grid.nodes[static_cast<std::size_t>(j)];
      bool upper = xi < xj;
      if (i == j) upper = (b == 1);  // scalar: continuous; system: lower branch
      const cplx scale = sw[static_cast<std::size_t>(i)] * sw[static_cast<std::size_t>(j)];
      accumulate_block(src, f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)], xi - xj, upper, scale,
                       &op.matrix(i * b, j * b), stride);
    }
  }

  cplx tau1(0.0);
  for (Eigen::Index i = 0; i < N; ++i)
    tau1 += grid.weights[static_cast<std::size_t>(i)] * src.diagonal_trace(grid.nodes[static_cast<std::size_t>(i)], true);
  op.trace_analytic = tau1;

  if (!corrected) {
    op.diagonal = b == 1 ? DiagonalConvention::ContinuousKernel : DiagonalConvention::LowerBranch;
    op.trace_square = trace_of_square(op.matrix);
    return op;
  }
  op.diagonal = DiagonalConvention::ProductIntegration;

  // product integration on the diagonal panel, and the local part of tr(K^2)
  const int order = grid.panel_order;
  const PanelInterpolant interp(order);
  std::vector<double> sub_t, sub_w, ell;
  gauss_legendre(order, sub_t, sub_w);
  const double rate = src.max_rate();
  cplx local_exact(0.0);
  std::vector<CMatrix> mx(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) mx[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)].c * f[static_cast<std::size_t>(i)].a;

  CMatrixRM acc(b, b);
  for (Eigen::Index i = 0; i < N; ++i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    const double xi = grid.nodes[iu];
    const int p = grid.panel_of[iu];
    const double a = grid.edges[static_cast<std::size_t>(p)], bnd = grid.edges[static_cast<std::size_t>(p + 1)];
    const double mid = 0.5 * (a + bnd), half = 0.5 * (bnd - a);
    const Eigen::Index j0 = static_cast<Eigen::Index>(grid.panel_begin(static_cast<std::size_t>(p)));
    std::vector<CMatrix> row(static_cast<std::size_t>(order), CMatrix::Zero(b, b));
    cplx jloc(0.0);

    for (int side = 0; side < 2; ++side) {
      const double lo = side == 0 ? a : xi, hi = side == 0 ? xi : bnd;
      if (hi <= lo) continue;
      const bool upper = side == 1;  // s > x_i means x_i <= s
      const int pieces = sub_panels(hi - lo, rate);
      const double h = (hi - lo) / pieces;
      for (int piece = 0; piece < pieces; ++piece) {
        const double plo = lo + piece * h;
        for (int q = 0; q < order; ++q) {
          const double s = plo + 0.5 * h * (sub_t[static_cast<std::size_t>(q)] + 1.0);
          const double ws = 0.5 * h * sub_w[static_cast<std::size_t>(q)];
          const NodeFactors fs = factors_at(src, s);
          acc.setZero();
          accumulate_block(src, f[iu], fs, xi - s, upper, ws, acc.data(), b);
          const CMatrix ks = acc;
          interp.basis((s - mid) / half, ell);
          for (int jj = 0; jj < order; ++jj) row[static_cast<std::size_t>(jj)] += ell[static_cast<std::size_t>(jj)] * ks;
          const CMatrix ms = fs.c * fs.a;
          jloc += ws * product_trace(src, mx[iu], ms, xi - s, upper);
        }
      }
    }
    for (int jj = 0; jj < order; ++jj) {
      const Eigen::Index j = j0 + jj;
      const double scale = sw[iu] / sw[static_cast<std::size_t>(j)];
      op.matrix.block(i * b, j * b, b, b) = scale * row[static_cast<std::size_t>(jj)];
    }
    local_exact += grid.weights[iu] * jloc;
  }

  // tr(S^2) restricted to diagonal panels, to be replaced by the exact local part
  cplx local_matrix(0.0);
  for (Eigen::Index i = 0; i < N; ++i) {
    const int p = grid.panel_of[static_cast<std::size_t>(i)];
    const Eigen::Index j0 = static_cast<Eigen::Index>(grid.panel_begin(static_cast<std::size_t>(p)));
    for (int jj = 0; jj < order; ++jj) {
      const Eigen::Index j = j0 + jj;
      local_matrix += (op.matrix.block(i * b, j * b, b, b) * op.matrix.block(j * b, i * b, b, b)).trace();
    }
  }
  op.trace_square = trace_of_square(op.matrix) + (local_exact - local_matrix);
  return op;
}

DiscretizedOperator discretize_scalar(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                                      Scheme scheme, const Tolerances& tol) {
  const greens::ScalarKernel kernel(problem, lambda, tol);
  return discretize(scalar_source(kernel), grid, scheme);
}

DiscretizedOperator discretize_scalar(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                                      const Tolerances& tol) {
  return discretize_scalar(problem, lambda, grid, default_scheme(grid.rule), tol);
}

DiscretizedOperator discretize_system(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                                      const greens::UnperturbedBasis& basis, Scheme scheme) {
  (void)lambda;
  return discretize(system_source(basis, system.perturbation, system.zero_perturbation), grid, scheme);
}

DeterminantResult regularized_det1(const DiscretizedOperator& op) {
  CMatrixRM a = op.matrix;
  const cplx tr = a.trace();
  cplx tr2(0.0);
  if (op.scheme == Scheme::KinkCorrected) tr2 = trace_of_square(a);
  a.diagonal().array() += 1.0;
  const LuDeterminant lu = lu_determinant(a);
  DeterminantResult r;
  r.kind = DetKind::Det1;
  r.p = 1;
  r.grid = op.grid;
  r.condition_hint = lu.condition_hint;
  r.trace_used = op.trace_analytic;
  r.value = lu.value;
  if (op.scheme == Scheme::KinkCorrected && !lu.singular)
    r.value = lu.value * std::exp((op.trace_analytic - tr) - 0.5 * (op.trace_square - tr2));
  return r;
}

DeterminantResult regularized_detp(const DiscretizedOperator& op, int p) {
  if (p < 1 || p > 6) fail(ErrorKind::Config, "detp requires 1 <= p <= 6");
  DeterminantResult r = regularized_det1(op);
  if (p == 1) return r;
  cplx sum = -op.trace_analytic;
  if (p >= 3) sum += 0.5 * op.trace_square;
  if (p >= 4) {
    CMatrixRM power = multiply(op.matrix, op.matrix);
    for (int l = 3; l < p; ++l) {
      // tr(S^l) = sum_ij (S^{l-1})_ij S_ji
      const cplx tl = [&] {
        cplx t(0.0);
        for (Eigen::Index i = 0; i < power.rows(); ++i)
          for (Eigen::Index j = 0; j < power.cols(); ++j) t += power(i, j) * op.matrix(j, i);
        return t;
      }();
      sum += ((l % 2 == 0) ? 1.0 : -1.0) / l * tl;
      if (l + 1 < p) power = multiply(power, op.matrix);
    }
  }
  r.value *= std::exp(sum);
  r.kind = p == 2 ? DetKind::Det2 : DetKind::DetP;
  r.p = p;
  return r;
}

DeterminantResult det1(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                       const Tolerances& tol) {
  return regularized_det1(discretize_scalar(problem, lambda, grid, tol));
}

cplx trace_scalar(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol) {
  const greens::ScalarKernel kernel(problem, lambda, tol);
  if (problem.potential_is_zero()) return 0.0;
  return kernel.diagonal_green() * problem.potential_integral();
}

cplx trace_scalar_minus_side(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol) {
  const greens::ScalarKernel kernel(problem, lambda, tol);
  if (problem.potential_is_zero()) return 0.0;
  const auto& roots = kernel.roots();
  cplx s(0.0);
  for (int j = roots.k(); j < roots.n(); ++j) {
    cplx w = kernel.alpha().alpha[static_cast<std::size_t>(j)];
    for (int p = 0; p < problem.deriv_order; ++p) w *= roots.minus[static_cast<std::size_t>(j - roots.k())];
    s += w;
  }
  return s * problem.potential_integral();
}

SystemTrace trace_system_both(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                              const greens::UnperturbedBasis& basis) {
  (void)lambda;
  SystemTrace t;
  if (system.zero_perturbation) return t;
  const CMatrix& pm = basis.projector_minus();
  const CMatrix pp = CMatrix::Identity(pm.rows(), pm.cols()) - pm;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CMatrix r = system.perturbation_at(grid.nodes[i]);
    t.upper += grid.weights[i] * (pm * r).trace();
    t.lower -= grid.weights[i] * (pp * r).trace();
  }
  t.gap = std::abs(t.upper - t.lower);
  return t;
}

cplx trace_system(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                  const greens::UnperturbedBasis& basis, const Tolerances& tol) {
  const SystemTrace t = trace_system_both(system, lambda, grid, basis);
  if (t.gap > tol.sign * (1.0 + std::abs(t.upper)))
    fail(ErrorKind::SignMismatch, "the two sign choices of the system trace disagree (integral of tr R is nonzero)");
  return t.value();
}

DeterminantResult det2(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                       const greens::UnperturbedBasis& basis, const Tolerances& tol) {
  return detp(system, lambda, grid, basis, 2, tol);
}

DeterminantResult detp(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                       const greens::UnperturbedBasis& basis, int p, const Tolerances& tol) {
  if (p < 2 || p > 6) fail(ErrorKind::Config, "detp requires 2 <= p <= 6");
  const cplx tau = trace_system(system, lambda, grid, basis, tol);
  DiscretizedOperator op = discretize_system(system, lambda, grid, basis, default_scheme(grid.rule));
  op.trace_analytic = tau;
  return regularized_detp(op, p);
}

cplx series_coefficient(const model::ScalarProblem& problem, cplx lambda, int order, const QuadratureGrid& grid,
                        const Tolerances& tol) {
  if (order != 1 && order != 2) fail(ErrorKind::Config, "series coefficient order must be 1 or 2");
  const greens::ScalarKernel kernel(problem, lambda, tol);
  if (problem.potential_is_zero()) return 0.0;
  const std::size_t N = grid.size();
  std::vector<cplx> diag(N);
  cplx d1(0.0);
  for (std::size_t i = 0; i < N; ++i) {
    diag[i] = kernel(grid.nodes[i], grid.nodes[i]);
    d1 += grid.weights[i] * diag[i];
  }
  if (order == 1) return d1;

  // d2 = integral over x < xi of K(x,x)K(xi,xi) - K(x,xi)K(xi,x), with the
  // inner integral on [x, X] by Gauss-Legendre panels starting at x
  std::vector<double> t, w;
  const int q = 16;
  gauss_legendre(q, t, w);
  const double X = grid.half_width;
  double rate = 1.0;
  for (const auto& r : kernel.roots().all()) rate = std::max(rate, std::abs(r));
  const double piece = std::min(0.5, 4.0 / rate);
  cplx d2(0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = grid.nodes[i];
    const cplx kxx = diag[i];
    cplx inner(0.0);
    const int pieces = std::max(1, static_cast<int>(std::ceil((X - x) / piece)));
    const double h = (X - x) / pieces;
    for (int p = 0; p < pieces; ++p) {
      for (int r = 0; r < q; ++r) {
        const double s = x + p * h + 0.5 * h * (t[static_cast<std::size_t>(r)] + 1.0);
        const double ws = 0.5 * h * w[static_cast<std::size_t>(r)];
        inner += ws * (kxx * kernel(s, s) - kernel(x, s) * kernel(s, x));
      }
    }
    d2 += grid.weights[i] * inner;
  }
  return d2;
}

std::vector<double> limit_normalization_check(const model::ScalarProblem& problem, const std::vector<double>& lambdas,
                                              const QuadratureGrid& grid, const Tolerances& tol) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(std::abs(det1(problem, l, grid, tol).value - 1.0));
  return out;
}

}  // namespace fredev::fredholm
