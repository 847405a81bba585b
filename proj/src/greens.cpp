#include "fredev/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fredev/errors.hpp"
#include "fredev/linalg.hpp"

namespace fredev::greens {

namespace {

std::string format_value(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

cplx ipow(cplx z, int p) {
  cplx r(1.0);
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace

std::vector<cplx> RootSplit::all() const {
  std::vector<cplx> r = plus;
  r.insert(r.end(), minus.begin(), minus.end());
  return r;
}

RootSplit split_values(const std::vector<cplx>& values, const Tolerances& tol) {
  const RootDiagnostics d = diagnose_roots(values);
  if (d.axis_distance <= tol.axis) {
    cplx worst = values.empty() ? cplx(0.0) : values[0];
    for (const auto& v : values)
      if (std::abs(v.real()) < std::abs(worst.real())) worst = v;
    fail(ErrorKind::EssentialSpectrum, "characteristic root " + format_value(worst) + " lies on the imaginary axis");
  }
  if (d.separation <= tol.separation) fail(ErrorKind::NearMultipleRoots, "characteristic roots are not simple");

  const auto order = root_order(values, 1e-12 * d.scale);
  RootSplit s;
  for (int i : order) {
    const cplx v = values[static_cast<std::size_t>(i)];
    (v.real() > 0.0 ? s.plus : s.minus).push_back(v);
  }
  return s;
}

RootSplit classify_roots(const std::vector<cplx>& coeffs, cplx lambda, const Tolerances& tol) {
  std::vector<cplx> c = coeffs;
  if (c.empty()) fail(ErrorKind::Config, "empty coefficient list");
  c[0] -= lambda;
  return split_values(polynomial_roots(c), tol);
}

RootSplit classify_roots(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol) {
  return classify_roots(problem.effective_coeffs(), lambda, tol);
}

double GreenCoefficients::max_abs() const {
  double m = 0.0;
  for (const auto& a : alpha) m = std::max(m, std::abs(a));
  return m;
}

GreenCoefficients alpha_coefficients(const RootSplit& roots, const Tolerances& tol) {
  const int n = roots.n(), k = roots.k();
  const std::vector<cplx> r = roots.all();
  double s = 0.0;
  for (const auto& z : r) s = std::max(s, std::abs(z));
  if (s == 0.0) s = 1.0;

  // rows scaled by s^{-p} so the condition estimate is scale-free
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    const double sign = j < k ? 1.0 : -1.0;
    cplx pw(1.0);
    for (int p = 0; p < n; ++p) {
      m(p, j) = sign * pw;
      pw *= r[static_cast<std::size_t>(j)] / s;
    }
  }
  CVector rhs = CVector::Zero(n);
  rhs(n - 1) = -1.0 / std::pow(s, n - 1);

  GreenCoefficients out;
  out.condition = condition_number(m);
  if (!(out.condition <= tol.condition)) fail(ErrorKind::IllConditioned, "Green's coefficient system is ill-conditioned");
  const CVector a = m.fullPivLu().solve(rhs);
  out.alpha.assign(a.data(), a.data() + a.size());
  return out;
}

cplx moment_residual(const RootSplit& roots, const GreenCoefficients& alpha, int p) {
  const std::vector<cplx> r = roots.all();
  cplx plus(0.0), minus(0.0);
  for (std::size_t j = 0; j < r.size(); ++j) {
    const cplx t = alpha.alpha[j] * ipow(r[j], p);
    (static_cast<int>(j) < roots.k() ? plus : minus) += t;
  }
  return plus - minus;
}

cplx scalar_green(double x, double xi, const RootSplit& roots, const GreenCoefficients& alpha) {
  const double t = x - xi;
  const std::vector<cplx> r = roots.all();
  const int k = roots.k();
  cplx g(0.0);
  if (t <= 0.0) {
    for (int j = 0; j < k; ++j) g += alpha.alpha[static_cast<std::size_t>(j)] * std::exp(r[static_cast<std::size_t>(j)] * t);
  } else {
    for (int j = k; j < roots.n(); ++j) g += alpha.alpha[static_cast<std::size_t>(j)] * std::exp(r[static_cast<std::size_t>(j)] * t);
  }
  return g;
}

ScalarKernel::ScalarKernel(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol)
    : problem_(problem), lambda_(lambda) {
  problem_.validate();
  roots_ = classify_roots(problem_, lambda, tol);
  alpha_ = alpha_coefficients(roots_, tol);
  const std::vector<cplx> r = roots_.all();
  weights_.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) weights_[j] = alpha_.alpha[j] * ipow(r[j], problem_.deriv_order);
}

cplx ScalarKernel::green(double t, bool upper) const {
  const std::vector<cplx>& plus = roots_.plus;
  const std::vector<cplx>& minus = roots_.minus;
  cplx g(0.0);
  if (upper) {
    for (std::size_t j = 0; j < plus.size(); ++j) g += weights_[j] * std::exp(plus[j] * t);
  } else {
    for (std::size_t j = 0; j < minus.size(); ++j) g += weights_[plus.size() + j] * std::exp(minus[j] * t);
  }
  return g;
}

cplx ScalarKernel::left(double x) const { return std::sqrt(std::abs(problem_.potential(x))); }

cplx ScalarKernel::right(double x) const {
  const cplx v = problem_.potential(x);
  const double a = std::abs(v);
  return a == 0.0 ? cplx(0.0) : v / std::sqrt(a);
}

cplx ScalarKernel::diagonal_green() const {
  cplx s(0.0);
  for (std::size_t j = 0; j < roots_.plus.size(); ++j) s += weights_[j];
  return s;
}

cplx bs_kernel_scalar(double x, double xi, cplx lambda, const model::ScalarProblem& problem) {
  return ScalarKernel(problem, lambda)(x, xi);
}

UnperturbedBasis UnperturbedBasis::from_eigen(std::vector<cplx> rates, CMatrix vectors, int k, const Tolerances& tol) {
  UnperturbedBasis b;
  b.rates_ = std::move(rates);
  b.vectors_ = std::move(vectors);
  b.k_ = k;
  // column-normalized condition is the meaningful one for eigenvectors
  CMatrix scaled = b.vectors_;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j).normalize();
  b.condition_ = condition_number(scaled);
  if (!(b.condition_ <= tol.condition)) fail(ErrorKind::IllConditioned, "fundamental matrix is ill-conditioned");
  b.inverse_ = b.vectors_.fullPivLu().inverse();
  b.projector_minus_ = b.vectors_.leftCols(k) * b.inverse_.topRows(k);
  return b;
}

UnperturbedBasis UnperturbedBasis::from_roots(const RootSplit& roots, const Tolerances& tol) {
  const std::vector<cplx> r = roots.all();
  const int n = roots.n();
  CMatrix v(n, n);
  for (int j = 0; j < n; ++j) {
    cplx pw(1.0);
    for (int p = 0; p < n; ++p) {
      v(p, j) = pw;
      pw *= r[static_cast<std::size_t>(j)];
    }
  }
  return from_eigen(r, v, roots.k(), tol);
}

UnperturbedBasis UnperturbedBasis::from_matrix(const CMatrix& a0, const Tolerances& tol) {
  const SortedEigen es = sorted_eigen(a0, 0.0);
  std::vector<cplx> vals(es.values.data(), es.values.data() + es.values.size());
  const RootSplit split = split_values(vals, tol);
  // re-associate eigenvectors with the split ordering
  const std::vector<cplx> ordered = split.all();
  CMatrix vecs(a0.rows(), a0.cols());
  std::vector<bool> used(vals.size(), false);
  for (std::size_t j = 0; j < ordered.size(); ++j) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(vals[i] - ordered[j]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = true;
    vecs.col(static_cast<Eigen::Index>(j)) = es.vectors.col(static_cast<Eigen::Index>(best)).normalized();
  }
  return from_eigen(ordered, vecs, split.k(), tol);
}

CMatrix UnperturbedBasis::y_minus(double x) const {
  CMatrix y = vectors_.leftCols(k_);
  for (int j = 0; j < k_; ++j) y.col(j) *= std::exp(rates_[static_cast<std::size_t>(j)] * x);
  return y;
}

CMatrix UnperturbedBasis::y_plus(double x) const {
  const int n = dim();
  CMatrix y = vectors_.rightCols(n - k_);
  for (int j = 0; j < n - k_; ++j) y.col(j) *= std::exp(rates_[static_cast<std::size_t>(k_ + j)] * x);
  return y;
}

CMatrix UnperturbedBasis::z_plus(double x) const {
  CMatrix z = inverse_.topRows(k_);
  for (int j = 0; j < k_; ++j) z.row(j) *= std::exp(-rates_[static_cast<std::size_t>(j)] * x);
  return z;
}

CMatrix UnperturbedBasis::z_minus(double x) const {
  const int n = dim();
  CMatrix z = inverse_.bottomRows(n - k_);
  for (int j = 0; j < n - k_; ++j) z.row(j) *= std::exp(-rates_[static_cast<std::size_t>(k_ + j)] * x);
  return z;
}

CMatrix UnperturbedBasis::fundamental(double x) const {
  CMatrix f(dim(), dim());
  f << y_minus(x), y_plus(x);
  return f;
}

CMatrix UnperturbedBasis::green(double t, bool upper) const {
  const int n = dim();
  const int lo = upper ? 0 : k_;
  const int cnt = upper ? k_ : n - k_;
  CMatrix left = vectors_.middleCols(lo, cnt);
  for (int j = 0; j < cnt; ++j) left.col(j) *= std::exp(rates_[static_cast<std::size_t>(lo + j)] * t);
  CMatrix g = left * inverse_.middleRows(lo, cnt);
  if (upper) g = -g;
  return g;
}

UnperturbedBasis unperturbed_bases(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol) {
  return UnperturbedBasis::from_roots(classify_roots(problem, lambda, tol), tol);
}

UnperturbedBasis unperturbed_bases(const model::SystemProblem& system, cplx lambda, const Tolerances& tol) {
  if (system.companion_coeffs) return UnperturbedBasis::from_roots(classify_roots(*system.companion_coeffs, lambda, tol), tol);
  return UnperturbedBasis::from_matrix(system.base_matrix(lambda), tol);
}

CMatrix matrix_green(double x, double xi, const UnperturbedBasis& basis) { return basis.green(x, xi); }

PolarFactors polar_factors(const CMatrix& r) {
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues().cwiseSqrt();
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  PolarFactors f;
  f.left = v * s.cast<cplx>().asDiagonal() * v.adjoint();
  f.right = u * s.cast<cplx>().asDiagonal() * v.adjoint();
  return f;
}

CMatrix bs_kernel_system(double x, double xi, cplx lambda, const model::SystemProblem& system,
                         const UnperturbedBasis& basis) {
  (void)lambda;
  const PolarFactors fx = polar_factors(system.perturbation_at(x));
  const PolarFactors fxi = polar_factors(system.perturbation_at(xi));
  return -(fx.left * basis.green(x, xi) * fxi.right);
}

}  // namespace fredev::greens
