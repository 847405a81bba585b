#include "fredev/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fredev/errors.hpp"
#include "fredev/linalg.hpp"
#include "fredev/quadrature.hpp"

namespace fredev::model {

namespace {

// Truncated Taylor arithmetic, coefficients c_k = f^(k)/k!.
Taylor jet_var(double x, double scale, int order) {
  Taylor t(static_cast<std::size_t>(order + 1), 0.0);
  t[0] = x / scale;
  if (order >= 1) t[1] = 1.0 / scale;
  return t;
}

Taylor jet_mul(const Taylor& a, const Taylor& b) {
  Taylor c(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) c[k] += a[j] * b[k - j];
  return c;
}

Taylor jet_inv(const Taylor& a) {
  Taylor b(a.size(), 0.0);
  b[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a[j] * b[k - j];
    b[k] = -s / a[0];
  }
  return b;
}

Taylor jet_exp(const Taylor& a) {
  Taylor e(a.size(), 0.0);
  e[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return e;
}

Taylor jet_scale(Taylor a, double s) {
  for (auto& v : a) v *= s;
  return a;
}

Taylor jet_add_const(Taylor a, double c) {
  a[0] += c;
  return a;
}

// e^{-|u|} as a jet, and the sign of u's value.
std::pair<Taylor, double> decaying_exp(const Taylor& u) {
  const double sgn = u[0] >= 0.0 ? 1.0 : -1.0;
  return {jet_exp(jet_scale(u, -sgn)), sgn};
}

Taylor jet_sech(const Taylor& u) {
  const auto [s, sgn] = decaying_exp(u);
  (void)sgn;
  return jet_scale(jet_mul(s, jet_inv(jet_add_const(jet_mul(s, s), 1.0))), 2.0);
}

Taylor jet_tanh(const Taylor& u) {
  const auto [s, sgn] = decaying_exp(u);
  const Taylor s2 = jet_mul(s, s);
  return jet_scale(jet_mul(jet_add_const(jet_scale(s2, -1.0), 1.0), jet_inv(jet_add_const(s2, 1.0))), sgn);
}

std::vector<cplx> to_derivatives(const std::vector<cplx>& taylor) {
  std::vector<cplx> d(taylor.size());
  double fact = 1.0;
  for (std::size_t k = 0; k < taylor.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    d[k] = taylor[k] * fact;
  }
  return d;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double param(const Parameters& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_keys(const Parameters& p, std::initializer_list<const char*> allowed, const std::string& name) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorKind::Config, "unknown parameter '" + key + "' for builtin problem " + name);
    if (!std::isfinite(value)) fail(ErrorKind::Config, "parameter '" + key + "' must be finite");
  }
}

int integer_param(const Parameters& p, const std::string& key, int fallback) {
  const double v = param(p, key, fallback);
  if (v != std::floor(v)) fail(ErrorKind::Config, "parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

// Integral over the line of f by composite Gauss-Legendre on [-L, L]
// centred on the profile's support.
template <class F>
double line_integral(F&& f, double lo, double hi) {
  const int panels = std::max(40, static_cast<int>(std::ceil((hi - lo) / 0.25)));
  std::vector<double> x, w;
  composite_gauss(lo, hi, panels, 16, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

}  // namespace

WaveProfile WaveProfile::analytic(std::string name, TaylorFn taylor, double minus_limit,
                                  double plus_limit, std::optional<double> exact_integral,
                                  std::optional<double> exact_l1) {
  WaveProfile p;
  p.kind_ = "builtin";
  p.name_ = std::move(name);
  p.taylor_ = std::move(taylor);
  p.minus_limit_ = minus_limit;
  p.plus_limit_ = plus_limit;
  p.constant_ = false;
  p.exact_integral_ = exact_integral;
  p.exact_l1_ = exact_l1;
  return p;
}

WaveProfile WaveProfile::constant(double level) {
  WaveProfile p;
  p.kind_ = "builtin";
  p.name_ = "constant";
  p.minus_limit_ = level;
  p.plus_limit_ = level;
  p.constant_ = true;
  p.exact_integral_ = 0.0;
  p.exact_l1_ = 0.0;
  p.taylor_ = [level](double, int order) {
    Taylor t(static_cast<std::size_t>(order + 1), 0.0);
    t[0] = level;
    return t;
  };
  return p;
}

WaveProfile WaveProfile::tabulated(std::vector<double> xs, std::vector<double> ys,
                                   double minus_limit, double plus_limit) {
  const std::size_t n = xs.size();
  if (n < 3 || ys.size() != n) fail(ErrorKind::Config, "tabulated profile needs at least 3 (x, y) samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) fail(ErrorKind::Config, "tabulated profile has non-finite samples");
    if (i > 0 && !(xs[i] > xs[i - 1])) fail(ErrorKind::Config, "tabulated abscissae must be strictly increasing");
  }
  if (!std::isfinite(minus_limit) || !std::isfinite(plus_limit)) fail(ErrorKind::Config, "profile limits must be finite");

  // natural cubic spline second derivatives
  std::vector<double> m2(n, 0.0), u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
    const double p = sig * m2[i - 1] + 2.0;
    m2[i] = (sig - 1.0) / p;
    const double d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    u[i] = (6.0 * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
  }
  m2[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) m2[k] = m2[k] * m2[k + 1] + u[k];

  // exponential tails matched to the last two samples on each side
  auto tail_rate = [](double x0, double y0, double x1, double y1, double limit) {
    const double r0 = y0 - limit, r1 = y1 - limit;  // x1 is the outer sample
    const double h = std::abs(x1 - x0);
    if (r0 != 0.0 && r1 != 0.0 && r0 * r1 > 0.0 && std::abs(r1) < std::abs(r0))
      return std::log(r0 / r1) / h;
    return 1.0 / h;
  };
  const double mu_left = tail_rate(xs[1], ys[1], xs[0], ys[0], minus_limit);
  const double mu_right = tail_rate(xs[n - 2], ys[n - 2], xs[n - 1], ys[n - 1], plus_limit);

  WaveProfile p;
  p.kind_ = "tabulated";
  p.name_ = "tabulated";
  p.minus_limit_ = minus_limit;
  p.plus_limit_ = plus_limit;
  p.constant_ = false;
  p.taylor_ = [xs, ys, m2, minus_limit, plus_limit, mu_left, mu_right](double x, int order) {
    const std::size_t n = xs.size();
    Taylor t(static_cast<std::size_t>(order + 1), 0.0);
    if (x < xs[0] || x > xs[n - 1]) {
      const bool left = x < xs[0];
      const double edge = left ? xs[0] : xs[n - 1];
      const double limit = left ? minus_limit : plus_limit;
      const double amp = (left ? ys[0] : ys[n - 1]) - limit;
      const double rate = left ? -mu_left : mu_right;  // decay e^{-rate (x - edge)}
      Taylor arg = jet_var(x - edge, 1.0, order);
      arg = jet_scale(arg, -rate);
      Taylor e = jet_scale(jet_exp(arg), amp);
      e[0] += limit;
      return e;
    }
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    hi = std::clamp<std::size_t>(hi, 1, n - 1);
    const std::size_t lo = hi - 1;
    const double h = xs[hi] - xs[lo];
    const double a = (xs[hi] - x) / h, b = (x - xs[lo]) / h;
    const double y = a * ys[lo] + b * ys[hi] + ((a * a * a - a) * m2[lo] + (b * b * b - b) * m2[hi]) * h * h / 6.0;
    const double dy = (ys[hi] - ys[lo]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m2[lo] + (3.0 * b * b - 1.0) / 6.0 * h * m2[hi];
    const double d2 = a * m2[lo] + b * m2[hi];
    const double d3 = (m2[hi] - m2[lo]) / h;
    const double derivs[4] = {y, dy, d2 / 2.0, d3 / 6.0};
    for (int k = 0; k <= std::min(order, 3); ++k) t[static_cast<std::size_t>(k)] = derivs[k];
    return t;
  };
  return p;
}

double WaveProfile::value(double x) const { return taylor_(x, 0)[0]; }

Taylor WaveProfile::taylor(double x, int order) const { return taylor_(x, order); }

std::vector<double> WaveProfile::derivatives(double x, int order) const {
  Taylor t = taylor_(x, order);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] *= fact;
  }
  return t;
}

double WaveProfile::decay_radius() const {
  if (constant_) return 1.0;
  double peak = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.5)
    peak = std::max(peak, std::abs(value(x) - (x < 0 ? minus_limit_ : plus_limit_)));
  if (peak == 0.0) return 1.0;
  double r = 4.0;
  while (r < 400.0) {
    const double tail = std::max(std::abs(value(-r) - minus_limit_), std::abs(value(r) - plus_limit_));
    if (tail < 1e-17 * peak) break;
    r += 2.0;
  }
  return r;
}

double WaveProfile::l1_norm_numeric() const {
  if (constant_) return 0.0;
  const double r = decay_radius();
  const double base = minus_limit_;
  return line_integral([&](double x) { return std::abs(value(x) - (is_pulse() ? base : (x < 0 ? minus_limit_ : plus_limit_))); }, -r, r);
}

double WaveProfile::l1_norm() const { return exact_l1_ ? *exact_l1_ : l1_norm_numeric(); }

double WaveProfile::integral_numeric() const {
  if (constant_) return 0.0;
  const double r = decay_radius();
  return line_integral([&](double x) { return value(x) - (is_pulse() ? minus_limit_ : (x < 0 ? minus_limit_ : plus_limit_)); }, -r, r);
}

double WaveProfile::integral() const { return exact_integral_ ? *exact_integral_ : integral_numeric(); }

cplx Jacobian::operator()(double phi) const {
  cplx v(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * phi + *it;
  return v;
}

bool Jacobian::is_identity() const {
  if (coeffs.size() < 2 || coeffs[0] != cplx(0.0) || coeffs[1] != cplx(1.0)) return false;
  for (std::size_t k = 2; k < coeffs.size(); ++k)
    if (coeffs[k] != cplx(0.0)) return false;
  return true;
}

int Jacobian::degree() const {
  for (std::size_t k = coeffs.size(); k-- > 0;)
    if (coeffs[k] != cplx(0.0)) return static_cast<int>(k);
  return 0;
}

void ScalarProblem::validate() const {
  if (order < 2 || order > 10) fail(ErrorKind::Config, "order must be in [2, 10]");
  if (static_cast<int>(coeffs.size()) != order) fail(ErrorKind::Config, "coeffs must have exactly `order` entries");
  for (const auto& a : coeffs)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) fail(ErrorKind::Config, "coefficients must be finite");
  if (deriv_order < 0 || deriv_order > order - 2) fail(ErrorKind::Config, "derivative order m must satisfy 0 <= m <= n-2");
  if (jacobian.coeffs.empty()) fail(ErrorKind::Config, "jacobian needs at least one coefficient");
  for (const auto& c : jacobian.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) fail(ErrorKind::Config, "jacobian coefficients must be finite");
}

cplx ScalarProblem::background() const {
  return profile.is_pulse() ? jacobian(profile.minus_limit()) : cplx(0.0);
}

std::vector<cplx> ScalarProblem::effective_coeffs() const {
  std::vector<cplx> a = coeffs;
  if (profile.is_pulse() && deriv_order < static_cast<int>(a.size())) a[static_cast<std::size_t>(deriv_order)] += background();
  return a;
}

cplx ScalarProblem::potential(double x) const {
  if (profile.is_identically_constant()) return jacobian(profile.minus_limit()) - background();
  return jacobian(profile.value(x)) - background();
}

std::vector<cplx> ScalarProblem::potential_derivatives(double x, int order_wanted) const {
  const Taylor phi = profile.taylor(x, order_wanted);
  std::vector<cplx> v(phi.size(), cplx(0.0));
  for (auto it = jacobian.coeffs.rbegin(); it != jacobian.coeffs.rend(); ++it) {
    std::vector<cplx> next(phi.size(), cplx(0.0));
    for (std::size_t k = 0; k < phi.size(); ++k)
      for (std::size_t j = 0; j <= k; ++j) next[k] += v[j] * phi[k - j];
    next[0] += *it;
    v = std::move(next);
  }
  v[0] -= background();
  return to_derivatives(v);
}

cplx ScalarProblem::potential_limit(int side) const {
  return jacobian(side < 0 ? profile.minus_limit() : profile.plus_limit());
}

cplx ScalarProblem::potential_integral_numeric() const {
  if (profile.is_identically_constant()) return 0.0;
  const double r = profile.decay_radius();
  const double re = line_integral([&](double x) { return potential(x).real(); }, -r, r);
  const double im = line_integral([&](double x) { return potential(x).imag(); }, -r, r);
  return {re, im};
}

cplx ScalarProblem::potential_integral() const {
  if (profile.is_identically_constant()) return 0.0;
  if (profile.is_pulse() && jacobian.degree() <= 1 && profile.exact_integral()) {
    const cplx slope = jacobian.coeffs.size() > 1 ? jacobian.coeffs[1] : cplx(0.0);
    return slope * *profile.exact_integral();
  }
  return potential_integral_numeric();
}

bool ScalarProblem::potential_is_zero() const {
  if (profile.is_identically_constant()) return true;
  return jacobian.degree() == 0;
}

bool SystemProblem::is_front() const {
  return (r_minus - r_plus).norm() > 0.0;
}

double SystemProblem::tail_norm(double X) const {
  return std::max((perturbation(-X) - r_minus).norm(), (perturbation(X) - r_plus).norm());
}

CMatrix companion_matrix(const std::vector<cplx>& coeffs, cplx lambda) {
  const Eigen::Index n = static_cast<Eigen::Index>(coeffs.size());
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) a(n - 1, j) = -coeffs[static_cast<std::size_t>(j)];
  a(n - 1, 0) += lambda;
  return a;
}

SystemProblem to_system(const ScalarProblem& problem) {
  problem.validate();
  SystemProblem s;
  const int n = problem.order;
  const int m = problem.deriv_order;
  s.dim = n;
  s.name = problem.name;
  const std::vector<cplx> coeffs = problem.effective_coeffs();
  s.companion_coeffs = coeffs;
  s.base = [coeffs](cplx lambda) { return companion_matrix(coeffs, lambda); };
  s.zero_perturbation = problem.potential_is_zero() && !problem.is_front();
  if (s.zero_perturbation) {
    s.perturbation = [n](double) { return CMatrix::Zero(n, n).eval(); };
  } else {
    s.perturbation = [problem, n, m](double x) {
      CMatrix r = CMatrix::Zero(n, n);
      const std::vector<cplx> dv = problem.potential_derivatives(x, m);
      for (int l = 0; l <= m; ++l) r(n - 1, l) = -binomial(m, l) * dv[static_cast<std::size_t>(m - l)];
      return r;
    };
  }
  s.r_minus = CMatrix::Zero(n, n);
  s.r_plus = CMatrix::Zero(n, n);
  if (problem.is_front()) {
    s.r_minus(n - 1, m) = -problem.potential_limit(-1);
    s.r_plus(n - 1, m) = -problem.potential_limit(+1);
  }
  return s;
}

SystemProblem make_system(int dim, std::function<CMatrix(cplx)> base,
                          std::function<CMatrix(double)> perturbation, CMatrix r_minus,
                          CMatrix r_plus, std::string name) {
  if (dim < 2) fail(ErrorKind::Config, "system dimension must be at least 2");
  SystemProblem s;
  s.dim = dim;
  s.base = std::move(base);
  s.perturbation = std::move(perturbation);
  s.r_minus = std::move(r_minus);
  s.r_plus = std::move(r_plus);
  s.name = std::move(name);
  return s;
}

cplx symbol(const std::vector<cplx>& coeffs, double zeta) {
  const cplx iz(0.0, zeta);
  cplx p(1.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * iz + *it;
  return p;
}

double essential_spectrum_distance(const std::vector<cplx>& coeffs, cplx lambda) {
  double Z = 1.0;
  for (const auto& a : coeffs) Z += std::abs(a);
  while (std::abs(symbol(coeffs, Z)) <= 10.0 * std::abs(lambda) || std::abs(symbol(coeffs, -Z)) <= 10.0 * std::abs(lambda)) Z *= 2.0;

  auto dist2 = [&](double z) { return std::norm(lambda - symbol(coeffs, z)); };
  const int samples = 4001;
  const double h = 2.0 * Z / (samples - 1);
  double best_z = -Z, best = dist2(-Z);
  for (int i = 1; i < samples; ++i) {
    const double z = -Z + i * h;
    const double d = dist2(z);
    if (d < best) {
      best = d;
      best_z = z;
    }
  }
  double a = best_z - h, b = best_z + h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = dist2(c), fd = dist2(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(best_z)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = dist2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = dist2(d);
    }
  }
  best = std::min({best, fc, fd});
  return std::sqrt(best);
}

double essential_spectrum_distance(const ScalarProblem& problem, cplx lambda) {
  return essential_spectrum_distance(problem.effective_coeffs(), lambda);
}

std::string to_string(DomainStatus status) {
  switch (status) {
    case DomainStatus::Resolvent: return "resolvent";
    case DomainStatus::Essential: return "essential";
    case DomainStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

SpectralPoint classify_point(const ScalarProblem& problem, cplx lambda, const Tolerances& tol) {
  std::vector<cplx> c = problem.effective_coeffs();
  c[0] -= lambda;
  const RootDiagnostics d = diagnose_roots(polynomial_roots(c));
  if (d.axis_distance <= tol.axis) return {lambda, DomainStatus::Essential};
  if (d.separation <= tol.separation) return {lambda, DomainStatus::Indeterminate};
  return {lambda, DomainStatus::Resolvent};
}

ScalarProblem free_problem(std::vector<cplx> coeffs, int deriv_order) {
  ScalarProblem p;
  p.order = static_cast<int>(coeffs.size());
  p.coeffs = std::move(coeffs);
  p.profile = WaveProfile::constant(0.0);
  p.deriv_order = deriv_order;
  p.name = "free";
  p.validate();
  return p;
}

std::vector<std::string> builtin_names() {
  return {"poschl_teller", "sech_pulse", "gaussian_pulse", "tanh_front", "biharmonic_demo"};
}

ScalarProblem builtin_problem(const std::string& name, const Parameters& params) {
  ScalarProblem p;
  p.name = name;
  if (name == "poschl_teller") {
    check_keys(params, {"N"}, name);
    const double N = param(params, "N", 1.0);
    if (!(N > 0.0)) fail(ErrorKind::Config, "poschl_teller requires N > 0");
    const double amp = N * (N + 1.0);
    p.order = 2;
    p.coeffs = {0.0, 0.0};
    p.profile = WaveProfile::analytic(
        name, [amp](double x, int order) { const Taylor s = jet_sech(jet_var(x, 1.0, order)); return jet_scale(jet_mul(s, s), amp); },
        0.0, 0.0, 2.0 * amp, 2.0 * amp);
  } else if (name == "sech_pulse") {
    check_keys(params, {"amplitude", "scale", "order", "m"}, name);
    const double A = param(params, "amplitude", 1.0), s = param(params, "scale", 1.0);
    if (!(s > 0.0)) fail(ErrorKind::Config, "sech_pulse requires scale > 0");
    p.order = integer_param(params, "order", 2);
    p.deriv_order = integer_param(params, "m", 0);
    p.coeffs.assign(static_cast<std::size_t>(std::max(p.order, 0)), cplx(0.0));
    p.profile = WaveProfile::analytic(
        name, [A, s](double x, int order) { return jet_scale(jet_sech(jet_var(x, s, order)), A); }, 0.0, 0.0,
        A * kPi * s, std::abs(A) * kPi * s);
  } else if (name == "gaussian_pulse") {
    check_keys(params, {"amplitude", "width", "order", "m"}, name);
    const double A = param(params, "amplitude", 1.0), w = param(params, "width", 1.0);
    if (!(w > 0.0)) fail(ErrorKind::Config, "gaussian_pulse requires width > 0");
    p.order = integer_param(params, "order", 2);
    p.deriv_order = integer_param(params, "m", 0);
    p.coeffs.assign(static_cast<std::size_t>(std::max(p.order, 0)), cplx(0.0));
    const double integral = A * w * std::sqrt(2.0 * kPi);
    p.profile = WaveProfile::analytic(
        name,
        [A, w](double x, int order) {
          const Taylor u = jet_var(x, w, order);
          return jet_scale(jet_exp(jet_scale(jet_mul(u, u), -0.5)), A);
        },
        0.0, 0.0, integral, std::abs(integral));
  } else if (name == "tanh_front") {
    check_keys(params, {"amplitude", "offset", "scale", "bump", "order"}, name);
    const double A = param(params, "amplitude", 1.0), c = param(params, "offset", 0.0);
    const double s = param(params, "scale", 1.0), b = param(params, "bump", 0.0);
    if (!(s > 0.0)) fail(ErrorKind::Config, "tanh_front requires scale > 0");
    if (A == 0.0) fail(ErrorKind::Config, "tanh_front requires a nonzero amplitude");
    p.order = integer_param(params, "order", 2);
    p.coeffs.assign(static_cast<std::size_t>(std::max(p.order, 0)), cplx(0.0));
    p.profile = WaveProfile::analytic(
        name,
        [A, c, s, b](double x, int order) {
          const Taylor u = jet_var(x, s, order);
          Taylor t = jet_scale(jet_tanh(u), A);
          if (b != 0.0) {
            const Taylor h = jet_sech(u);
            const Taylor bump = jet_scale(jet_mul(h, h), b);
            for (std::size_t k = 0; k < t.size(); ++k) t[k] += bump[k];
          }
          t[0] += c;
          return t;
        },
        c - A, c + A);
  } else if (name == "biharmonic_demo") {
    check_keys(params, {"amplitude", "m"}, name);
    const double A = param(params, "amplitude", 2.0);
    p.order = 4;
    p.deriv_order = integer_param(params, "m", 0);
    p.coeffs = {0.0, 0.0, 0.0, 0.0};
    p.profile = WaveProfile::analytic(
        name, [A](double x, int order) { const Taylor s = jet_sech(jet_var(x, 1.0, order)); return jet_scale(jet_mul(s, s), A); },
        0.0, 0.0, 2.0 * A, 2.0 * std::abs(A));
  } else {
    fail(ErrorKind::Config, "unknown builtin problem '" + name + "'");
  }
  p.validate();
  return p;
}

}  // namespace fredev::model
