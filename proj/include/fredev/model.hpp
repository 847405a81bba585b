#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fredev/types.hpp"

namespace fredev::model {

/// Truncated Taylor coefficients c_k = f^(k)(x)/k! for k = 0..order.
using Taylor = std::vector<double>;

class WaveProfile {
 public:
  using TaylorFn = std::function<Taylor(double x, int order)>;

  WaveProfile() = default;

  /// Closed-form profile. `exact_integral` is the integral of phi - phi_minus
  /// over the line (pulses only) and `exact_l1` its L1 norm, when known.
  static WaveProfile analytic(std::string name, TaylorFn taylor, double minus_limit,
                              double plus_limit, std::optional<double> exact_integral = {},
                              std::optional<double> exact_l1 = {});

  /// Samples on a strictly increasing grid. Natural cubic spline inside the
  /// range; outside, an exponential tail toward the given limit matched to
  /// the last two samples.
  static WaveProfile tabulated(std::vector<double> xs, std::vector<double> ys,
                               double minus_limit = 0.0, double plus_limit = 0.0);

  static WaveProfile constant(double level = 0.0);

  const std::string& kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double minus_limit() const { return minus_limit_; }
  double plus_limit() const { return plus_limit_; }
  bool is_pulse() const { return minus_limit_ == plus_limit_; }
  bool is_identically_constant() const { return constant_; }
  std::optional<double> exact_integral() const { return exact_integral_; }
  std::optional<double> exact_l1() const { return exact_l1_; }

  double value(double x) const;
  Taylor taylor(double x, int order) const;
  /// phi, phi', ..., phi^(order) at x.
  std::vector<double> derivatives(double x, int order) const;

  /// L1 norm of phi - phi0 (pulses): exact when stored, else quadrature.
  double l1_norm() const;
  /// Same quantity by quadrature regardless of what is stored.
  double l1_norm_numeric() const;
  /// Integral of phi - phi0 (pulses): exact when stored, else quadrature.
  double integral() const;
  double integral_numeric() const;

  /// Half-width beyond which |phi - limit| < 1e-17 * max|phi - limit|
  /// (estimated by scanning outward).
  double decay_radius() const;

 private:
  std::string kind_ = "builtin";
  std::string name_ = "zero";
  TaylorFn taylor_;
  double minus_limit_ = 0.0;
  double plus_limit_ = 0.0;
  bool constant_ = true;
  std::optional<double> exact_integral_;
  std::optional<double> exact_l1_;
};

/// Polynomial V(phi) = sum_k c_k phi^k. The default {0, 1} is the identity.
struct Jacobian {
  std::vector<cplx> coeffs{cplx(0.0), cplx(1.0)};

  cplx operator()(double phi) const;
  bool is_identity() const;
  int degree() const;
};

struct ScalarProblem {
  int order = 2;
  std::vector<cplx> coeffs{cplx(0.0), cplx(0.0)};
  WaveProfile profile;
  int deriv_order = 0;
  Jacobian jacobian;
  std::string name = "custom";

  /// Throws ErrorKind::Config on a violated invariant.
  void validate() const;

  bool is_front() const { return !profile.is_pulse(); }

  /// Background V(phi0) of a pulse; zero for fronts.
  cplx background() const;

  /// Coefficients of the constant-coefficient operator actually used: for a
  /// pulse with nonzero far field, V(phi0) is moved into a_m so that the
  /// remaining perturbation decays.
  std::vector<cplx> effective_coeffs() const;

  /// The perturbation v(x) = V(phi(x)) - V(phi0) for pulses, V(phi(x)) for fronts.
  cplx potential(double x) const;
  /// v, v', ..., v^(order) at x.
  std::vector<cplx> potential_derivatives(double x, int order) const;
  /// V(phi_-) or V(phi_+) for side < 0 / side > 0 (raw, before folding).
  cplx potential_limit(int side) const;

  /// Integral of v over the line: exact when the Jacobian is affine and the
  /// profile stores its integral, else quadrature.
  cplx potential_integral() const;
  cplx potential_integral_numeric() const;

  bool potential_is_zero() const;
};

/// First order system Y' = (A0(lambda) + R(x)) Y.
struct SystemProblem {
  int dim = 2;
  std::function<CMatrix(cplx)> base;       // lambda -> A0(lambda)
  std::function<CMatrix(double)> perturbation;  // x -> R(x)
  CMatrix r_minus;
  CMatrix r_plus;
  std::optional<std::vector<cplx>> companion_coeffs;  // set when derived from a scalar problem
  bool zero_perturbation = false;
  std::string name = "system";

  CMatrix base_matrix(cplx lambda) const { return base(lambda); }
  CMatrix perturbation_at(double x) const { return perturbation(x); }
  bool is_front() const;
  /// max(||R(-X) - R-||, ||R(X) - R+||) in the Frobenius norm.
  double tail_norm(double X) const;
};

/// Companion matrix with bottom row (lambda - a0, -a1, ..., -a_{n-1}).
CMatrix companion_matrix(const std::vector<cplx>& coeffs, cplx lambda);

/// The system form of a scalar problem. R carries the true sign of the
/// perturbation in Y' = (A0 + R) Y: bottom row entries -C(m,l) v^(m-l).
SystemProblem to_system(const ScalarProblem& problem);

/// Generic system from user-supplied closures.
SystemProblem make_system(int dim, std::function<CMatrix(cplx)> base,
                          std::function<CMatrix(double)> perturbation, CMatrix r_minus,
                          CMatrix r_plus, std::string name = "system");

/// Symbol P(i zeta) of L0.
cplx symbol(const std::vector<cplx>& coeffs, double zeta);

/// min over real zeta of |lambda - P(i zeta)|, scanning [-Z, Z] with
/// |P(iZ)| > 10 |lambda| and refining by golden-section search.
double essential_spectrum_distance(const ScalarProblem& problem, cplx lambda);
double essential_spectrum_distance(const std::vector<cplx>& coeffs, cplx lambda);

enum class DomainStatus { Resolvent, Essential, Indeterminate };
std::string to_string(DomainStatus status);

struct SpectralPoint {
  cplx lambda;
  DomainStatus status;
};

SpectralPoint classify_point(const ScalarProblem& problem, cplx lambda,
                             const Tolerances& tol = {});

using Parameters = std::map<std::string, double>;

/// Built-in solvable test problems: poschl_teller, sech_pulse,
/// gaussian_pulse, tanh_front, biharmonic_demo.
ScalarProblem builtin_problem(const std::string& name, const Parameters& params = {});
std::vector<std::string> builtin_names();

/// Problem with phi = 0 and the given constant coefficients.
ScalarProblem free_problem(std::vector<cplx> coeffs, int deriv_order = 0);

}  // namespace fredev::model
