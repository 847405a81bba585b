#pragma once

#include <vector>

#include "fredev/model.hpp"
#include "fredev/types.hpp"

namespace fredev::greens {

/// Roots of the characteristic polynomial split by the sign of the real
/// part. `plus` decay toward -infinity, `minus` toward +infinity.
struct RootSplit {
  std::vector<cplx> plus;
  std::vector<cplx> minus;

  int k() const { return static_cast<int>(plus.size()); }
  int n() const { return static_cast<int>(plus.size() + minus.size()); }
  /// plus roots followed by minus roots.
  std::vector<cplx> all() const;
};

/// Sorts `values` (ascending real part, ties by imaginary part), rejects
/// essential or near-multiple configurations, and splits by sign.
RootSplit split_values(const std::vector<cplx>& values, const Tolerances& tol = {});

RootSplit classify_roots(const std::vector<cplx>& coeffs, cplx lambda, const Tolerances& tol = {});
RootSplit classify_roots(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol = {});

struct GreenCoefficients {
  std::vector<cplx> alpha;  // first k belong to plus roots
  double condition = 1.0;

  double max_abs() const;
};

GreenCoefficients alpha_coefficients(const RootSplit& roots, const Tolerances& tol = {});

/// sum_{j<=k} alpha_j kappa_j^p - sum_{j>k} alpha_j kappa_j^p.
cplx moment_residual(const RootSplit& roots, const GreenCoefficients& alpha, int p);

cplx scalar_green(double x, double xi, const RootSplit& roots, const GreenCoefficients& alpha);

/// Scalar Birman-Schwinger kernel for one (problem, lambda):
/// |v(x)|^{1/2} sum_j alpha_j kappa_j^m e^{kappa_j (x - xi)} v~(xi),
/// upper branch (plus roots) for x <= xi.
class ScalarKernel {
 public:
  ScalarKernel(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol = {});

  /// m-weighted Green's function of t = x - xi on the requested branch.
  cplx green(double t, bool upper) const;
  cplx green(double t) const { return green(t, t <= 0.0); }

  cplx left(double x) const;   // |v(x)|^{1/2}
  cplx right(double x) const;  // v(x) |v(x)|^{-1/2}, zero where v vanishes
  cplx operator()(double x, double xi) const { return left(x) * green(x - xi) * right(xi); }

  /// sum_{j<=k} alpha_j kappa_j^m, the diagonal value of the m-weighted Green's function.
  cplx diagonal_green() const;

  const RootSplit& roots() const { return roots_; }
  const GreenCoefficients& alpha() const { return alpha_; }
  const model::ScalarProblem& problem() const { return problem_; }
  cplx lambda() const { return lambda_; }

 private:
  model::ScalarProblem problem_;
  cplx lambda_;
  RootSplit roots_;
  GreenCoefficients alpha_;
  std::vector<cplx> weights_;  // alpha_j kappa_j^m
};

cplx bs_kernel_scalar(double x, double xi, cplx lambda, const model::ScalarProblem& problem);

/// Decaying solutions of Y' = A0 Y and their adjoint partners. Columns of
/// `vectors` are eigenvectors of A0 ordered as plus roots then minus roots;
/// rows of `inverse` give the Z0 rows.
class UnperturbedBasis {
 public:
  UnperturbedBasis() = default;
  /// Vandermonde eigenvectors of the companion matrix.
  static UnperturbedBasis from_roots(const RootSplit& roots, const Tolerances& tol = {});
  /// Dense eigen-decomposition of a general A0.
  static UnperturbedBasis from_matrix(const CMatrix& a0, const Tolerances& tol = {});
  /// Explicit eigen-structure (used by the front reference matrix).
  static UnperturbedBasis from_eigen(std::vector<cplx> rates, CMatrix vectors, int k, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(rates_.size()); }
  int k() const { return k_; }
  const std::vector<cplx>& rates() const { return rates_; }
  const CMatrix& vectors() const { return vectors_; }
  const CMatrix& inverse() const { return inverse_; }
  double condition() const { return condition_; }

  CMatrix y_minus(double x) const;  // n x k, columns v_j e^{kappa+_j x}
  CMatrix y_plus(double x) const;   // n x (n-k)
  CMatrix z_plus(double x) const;   // k x n
  CMatrix z_minus(double x) const;  // (n-k) x n
  CMatrix fundamental(double x) const;  // [Y0- Y0+]

  /// Y0-(x) Z0+(x), independent of x.
  const CMatrix& projector_minus() const { return projector_minus_; }

  /// Green's matrix as a function of t = x - xi on the requested branch:
  /// upper (x <= xi) -Y0- Z0+, lower Y0+ Z0-.
  CMatrix green(double t, bool upper) const;
  CMatrix green(double x, double xi) const { return green(x - xi, x <= xi); }

 private:
  std::vector<cplx> rates_;
  CMatrix vectors_;
  CMatrix inverse_;
  CMatrix projector_minus_;
  double condition_ = 1.0;
  int k_ = 0;
};

UnperturbedBasis unperturbed_bases(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol = {});
/// Vandermonde basis for companion systems, dense eigenbasis otherwise.
UnperturbedBasis unperturbed_bases(const model::SystemProblem& system, cplx lambda, const Tolerances& tol = {});

CMatrix matrix_green(double x, double xi, const UnperturbedBasis& basis);

/// Factors of R = right * left from R = U S V*: left = |R|^{1/2} = V S^{1/2} V*,
/// right = R~ = U S^{1/2} V*.
struct PolarFactors {
  CMatrix left;
  CMatrix right;
};
PolarFactors polar_factors(const CMatrix& r);

/// -|R(x)|^{1/2} k(x, xi) R~(xi). The minus sign pairs with R being the true
/// perturbation in Y' = (A0 + R) Y so that det(I + K) = det(I - K0 R).
CMatrix bs_kernel_system(double x, double xi, cplx lambda, const model::SystemProblem& system,
                         const UnperturbedBasis& basis);

}  // namespace fredev::greens
