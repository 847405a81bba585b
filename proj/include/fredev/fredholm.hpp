#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fredev/greens.hpp"
#include "fredev/model.hpp"
#include "fredev/quadrature.hpp"
#include "fredev/types.hpp"

namespace fredev::fredholm {

/// A Birman-Schwinger kernel in factored form
///   K(x, xi) = sum_{q in branch} e^{r_q (x - xi)} a_q(x) c_q(xi),
/// with a_q(x) = left(x) U[:, q] and c_q(xi) = Vt[q, :] right(xi). Terms
/// q < k form the upper branch (x <= xi), the rest the lower branch.
/// `block` is 1 for scalar kernels and n for system kernels.
struct KernelSource {
  int block = 1;
  int inner = 1;
  int k = 0;
  std::vector<cplx> rates;
  CMatrix U;   // inner x terms
  CMatrix Vt;  // terms x inner
  std::function<CMatrix(double)> left;   // block x inner
  std::function<CMatrix(double)> right;  // inner x block
  bool zero = false;

  int terms() const { return static_cast<int>(rates.size()); }
  double max_rate() const;
  CMatrix core(double t, bool upper) const;
  CMatrix operator()(double x, double xi) const;
  /// right(x) * left(x), the signed perturbation.
  CMatrix middle(double x) const { return right(x) * left(x); }
  /// tr K(x, x) on the requested branch.
  cplx diagonal_trace(double x, bool upper) const;
};

/// |v(x)|^{1/2} g_m(x - xi) v~(xi) for a scalar problem.
KernelSource scalar_source(const greens::ScalarKernel& kernel);

/// -|P(x)|^{1/2} k(x, xi) P~(xi) for a perturbation P (R for pulses, Q for
/// fronts) and the Green's matrix of `basis`.
KernelSource system_source(const greens::UnperturbedBasis& basis, std::function<CMatrix(double)> perturbation,
                           bool zero = false);

/// How the Nystrom matrix treats the diagonal kink of the kernel.
///  Plain: S_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j) with a one-sided diagonal.
///  KinkCorrected: product integration on the diagonal panel (Lagrange
///    interpolation of the unknown, sub-quadrature split at x_i), plus the
///    exact first and second traces substituted in the determinant.
enum class Scheme { Plain, KinkCorrected };
std::string to_string(Scheme scheme);

enum class DiagonalConvention { ContinuousKernel, LowerBranch, ProductIntegration };
std::string to_string(DiagonalConvention convention);

struct GridSignature {
  double half_width = 0.0;
  int nodes = 0;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
};

struct DiscretizedOperator {
  CMatrixRM matrix;
  int block = 1;
  GridSignature grid;
  Scheme scheme = Scheme::KinkCorrected;
  DiagonalConvention diagonal = DiagonalConvention::ProductIntegration;
  cplx trace_analytic{0.0};  // quadrature of tr K(x, x) (one-sided for systems)
  cplx trace_square{0.0};    // tr(K^2) by diagonal-split quadrature

  cplx matrix_trace() const { return matrix.trace(); }
  /// The trace the determinant formulas use.
  cplx trace() const { return trace_analytic; }
};

Scheme default_scheme(QuadratureRule rule);

DiscretizedOperator discretize(const KernelSource& source, const QuadratureGrid& grid, Scheme scheme);

DiscretizedOperator discretize_scalar(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                                      const Tolerances& tol = {});
DiscretizedOperator discretize_scalar(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                                      Scheme scheme, const Tolerances& tol = {});
DiscretizedOperator discretize_system(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                                      const greens::UnperturbedBasis& basis, Scheme scheme);

enum class DetKind { Det1, Det2, DetP };
std::string to_string(DetKind kind);

struct DeterminantResult {
  cplx value{1.0};
  DetKind kind = DetKind::Det1;
  int p = 1;
  cplx trace_used{0.0};
  GridSignature grid;
  double condition_hint = 1.0;
};

/// det(I + S) times the trace corrections of the operator's scheme: the
/// value approximating det_1(I + K).
DeterminantResult regularized_det1(const DiscretizedOperator& op);
/// det_p(I + K) = det_1 * exp(sum_{l<p} (-1)^l / l * t_l), t_1 = trace,
/// t_2 = trace_square, t_l = tr(S^l) for l >= 3.
DeterminantResult regularized_detp(const DiscretizedOperator& op, int p);

DeterminantResult det1(const model::ScalarProblem& problem, cplx lambda, const QuadratureGrid& grid,
                       const Tolerances& tol = {});

cplx trace_scalar(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol = {});
/// Same sum taken over the minus roots.
cplx trace_scalar_minus_side(const model::ScalarProblem& problem, cplx lambda, const Tolerances& tol = {});

struct SystemTrace {
  cplx upper{0.0};   // integral of tr(Y0- Z0+ R)
  cplx lower{0.0};   // integral of -tr(Y0+ Z0- R)
  double gap = 0.0;  // |upper - lower|
  cplx value() const { return upper; }
};

SystemTrace trace_system_both(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                              const greens::UnperturbedBasis& basis);
/// Throws SignMismatch when the two sign choices differ by more than tol.sign (relative to 1 + |trace|).
cplx trace_system(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                  const greens::UnperturbedBasis& basis, const Tolerances& tol = {});

DeterminantResult det2(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                       const greens::UnperturbedBasis& basis, const Tolerances& tol = {});
DeterminantResult detp(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                       const greens::UnperturbedBasis& basis, int p, const Tolerances& tol = {});

/// Fredholm series coefficient d_1 or d_2 by direct quadrature on `grid`
/// (the d_2 double integral is split along the diagonal).
cplx series_coefficient(const model::ScalarProblem& problem, cplx lambda, int order, const QuadratureGrid& grid,
                        const Tolerances& tol = {});

/// |d(lambda) - 1| for each (real, increasing) lambda.
std::vector<double> limit_normalization_check(const model::ScalarProblem& problem, const std::vector<double>& lambdas,
                                              const QuadratureGrid& grid, const Tolerances& tol = {});

}  // namespace fredev::fredholm
