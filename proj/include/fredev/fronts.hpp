#pragma once

#include <vector>

#include "fredev/evans.hpp"
#include "fredev/fredholm.hpp"
#include "fredev/greens.hpp"
#include "fredev/model.hpp"

namespace fredev::fronts {

struct FrontSplit {
  std::vector<cplx> kappa_minus;  // eigenvalues of A-(lambda) with Re > 0
  std::vector<cplx> tau_plus;     // eigenvalues of A+(lambda) with Re < 0
  CMatrix vectors_minus;          // n x k eigenvectors for kappa_minus
  CMatrix vectors_plus;           // n x (n-k) eigenvectors for tau_plus
  bool companion = false;         // vectors are Vandermonde columns

  int n() const { return static_cast<int>(kappa_minus.size() + tau_plus.size()); }
  int k() const { return static_cast<int>(kappa_minus.size()); }
  std::vector<cplx> combined() const;
};

struct FrontReference {
  CMatrix B;
  CMatrix P;
  std::vector<cplx> roots;
  int k = 0;
  double condition = 1.0;
};

/// Splits the end-state matrices A-+ = A0 + R-+. Throws CountMismatch when
/// the two sides have different growing counts or disagree with
/// `expected_k` (ignored when negative).
FrontSplit front_split(const model::SystemProblem& system, cplx lambda, int expected_k = -1,
                       const Tolerances& tol = {});
FrontSplit front_split(const CMatrix& a_minus, const CMatrix& a_plus, int expected_k = -1, const Tolerances& tol = {});

/// B = P diag(kappa-, tau+) P^{-1}. For Vandermonde P this is the companion
/// matrix of prod (mu - r_j), built directly from the polynomial coefficients.
FrontReference front_reference(const FrontSplit& split, const Tolerances& tol = {});

/// R(x) - R- for x <= 0, R(x) - R+ for x > 0.
CMatrix front_Q(const model::SystemProblem& system, double x);

/// det2 of the Birman-Schwinger operator built from the Green's matrix of
/// Y' = B Y weighted by Q. A grid without a panel edge at 0 is rebuilt with one.
fredholm::DeterminantResult front_det2(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                                       const Tolerances& tol = {});

/// Evans ratio E/c of the front with the end-state bases.
cplx front_evans_ratio(const model::SystemProblem& system, cplx lambda, double matching_point = 0.0,
                       const evans::IntegrationParams& params = {});

}  // namespace fredev::fronts
