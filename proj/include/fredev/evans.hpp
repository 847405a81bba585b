#pragma once

#include <vector>

#include "fredev/fredholm.hpp"
#include "fredev/greens.hpp"
#include "fredev/model.hpp"
#include "fredev/ode.hpp"
#include "fredev/quadrature.hpp"

namespace fredev::evans {

struct IntegrationParams {
  double half_width = 20.0;
  int quad_points = 400;
  int panel_order = 10;
  double rtol = 1e-10;
  double atol = 1e-12;
  double min_step = 1e-12;
  double reorth_interval = 1.0;  // QR re-orthonormalization spacing when there are >= 2 columns
  double renorm_threshold = 1e8;
  Tolerances tol;

  ode::Options ode_options() const;
  QuadratureGrid grid(bool split_at_zero = false) const;
};

/// Solutions of Y' = (A0 + R) Y sampled at ascending abscissae. The raw
/// solution at sample i is values[i] * factor[i] * diag(exp(renorm_log[i])):
/// `values` has orthonormal (or unit) columns, `factor` is upper triangular
/// with max-normalized columns, and `renorm_log` carries the removed growth.
struct JostSolution {
  enum class Direction { Minus, Plus };
  Direction direction = Direction::Minus;
  std::vector<double> xs;
  std::vector<CMatrix> values;
  std::vector<CMatrix> factor;
  std::vector<CVector> renorm_log;
  std::vector<cplx> rates;  // asymptotic rates of the columns

  std::size_t index_of(double x) const;
  CMatrix raw(std::size_t i) const;
  CMatrix raw_at(double x) const { return raw(index_of(x)); }
  /// log det of factor * diag(exp(renorm_log)) (square case of the Wronskian).
  cplx log_scale(std::size_t i) const;
};

/// Adjoint Jost rows Z+(x), stored transposed (Z^T) in the same format.
struct AdjointJost {
  JostSolution transposed;
  CMatrix raw(std::size_t i) const { return transposed.raw(i).transpose(); }
  CMatrix raw_at(double x) const { return transposed.raw_at(x).transpose(); }
};

/// Eigenbasis of A0(lambda) + R- (side < 0) or A0(lambda) + R+ (side > 0).
greens::UnperturbedBasis end_basis(const model::SystemProblem& system, cplx lambda, int side, const Tolerances& tol = {});

JostSolution jost_minus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                        const std::vector<double>& extra_stops = {});
JostSolution jost_plus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                       const std::vector<double>& extra_stops = {});
AdjointJost adjoint_jost_plus(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params,
                              const std::vector<double>& extra_stops = {});

struct EvansResult {
  cplx evans{1.0};
  cplx c_lambda{1.0};
  cplx ratio{1.0};
  cplx log_evans{0.0};
  cplx log_c{0.0};
  CMatrix transmission;
  cplx det_transmission{1.0};
  double matching_point = 0.0;
  double truncation_estimate = 0.0;  // integral of ||R - R+-|| outside [-X, X]
};

EvansResult evans_function(const model::SystemProblem& system, cplx lambda, double matching_point,
                           const IntegrationParams& params = {});
/// E/c alone (no transmission matrix).
cplx evans_ratio(const model::SystemProblem& system, cplx lambda, double matching_point = 0.0,
                 const IntegrationParams& params = {});

/// I_k + integral of Z0+ R Y- over the quadrature grid.
CMatrix transmission_matrix(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params = {});
/// Z0+(X) Y-(X), the Gram form of the transmission coefficient at the right boundary.
CMatrix gram_transmission(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params = {});
/// Z+(x0) Y-(x0).
CMatrix swinton_matrix(const model::SystemProblem& system, cplx lambda, double matching_point = 0.0,
                       const IntegrationParams& params = {});
/// First term of the Volterra series: I_k + integral of Z0+ R Y0-.
CMatrix born_transmission(const model::SystemProblem& system, cplx lambda, const IntegrationParams& params = {});

double truncation_estimate(const model::SystemProblem& system, double X);

/// Abel check: det(Y0(x)) e^{-tr(A0) x} at the given abscissae.
std::vector<cplx> wronskian_profile(const greens::UnperturbedBasis& basis, const CMatrix& a0, const std::vector<double>& xs);

struct IdentityReport {
  cplx d{1.0};              // det1 of the scalar Birman-Schwinger operator
  cplx det_transmission{1.0};
  cplx evans_ratio{1.0};
  cplx det2{1.0};           // det2 of the system operator
  cplx system_trace{0.0};
  double det2_relation_residual = 0.0;  // |det D - exp(trace) det2| / |det D|
  double max_pairwise_gap = 0.0;        // max relative gap among d, det D, E/c
};

IdentityReport identity_report(const model::ScalarProblem& problem, cplx lambda, const IntegrationParams& params = {},
                               double matching_point = 0.0);

}  // namespace fredev::evans
