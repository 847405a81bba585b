#include "fredev/fronts.hpp"

#include <cmath>

#include "fredev/errors.hpp"
#include "fredev/linalg.hpp"

namespace fredev::fronts {

namespace {

std::vector<cplx> take(const std::vector<cplx>& v, int lo, int cnt) { return {v.begin() + lo, v.begin() + lo + cnt}; }

FrontSplit from_bases(const greens::UnperturbedBasis& bm, const greens::UnperturbedBasis& bp, int expected_k,
                      bool companion) {
  if (bm.k() != bp.k())
    fail(ErrorKind::CountMismatch, "growing-mode counts differ between the two end states (" + std::to_string(bm.k()) +
                                       " vs " + std::to_string(bp.k()) + ")");
  if (expected_k >= 0 && bm.k() != expected_k)
    fail(ErrorKind::CountMismatch, "growing-mode count " + std::to_string(bm.k()) + " differs from the configured " +
                                       std::to_string(expected_k));
  const int n = bm.dim(), k = bm.k();
  FrontSplit s;
  s.kappa_minus = take(bm.rates(), 0, k);
  s.tau_plus = take(bp.rates(), k, n - k);
  s.vectors_minus = bm.vectors().leftCols(k);
  s.vectors_plus = bp.vectors().rightCols(n - k);
  s.companion = companion;
  return s;
}

bool bottom_row_only(const CMatrix& r) {
  for (Eigen::Index i = 0; i + 1 < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      if (r(i, j) != cplx(0.0)) return false;
  return true;
}

bool has_edge_at_zero(const QuadratureGrid& grid) {
  for (double e : grid.edges)
    if (e == 0.0) return true;
  return false;
}

}  // namespace

std::vector<cplx> FrontSplit::combined() const {
  std::vector<cplx> r = kappa_minus;
  r.insert(r.end(), tau_plus.begin(), tau_plus.end());
  return r;
}

FrontSplit front_split(const model::SystemProblem& system, cplx lambda, int expected_k, const Tolerances& tol) {
  const bool companion = system.companion_coeffs && bottom_row_only(system.r_minus) && bottom_row_only(system.r_plus);
  return from_bases(evans::end_basis(system, lambda, -1, tol), evans::end_basis(system, lambda, +1, tol), expected_k,
                    companion);
}

FrontSplit front_split(const CMatrix& a_minus, const CMatrix& a_plus, int expected_k, const Tolerances& tol) {
  return from_bases(greens::UnperturbedBasis::from_matrix(a_minus, tol),
                    greens::UnperturbedBasis::from_matrix(a_plus, tol), expected_k, false);
}

FrontReference front_reference(const FrontSplit& split, const Tolerances& tol) {
  FrontReference ref;
  ref.roots = split.combined();
  ref.k = split.k();
  const int n = split.n();
  if (split.companion) {
    ref.P.resize(n, n);
    for (int j = 0; j < n; ++j) {
      cplx pw(1.0);
      for (int p = 0; p < n; ++p) {
        ref.P(p, j) = pw;
        pw *= ref.roots[static_cast<std::size_t>(j)];
      }
    }
    // coefficients of prod (mu - r_j), lowest degree first
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx(0.0));
    c[0] = 1.0;
    for (int j = 0; j < n; ++j) {
      const cplx r = ref.roots[static_cast<std::size_t>(j)];
      for (int p = j + 1; p >= 1; --p) c[static_cast<std::size_t>(p)] = c[static_cast<std::size_t>(p) - 1] - r * c[static_cast<std::size_t>(p)];
      c[0] = -r * c[0];
    }
    ref.B = CMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) ref.B(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) ref.B(n - 1, j) = -c[static_cast<std::size_t>(j)];
  } else {
    ref.P.resize(n, n);
    ref.P << split.vectors_minus, split.vectors_plus;
  }
  CMatrix scaled = ref.P;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j).normalize();
  ref.condition = condition_number(scaled);
  if (!(ref.condition <= tol.condition)) fail(ErrorKind::IllConditioned, "reference eigenvector matrix is ill-conditioned");
  if (!split.companion) {
    CVector d(n);
    for (int j = 0; j < n; ++j) d(j) = ref.roots[static_cast<std::size_t>(j)];
    ref.B = ref.P * d.asDiagonal() * ref.P.fullPivLu().inverse();
  }
  return ref;
}

CMatrix front_Q(const model::SystemProblem& system, double x) {
  return system.perturbation_at(x) - (x <= 0.0 ? system.r_minus : system.r_plus);
}

fredholm::DeterminantResult front_det2(const model::SystemProblem& system, cplx lambda, const QuadratureGrid& grid,
                                       const Tolerances& tol) {
  const FrontReference ref = front_reference(front_split(system, lambda, -1, tol), tol);
  const greens::UnperturbedBasis basis = greens::UnperturbedBasis::from_eigen(ref.roots, ref.P, ref.k, tol);
  model::SystemProblem q = system;
  q.base = [b = ref.B](cplx) { return b; };
  q.perturbation = [&system](double x) { return front_Q(system, x); };
  q.r_minus = CMatrix::Zero(system.dim, system.dim);
  q.r_plus = q.r_minus;
  q.companion_coeffs.reset();
  q.name = system.name + "/Q";
  if (system.is_front() && !has_edge_at_zero(grid)) {
    const QuadratureGrid split = build_grid(grid.half_width, static_cast<int>(grid.size()), grid.rule, grid.panel_order, true);
    return fredholm::det2(q, lambda, split, basis, tol);
  }
  return fredholm::det2(q, lambda, grid, basis, tol);
}

cplx front_evans_ratio(const model::SystemProblem& system, cplx lambda, double matching_point,
                       const evans::IntegrationParams& params) {
  return evans::evans_ratio(system, lambda, matching_point, params);
}

}  // namespace fredev::fronts
