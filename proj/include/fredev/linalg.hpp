#pragma once

#include <utility>

#include "fredev/types.hpp"

namespace fredev {

/// Partial-pivot LU determinant of a dense complex matrix.
struct LuDeterminant {
  cplx value;
  double log_abs;          // log|det|, finite even when value under/overflows
  double condition_hint;   // max|pivot| / min|pivot|
  bool singular;           // an exact zero pivot was met
};

/// Factors `a` in place (row-major so the elimination update is a contiguous
/// axpy over each trailing row).
LuDeterminant lu_determinant(CMatrixRM& a);

/// Convenience overload that copies.
LuDeterminant lu_determinant(const CMatrix& a);

/// tr(A^2) for a square row-major matrix using the dot-product kernel.
cplx trace_of_square(const CMatrixRM& a);

/// C = A B for row-major square matrices using the axpy kernel.
CMatrixRM multiply(const CMatrixRM& a, const CMatrixRM& b);

/// 2-norm condition number estimate from the singular values.
double condition_number(const CMatrix& a);

/// Eigen-decomposition of a small matrix with eigenvalues sorted by the
/// root-ordering contract (ascending real part, ties by imaginary part).
struct SortedEigen {
  CVector values;
  CMatrix vectors;
};
SortedEigen sorted_eigen(const CMatrix& a, double tie_tol);

/// Ordering predicate used for roots and eigenvalues. `tol` absorbs roundoff
/// so that conjugate pairs with equal real parts sort by imaginary part.
bool root_less(cplx a, cplx b, double tol);

/// Insertion sort with `root_less` (stable and well-defined for the
/// tolerance comparator, which is not a strict weak order).
std::vector<int> root_order(const std::vector<cplx>& roots, double tol);

}  // namespace fredev

namespace fredev {

/// Roots of k^n + c[n-1] k^(n-1) + ... + c[0] (monic, `c` low order first):
/// companion eigenvalues followed by one Newton step per root.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& c);

/// Value and derivative of the monic polynomial at z.
std::pair<cplx, cplx> eval_monic(const std::vector<cplx>& c, cplx z);

/// Scale-free root diagnostics used for essential-spectrum and
/// multiple-root decisions.
struct RootDiagnostics {
  double scale;           // max(|root|) (1 if all roots vanish)
  double axis_distance;   // min |Re root| / scale
  double separation;      // min |r_i - r_j| / scale
};
RootDiagnostics diagnose_roots(const std::vector<cplx>& roots);

}  // namespace fredev
