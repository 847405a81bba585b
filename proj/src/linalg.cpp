#include "fredev/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fredev/simd.hpp"

namespace fredev {

LuDeterminant lu_determinant(CMatrixRM& a) {
  const Eigen::Index n = a.rows();
  LuDeterminant out{cplx(1.0), 0.0, 1.0, false};
  if (n == 0) return out;

  double log_abs = 0.0;
  cplx phase(1.0);
  double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      out.value = cplx(0.0);
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.condition_hint = std::numeric_limits<double>::infinity();
      out.singular = true;
      return out;
    }
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      phase = -phase;
    }
    const cplx pivot = a(k, k);
    pmax = std::max(pmax, best);
    pmin = std::min(pmin, best);
    log_abs += std::log(best);
    phase *= pivot / best;

    const std::size_t len = static_cast<std::size_t>(n - k - 1);
    if (len == 0) continue;
    const cplx* pivot_row = &a(k, k + 1);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) / pivot;
      a(i, k) = l;
      if (l != cplx(0.0)) simd::axpy(len, -l, pivot_row, &a(i, k + 1));
    }
  }
  out.log_abs = log_abs;
  out.value = phase * std::exp(log_abs);
  out.condition_hint = pmax / pmin;
  return out;
}

LuDeterminant lu_determinant(const CMatrix& a) {
  CMatrixRM copy = a;
  return lu_determinant(copy);
}

cplx trace_of_square(const CMatrixRM& a) {
  const CMatrixRM at = a.transpose();
  const std::size_t n = static_cast<std::size_t>(a.cols());
  cplx sum(0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) sum += simd::dotu(n, &a(i, 0), &at(i, 0));
  return sum;
}

CMatrixRM multiply(const CMatrixRM& a, const CMatrixRM& b) {
  CMatrixRM c = CMatrixRM::Zero(a.rows(), b.cols());
  const std::size_t m = static_cast<std::size_t>(b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik != cplx(0.0)) simd::axpy(m, aik, &b(k, 0), &c(i, 0));
    }
  }
  return c;
}

double condition_number(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

bool root_less(cplx a, cplx b, double tol) {
  if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<int> root_order(const std::vector<cplx>& roots, double tol) {
  std::vector<int> idx(roots.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const int cur = idx[i];
    std::size_t j = i;
    while (j > 0 && root_less(roots[cur], roots[idx[j - 1]], tol)) {
      idx[j] = idx[j - 1];
      --j;
    }
    idx[j] = cur;
  }
  return idx;
}

SortedEigen sorted_eigen(const CMatrix& a, double tie_tol) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, true);
  const CVector vals = es.eigenvalues();
  const CMatrix vecs = es.eigenvectors();
  std::vector<cplx> v(vals.data(), vals.data() + vals.size());
  const auto order = root_order(v, tie_tol);
  SortedEigen out{CVector(vals.size()), CMatrix(a.rows(), a.cols())};
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = vals(order[i]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = vecs.col(order[i]);
  }
  return out;
}

}  // namespace fredev

namespace fredev {

std::pair<cplx, cplx> eval_monic(const std::vector<cplx>& c, cplx z) {
  cplx p(1.0), dp(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const Eigen::Index n = static_cast<Eigen::Index>(c.size());
  if (n == 0) return {};
  CMatrix comp = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) comp(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) comp(n - 1, j) = -c[static_cast<std::size_t>(j)];
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  std::vector<cplx> roots(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    const auto [p, dp] = eval_monic(c, z);
    if (std::abs(dp) > 0.0) {
      const cplx step = p / dp;
      // Newton is only trusted when it is a small correction
      if (std::abs(step) <= 1e-3 * std::max(1.0, std::abs(z))) z -= step;
    }
    roots[static_cast<std::size_t>(i)] = z;
  }
  return roots;
}

RootDiagnostics diagnose_roots(const std::vector<cplx>& roots) {
  RootDiagnostics d{0.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& r : roots) d.scale = std::max(d.scale, std::abs(r));
  if (d.scale == 0.0) {
    d.scale = 1.0;
    d.axis_distance = 0.0;
    d.separation = roots.size() > 1 ? 0.0 : d.separation;
    return d;
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    d.axis_distance = std::min(d.axis_distance, std::abs(roots[i].real()) / d.scale);
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      d.separation = std::min(d.separation, std::abs(roots[i] - roots[j]) / d.scale);
  }
  return d;
}

}  // namespace fredev
