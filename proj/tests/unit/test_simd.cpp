#include <random>
#include <vector>

#include "doctest.h"

#include "fredev/linalg.hpp"
#include "fredev/simd.hpp"

using namespace fredev;
using simd::Backend;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(simd::kernels_for(Backend::Scalar).backend == Backend::Scalar);
  CHECK(simd::backend_name(Backend::Scalar) == "scalar");
}

TEST_CASE("axpy and dotu agree across backends for every tail length") {
  if (!simd::avx2_available()) {
    MESSAGE("AVX2 not available on this machine; only the scalar path is exercised");
    return;
  }
  const auto& s = simd::kernels_for(Backend::Scalar);
  const auto& v = simd::kernels_for(Backend::Avx2);
  REQUIRE(v.backend == Backend::Avx2);
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 41; ++n) {
    const auto x = random_vector(n, rng), y0 = random_vector(n, rng);
    const cplx a(0.3, -1.7);
    auto ys = y0, yv = y0;
    s.axpy(n, a, x.data(), ys.data());
    v.axpy(n, a, x.data(), yv.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-14 * (1.0 + std::abs(ys[i])));
    const cplx ds = s.dotu(n, x.data(), y0.data()), dv = v.dotu(n, x.data(), y0.data());
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + static_cast<double>(n)));
  }
}

TEST_CASE("unaligned pointers are handled") {
  if (!simd::avx2_available()) return;
  std::mt19937_64 rng(11);
  auto x = random_vector(33, rng), y = random_vector(33, rng);
  auto ys = y, yv = y;
  simd::kernels_for(Backend::Scalar).axpy(31, cplx(2.0, 0.5), x.data() + 1, ys.data() + 2);
  simd::kernels_for(Backend::Avx2).axpy(31, cplx(2.0, 0.5), x.data() + 1, yv.data() + 2);
  for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-13);
}

TEST_CASE("LU determinant is backend independent and matches Eigen") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 5, 17, 64}) {
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      const auto r = random_vector(static_cast<std::size_t>(n), rng);
      for (int j = 0; j < n; ++j) a(i, j) = r[static_cast<std::size_t>(j)];
    }
    const cplx ref = a.partialPivLu().determinant();
    const Backend prev = simd::set_backend(Backend::Scalar);
    const cplx ds = lu_determinant(a).value;
    simd::set_backend(simd::avx2_available() ? Backend::Avx2 : Backend::Scalar);
    const cplx dv = lu_determinant(a).value;
    simd::set_backend(prev);
    CHECK(std::abs(ds - ref) <= 1e-11 * std::abs(ref));
    CHECK(std::abs(dv - ref) <= 1e-11 * std::abs(ref));
  }
}

TEST_CASE("matrix kernels agree across backends") {
  std::mt19937_64 rng(5);
  const int n = 23;
  CMatrixRM a(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = random_vector(1, rng)[0];
      b(i, j) = random_vector(1, rng)[0];
    }
  const CMatrixRM ref = a * b;
  const Backend prev = simd::set_backend(Backend::Scalar);
  const CMatrixRM cs = multiply(a, b);
  const cplx ts = trace_of_square(a);
  simd::set_backend(simd::avx2_available() ? Backend::Avx2 : Backend::Scalar);
  const CMatrixRM cv = multiply(a, b);
  const cplx tv = trace_of_square(a);
  simd::set_backend(prev);
  CHECK((cs - ref).norm() < 1e-12 * ref.norm());
  CHECK((cv - ref).norm() < 1e-12 * ref.norm());
  const cplx tref = (a * a).trace();
  CHECK(std::abs(ts - tref) < 1e-12 * (1 + std::abs(tref)));
  CHECK(std::abs(tv - tref) < 1e-12 * (1 + std::abs(tref)));
}
