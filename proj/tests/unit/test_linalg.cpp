#include <algorithm>
#include <random>

#include "doctest.h"

#include "fredev/linalg.hpp"

using namespace fredev;

TEST_CASE("polynomial roots of a product of known factors") {
  // (k - 1)(k + 2)(k - 3i)(k + 3i) = k^4 + k^3 + 7k^2 + 9k - 18
  const std::vector<cplx> c{-18.0, 9.0, 7.0, 1.0};
  auto r = polynomial_roots(c);
  REQUIRE(r.size() == 4);
  const std::vector<cplx> expect{1.0, -2.0, cplx(0, 3), cplx(0, -3)};
  for (cplx e : expect) {
    double best = 1e300;
    for (cplx z : r) best = std::min(best, std::abs(z - e));
    CHECK(best < 1e-12);
  }
  for (cplx z : r) CHECK(std::abs(eval_monic(c, z).first) < 1e-10);
}

TEST_CASE("root ordering: ascending real part, ties by imaginary part") {
  const std::vector<cplx> r{cplx(1, 2), cplx(-3, 0), cplx(1, -2), cplx(0.5, 0)};
  const auto order = root_order(r, 1e-12);
  REQUIRE(order.size() == 4);
  CHECK(r[static_cast<std::size_t>(order[0])] == cplx(-3, 0));
  CHECK(r[static_cast<std::size_t>(order[1])] == cplx(0.5, 0));
  CHECK(r[static_cast<std::size_t>(order[2])] == cplx(1, -2));
  CHECK(r[static_cast<std::size_t>(order[3])] == cplx(1, 2));
}

TEST_CASE("root diagnostics are scale free") {
  const auto d1 = diagnose_roots({cplx(1, 0), cplx(-2, 0)});
  const auto d2 = diagnose_roots({cplx(1e3, 0), cplx(-2e3, 0)});
  CHECK(d1.axis_distance == doctest::Approx(d2.axis_distance));
  CHECK(d1.separation == doctest::Approx(d2.separation));
  CHECK(d1.axis_distance == doctest::Approx(0.5));
}

TEST_CASE("LU determinant of structured matrices") {
  CMatrix a = CMatrix::Identity(4, 4) * cplx(2.0, 0.0);
  CHECK(std::abs(lu_determinant(a).value - 16.0) < 1e-14);
  CMatrix s = CMatrix::Zero(3, 3);
  s(0, 1) = 1.0;
  const auto r = lu_determinant(s);
  CHECK(r.singular);
  CHECK(r.value == cplx(0.0));
  // permutation matrix has determinant -1
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 1) = p(1, 0) = 1.0;
  CHECK(std::abs(lu_determinant(p).value + 1.0) < 1e-15);
}

TEST_CASE("log|det| stays finite when the value underflows") {
  CMatrix a = CMatrix::Identity(200, 200) * cplx(1e-3, 0.0);
  const auto r = lu_determinant(a);
  CHECK(r.log_abs == doctest::Approx(200 * std::log(1e-3)));
}

TEST_CASE("sorted eigen decomposition reconstructs the matrix") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  CMatrix a(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = cplx(g(rng), g(rng));
  const auto es = sorted_eigen(a, 1e-12);
  for (int j = 0; j + 1 < 5; ++j) CHECK(es.values(j).real() <= es.values(j + 1).real() + 1e-12);
  const CMatrix back = es.vectors * es.values.asDiagonal() * es.vectors.inverse();
  CHECK((back - a).norm() < 1e-10 * a.norm());
}

TEST_CASE("condition number of a diagonal matrix") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 10.0;
  d(2, 2) = 1e-2;
  CHECK(condition_number(d) == doctest::Approx(1e3));
}
