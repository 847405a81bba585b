#include <cmath>
#include <random>

#include "doctest.h"

#include "fredev/errors.hpp"
#include "fredev/fredholm.hpp"
#include "fredev/fronts.hpp"

using namespace fredev;
using namespace fredev::fronts;

namespace {

// u'' - v u = lambda u with v running from 4 to 1 (phi = -v).
model::SystemProblem interpolating_front(double bump = 0.0) {
  return model::to_system(
      model::builtin_problem("tanh_front", {{"amplitude", 1.5}, {"offset", -2.5}, {"bump", bump}}));
}

}  // namespace

TEST_CASE("front split at lambda = 0") {
  const FrontSplit s = front_split(interpolating_front(), 0.0);
  REQUIRE(s.k() == 1);
  CHECK(std::abs(s.kappa_minus[0] - 2.0) < 1e-14);
  CHECK(std::abs(s.tau_plus[0] + 1.0) < 1e-14);
  try {
    front_split(interpolating_front(), -2.0);  // on the essential spectrum of A+
    FAIL("expected EssentialSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EssentialSpectrum);
  }
  try {
    front_split(interpolating_front(), 0.0, 0);
    FAIL("expected CountMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CountMismatch);
  }
}

TEST_CASE("degenerate front reduces to the pulse splitting") {
  const auto sys = model::to_system(model::builtin_problem("poschl_teller"));
  const FrontSplit s = front_split(sys, 4.0);
  const auto roots = greens::classify_roots(model::builtin_problem("poschl_teller"), 4.0);
  CHECK(std::abs(s.kappa_minus[0] - roots.plus[0]) < 1e-14);
  CHECK(std::abs(s.tau_plus[0] - roots.minus[0]) < 1e-14);
}

TEST_CASE("reference matrix from an explicit split") {
  FrontSplit s;
  s.kappa_minus = {2.0};
  s.tau_plus = {-1.0};
  s.companion = true;
  const FrontReference r = front_reference(s);
  CHECK(r.B(0, 0) == cplx(0.0));
  CHECK(r.B(0, 1) == cplx(1.0));
  CHECK(r.B(1, 0) == cplx(2.0));
  CHECK(r.B(1, 1) == cplx(1.0));
  const CMatrix d = r.P.inverse() * r.B * r.P;
  CHECK(std::abs(d(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(d(1, 1) + 1.0) < 1e-12);
}

TEST_CASE("reference matrix similarity on random admissible splits") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.2, 2.0), v(-1.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    FrontSplit s;
    const int n = 2 + t % 4, k = 1 + t % (n - 1);
    for (int j = 0; j < k; ++j) s.kappa_minus.emplace_back(u(rng), v(rng));
    for (int j = k; j < n; ++j) s.tau_plus.emplace_back(-u(rng), v(rng));
    s.companion = t % 2 == 0;
    if (!s.companion) {
      // generic eigenvectors
      s.vectors_minus = CMatrix::Random(n, k);
      s.vectors_plus = CMatrix::Random(n, n - k);
    }
    FrontReference r;
    try {
      r = front_reference(s);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IllConditioned);
      continue;
    }
    const auto roots = s.combined();
    CVector diag(n);
    for (int j = 0; j < n; ++j) diag(j) = roots[static_cast<std::size_t>(j)];
    const CMatrix d = r.P.inverse() * r.B * r.P;
    const CMatrix expect = diag.asDiagonal();
    CHECK((d - expect).norm() < 1e-10 * (1 + expect.norm()) * r.condition);
  }
}

TEST_CASE("piecewise Q") {
  const auto sys = interpolating_front();
  CHECK(front_Q(sys, -40.0).norm() < 1e-15);
  CHECK(front_Q(sys, 40.0).norm() < 1e-15);
  const double eps = 1e-12;
  const CMatrix jump = front_Q(sys, -eps) - front_Q(sys, eps);
  CHECK((jump - (sys.r_plus - sys.r_minus)).norm() < 1e-10);
  const QuadratureGrid g = build_grid(20.0, 400, QuadratureRule::GaussLegendre, 10, true);
  cplx left(0.0), right(0.0);
  for (std::size_t i = 0; i < g.size(); ++i) (g.nodes[i] < 0 ? left : right) += g.weights[i] * front_Q(sys, g.nodes[i]).trace();
  CHECK(left == cplx(0.0));
  CHECK(right == cplx(0.0));
}

TEST_CASE("front determinant degenerates to the pulse det2") {
  const auto sys = model::to_system(model::builtin_problem("gaussian_pulse"));
  const QuadratureGrid g = build_grid(20.0, 400);
  for (cplx lambda : {cplx(4.0), cplx(2.0, 1.0)}) {
    const auto basis = greens::unperturbed_bases(sys, lambda);
    const cplx a = fredholm::det2(sys, lambda, g, basis).value;
    const cplx b = front_det2(sys, lambda, g).value;
    CHECK(std::abs(a - b) < 1e-8);
  }
  const auto zero = model::to_system(model::free_problem({0.0, 0.0}));
  CHECK(front_det2(zero, 4.0, g).value == cplx(1.0));
}

TEST_CASE("front determinant and Evans ratio along (1, 4)") {
  const auto sys = interpolating_front();
  const QuadratureGrid g = build_grid(20.0, 400, QuadratureRule::GaussLegendre, 10, true);
  int det_changes = 0, evans_changes = 0;
  double prev_d = 0.0, prev_e = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double l = 1.0 + 3.0 * (i + 0.5) / 31.0;
    const double d = front_det2(sys, l, g).value.real(), e = front_evans_ratio(sys, l).real();
    if (i > 0) {
      det_changes += (d > 0) != (prev_d > 0);
      evans_changes += (e > 0) != (prev_e > 0);
    }
    prev_d = d;
    prev_e = e;
  }
  CHECK(det_changes == evans_changes);
}

TEST_CASE("bumped front: both functions have a single real zero below the essential spectrum gap") {
  // Both pipelines see one sign change on (-0.9, 0.9). Their locations differ
  // because the B(lambda) + Q problem is a different ODE from the front's own.
  const auto sys = interpolating_front(3.0);
  const QuadratureGrid g = build_grid(20.0, 400, QuadratureRule::GaussLegendre, 10, true);
  int det_changes = 0, evans_changes = 0;
  double prev_d = 0.0, prev_e = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double l = -0.9 + 0.1 * i;
    const double d = front_det2(sys, l, g).value.real(), e = front_evans_ratio(sys, l).real();
    if (i > 0) {
      det_changes += (d > 0) != (prev_d > 0);
      evans_changes += (e > 0) != (prev_e > 0);
    }
    prev_d = d;
    prev_e = e;
  }
  CHECK(det_changes == 1);
  CHECK(evans_changes == 1);
}
