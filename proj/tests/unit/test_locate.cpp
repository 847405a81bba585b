#include <cmath>

#include "doctest.h"

#include "fredev/errors.hpp"
#include "fredev/locate.hpp"

using namespace fredev;
using namespace fredev::locate;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g = build_grid(20.0, 400);
  return g;
}

Evaluator pt_det1() { return det1_evaluator(model::builtin_problem("poschl_teller"), grid()); }

}  // namespace

TEST_CASE("winding numbers of an explicit polynomial") {
  const Evaluator f = [](cplx z) { return (z - 1.0) * (z - cplx(2.0, 0.5)) * (z - cplx(2.0, 0.5)); };
  CHECK(winding_number(f, Contour{cplx(0.5, -1.0), cplx(1.5, 1.0)}) == 1);
  CHECK(winding_number(f, Contour{cplx(1.5, -1.0), cplx(3.0, 1.0)}) == 2);
  CHECK(winding_number(f, Contour{cplx(-2.0, -1.0), cplx(0.0, 1.0)}) == 0);
  // additivity over a split
  const int whole = winding_number(f, Contour{cplx(0.0, -1.0), cplx(3.0, 1.0)});
  const int a = winding_number(f, Contour{cplx(0.0, -1.0), cplx(1.7, 1.0)});
  const int b = winding_number(f, Contour{cplx(1.7, -1.0), cplx(3.0, 1.0)});
  CHECK(whole == a + b);
  CHECK(whole == 3);
}

TEST_CASE("a zero on the contour is reported") {
  const Evaluator f = [](cplx z) { return z - 1.0; };
  CHECK_THROWS_AS(winding_number(f, Contour{cplx(1.0, -1.0), cplx(2.0, 1.0)}), Error);
}

TEST_CASE("Poschl-Teller winding with det1 and the Evans ratio") {
  const Evaluator d = pt_det1();
  const Evaluator e = evans_evaluator(model::to_system(model::builtin_problem("poschl_teller")), {});
  const Contour around{cplx(0.5, -0.5), cplx(1.5, 0.5)}, away{cplx(2.0, -0.5), cplx(3.0, 0.5)};
  CHECK(winding_number(d, around) == 1);
  CHECK(winding_number(d, away) == 0);
  CHECK(winding_number(e, around) == 1);
  CHECK(winding_number(e, away) == 0);
  CHECK(winding_number(det1_evaluator(model::free_problem({0.0, 0.0}), grid()), around) == 0);
}

TEST_CASE("contours through the essential spectrum are refused") {
  try {
    winding_number(pt_det1(), Contour{cplx(-1.0, -0.5), cplx(1.5, 0.5)});
    FAIL("expected EssentialSpectrum");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::EssentialSpectrum);
  }
}

TEST_CASE("Muller refinement") {
  const RefinedRoot r = refine_root(pt_det1(), 1.2);
  CHECK(std::abs(r.lambda - 1.0) < 1e-6);
  const Evaluator e = evans_evaluator(model::to_system(model::builtin_problem("poschl_teller")), {});
  CHECK(std::abs(refine_root(e, 1.2).lambda - 1.0) < 1e-6);
  try {
    refine_root([](cplx) { return cplx(1.0); }, 0.3);
    FAIL("expected NoConvergence");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("refined roots are grid independent") {
  const RefinedRoot r = refine_root(pt_det1(), 1.2);
  const auto fine = det1_evaluator(model::builtin_problem("poschl_teller"), build_grid(20.0, 800));
  CHECK(std::abs(fine(r.lambda)) < 1e-8);
}

TEST_CASE("root location with subdivision") {
  const Evaluator f = [](cplx z) { return (z - cplx(0.3, 0.2)) * (z - cplx(0.7, -0.4)) * (z + cplx(0.5, 0.1)); };
  const RootReport rep = locate_roots(f, Contour{cplx(-1.0, -1.0), cplx(1.0, 1.0)});
  CHECK(rep.winding == 3);
  REQUIRE(rep.roots.size() == 3);
  CHECK(!rep.multiplicity_gap);
  CHECK(std::abs(rep.roots[0].lambda + cplx(0.5, 0.1)) < 1e-9);
  CHECK(std::abs(rep.roots[1].lambda - cplx(0.3, 0.2)) < 1e-9);
  CHECK(std::abs(rep.roots[2].lambda - cplx(0.7, -0.4)) < 1e-9);

  const Evaluator g = [](cplx z) { return (z - 0.1) * (z - 0.1); };
  const RootReport dbl = locate_roots(g, Contour{cplx(-1.0, -1.0), cplx(1.0, 1.0)});
  CHECK(dbl.winding == 2);
  CHECK(dbl.multiplicity_gap);

  const RootReport pt = locate_roots(pt_det1(), Contour{cplx(0.5, -0.5), cplx(1.5, 0.5)});
  CHECK(pt.winding == 1);
  REQUIRE(pt.roots.size() == 1);
  CHECK(std::abs(pt.roots[0].lambda - 1.0) < 1e-6);
}

TEST_CASE("scan") {
  const auto rows = scan(pt_det1(), cplx(0.5, -0.5), cplx(1.5, 0.5), 11, 11);
  REQUIRE(rows.size() == 121);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::abs(rows[i].value) < std::abs(rows[best].value)) best = i;
  CHECK(std::abs(rows[best].lambda - 1.0) < 1e-12);
  CHECK(scan(pt_det1(), 0.5, 1.5, 0, 5).empty());
  const auto crossing = scan(pt_det1(), cplx(-1.0, 0.0), cplx(1.0, 0.0), 5, 1);
  REQUIRE(crossing.size() == 5);
  CHECK(crossing[0].flagged);
  CHECK(std::isnan(crossing[0].value.real()));
  CHECK(!crossing[4].flagged);
}
