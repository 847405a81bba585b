#include "doctest.h"

#include "fredev/config.hpp"
#include "fredev/errors.hpp"

using namespace fredev;
using namespace fredev::config;

namespace {

ErrorKind kind_of(const json& doc) {
  try {
    resolve(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NoConvergence;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("defaults resolve to the Poschl-Teller problem on the default grid") {
  const RunConfig cfg = resolve(json::object());
  CHECK(cfg.problem.name == "poschl_teller");
  CHECK(cfg.numerics.half_width == 20.0);
  CHECK(cfg.numerics.quad_points == 400);
  CHECK(cfg.rule == QuadratureRule::GaussLegendre);
  CHECK(cfg.lambdas.empty());
  CHECK(cfg.format == "json");
  CHECK(cfg.resolved["domain"]["quad_points"] == 400);
  CHECK(cfg.resolved["problem"]["profile"]["kind"] == "poschl_teller");
}

TEST_CASE("complex values") {
  CHECK(parse_complex(json(2.5), "x") == cplx(2.5, 0.0));
  CHECK(parse_complex(json{{"re", 1}, {"im", -2}}, "x") == cplx(1.0, -2.0));
  CHECK_THROWS_AS(parse_complex(json("1+2i"), "x"), Error);
  CHECK_THROWS_AS(parse_complex(json{{"re", 1}, {"imag", 2}}, "x"), Error);
  CHECK(complex_json(cplx(1.0, 2.0))["im"] == 2.0);
}

TEST_CASE("unknown keys anywhere are rejected") {
  CHECK(kind_of(json{{"bogus", 1}}) == ErrorKind::Config);
  CHECK(kind_of(json{{"domain", {{"halfwidth", 3}}}}) == ErrorKind::Config);
  CHECK(kind_of(json{{"problem", {{"profile", {{"kind", "poschl_teller"}, {"params", {{"M", 2}}}}}}}}) ==
        ErrorKind::Config);
  CHECK(kind_of(json{{"output", {{"format", "xml"}}}}) == ErrorKind::Config);
  CHECK(kind_of(json{{"det", {{"kinds", {"det9"}}}}}) == ErrorKind::Config);
  CHECK(kind_of(json{{"problem", {{"m", 1}}}}) == ErrorKind::Config);
}

TEST_CASE("overrides descend into nested objects") {
  json doc = json::object();
  apply_override(doc, "domain.quad_points=800");
  apply_override(doc, "problem.profile.kind=sech_pulse");
  apply_override(doc, "lambdas=[4, {\"re\": 2, \"im\": 1}]");
  const RunConfig cfg = resolve(doc);
  CHECK(cfg.numerics.quad_points == 800);
  CHECK(cfg.problem.name == "sech_pulse");
  REQUIRE(cfg.lambdas.size() == 2);
  CHECK(cfg.lambdas[1] == cplx(2.0, 1.0));
  CHECK_THROWS_AS(apply_override(doc, "novalue"), Error);
  CHECK_THROWS_AS(apply_override(doc, "a..b=1"), Error);
}

TEST_CASE("front asymptotics") {
  json doc = json::parse(R"({"problem": {"profile": {"kind": "tanh_front", "params": {"amplitude": 1.5, "offset": -2.5}}},
                             "asymptotics": {"v_minus": -4, "v_plus": -1}})");
  const RunConfig cfg = resolve(doc);
  CHECK(cfg.problem.is_front());
  CHECK(cfg.system.r_minus(1, 0) == cplx(4.0));
  CHECK(cfg.system.r_plus(1, 0) == cplx(1.0));
  CHECK(cfg.locate.function == locate::FunctionKind::FrontDet2);
  const QuadratureGrid g = cfg.grid();
  bool edge = false;
  for (double e : g.edges) edge = edge || e == 0.0;
  CHECK(edge);
}

TEST_CASE("tabulated profiles") {
  json xs = json::array(), ys = json::array();
  for (int i = -80; i <= 80; ++i) {
    xs.push_back(i * 0.125);
    ys.push_back(2.0 / std::pow(std::cosh(i * 0.125), 2));
  }
  json doc{{"problem", {{"profile", {{"kind", "tabulated"}, {"params", {{"x", xs}, {"values", ys}}}}}}}};
  const RunConfig cfg = resolve(doc);
  CHECK(std::abs(cfg.problem.profile.value(0.0) - 2.0) < 1e-12);
  doc["problem"]["profile"]["params"]["x"][3] = -100.0;
  CHECK(kind_of(doc) == ErrorKind::Config);
}
