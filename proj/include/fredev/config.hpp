#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fredev/evans.hpp"
#include "fredev/locate.hpp"
#include "fredev/model.hpp"
#include "fredev/quadrature.hpp"
#include "fredev/types.hpp"

namespace fredev::config {

using json = nlohmann::ordered_json;

struct DetOptions {
  std::vector<std::string> kinds{"det1", "det2"};
  int p = 3;
};

struct RegionOptions {
  cplx lower_left{0.5, -0.5};
  cplx upper_right{1.5, 0.5};
  int samples_per_edge = 16;
  int nx = 11;
  int ny = 11;
  locate::FunctionKind function = locate::FunctionKind::Det1;
};

struct ConvergeOptions {
  std::vector<int> quad_points{100, 200, 400};
  std::vector<double> half_widths{15.0, 20.0, 25.0};
  double half_width_step = 5.0;
};

struct RunConfig {
  json resolved;  // fully defaulted config, echoed into every output
  model::ScalarProblem problem;
  model::SystemProblem system;
  evans::IntegrationParams numerics;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  double matching_point = 0.0;
  std::vector<cplx> lambdas;
  DetOptions det;
  RegionOptions locate;
  RegionOptions scan;
  ConvergeOptions converge;
  std::string format = "json";
  unsigned threads = 0;

  QuadratureGrid grid() const;
};

/// Number or {"re": .., "im": ..}.
cplx parse_complex(const json& j, const std::string& where);
json complex_json(cplx z);

json read_file(const std::string& path);
/// "a.b.c=value": value parsed as JSON when possible, else kept as a string.
void apply_override(json& doc, const std::string& assignment);

/// Validates against the schema (unknown keys are rejected) and fills defaults.
RunConfig resolve(const json& doc);

}  // namespace fredev::config
