#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fredev/evans.hpp"
#include "fredev/model.hpp"
#include "fredev/quadrature.hpp"
#include "fredev/types.hpp"

namespace fredev::locate {

/// lambda -> f(lambda). Must throw Error(EssentialSpectrum) off the resolvent set.
using Evaluator = std::function<cplx(cplx)>;

enum class FunctionKind { Det1, EvansRatio, FrontDet2 };
std::string to_string(FunctionKind kind);
FunctionKind parse_function(const std::string& name);

Evaluator det1_evaluator(const model::ScalarProblem& problem, const QuadratureGrid& grid, const Tolerances& tol = {});
Evaluator evans_evaluator(const model::SystemProblem& system, const evans::IntegrationParams& params,
                          double matching_point = 0.0);
Evaluator front_det2_evaluator(const model::SystemProblem& system, const QuadratureGrid& grid,
                               const Tolerances& tol = {});

/// Axis-aligned rectangle traversed counter-clockwise.
struct Contour {
  cplx lower_left{0.0};
  cplx upper_right{1.0, 1.0};
  int samples_per_edge = 16;

  std::vector<cplx> corners() const;
};

struct WindingOptions {
  int max_samples_per_edge = 4096;
  double guard = 0.1;
  unsigned threads = 1;
};

struct WindingResult {
  int winding = 0;
  double phase = 0.0;  // accumulated argument change
  long evaluations = 0;
};

WindingResult winding_detail(const Evaluator& f, const Contour& contour, const WindingOptions& opts = {});
int winding_number(const Evaluator& f, const Contour& contour, const WindingOptions& opts = {});

struct RefineOptions {
  int max_iterations = 50;
  double residual = 1e-10;  // relative to the scale of |f| at the start points
  double initial_step = 1e-3;
};

struct RefinedRoot {
  cplx lambda{0.0};
  double residual = 0.0;
  int iterations = 0;
};

/// Muller iteration from lambda0. Throws NoConvergence.
RefinedRoot refine_root(const Evaluator& f, cplx lambda0, const RefineOptions& opts = {});

struct RootReport {
  int winding = 0;
  std::vector<RefinedRoot> roots;
  FunctionKind function_used = FunctionKind::Det1;
  bool multiplicity_gap = false;  // refined root count differs from the winding number
};

struct LocateOptions {
  WindingOptions winding;
  RefineOptions refine;
  int max_depth = 6;
  double separation = 1e-7;
};

/// Winding over the rectangle, recursive quadrant subdivision down to
/// single-root cells, and Muller refinement inside each.
RootReport locate_roots(const Evaluator& f, const Contour& contour, FunctionKind kind = FunctionKind::Det1,
                        const LocateOptions& opts = {});

struct ScanRow {
  cplx lambda{0.0};
  cplx value{0.0};
  bool flagged = false;  // essential spectrum: no value
};

/// nx x ny nodes over the closed rectangle, row-major in Im then Re.
std::vector<ScanRow> scan(const Evaluator& f, cplx lower_left, cplx upper_right, int nx, int ny, unsigned threads = 1);

}  // namespace fredev::locate
