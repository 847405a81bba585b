#pragma once

#include <functional>

#include "fredev/types.hpp"

namespace fredev::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double min_step = 1e-12;
  double max_step = 0.5;
  double initial_step = 1e-3;
};

/// dy/dx = f(x, y) for a complex matrix state.
using Rhs = std::function<void(double x, const CMatrix& y, CMatrix& dy)>;

/// Dormand-Prince 5(4) stepper with PI step-size control. The caller owns the
/// loop so that it can rescale the state between steps; after modifying
/// `state()` it must call `state_changed()`.
class DormandPrince {
 public:
  DormandPrince(Rhs f, Options opts = {});

  void reset(double x, const CMatrix& y);
  /// One accepted step toward `target` (never past it). Returns true once
  /// x() == target. Throws StiffnessFailure if the step collapses.
  bool step_toward(double target);

  double x() const { return x_; }
  CMatrix& state() { return y_; }
  const CMatrix& state() const { return y_; }
  void state_changed() { have_k1_ = false; }

  long accepted() const { return accepted_; }
  long rejected() const { return rejected_; }

 private:
  Rhs f_;
  Options opts_;
  double x_ = 0.0;
  double h_ = 0.0;
  double err_prev_ = 1e-4;
  CMatrix y_;
  CMatrix k_[7];
  bool have_k1_ = false;
  long accepted_ = 0;
  long rejected_ = 0;
};

}  // namespace fredev::ode
