#include "fredev/ode.hpp"

#include <algorithm>
#include <cmath>

#include "fredev/errors.hpp"

namespace fredev::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

DormandPrince::DormandPrince(Rhs f, Options opts) : f_(std::move(f)), opts_(opts) {}

void DormandPrince::reset(double x, const CMatrix& y) {
  x_ = x;
  y_ = y;
  h_ = opts_.initial_step;
  err_prev_ = 1e-4;
  have_k1_ = false;
  for (auto& k : k_) k.resize(y.rows(), y.cols());
}

bool DormandPrince::step_toward(double target) {
  if (x_ == target) return true;
  const double dir = target > x_ ? 1.0 : -1.0;
  if (!have_k1_) {
    f_(x_, y_, k_[0]);
    have_k1_ = true;
  }
  CMatrix tmp(y_.rows(), y_.cols()), ynew(y_.rows(), y_.cols());
  for (;;) {
    double h = std::min({std::abs(h_), opts_.max_step, std::abs(target - x_)});
    const bool last = h >= std::abs(target - x_);
    const double hs = dir * h;

    tmp = y_ + hs * a21 * k_[0];
    f_(x_ + c2 * hs, tmp, k_[1]);
    tmp = y_ + hs * (a31 * k_[0] + a32 * k_[1]);
    f_(x_ + c3 * hs, tmp, k_[2]);
    tmp = y_ + hs * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    f_(x_ + c4 * hs, tmp, k_[3]);
    tmp = y_ + hs * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    f_(x_ + c5 * hs, tmp, k_[4]);
    tmp = y_ + hs * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    f_(x_ + hs, tmp, k_[5]);
    ynew = y_ + hs * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
    f_(x_ + hs, ynew, k_[6]);

    const CMatrix err = hs * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y_(i)), std::abs(ynew(i)));
      const double r = std::abs(err(i)) / sc;
      acc += r * r;
    }
    const double en = std::sqrt(acc / static_cast<double>(err.size()));

    if (std::isfinite(en) && en <= 1.0) {
      x_ = last ? target : x_ + hs;
      y_ = ynew;
      k_[0] = k_[6];
      ++accepted_;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.7 / 5.0) * std::pow(err_prev_, 0.4 / 5.0), 0.2, 5.0);
      err_prev_ = std::max(en, 1e-4);
      h_ = h * fac;
      return last;
    }
    ++rejected_;
    const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
    h_ = h * fac;
    if (h_ < opts_.min_step) fail(ErrorKind::StiffnessFailure, "ODE step size collapsed below the minimum step");
  }
}

}  // namespace fredev::ode
