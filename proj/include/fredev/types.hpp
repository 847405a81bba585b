#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fredev {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CMatrixRM = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;

/// Tolerances shared across modules. Defaults follow the documented
/// numerics; the CLI can override them from a config file.
struct Tolerances {
  double axis = 1e-8;        // |Re kappa| <= axis * max|kappa| counts as essential
  double separation = 1e-7;  // relative root separation below which roots are "multiple"
  double condition = 1e12;   // condition estimate that triggers IllConditioned
  double det = 1e-6;         // determinant agreement tolerance used by reports
  double sign = 1e-8;        // agreement of the two trace sign choices
};

}  // namespace fredev
