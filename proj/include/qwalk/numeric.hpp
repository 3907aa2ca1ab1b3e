#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex imag_unit{0.0, 1.0};

/// Momentum at which every gate widget transmits perfectly.
inline constexpr double design_momentum = -pi / 4;

}  // namespace qwalk
