#pragma once

#include <Eigen/Core>

namespace mvtm {

/// Hinge norm ||X||_h = sum_ij max(-X_ij, 0): total mass of negative entries.
double hinge_norm(const Eigen::MatrixXd& x);

/// Elementwise minimizer of c*max(-x, 0) + (x - p)^2 / 2: the one-sided soft
/// threshold. Nonnegative entries pass through, entries in [-c, 0) snap to
/// zero, entries below -c move up by c. Requires c > 0.
Eigen::MatrixXd prox_hinge(const Eigen::MatrixXd& p, double c);

/// Frobenius-nearest matrix whose smallest singular value is at least zeta:
/// clamps every singular value below zeta up to zeta. The all-zero matrix
/// maps to zeta * I. Requires a square input and zeta > 0.
Eigen::MatrixXd project_min_singular(const Eigen::MatrixXd& x, double zeta);

/// Euclidean projection onto the probability simplex (sort-based threshold).
/// Output is nonnegative and sums to 1.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

}  // namespace mvtm
