#pragma once

#include <Eigen/Core>

#include "artpose/rng.hpp"

namespace artpose {

/// True iff R'R = I within `tol` and det(R) = +1 within `tol`.
bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

/// Throws ValidationError if `r` is not a rotation within `tol`.
void require_rotation(const Eigen::Matrix3d& r, const char* who, double tol = 1e-9);

/// Rotation by `angle_rad` about `axis` (need not be normalized).
Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle_rad);

/// Geodesic distance arccos((trace(Ra'Rb) - 1) / 2) in degrees, clamped to
/// [0, 180]. Validates both inputs.
double rotation_geodesic_angle(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb);

/// Uniform random rotation (quaternion method).
Eigen::Matrix3d random_rotation(Rng& rng);

/// Nearest rotation matrix in the Frobenius sense (SVD projection).
Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d& m);

}  // namespace artpose
