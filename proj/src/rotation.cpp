#include "artpose/rotation.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "artpose/types.hpp"

namespace artpose {

bool is_rotation(const Eigen::Matrix3d& r, double tol) {
  if (!r.allFinite()) return false;
  const Eigen::Matrix3d err = r.transpose() * r - Eigen::Matrix3d::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

void require_rotation(const Eigen::Matrix3d& r, const char* who, double tol) {
  if (!is_rotation(r, tol)) {
    throw ValidationError(std::string(who) + ": matrix is not a rotation");
  }
}

Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle_rad) {
  return Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
}

double rotation_geodesic_angle(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb) {
  require_rotation(ra, "rotation_geodesic_angle(a)");
  require_rotation(rb, "rotation_geodesic_angle(b)");
  const double c = ((ra.transpose() * rb).trace() - 1.0) / 2.0;
  const double clamped = std::min(1.0, std::max(-1.0, c));
  return std::acos(clamped) * 180.0 / std::numbers::pi;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  // Shoemake's method: uniform quaternion from three uniforms.
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  const double u3 = rng.uniform01();
  const double two_pi = 2.0 * std::numbers::pi;
  const Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3),
                             std::sqrt(1.0 - u1) * std::sin(two_pi * u2),
                             std::sqrt(1.0 - u1) * std::cos(two_pi * u2),
                             std::sqrt(u1) * std::sin(two_pi * u3));
  return q.normalized().toRotationMatrix();
}

Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace artpose
