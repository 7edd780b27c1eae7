#include "artpose/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace artpose {

namespace {

const std::array<std::string, kNumClasses> kClassNames = {
    "background",        "line_fixed_handle", "round_fixed_handle",
    "hinge_handle",      "hinge_lid",         "slider_lid",
    "slider_button",     "slider_drawer",     "hinge_door",
    "hinge_knob",
};

const std::array<JointType, kNumClasses> kJointTypes = {
    JointType::kFixed,      // background (unused)
    JointType::kFixed,      // line_fixed_handle
    JointType::kFixed,      // round_fixed_handle
    JointType::kRevolute,   // hinge_handle
    JointType::kRevolute,   // hinge_lid
    JointType::kPrismatic,  // slider_lid
    JointType::kPrismatic,  // slider_button
    JointType::kPrismatic,  // slider_drawer
    JointType::kRevolute,   // hinge_door
    JointType::kRevolute,   // hinge_knob
};

const std::array<std::string, 3> kJointNames = {"revolute", "prismatic", "fixed"};

bool all_finite(const Eigen::Vector3d& v) { return v.allFinite(); }

}  // namespace

bool is_valid_class_id(int32_t id) { return id >= 0 && id < kNumClasses; }

bool is_background(PartClass c) { return c == PartClass::kBackground; }

const std::string& class_name(PartClass c) {
  return kClassNames.at(static_cast<size_t>(c));
}

PartClass class_from_name(const std::string& name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[static_cast<size_t>(i)] == name) return static_cast<PartClass>(i);
  }
  throw ValidationError("unknown part class name: " + name);
}

JointType joint_type_of(PartClass c) {
  if (is_background(c)) throw ValidationError("background has no joint type");
  return kJointTypes.at(static_cast<size_t>(c));
}

const std::string& joint_type_name(JointType t) {
  return kJointNames.at(static_cast<size_t>(t));
}

JointType joint_type_from_name(const std::string& name) {
  for (size_t i = 0; i < kJointNames.size(); ++i) {
    if (kJointNames[i] == name) return static_cast<JointType>(i);
  }
  throw ValidationError("unknown joint type name: " + name);
}

void PointCloud::validate() const {
  if (points.empty()) throw ValidationError("PointCloud: empty");
  for (size_t i = 0; i < points.size(); ++i) {
    if (!all_finite(points[i])) {
      throw ValidationError("PointCloud: non-finite point at index " + std::to_string(i));
    }
  }
}

void PerPointPrediction::validate(int n_points, double tol) const {
  const int n = size();
  if (n != n_points) throw ValidationError("PerPointPrediction: row count mismatch");
  if (semantic.cols() != kNumClasses) throw ValidationError("PerPointPrediction: semantic must have 10 columns");
  if (static_cast<int>(offsets.size()) != n) throw ValidationError("PerPointPrediction: offsets count mismatch");
  if (npcs_bins.rows() != n || npcs_bins.cols() != 3 * kNpcsBins) {
    throw ValidationError("PerPointPrediction: npcs_bins must be N x 96");
  }
  if (!semantic.allFinite() || !npcs_bins.allFinite()) {
    throw ValidationError("PerPointPrediction: non-finite distribution entry");
  }
  for (int i = 0; i < n; ++i) {
    if (!all_finite(offsets[static_cast<size_t>(i)])) {
      throw ValidationError("PerPointPrediction: non-finite offset at index " + std::to_string(i));
    }
    if (semantic.row(i).minCoeff() < 0.0) {
      throw ValidationError("PerPointPrediction: negative semantic probability at index " + std::to_string(i));
    }
    if (std::abs(semantic.row(i).sum() - 1.0) > tol) {
      throw ValidationError("PerPointPrediction: semantic row " + std::to_string(i) +
                            " not stochastic");
    }
    for (int a = 0; a < 3; ++a) {
      const auto slice = npcs_bins.row(i).segment(a * kNpcsBins, kNpcsBins);
      if (slice.minCoeff() < 0.0) {
        throw ValidationError("PerPointPrediction: negative bin probability at index " + std::to_string(i));
      }
      if (std::abs(slice.sum() - 1.0) > tol) {
        throw ValidationError("PerPointPrediction: npcs_bins row " + std::to_string(i) +
                              " axis " + std::to_string(a) + " not stochastic");
      }
    }
  }
}

void PartPose::validate() const {
  constexpr double kTol = 1e-9;
  if (!rotation.allFinite() || !translation.allFinite() || !size.allFinite() ||
      !std::isfinite(scale)) {
    throw ValidationError("PartPose: non-finite entry");
  }
  const Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > kTol) {
    throw ValidationError("PartPose: rotation not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > kTol) {
    throw ValidationError("PartPose: rotation determinant != +1");
  }
  if (!(scale > 0.0)) throw ValidationError("PartPose: scale must be positive");
  if (!(size.minCoeff() > 0.0)) throw ValidationError("PartPose: size must be positive");
}

void PartInstance::validate(int n_points) const {
  if (point_indices.empty()) throw ValidationError("PartInstance: empty index set");
  if (is_background(part_class)) throw ValidationError("PartInstance: background is not a valid instance class");
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ValidationError("PartInstance: confidence outside [0,1]");
  }
  if (npcs_coords.size() != point_indices.size()) {
    throw ValidationError("PartInstance: npcs_coords count mismatch");
  }
  for (size_t i = 0; i < point_indices.size(); ++i) {
    const int32_t idx = point_indices[i];
    if (idx < 0 || idx >= n_points) throw ValidationError("PartInstance: index out of range");
    if (i > 0 && point_indices[i - 1] >= idx) {
      throw ValidationError("PartInstance: indices not sorted/unique");
    }
    const Eigen::Vector3d& c = npcs_coords[i];
    if (!all_finite(c) || c.minCoeff() < 0.0 || c.maxCoeff() > 1.0) {
      throw ValidationError("PartInstance: npcs coordinate outside [0,1]^3");
    }
  }
}

void JointSpec::validate() const {
  if (!axis_npcs.allFinite() || !pivot_npcs.allFinite()) {
    throw ValidationError("JointSpec: non-finite entry");
  }
  if (std::abs(axis_npcs.norm() - 1.0) > 1e-9) {
    throw ValidationError("JointSpec: axis not unit-norm");
  }
}

void SceneGroundTruth::validate(int n_points) const {
  const size_t n = static_cast<size_t>(n_points);
  if (point_class.size() != n || point_instance.size() != n || point_npcs.size() != n) {
    throw ValidationError("SceneGroundTruth: per-point array size mismatch");
  }
  const int32_t k = static_cast<int32_t>(instances.size());
  for (size_t i = 0; i < n; ++i) {
    const bool bg = is_background(point_class[i]);
    const int32_t inst = point_instance[i];
    if (bg && inst != kNoInstance) {
      throw ValidationError("SceneGroundTruth: background point with instance id");
    }
    if (!bg) {
      if (inst < 0 || inst >= k) {
        throw ValidationError("SceneGroundTruth: foreground point without valid instance");
      }
      if (instances[static_cast<size_t>(inst)].part_class != point_class[i]) {
        throw ValidationError("SceneGroundTruth: point class disagrees with its instance");
      }
    }
    if (!all_finite(point_npcs[i])) {
      throw ValidationError("SceneGroundTruth: non-finite NPCS coordinate");
    }
  }
  for (const Instance& inst : instances) {
    if (is_background(inst.part_class)) {
      throw ValidationError("SceneGroundTruth: background instance");
    }
    inst.pose.validate();
    inst.joint.validate();
  }
}

}  // namespace artpose
