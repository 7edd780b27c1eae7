#include "artpose/npcs.hpp"

#include <algorithm>
#include <cmath>

#include "artpose/rotation.hpp"

namespace artpose {

void SymmetryDescriptor::validate() const {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw ValidationError("symmetry axis must be unit-norm");
  }
  if (kind != Kind::kNone && k_discretization < 2) {
    throw ValidationError("k_discretization must be >= 2 for a symmetric class");
  }
}

SymmetryTable::SymmetryTable() {
  SymmetryDescriptor spin;
  spin.kind = SymmetryDescriptor::Kind::kContinuousAboutAxis;
  spin.axis = Eigen::Vector3d::UnitZ();
  spin.k_discretization = 12;
  table_[static_cast<int>(PartClass::kRoundFixedHandle)] = spin;
  table_[static_cast<int>(PartClass::kSliderButton)] = spin;
  table_[static_cast<int>(PartClass::kHingeKnob)] = spin;
}

const SymmetryDescriptor& SymmetryTable::of(PartClass c) const {
  if (!is_valid_class_id(static_cast<int32_t>(c))) {
    throw ValidationError("unknown part class in symmetry lookup");
  }
  return table_[static_cast<int>(c)];
}

void SymmetryTable::set(PartClass c, const SymmetryDescriptor& descriptor) {
  if (!is_valid_class_id(static_cast<int32_t>(c))) {
    throw ValidationError("unknown part class in symmetry table");
  }
  descriptor.validate();
  table_[static_cast<int>(c)] = descriptor;
}

void NpcsBinIndex::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (bins[a] < 0 || bins[a] >= kNpcsBins) {
      throw ValidationError("NPCS bin index out of [0,32) on axis " + std::to_string(a));
    }
  }
}

std::vector<Eigen::Vector3d> normalize_to_npcs(const std::vector<Eigen::Vector3d>& part_points,
                                               const PartPose& canonical_pose) {
  canonical_pose.validate();
  if (part_points.empty()) {
    throw ValidationError("normalize_to_npcs needs at least one point");
  }
  const Eigen::Matrix3d r_inv = canonical_pose.rotation.transpose();
  const double inv_s = 1.0 / canonical_pose.scale;
  std::vector<Eigen::Vector3d> out;
  out.reserve(part_points.size());
  for (const auto& p : part_points) {
    out.push_back(r_inv * (p - canonical_pose.translation) * inv_s +
                  Eigen::Vector3d::Constant(0.5));
  }
  return out;
}

int bin_encode(double coord) {
  if (!std::isfinite(coord)) {
    throw ValidationError("bin_encode: non-finite coordinate");
  }
  const double clamped = std::clamp(coord, 0.0, 1.0);
  const int bin = static_cast<int>(std::floor(clamped * kNpcsBins));
  return std::min(bin, kNpcsBins - 1);
}

NpcsBinIndex bin_encode(const Eigen::Vector3d& coord) {
  NpcsBinIndex idx;
  for (int a = 0; a < 3; ++a) idx.bins[a] = bin_encode(coord[a]);
  return idx;
}

double bin_decode(int index) {
  if (index < 0 || index >= kNpcsBins) {
    throw ValidationError("bin_decode: index out of [0,32)");
  }
  return (index + 0.5) / kNpcsBins;
}

Eigen::Vector3d bin_decode(const NpcsBinIndex& index) {
  index.validate();
  return {bin_decode(index.bins[0]), bin_decode(index.bins[1]), bin_decode(index.bins[2])};
}

std::vector<Eigen::Matrix3d> symmetry_candidates(const SymmetryDescriptor& descriptor,
                                                 const Eigen::Matrix3d& rotation) {
  descriptor.validate();
  require_rotation(rotation, "symmetry_candidates");
  switch (descriptor.kind) {
    case SymmetryDescriptor::Kind::kNone:
      return {rotation};
    case SymmetryDescriptor::Kind::kContinuousAboutAxis: {
      std::vector<Eigen::Matrix3d> out;
      out.reserve(descriptor.k_discretization);
      for (int j = 0; j < descriptor.k_discretization; ++j) {
        const double angle = 2.0 * M_PI * j / descriptor.k_discretization;
        out.push_back(rotation * axis_angle(descriptor.axis, angle));
      }
      return out;
    }
    case SymmetryDescriptor::Kind::kMirror180AboutAxis:
      return {rotation, rotation * axis_angle(descriptor.axis, M_PI)};
  }
  throw ValidationError("unreachable symmetry kind");
}

std::vector<Eigen::Matrix3d> symmetry_candidates(PartClass c, const Eigen::Matrix3d& rotation,
                                                 const SymmetryTable& table) {
  return symmetry_candidates(table.of(c), rotation);
}

}  // namespace artpose
