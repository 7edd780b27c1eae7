#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "artpose/types.hpp"

namespace artpose {

/// Rotational symmetry of a part category, expressed in its canonical frame.
/// Continuous symmetry is approximated in the losses by k_discretization
/// candidate rotations about the axis.
struct SymmetryDescriptor {
  enum class Kind {
    kNone,
    kContinuousAboutAxis,
    kMirror180AboutAxis,
  };

  Kind kind = Kind::kNone;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  int k_discretization = 12;

  /// axis unit-norm within 1e-9; k_discretization >= 2 unless kind is none.
  void validate() const;
};

/// Per-class symmetry assignment. Defaults: round_fixed_handle,
/// slider_button and hinge_knob are continuous about the canonical z axis
/// with k = 12; every other class is asymmetric. Evaluation metrics stay
/// strict regardless; the table only affects the NPCS loss.
class SymmetryTable {
 public:
  SymmetryTable();

  const SymmetryDescriptor& of(PartClass c) const;
  void set(PartClass c, const SymmetryDescriptor& descriptor);

 private:
  std::array<SymmetryDescriptor, kNumClasses> table_;
};

/// One 32-bin index per NPCS axis.
struct NpcsBinIndex {
  std::array<int32_t, 3> bins{0, 0, 0};

  /// All three indices in [0, kNpcsBins).
  void validate() const;
};

/// Maps camera-frame points into the part's canonical unit cube:
/// (R^T (p - t)) / s + 0.5. Points outside the tight box land outside
/// [0,1]^3 and are returned unclamped.
std::vector<Eigen::Vector3d> normalize_to_npcs(const std::vector<Eigen::Vector3d>& part_points,
                                               const PartPose& canonical_pose);

/// floor(clamp(coord,0,1) * 32) with 1.0 mapping to bin 31. Throws
/// ValidationError on non-finite input.
int bin_encode(double coord);
NpcsBinIndex bin_encode(const Eigen::Vector3d& coord);

/// Bin center (index + 0.5) / 32.
double bin_decode(int index);
Eigen::Vector3d bin_decode(const NpcsBinIndex& index);

/// Rotations equivalent to `rotation` under the class's symmetry group:
/// none -> {R}; continuous -> {R * rot(2*pi*j/k, axis)}, j = 0..k-1;
/// mirror -> {R, R * rot(pi, axis)}.
std::vector<Eigen::Matrix3d> symmetry_candidates(const SymmetryDescriptor& descriptor,
                                                 const Eigen::Matrix3d& rotation);
std::vector<Eigen::Matrix3d> symmetry_candidates(PartClass c, const Eigen::Matrix3d& rotation,
                                                 const SymmetryTable& table);

}  // namespace artpose
