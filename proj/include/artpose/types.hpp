#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace artpose {

/// Thrown when a domain type fails its construction invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Part taxonomy. Class ids are part of the wire format and must not be
/// reordered: background is 0, the nine articulated part categories follow
/// in the order Ln.F.Hl., Rd.F.Hl., Hg.Hl., Hg.Ld., Sd.Ld., Sd.Bn., Sd.Dw.,
/// Hg.Dr., Hg.Kb.
enum class PartClass : int32_t {
  kBackground = 0,
  kLineFixedHandle = 1,
  kRoundFixedHandle = 2,
  kHingeHandle = 3,
  kHingeLid = 4,
  kSliderLid = 5,
  kSliderButton = 6,
  kSliderDrawer = 7,
  kHingeDoor = 8,
  kHingeKnob = 9,
};

inline constexpr int kNumClasses = 10;
inline constexpr int kNpcsBins = 32;
inline constexpr int32_t kNoInstance = -1;

enum class JointType : int32_t {
  kRevolute = 0,
  kPrismatic = 1,
  kFixed = 2,
};

bool is_valid_class_id(int32_t id);
bool is_background(PartClass c);

/// Snake_case name used in configs, JSON output and the wire header.
const std::string& class_name(PartClass c);
/// Inverse of class_name; throws ValidationError on unknown names.
PartClass class_from_name(const std::string& name);

/// Fixed joint kind of each part category (background has none).
JointType joint_type_of(PartClass c);

const std::string& joint_type_name(JointType t);
JointType joint_type_from_name(const std::string& name);

/// Observed points in camera frame, meters.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;

  int size() const { return static_cast<int>(points.size()); }

  /// N >= 1, all coordinates finite.
  void validate() const;
};

/// Per-point outputs of the three prediction heads: a 10-way semantic
/// distribution, a centroid offset vector (meters) and a 32-bin
/// distribution per NPCS axis.
struct PerPointPrediction {
  /// N x 10, rows non-negative and summing to 1.
  Eigen::MatrixXd semantic;
  /// N offset vectors, meters.
  std::vector<Eigen::Vector3d> offsets;
  /// N x 96; bin b of axis a lives at column a * 32 + b. Each 32-wide
  /// slice is non-negative and sums to 1.
  Eigen::MatrixXd npcs_bins;

  int size() const { return static_cast<int>(semantic.rows()); }

  /// Shape consistency with `n_points`, finiteness, row-stochasticity
  /// within `tol`.
  void validate(int n_points, double tol = 1e-6) const;
};

/// Similarity transform from centered NPCS to camera frame plus the
/// oriented-box edge lengths: p_cam = R * (s * (n - 0.5)) + t.
struct PartPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double scale = 1.0;
  /// Oriented-box edge lengths, meters.
  Eigen::Vector3d size = Eigen::Vector3d::Ones();

  /// rotation in SO(3) within 1e-9, scale > 0, size > 0.
  void validate() const;
};

/// One clustered part hypothesis: member indices into the cloud plus the
/// decoded NPCS coordinate of every member.
struct PartInstance {
  PartClass part_class = PartClass::kBackground;
  /// Sorted, duplicate-free indices into the paired PointCloud.
  std::vector<int32_t> point_indices;
  double confidence = 0.0;
  /// One coordinate in [0,1]^3 per entry of point_indices.
  std::vector<Eigen::Vector3d> npcs_coords;

  void validate(int n_points) const;
};

/// Joint parameters in the canonical (NPCS) frame. pivot_npcs is
/// meaningful for revolute joints only.
struct JointSpec {
  JointType type = JointType::kFixed;
  Eigen::Vector3d axis_npcs = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d pivot_npcs = Eigen::Vector3d::Constant(0.5);

  /// axis unit-norm within 1e-9.
  void validate() const;
};

/// Ground-truth labels emitted by the scene generator.
struct SceneGroundTruth {
  struct Instance {
    PartClass part_class = PartClass::kBackground;
    PartPose pose;
    JointSpec joint;
  };

  /// Per-point semantic class.
  std::vector<PartClass> point_class;
  /// Per-point instance id, kNoInstance for background points.
  std::vector<int32_t> point_instance;
  /// Per-point continuous NPCS coordinate; (0,0,0) for background points.
  std::vector<Eigen::Vector3d> point_npcs;
  std::vector<Instance> instances;

  int num_instances() const { return static_cast<int>(instances.size()); }

  /// Cross-field consistency: every non-background point belongs to
  /// exactly one instance, instance classes match member point classes.
  void validate(int n_points) const;
};

}  // namespace artpose
