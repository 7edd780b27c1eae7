#include "artpose/interchange.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "artpose/rotation.hpp"

namespace artpose {
namespace {

static_assert(std::endian::native == std::endian::little,
              "interchange i/o assumes a little-endian host");

constexpr char kMagic[4] = {'A', 'P', 'F', '1'};
constexpr uint32_t kVersion = 1;
constexpr size_t kAlign = 8;
// Doubles per serialized instance: class, rotation (row-major 9), translation,
// scale, size.
constexpr size_t kPoseStride = 17;
// Doubles per serialized joint: type, axis, pivot.
constexpr size_t kJointStride = 7;

size_t padded(size_t n) { return (n + kAlign - 1) / kAlign * kAlign; }

void append_raw(std::vector<uint8_t>& out, const void* data, size_t n) {
  const auto* p = static_cast<const uint8_t*>(data);
  out.insert(out.end(), p, p + n);
}

void pad_to_alignment(std::vector<uint8_t>& out) {
  out.resize(padded(out.size()), 0);
}

void append_f32(std::vector<uint8_t>& out, double value) {
  const float f = static_cast<float>(value);
  append_raw(out, &f, sizeof(f));
}

void append_f64(std::vector<uint8_t>& out, double value) {
  append_raw(out, &value, sizeof(value));
}

float read_f32(const uint8_t* base, size_t offset) {
  float f;
  std::memcpy(&f, base + offset, sizeof(f));
  return f;
}

double read_f64(const uint8_t* base, size_t offset) {
  double d;
  std::memcpy(&d, base + offset, sizeof(d));
  return d;
}

/// Cursor over the aligned array region; tracks absolute byte offsets so
/// parse errors can point at the exact scalar that failed.
struct ArrayCursor {
  const uint8_t* base;
  size_t offset;

  double next_f32() {
    const double v = read_f32(base, offset);
    offset += sizeof(float);
    return v;
  }

  double next_f64() {
    const double v = read_f64(base, offset);
    offset += sizeof(double);
    return v;
  }

  void align() { offset = padded(offset); }
};

void require_finite(double v, const char* field, size_t offset) {
  if (!std::isfinite(v)) {
    throw ParseError(ParseError::Kind::kNonFinite, field, offset, "non-finite value");
  }
}

}  // namespace

std::vector<uint8_t> serialize_scene(const Scene& scene) {
  scene.cloud.validate();
  const size_t n = scene.cloud.points.size();
  scene.prediction.validate(n);
  if (scene.ground_truth) {
    scene.ground_truth->validate(n);
  }

  nlohmann::json header;
  header["version"] = kVersion;
  header["n_points"] = n;
  header["has_ground_truth"] = scene.ground_truth.has_value();
  header["class_names"] = nlohmann::json::array();
  for (int c = 0; c < kNumClasses; ++c) {
    header["class_names"].push_back(class_name(static_cast<PartClass>(c)));
  }
  if (scene.ground_truth) {
    header["n_instances"] = scene.ground_truth->instances.size();
  }
  const std::string header_text = header.dump();

  std::vector<uint8_t> out;
  append_raw(out, kMagic, sizeof(kMagic));
  const uint32_t header_len = static_cast<uint32_t>(header_text.size());
  append_raw(out, &header_len, sizeof(header_len));
  append_raw(out, header_text.data(), header_text.size());
  pad_to_alignment(out);

  for (const auto& p : scene.cloud.points) {
    for (int a = 0; a < 3; ++a) append_f32(out, p[a]);
  }
  pad_to_alignment(out);

  for (size_t i = 0; i < n; ++i) {
    for (int c = 0; c < kNumClasses; ++c) append_f32(out, scene.prediction.semantic(i, c));
  }
  pad_to_alignment(out);

  for (const auto& o : scene.prediction.offsets) {
    for (int a = 0; a < 3; ++a) append_f32(out, o[a]);
  }
  pad_to_alignment(out);

  for (size_t i = 0; i < n; ++i) {
    for (int col = 0; col < 3 * kNpcsBins; ++col) append_f32(out, scene.prediction.npcs_bins(i, col));
  }
  pad_to_alignment(out);

  if (scene.ground_truth) {
    const auto& gt = *scene.ground_truth;
    for (size_t i = 0; i < n; ++i) append_f32(out, static_cast<double>(gt.point_class[i]));
    pad_to_alignment(out);
    for (size_t i = 0; i < n; ++i) append_f32(out, static_cast<double>(gt.point_instance[i]));
    pad_to_alignment(out);
    for (const auto& c : gt.point_npcs) {
      for (int a = 0; a < 3; ++a) append_f32(out, c[a]);
    }
    pad_to_alignment(out);
    for (const auto& inst : gt.instances) {
      append_f64(out, static_cast<double>(inst.part_class));
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) append_f64(out, inst.pose.rotation(r, c));
      }
      for (int a = 0; a < 3; ++a) append_f64(out, inst.pose.translation[a]);
      append_f64(out, inst.pose.scale);
      for (int a = 0; a < 3; ++a) append_f64(out, inst.pose.size[a]);
    }
    pad_to_alignment(out);
    for (const auto& inst : gt.instances) {
      append_f64(out, static_cast<double>(inst.joint.type));
      for (int a = 0; a < 3; ++a) append_f64(out, inst.joint.axis_npcs[a]);
      for (int a = 0; a < 3; ++a) append_f64(out, inst.joint.pivot_npcs[a]);
    }
    pad_to_alignment(out);
  }
  return out;
}

Scene parse_scene(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8) {
    throw ParseError(ParseError::Kind::kTruncated, "magic", bytes.size(),
                     "file shorter than the fixed preamble");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(ParseError::Kind::kBadMagic, "magic", 0, "expected \"APF1\"");
  }
  uint32_t header_len;
  std::memcpy(&header_len, bytes.data() + 4, sizeof(header_len));
  if (bytes.size() < 8 + static_cast<size_t>(header_len)) {
    throw ParseError(ParseError::Kind::kTruncated, "header", bytes.size(),
                     "header extends past end of file");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::kBadHeader, "header", 8, e.what());
  }
  auto header_field = [&](const char* key) -> const nlohmann::json& {
    auto it = header.find(key);
    if (it == header.end()) {
      throw ParseError(ParseError::Kind::kBadHeader, key, 8, "missing header field");
    }
    return *it;
  };
  if (!header_field("version").is_number_unsigned() || header["version"] != kVersion) {
    throw ParseError(ParseError::Kind::kBadHeader, "version", 8, "unsupported version");
  }
  if (!header_field("n_points").is_number_unsigned() || header["n_points"] == 0) {
    throw ParseError(ParseError::Kind::kBadHeader, "n_points", 8,
                     "n_points must be a positive integer");
  }
  const size_t n = header["n_points"];
  if (!header_field("has_ground_truth").is_boolean()) {
    throw ParseError(ParseError::Kind::kBadHeader, "has_ground_truth", 8, "expected a bool");
  }
  const bool has_gt = header["has_ground_truth"];
  const auto& names = header_field("class_names");
  if (!names.is_array() || names.size() != static_cast<size_t>(kNumClasses)) {
    throw ParseError(ParseError::Kind::kBadHeader, "class_names", 8,
                     "expected " + std::to_string(kNumClasses) + " class names");
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (names[c] != class_name(static_cast<PartClass>(c))) {
      throw ParseError(ParseError::Kind::kBadHeader, "class_names", 8,
                       "class table does not match this taxonomy");
    }
  }
  size_t n_instances = 0;
  if (has_gt) {
    if (!header_field("n_instances").is_number_unsigned()) {
      throw ParseError(ParseError::Kind::kBadHeader, "n_instances", 8,
                       "expected a non-negative integer");
    }
    n_instances = header["n_instances"];
  }

  // The arrays live at fixed offsets once n and n_instances are known, so the
  // total length check can run before any array is read.
  size_t expect = padded(8 + header_len);
  expect += padded(n * 3 * sizeof(float));               // points
  expect += padded(n * kNumClasses * sizeof(float));     // semantic
  expect += padded(n * 3 * sizeof(float));               // offsets
  expect += padded(n * 3 * kNpcsBins * sizeof(float));   // npcs_bins
  if (has_gt) {
    expect += padded(n * sizeof(float));                 // gt_class
    expect += padded(n * sizeof(float));                 // gt_instance
    expect += padded(n * 3 * sizeof(float));             // gt_npcs
    expect += padded(n_instances * kPoseStride * sizeof(double));
    expect += padded(n_instances * kJointStride * sizeof(double));
  }
  if (bytes.size() < expect) {
    throw ParseError(ParseError::Kind::kTruncated, "arrays", bytes.size(),
                     "expected " + std::to_string(expect) + " bytes");
  }
  if (bytes.size() > expect) {
    throw ParseError(ParseError::Kind::kShapeMismatch, "arrays", expect,
                     "trailing bytes after the last array");
  }

  Scene scene;
  ArrayCursor cur{bytes.data(), padded(8 + header_len)};

  scene.cloud.points.resize(n);
  for (size_t i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      const size_t at = cur.offset;
      const double v = cur.next_f32();
      require_finite(v, "points", at);
      scene.cloud.points[i][a] = v;
    }
  }
  cur.align();

  scene.prediction.semantic.resize(n, kNumClasses);
  for (size_t i = 0; i < n; ++i) {
    const size_t row_at = cur.offset;
    double row_sum = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
      const size_t at = cur.offset;
      const double v = cur.next_f32();
      require_finite(v, "semantic", at);
      if (v < 0.0) {
        throw ParseError(ParseError::Kind::kBadValue, "semantic", at,
                         "negative class probability");
      }
      scene.prediction.semantic(i, c) = v;
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > 1e-6) {
      throw ParseError(ParseError::Kind::kNotStochastic, "semantic", row_at,
                       "row sums to " + std::to_string(row_sum));
    }
  }
  cur.align();

  scene.prediction.offsets.resize(n);
  for (size_t i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      const size_t at = cur.offset;
      const double v = cur.next_f32();
      require_finite(v, "offsets", at);
      scene.prediction.offsets[i][a] = v;
    }
  }
  cur.align();

  scene.prediction.npcs_bins.resize(n, 3 * kNpcsBins);
  for (size_t i = 0; i < n; ++i) {
    for (int axis = 0; axis < 3; ++axis) {
      const size_t row_at = cur.offset;
      double row_sum = 0.0;
      for (int b = 0; b < kNpcsBins; ++b) {
        const size_t at = cur.offset;
        const double v = cur.next_f32();
        require_finite(v, "npcs_bins", at);
        if (v < 0.0) {
          throw ParseError(ParseError::Kind::kBadValue, "npcs_bins", at,
                           "negative bin probability");
        }
        scene.prediction.npcs_bins(i, axis * kNpcsBins + b) = v;
        row_sum += v;
      }
      if (std::abs(row_sum - 1.0) > 1e-6) {
        throw ParseError(ParseError::Kind::kNotStochastic, "npcs_bins", row_at,
                         "axis distribution sums to " + std::to_string(row_sum));
      }
    }
  }
  cur.align();

  if (has_gt) {
    SceneGroundTruth gt;
    gt.point_class.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t at = cur.offset;
      const double v = cur.next_f32();
      require_finite(v, "gt_class", at);
      if (v != std::floor(v) || !is_valid_class_id(static_cast<int>(v))) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_class", at,
                         "not a valid class id");
      }
      gt.point_class[i] = static_cast<PartClass>(static_cast<int>(v));
    }
    cur.align();

    gt.point_instance.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t at = cur.offset;
      const double v = cur.next_f32();
      require_finite(v, "gt_instance", at);
      if (v != std::floor(v) || v < kNoInstance || v >= static_cast<double>(n_instances)) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_instance", at,
                         "instance id out of range");
      }
      gt.point_instance[i] = static_cast<int32_t>(v);
    }
    cur.align();

    gt.point_npcs.resize(n);
    for (size_t i = 0; i < n; ++i) {
      for (int a = 0; a < 3; ++a) {
        const size_t at = cur.offset;
        const double v = cur.next_f32();
        require_finite(v, "gt_npcs", at);
        if (v < -1e-6 || v > 1.0 + 1e-6) {
          throw ParseError(ParseError::Kind::kBadValue, "gt_npcs", at,
                           "coordinate outside the unit cube");
        }
        gt.point_npcs[i][a] = std::clamp(v, 0.0, 1.0);
      }
    }
    cur.align();

    gt.instances.resize(n_instances);
    for (size_t k = 0; k < n_instances; ++k) {
      auto& inst = gt.instances[k];
      const size_t inst_at = cur.offset;
      const double cls = cur.next_f64();
      if (!std::isfinite(cls) || cls != std::floor(cls) ||
          !is_valid_class_id(static_cast<int>(cls)) || cls == 0.0) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_poses", inst_at,
                         "instance class must be a foreground class id");
      }
      inst.part_class = static_cast<PartClass>(static_cast<int>(cls));
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          const size_t at = cur.offset;
          const double v = cur.next_f64();
          require_finite(v, "gt_poses", at);
          inst.pose.rotation(r, c) = v;
        }
      }
      if (!is_rotation(inst.pose.rotation, 1e-9)) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_poses", inst_at,
                         "stored rotation is not orthonormal");
      }
      for (int a = 0; a < 3; ++a) {
        const size_t at = cur.offset;
        const double v = cur.next_f64();
        require_finite(v, "gt_poses", at);
        inst.pose.translation[a] = v;
      }
      {
        const size_t at = cur.offset;
        const double v = cur.next_f64();
        require_finite(v, "gt_poses", at);
        if (v <= 0.0) {
          throw ParseError(ParseError::Kind::kBadValue, "gt_poses", at, "scale must be positive");
        }
        inst.pose.scale = v;
      }
      for (int a = 0; a < 3; ++a) {
        const size_t at = cur.offset;
        const double v = cur.next_f64();
        require_finite(v, "gt_poses", at);
        if (v <= 0.0) {
          throw ParseError(ParseError::Kind::kBadValue, "gt_poses", at,
                           "size must be positive");
        }
        inst.pose.size[a] = v;
      }
    }
    cur.align();

    for (size_t k = 0; k < n_instances; ++k) {
      auto& joint = gt.instances[k].joint;
      const size_t at_type = cur.offset;
      const double type = cur.next_f64();
      if (!std::isfinite(type) || (type != 0.0 && type != 1.0 && type != 2.0)) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_joints", at_type,
                         "joint type must be 0 (revolute), 1 (prismatic) or 2 (fixed)");
      }
      joint.type = static_cast<JointType>(static_cast<int>(type));
      for (int a = 0; a < 3; ++a) {
        const size_t at = cur.offset;
        const double v = cur.next_f64();
        require_finite(v, "gt_joints", at);
        joint.axis_npcs[a] = v;
      }
      if (std::abs(joint.axis_npcs.norm() - 1.0) > 1e-9) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_joints", at_type,
                         "joint axis must be a unit vector");
      }
      for (int a = 0; a < 3; ++a) {
        const size_t at = cur.offset;
        const double v = cur.next_f64();
        require_finite(v, "gt_joints", at);
        joint.pivot_npcs[a] = v;
      }
    }
    cur.align();

    for (size_t i = 0; i < n; ++i) {
      const bool bg = is_background(gt.point_class[i]);
      if (bg != (gt.point_instance[i] == kNoInstance)) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_instance", expect,
                         "background flag and instance id disagree at point " +
                             std::to_string(i));
      }
      if (!bg && gt.instances[gt.point_instance[i]].part_class != gt.point_class[i]) {
        throw ParseError(ParseError::Kind::kBadValue, "gt_class", expect,
                         "point class disagrees with its instance at point " +
                             std::to_string(i));
      }
    }
    scene.ground_truth = std::move(gt);
  }

  // The inline scans mirror the type invariants; this is the authoritative
  // recheck so parse can never hand out a scene the rest of the library
  // would reject.
  scene.cloud.validate();
  scene.prediction.validate(n);
  if (scene.ground_truth) scene.ground_truth->validate(n);
  return scene;
}

void write_scene_file(const std::filesystem::path& path, const Scene& scene) {
  const std::vector<uint8_t> bytes = serialize_scene(scene);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Scene read_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) {
    throw std::runtime_error("short read from " + path.string());
  }
  return parse_scene(bytes);
}

}  // namespace artpose
