#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "artpose/types.hpp"

namespace artpose {

/// One interchange file: observed cloud, per-point predictions and,
/// optionally, generator ground truth. See docs/interchange_format.md for
/// the byte-exact layout ("APF1" files).
struct Scene {
  PointCloud cloud;
  PerPointPrediction prediction;
  std::optional<SceneGroundTruth> ground_truth;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kBadMagic,
    kBadHeader,
    kTruncated,
    kShapeMismatch,
    kNonFinite,
    kNotStochastic,
    kBadValue,
  };

  ParseError(Kind kind, std::string field, size_t byte_offset, const std::string& message)
      : std::runtime_error("parse error at byte " + std::to_string(byte_offset) + " (" +
                           field + "): " + message),
        kind_(kind),
        field_(std::move(field)),
        byte_offset_(byte_offset) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }
  size_t byte_offset() const { return byte_offset_; }

 private:
  Kind kind_;
  std::string field_;
  size_t byte_offset_;
};

/// Validates the scene and renders it into the interchange byte layout.
std::vector<uint8_t> serialize_scene(const Scene& scene);

/// Parses and validates an interchange buffer; throws ParseError with the
/// offending field and byte offset on the first violation.
Scene parse_scene(std::span<const uint8_t> bytes);

/// Atomic write (temp file + rename).
void write_scene_file(const std::filesystem::path& path, const Scene& scene);

Scene read_scene_file(const std::filesystem::path& path);

}  // namespace artpose
