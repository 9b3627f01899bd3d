#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shiftgate {

/// A labelled frame: image file plus its steering/throttle record.
struct DriveRecord {
  std::int64_t frame_index = 0;
  std::filesystem::path image_path;
  std::filesystem::path record_path;
  double steering = 0.0;
  double throttle = 0.0;
};

/// How files in a dataset directory are paired and read. Images and records
/// are matched on the leading integer of their file names, e.g.
/// `1105_cam-image_array_.jpg` and `1105.json` (or `record_1105.json`, see
/// record_prefix).
struct NamingConfig {
  std::vector<std::string> image_extensions{".jpg", ".jpeg", ".png"};
  std::string record_extension = ".json";
  /// Literal prefix stripped from record names before the index is parsed.
  std::string record_prefix;
  std::string steering_key = "steering";
  std::string throttle_key = "throttle";

  /// Reads a JSON mapping file; absent keys keep their defaults.
  static NamingConfig from_json_file(const std::filesystem::path& path);
};

/// Leading decimal integer of a file name, if any.
std::optional<std::int64_t> leading_frame_index(std::string_view filename);

/// Records sorted by frame index. Files whose names carry no index, or whose
/// extension is neither an image nor a record, are ignored.
/// Errors: kMissingRecord for unpaired frames, kMalformedRecord for records
/// that fail to parse or lack a mapped key, kIoError when the directory is
/// unreadable.
std::vector<DriveRecord> load_dataset(const std::filesystem::path& directory,
                                      const NamingConfig& naming = {});

}  // namespace shiftgate
