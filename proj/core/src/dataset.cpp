#include "shiftgate/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include <json.hpp>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {
namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double read_number(const nlohmann::json& j, const std::string& key, const std::filesystem::path& path) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw Error(ErrorCode::kMalformedRecord,
                path.string() + ": missing numeric key '" + key + "'");
  }
  return it->get<double>();
}

}  // namespace

NamingConfig NamingConfig::from_json_file(const std::filesystem::path& path) {
  NamingConfig config;
  try {
    const auto j = nlohmann::json::parse(detail::read_file(path));
    config.image_extensions = j.value("image_extensions", config.image_extensions);
    config.record_extension = j.value("record_extension", config.record_extension);
    config.record_prefix = j.value("record_prefix", config.record_prefix);
    config.steering_key = j.value("steering_key", config.steering_key);
    config.throttle_key = j.value("throttle_key", config.throttle_key);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
  return config;
}

std::optional<std::int64_t> leading_frame_index(std::string_view filename) {
  std::size_t digits = 0;
  while (digits < filename.size() && std::isdigit(static_cast<unsigned char>(filename[digits]))) {
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  std::int64_t value = 0;
  const auto result = std::from_chars(filename.data(), filename.data() + digits, value);
  if (result.ec != std::errc{}) return std::nullopt;
  return value;
}

std::vector<DriveRecord> load_dataset(const std::filesystem::path& directory,
                                      const NamingConfig& naming) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorCode::kIoError, directory.string() + " is not a readable directory");
  }

  std::vector<std::string> image_exts;
  for (const auto& e : naming.image_extensions) image_exts.push_back(lower(e));
  const std::string record_ext = lower(naming.record_extension);

  std::map<std::int64_t, fs::path> images;
  std::map<std::int64_t, fs::path> records;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& path = entry.path();
    const std::string ext = lower(path.extension().string());
    std::string name = path.filename().string();

    std::map<std::int64_t, fs::path>* target = nullptr;
    if (std::find(image_exts.begin(), image_exts.end(), ext) != image_exts.end()) {
      target = &images;
    } else if (ext == record_ext) {
      if (!naming.record_prefix.empty()) {
        if (!name.starts_with(naming.record_prefix)) continue;
        name.erase(0, naming.record_prefix.size());
      }
      target = &records;
    } else {
      continue;
    }
    const auto index = leading_frame_index(name);
    if (!index) continue;
    if (!target->emplace(*index, path).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "frame " + std::to_string(*index) + " appears twice: " +
                      (*target)[*index].filename().string() + ", " + path.filename().string());
    }
  }

  for (const auto& [index, path] : images) {
    if (!records.contains(index)) {
      throw MissingRecordError(index, "frame " + std::to_string(index) + " (" +
                                          path.filename().string() + ") has no record file");
    }
  }
  for (const auto& [index, path] : records) {
    if (!images.contains(index)) {
      throw MissingRecordError(index, "frame " + std::to_string(index) + " (" +
                                          path.filename().string() + ") has no image file");
    }
  }

  std::vector<DriveRecord> out;
  out.reserve(images.size());
  for (const auto& [index, image_path] : images) {
    const fs::path& record_path = records.at(index);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(detail::read_file(record_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, record_path.string() + ": " + e.what());
    }
    DriveRecord r;
    r.frame_index = index;
    r.image_path = image_path;
    r.record_path = record_path;
    r.steering = read_number(j, naming.steering_key, record_path);
    r.throttle = read_number(j, naming.throttle_key, record_path);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace shiftgate
