#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace modwave {

inline constexpr const char* kVersion = "0.1.0";

/// Lowercase hex SHA-256 of a byte string / a file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::string started_at;
  std::string finished_at;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;

  /// Digests are computed from the files when this is called.
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace modwave
