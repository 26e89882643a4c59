#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace argprobe {

inline constexpr std::string_view kToolVersion = "0.3.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Provenance record written next to every pipeline output as `<output>.manifest.json`.
struct Manifest {
  std::string stage;
  std::string tool_version{kToolVersion};
  /// Hash of the dataset file the output is keyed to; empty when not applicable.
  std::string dataset_hash;
  std::string output_hash;
  std::map<std::string, std::string> inputs;  // role -> sha256
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

std::filesystem::path manifest_path(const std::filesystem::path& output);
/// Sets output_hash from `content`, then writes output and manifest atomically.
void write_with_manifest(const std::filesystem::path& output, std::string_view content, Manifest manifest);
/// Loads the manifest of `output` and checks that the file still matches output_hash.
Manifest load_verified_manifest(const std::filesystem::path& output);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_timestamp();

}  // namespace argprobe
