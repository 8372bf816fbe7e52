#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hslab::cli {

std::string sha256_hex(const std::string& bytes);

struct ManifestFile {
  std::string path;  ///< relative to the output directory
  std::size_t bytes = 0;
  std::string sha256;
};

struct ManifestOperation {
  std::string name;
  std::string status;  ///< ok | failed | skipped
  std::string detail;
};

/// Writes files under one directory and records each in the run manifest.
class RunManifest {
public:
  RunManifest(std::filesystem::path directory, std::string command, const nlohmann::json& config,
              std::uint64_t seed, unsigned workers);

  const std::filesystem::path& directory() const noexcept { return dir_; }
  const std::string& config_hash() const noexcept { return config_hash_; }

  /// Writes `bytes` to directory/relative and records its checksum.
  void write(const std::string& relative, const std::string& bytes);
  void operation(std::string name, std::string status, std::string detail = {});

  const std::vector<ManifestFile>& files() const noexcept { return files_; }
  nlohmann::json to_json() const;
  /// Writes manifest.json (not listed in itself).
  void finish();

private:
  std::filesystem::path dir_;
  std::string command_;
  std::string config_hash_;
  std::uint64_t seed_;
  unsigned workers_;
  std::string started_;
  std::string finished_;
  std::vector<ManifestFile> files_;
  std::vector<ManifestOperation> operations_;
};

std::string utc_timestamp();

}  // namespace hslab::cli
