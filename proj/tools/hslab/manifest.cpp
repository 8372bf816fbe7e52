#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "version.hpp"

namespace hslab::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::filesystem::path directory, std::string command,
                         const nlohmann::json& config, std::uint64_t seed, unsigned workers)
    : dir_(std::move(directory)),
      command_(std::move(command)),
      config_hash_(sha256_hex(config.dump())),
      seed_(seed),
      workers_(workers),
      started_(utc_timestamp()) {
  std::filesystem::create_directories(dir_);
}

void RunManifest::write(const std::string& relative, const std::string& bytes) {
  const auto path = dir_ / relative;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  for (auto& f : files_)
    if (f.path == relative) {
      f = {relative, bytes.size(), sha256_hex(bytes)};
      return;
    }
  files_.push_back({relative, bytes.size(), sha256_hex(bytes)});
}

void RunManifest::operation(std::string name, std::string status, std::string detail) {
  operations_.push_back({std::move(name), std::move(status), std::move(detail)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["artifact"] = "hslab";
  j["version"] = kVersion;
  j["command"] = command_;
  j["config_hash"] = config_hash_;
  j["seed"] = seed_;
  j["workers"] = workers_;
  j["started"] = started_;
  j["finished"] = finished_;
  auto ops = nlohmann::json::array();
  for (const auto& o : operations_)
    ops.push_back({{"name", o.name}, {"status", o.status}, {"detail", o.detail}});
  j["operations"] = std::move(ops);
  auto files = nlohmann::json::array();
  for (const auto& f : files_) files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  j["files"] = std::move(files);
  return j;
}

void RunManifest::finish() {
  finished_ = utc_timestamp();
  const auto text = to_json().dump(2) + "\n";
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write manifest.json");
}

}  // namespace hslab::cli
