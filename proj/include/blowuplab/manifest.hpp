#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blowuplab::cli {

/// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::string tool_version;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::string config_hash;  // of the parsed config bytes, empty when no file was given
  std::vector<std::string> outputs;
  unsigned long long seed = 42;
  int exit_code = 0;
};

std::string utc_now();

/// JSON manifest, normally <stem>.manifest.json beside the outputs.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

class LockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exclusive writer lock on an output directory (a lock file created with O_EXCL).
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace blowuplab::cli
