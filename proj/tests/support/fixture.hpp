#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "baitpress/corpus.hpp"
#include "baitpress/io.hpp"

namespace fixture {

inline std::filesystem::path data_dir() { return BAITPRESS_TEST_DATA; }
inline std::string instances_path() { return (data_dir() / "mini_instances.jsonl").string(); }
inline std::string truth_path() { return (data_dir() / "mini_truth.jsonl").string(); }

inline const baitpress::Dataset& mini_dataset() {
  static const baitpress::Dataset ds = baitpress::load_dataset(instances_path(), truth_path());
  return ds;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("baitpress-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) { return baitpress::io::read_file(path); }

}  // namespace fixture
