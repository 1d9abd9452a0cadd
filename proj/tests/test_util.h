#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>

#include "busod/model.h"

namespace busod::test {

inline timestamp ts(std::string_view iso) { return parse_timestamp(iso); }
inline device_id dev(std::string_view s) { return device_id::parse(s); }
inline stop_id sid(std::string_view s) { return stop_id::parse(s); }
inline device_class cls() { return device_class::parse("5a020c"); }

// Fresh directory under the system temp dir, removed on destruction.
class temp_dir {
public:
  temp_dir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("busod_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~temp_dir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  temp_dir(temp_dir const&) = delete;
  temp_dir& operator=(temp_dir const&) = delete;

  std::filesystem::path const& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const {
    return path_ / name;
  }

private:
  std::filesystem::path path_;
};

inline std::string read_file(std::filesystem::path const& p) {
  std::ifstream in{p, std::ios::binary};
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(std::filesystem::path const& p, std::string_view text) {
  std::ofstream out{p, std::ios::binary | std::ios::trunc};
  out << text;
}

}  // namespace busod::test
