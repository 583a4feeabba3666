#pragma once

#include <filesystem>
#include <random>
#include <string>

#ifndef SRWEC_FIXTURE_DIR
#define SRWEC_FIXTURE_DIR "fixtures"
#endif

namespace srwec::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SRWEC_FIXTURE_DIR) / name;
}

/// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("srwec_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace srwec::test
