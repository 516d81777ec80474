#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tflux/diagnostics.hpp"

namespace testing {

struct WarningLog {
  std::vector<std::string> messages;
  tflux::WarningHandler previous;
  WarningLog() {
    previous = tflux::set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningLog() { tflux::set_warning_handler(previous); }
  std::size_t count() const { return messages.size(); }
};

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tflux_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testing
