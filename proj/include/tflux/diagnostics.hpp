#pragma once

#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tflux {

inline constexpr double pi = std::numbers::pi;

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical method failed to reach its accuracy target (quadrature,
/// root solve, ill-conditioned evaluation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (config files, CLI flags, population specs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; `offset` is the byte offset of the offending data.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Replace the process-wide warning handler; returns the previous one.
/// The default handler prints to stderr. Calls are serialized internally.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace tflux
