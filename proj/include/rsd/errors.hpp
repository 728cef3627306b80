#ifndef RSD_ERRORS_HPP_
#define RSD_ERRORS_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsd {

/// Input text could not be parsed. Carries a 1-based line/column position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A structural parameter exceeds what the subset encoding can represent
/// (e.g. more distinct signatures than bits in the subset word).
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::string parameter, std::uint64_t value, std::uint64_t limit)
      : std::runtime_error("parameter " + parameter + " = " +
                           std::to_string(value) + " exceeds the supported limit of " +
                           std::to_string(limit)),
        parameter_(std::move(parameter)),
        value_(value),
        limit_(limit) {}

  const std::string& parameter() const noexcept { return parameter_; }
  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::string parameter_;
  std::uint64_t value_;
  std::uint64_t limit_;
};

/// Full permutation enumeration was requested for an instance above the cap.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(std::uint64_t agents, std::uint64_t cap)
      : std::runtime_error("brute-force enumeration refused: " + std::to_string(agents) +
                           " agents means " + std::to_string(agents) +
                           "! permutations, above the cap of " + std::to_string(cap) +
                           " agents; use the dynamic program or the sampler"),
        agents_(agents),
        cap_(cap) {}

  std::uint64_t agents() const noexcept { return agents_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t agents_;
  std::uint64_t cap_;
};

}  // namespace rsd

#endif  // RSD_ERRORS_HPP_
