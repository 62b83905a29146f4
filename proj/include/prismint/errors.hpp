#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prismint {

// Stable identifiers surfaced by the CLI (and its JSON error reports).
enum class errc {
  config,
  domain,
  unsupported_degree,
  inverted_element,
  capacity,
  shared_memory_exhausted,
  contract_violation,
  io,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& message) : Error(errc::config, message) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& message) : Error(errc::domain, message) {}
};

class UnsupportedDegreeError : public Error {
public:
  explicit UnsupportedDegreeError(const std::string& message)
      : Error(errc::unsupported_degree, message) {}
};

// Carries the offending element and reference point alongside the message.
class InvertedElementError : public Error {
public:
  InvertedElementError(std::int64_t element, double xi1, double xi2, double xi3, double det);

  std::int64_t element() const noexcept { return element_; }
  double det() const noexcept { return det_; }

private:
  std::int64_t element_;
  double det_;
};

class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& message) : Error(errc::capacity, message) {}
};

class SharedMemoryError : public Error {
public:
  explicit SharedMemoryError(const std::string& message)
      : Error(errc::shared_memory_exhausted, message) {}
};

class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string& message)
      : Error(errc::contract_violation, message) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& message) : Error(errc::io, message) {}
};

}  // namespace prismint
