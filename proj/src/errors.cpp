#include "prismint/errors.hpp"

namespace prismint {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::config:
      return "config";
    case errc::domain:
      return "domain";
    case errc::unsupported_degree:
      return "unsupported_degree";
    case errc::inverted_element:
      return "inverted_element";
    case errc::capacity:
      return "capacity";
    case errc::shared_memory_exhausted:
      return "shared_memory_exhausted";
    case errc::contract_violation:
      return "contract_violation";
    case errc::io:
      return "io";
  }
  return "unknown";
}

InvertedElementError::InvertedElementError(std::int64_t element, double xi1, double xi2,
                                           double xi3, double det)
    : Error(errc::inverted_element,
            "inverted element " + std::to_string(element) + ": det=" + std::to_string(det) +
                " at xi=(" + std::to_string(xi1) + ", " + std::to_string(xi2) + ", " +
                std::to_string(xi3) + ")"),
      element_(element),
      det_(det) {}

}  // namespace prismint
