#include "annpso/error.hpp"

namespace annpso {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

void throw_dimension_mismatch(std::string_view what, std::size_t expected, std::size_t actual) {
  throw Error(ErrorKind::dimension_mismatch,
              std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
                  std::to_string(actual));
}

}  // namespace annpso
