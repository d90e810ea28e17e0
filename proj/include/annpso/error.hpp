#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace annpso {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  parse,
  io,
  numerical,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure surfaces as this type. The kind is what the CLI prints
// as the machine-parsable error tag.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void throw_dimension_mismatch(std::string_view what, std::size_t expected,
                                           std::size_t actual);

}  // namespace annpso
