#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l4u {

enum class ErrorKind {
  invalid_dimension,
  invalid_input,
  invalid_arguments,
  degenerate_projection,
  format_error,
  invalid_fraction,
  infeasible_scene,
  detection_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as l4u::Error; kind() tells callers which
// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace l4u
