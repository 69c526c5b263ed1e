#pragma once

#include <stdexcept>
#include <string>

namespace grw {

/// Failure categories. The C API maps these onto its status codes.
enum class Errc {
  invalid_argument,  // bad index, unknown family, malformed parameter
  variance,          // slot already up/down, contraction of like slots
  shape,             // dimension or rank mismatch
  singular_metric,
  degenerate_vector, // |X^2| below the guard
  no_candidate,      // family has no concircular candidate
  not_eigenvector,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace grw
