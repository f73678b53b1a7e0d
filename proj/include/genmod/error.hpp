#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genmod {

/// Stable error codes. The numeric values are part of the CLI contract.
enum class ErrorCode : int {
  invalid_argument = 10,
  empty_graph = 11,
  negative_weight = 12,
  index_out_of_range = 13,
  dimension_mismatch = 14,
  disconnected_graph = 15,
  isolated_node = 16,
  overlapping_sets = 17,
  dense_cap_exceeded = 18,
  enumeration_cap_exceeded = 19,
  parse_error = 20,
  io_error = 21,
  not_converged = 30,
  not_simple = 31,
  internal_consistency = 32,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_argument: return "invalid_argument";
  case ErrorCode::empty_graph: return "empty_graph";
  case ErrorCode::negative_weight: return "negative_weight";
  case ErrorCode::index_out_of_range: return "index_out_of_range";
  case ErrorCode::dimension_mismatch: return "dimension_mismatch";
  case ErrorCode::disconnected_graph: return "disconnected_graph";
  case ErrorCode::isolated_node: return "isolated_node";
  case ErrorCode::overlapping_sets: return "overlapping_sets";
  case ErrorCode::dense_cap_exceeded: return "dense_cap_exceeded";
  case ErrorCode::enumeration_cap_exceeded: return "enumeration_cap_exceeded";
  case ErrorCode::parse_error: return "parse_error";
  case ErrorCode::io_error: return "io_error";
  case ErrorCode::not_converged: return "not_converged";
  case ErrorCode::not_simple: return "not_simple";
  case ErrorCode::internal_consistency: return "internal_consistency";
  }
  return "unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Thrown by iterative solvers; carries the best residual reached.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(ErrorCode::not_converged, what), residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

namespace detail {
[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}
} // namespace detail

} // namespace genmod
