#pragma once

// Suite execution and report rendering.

#include <cstdint>
#include <string>

#include "grw/verify.hpp"

namespace grw {

enum class Format { text, json };

struct RunConfig {
  std::string family;
  std::string params;  // "key=value,key=value"
  int points = 100;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  double tol_fd = 1e-5;
  Format format = Format::text;
  std::string output;  // empty: stdout
};

/// Default config with GRW_SEED applied when set and parseable.
RunConfig default_config();

/// Throws Errc::invalid_argument unless points >= 1 and 0 < tol <= tol_fd < 1.
void validate(const RunConfig& config);

struct SuiteResult {
  RunConfig config;
  ParamMap params;  // canonical parameters of the constructed family
  SuiteOutcome outcome;
  double wall_ms = 0.0;

  /// Every check matched its family expectation.
  bool ok() const { return outcome.all_as_expected(); }
};

SuiteResult run(const RunConfig& config);

/// Keys in fixed order; doubles printed with round-trip precision.
std::string to_json(const SuiteResult& result);
std::string to_text(const SuiteResult& result);

/// Writes via a sibling temporary file and rename. Throws Errc::io.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace grw
