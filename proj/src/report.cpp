#include "grw/report.hpp"

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace grw {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string format_point(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.dim(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? ", " : "", p[i]);
    s += buf;
  }
  return s + ")";
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  if (const char* env = std::getenv("GRW_SEED")) {
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec == std::errc() && ptr == end && ptr != env) c.seed = seed;
  }
  return c;
}

void validate(const RunConfig& config) {
  if (config.points < 1) throw Error(Errc::invalid_argument, "points must be >= 1");
  if (!(config.tol > 0.0 && config.tol <= config.tol_fd && config.tol_fd < 1.0)) {
    throw Error(Errc::invalid_argument, "tolerances must satisfy 0 < tol <= tol_fd < 1");
  }
}

SuiteResult run(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const MetricFamily family = make_family(config.family, parse_params(config.params));
  const std::vector<Point> points = sample_points(family, config.points, config.seed);
  SuiteResult r;
  r.config = config;
  r.params = family.params;
  r.outcome = run_suite(family, points, Tolerances{config.tol, config.tol_fd});
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string to_json(const SuiteResult& r) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;

  ordered_json doc;
  doc["config"] = {
      {"family", r.config.family}, {"params", params},         {"points", r.config.points},
      {"seed", r.config.seed},     {"tol", r.config.tol}, {"tol_fd", r.config.tol_fd},
  };
  doc["classification"] = to_string(r.outcome.classification);
  ordered_json checks = ordered_json::array();
  for (const CheckSummary& c : r.outcome.checks) {
    checks.push_back({
        {"name", c.name},
        {"worst_residual", c.worst_residual},
        {"tolerance", c.tolerance},
        {"pass", c.pass},
        {"expected_pass", c.expected_pass},
        {"worst_point", c.worst_point.coords},
    });
  }
  doc["checks"] = std::move(checks);
  const ScalarsSample& s = r.outcome.sample;
  doc["scalars_sample"] = {
      {"xi", optional_number(s.xi)}, {"theta", optional_number(s.theta)}, {"rho", optional_number(s.rho)},
      {"R", optional_number(s.R)},   {"X2", optional_number(s.X2)},
  };
  doc["wall_ms"] = r.wall_ms;
  return doc.dump(2) + "\n";
}

std::string to_text(const SuiteResult& r) {
  std::ostringstream os;
  os << "family: " << r.config.family;
  for (const auto& [k, v] : r.params) os << ' ' << k << '=' << v;
  os << "\npoints: " << r.config.points << "  seed: " << r.config.seed << "\n\n";

  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-10s %-10s %-6s %s\n", "check", "residual", "tolerance", "result",
                "worst point");
  os << line;
  for (const CheckSummary& c : r.outcome.checks) {
    std::string verdict = c.pass ? "pass" : "FAIL";
    if (!c.expected_pass) verdict += c.pass ? " (expected fail)" : " (expected)";
    std::snprintf(line, sizeof line, "%-28s %-10s %-10s %-6s %s\n", c.name.c_str(),
                  format_double(c.worst_residual).c_str(), format_double(c.tolerance).c_str(), verdict.c_str(),
                  c.evaluated ? format_point(c.worst_point).c_str() : "-");
    os << line;
  }
  os << "\nclassification: " << to_string(r.outcome.classification) << '\n';
  const ScalarsSample& s = r.outcome.sample;
  auto put = [&](const char* name, const std::optional<double>& v) {
    os << "  " << name << " = " << (v ? format_double(*v) : std::string("n/a")) << '\n';
  };
  os << "scalars at first point:\n";
  put("xi", s.xi);
  put("theta", s.theta);
  put("rho", s.rho);
  put("R", s.R);
  put("X2", s.X2);
  if (r.outcome.degenerate_points > 0) os << "degenerate points skipped: " << r.outcome.degenerate_points << '\n';
  std::snprintf(line, sizeof line, "wall time: %.1f ms\n", r.wall_ms);
  os << line;
  return os.str();
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(Errc::io, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(Errc::io, "cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace grw
