// grw: command-line front end over the C interface.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "grw/grw.h"

namespace {

constexpr int kExitUsage = 2;

struct Options {
  std::string family;
  std::string params;
  int points = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  double tol_fd = 0.0;
  std::string format = "text";
  std::string output;
};

int fail(grw_status status) {
  std::fprintf(stderr, "grw: %s: %s\n", grw_status_name(status), grw_last_error());
  return status == GRW_NUMERIC ? 1 : static_cast<int>(status);
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "Family name (see list-families)")->required();
  cmd->add_option("--params", o.params, "Comma-separated key=value parameters");
  cmd->add_option("--points", o.points, "Number of sampled points")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Sampling seed (default from GRW_SEED or 42)")->capture_default_str();
  cmd->add_option("--tol", o.tol, "Tolerance for closed-form checks")->capture_default_str();
  cmd->add_option("--tol-fd", o.tol_fd, "Tolerance for finite-difference checks")->capture_default_str();
}

grw_status run(const Options& o, grw_report** out) {
  grw_run_config c = grw_run_config_default();
  c.family = o.family.c_str();
  c.params = o.params.c_str();
  c.points = o.points;
  c.seed = o.seed;
  c.tol = o.tol;
  c.tol_fd = o.tol_fd;
  return grw_run(&c, out);
}

grw_status emit(const grw_report* report, grw_format format, const std::string& output) {
  if (!output.empty()) return grw_report_write(report, format, output.c_str());
  char* text = nullptr;
  const grw_status s = grw_report_render(report, format, &text);
  if (s != GRW_OK) return s;
  std::fputs(text, stdout);
  grw_string_free(text);
  return GRW_OK;
}

int list_families() {
  char* table = nullptr;
  if (const grw_status s = grw_list_families(&table); s != GRW_OK) return fail(s);
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(table);
  grw_string_free(table);
  std::vector<size_t> width;
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    for (std::string cell; std::getline(cols, cell, '\t');) cells.push_back(cell);
    if (width.size() < cells.size()) width.resize(cells.size(), 0);
    for (size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    rows.push_back(std::move(cells));
  }
  for (const auto& cells : rows) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
      out += cells[i];
      if (i + 1 < cells.size()) out += std::string(width[i] - cells[i].size() + 2, ' ');
    }
    std::puts(out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const grw_run_config defaults = grw_run_config_default();
  Options o;
  o.points = defaults.points;
  o.seed = defaults.seed;
  o.tol = defaults.tol;
  o.tol_fd = defaults.tol_fd;

  CLI::App app{"Identity checks for generalized Robertson-Walker space-times"};
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list-families", "List catalog metric families");

  CLI::App* verify = app.add_subcommand("verify", "Run every applicable check");
  add_run_options(verify, o);
  verify->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--output", o.output, "Write the report to a file instead of stdout");

  CLI::App* classify = app.add_subcommand("classify", "Print the classification verdict");
  add_run_options(classify, o);

  CLI::App* report = app.add_subcommand("report", "Write a JSON report");
  add_run_options(report, o);
  report->add_option("--output", o.output, "Destination path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (list->parsed()) return list_families();

  grw_report* r = nullptr;
  if (const grw_status s = run(o, &r); s != GRW_OK) return fail(s);

  int code = 0;
  if (classify->parsed()) {
    std::puts(grw_report_classification(r));
  } else if (report->parsed()) {
    if (const grw_status s = emit(r, GRW_FORMAT_JSON, o.output); s != GRW_OK) code = fail(s);
  } else if (verify->parsed()) {
    const grw_format format = o.format == "json" ? GRW_FORMAT_JSON : GRW_FORMAT_TEXT;
    if (const grw_status s = emit(r, format, o.output); s != GRW_OK) {
      code = fail(s);
    } else if (!grw_report_all_expected(r)) {
      code = GRW_IDENTITY_FAILURE;
    }
  }
  grw_report_destroy(r);
  return code;
}
