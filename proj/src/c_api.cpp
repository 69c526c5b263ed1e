#include "grw/grw.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "grw/report.hpp"

struct grw_family {
  grw::MetricFamily family;
};

struct grw_report {
  grw::SuiteResult result;
  std::string classification;
};

namespace {

thread_local std::string last_error;

grw_status status_for(grw::Errc code) {
  switch (code) {
    case grw::Errc::invalid_argument:
    case grw::Errc::variance:
    case grw::Errc::shape:
    case grw::Errc::no_candidate:
      return GRW_USAGE;
    case grw::Errc::io:
      return GRW_IO;
    case grw::Errc::singular_metric:
    case grw::Errc::degenerate_vector:
    case grw::Errc::not_eigenvector:
      return GRW_NUMERIC;
  }
  return GRW_NUMERIC;
}

template <class F>
grw_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const grw::Error& e) {
    last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GRW_NUMERIC;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GRW_NUMERIC;
  }
}

grw_status usage(const char* message) {
  last_error = message;
  return GRW_USAGE;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string render(const grw_report* report, grw_format format) {
  return format == GRW_FORMAT_JSON ? grw::to_json(report->result) : grw::to_text(report->result);
}

}  // namespace

extern "C" {

grw_run_config grw_run_config_default(void) {
  const grw::RunConfig d = grw::default_config();
  return grw_run_config{nullptr, nullptr, d.points, d.seed, d.tol, d.tol_fd};
}

const char* grw_last_error(void) { return last_error.c_str(); }

const char* grw_status_name(grw_status status) {
  switch (status) {
    case GRW_OK:
      return "ok";
    case GRW_IDENTITY_FAILURE:
      return "identity failure";
    case GRW_USAGE:
      return "usage error";
    case GRW_IO:
      return "i/o error";
    case GRW_NUMERIC:
      return "numeric error";
  }
  return "unknown";
}

void grw_string_free(char* s) { std::free(s); }

grw_status grw_list_families(char** out_table) {
  if (!out_table) return usage("out_table is null");
  return guarded([&] {
    std::string table = "name\tdim\tparameters\tdomain\tchen\tfiber\n";
    for (const grw::FamilyInfo& f : grw::family_table()) {
      table += f.name + '\t' + f.dim + '\t' + f.parameters + '\t' + f.domain + '\t' + (f.has_chen ? "yes" : "no") +
               '\t' + (f.has_fiber ? "yes" : "no") + '\n';
    }
    *out_table = duplicate(table);
    return GRW_OK;
  });
}

grw_status grw_family_create(const char* name, const char* params, grw_family** out) {
  if (!name || !out) return usage("name and out must be non-null");
  return guarded([&] {
    *out = new grw_family{grw::make_family(name, grw::parse_params(params ? params : ""))};
    return GRW_OK;
  });
}

void grw_family_destroy(grw_family* family) { delete family; }

int grw_family_dim(const grw_family* family) { return family ? family->family.dim : 0; }

grw_status grw_family_sample_points(const grw_family* family, int count, uint64_t seed, double* out,
                                    size_t out_len) {
  if (!family || !out) return usage("family and out must be non-null");
  if (count < 1) return usage("count must be >= 1");
  const size_t need = static_cast<size_t>(count) * static_cast<size_t>(family->family.dim);
  if (out_len < need) return usage("output buffer too small");
  return guarded([&] {
    size_t i = 0;
    for (const grw::Point& p : grw::sample_points(family->family, count, seed)) {
      for (double x : p.coords) out[i++] = x;
    }
    return GRW_OK;
  });
}

grw_status grw_run(const grw_run_config* config, grw_report** out) {
  if (!config || !out || !config->family) return usage("config, config->family and out must be non-null");
  return guarded([&] {
    grw::RunConfig c;
    c.family = config->family;
    c.params = config->params ? config->params : "";
    c.points = config->points;
    c.seed = config->seed;
    c.tol = config->tol;
    c.tol_fd = config->tol_fd;
    auto* report = new grw_report{grw::run(c), {}};
    report->classification = grw::to_string(report->result.outcome.classification);
    *out = report;
    return GRW_OK;
  });
}

void grw_report_destroy(grw_report* report) { delete report; }

const char* grw_report_classification(const grw_report* report) {
  return report ? report->classification.c_str() : "";
}

int grw_report_all_expected(const grw_report* report) { return report && report->result.ok() ? 1 : 0; }

size_t grw_report_check_count(const grw_report* report) {
  return report ? report->result.outcome.checks.size() : 0;
}

grw_status grw_report_check(const grw_report* report, size_t index, const char** name, double* worst_residual,
                            double* tolerance, int* pass, int* expected_pass) {
  if (!report) return usage("report is null");
  if (index >= report->result.outcome.checks.size()) return usage("check index out of range");
  const grw::CheckSummary& c = report->result.outcome.checks[index];
  if (name) *name = c.name.c_str();
  if (worst_residual) *worst_residual = c.worst_residual;
  if (tolerance) *tolerance = c.tolerance;
  if (pass) *pass = c.pass ? 1 : 0;
  if (expected_pass) *expected_pass = c.expected_pass ? 1 : 0;
  last_error.clear();
  return GRW_OK;
}

grw_status grw_report_render(const grw_report* report, grw_format format, char** out) {
  if (!report || !out) return usage("report and out must be non-null");
  return guarded([&] {
    *out = duplicate(render(report, format));
    return GRW_OK;
  });
}

grw_status grw_report_write(const grw_report* report, grw_format format, const char* path) {
  if (!report || !path) return usage("report and path must be non-null");
  return guarded([&] {
    grw::write_atomic(path, render(report, format));
    return GRW_OK;
  });
}

}  // extern "C"
