#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "grw/grw.h"

namespace {

struct ReportPtr {
  grw_report* r = nullptr;
  ~ReportPtr() { grw_report_destroy(r); }
};

std::string take(char* s) {
  std::string out(s);
  grw_string_free(s);
  return out;
}

grw_run_config config_for(const char* family, const char* params, int points = 20) {
  grw_run_config c = grw_run_config_default();
  c.family = family;
  c.params = params;
  c.points = points;
  c.seed = 42;
  return c;
}

std::string render(const grw_report* r, grw_format f) {
  char* s = nullptr;
  EXPECT_EQ(grw_report_render(r, f, &s), GRW_OK);
  return take(s);
}

nlohmann::json without_wall_time(std::string text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("wall_ms");
  return j;
}

}  // namespace

TEST(CApi, Defaults) {
  unsetenv("GRW_SEED");
  const grw_run_config d = grw_run_config_default();
  EXPECT_EQ(d.points, 100);
  EXPECT_EQ(d.seed, 42u);
  EXPECT_EQ(d.tol, 1e-8);
  EXPECT_EQ(d.tol_fd, 1e-5);
  setenv("GRW_SEED", "7", 1);
  EXPECT_EQ(grw_run_config_default().seed, 7u);
  setenv("GRW_SEED", "junk", 1);
  EXPECT_EQ(grw_run_config_default().seed, 42u);
  unsetenv("GRW_SEED");
}

TEST(CApi, FamilyLifecycle) {
  grw_family* f = nullptr;
  ASSERT_EQ(grw_family_create("rw", "k=1,warp=power", &f), GRW_OK);
  EXPECT_EQ(grw_family_dim(f), 4);
  std::vector<double> a(12), b(12), small(3);
  EXPECT_EQ(grw_family_sample_points(f, 3, 9, a.data(), a.size()), GRW_OK);
  EXPECT_EQ(grw_family_sample_points(f, 3, 9, b.data(), b.size()), GRW_OK);
  EXPECT_EQ(a, b);
  EXPECT_EQ(grw_family_sample_points(f, 3, 9, small.data(), small.size()), GRW_USAGE);
  grw_family_destroy(f);

  grw_family* bad = nullptr;
  EXPECT_EQ(grw_family_create("nosuch", nullptr, &bad), GRW_USAGE);
  EXPECT_EQ(bad, nullptr);
  EXPECT_NE(std::string(grw_last_error()).find("nosuch"), std::string::npos);
  EXPECT_EQ(grw_family_create("rw", "k=5", &bad), GRW_USAGE);
  EXPECT_EQ(grw_family_create(nullptr, nullptr, &bad), GRW_USAGE);
}

TEST(CApi, ListFamilies) {
  char* table = nullptr;
  ASSERT_EQ(grw_list_families(&table), GRW_OK);
  const std::string t = take(table);
  std::istringstream in(t);
  int rows = 0;
  bool schw_no_chen = false;
  for (std::string line; std::getline(in, line); ++rows) {
    if (line.rfind("schwarzschild\t", 0) == 0) schw_no_chen = line.find("\tno\tno") != std::string::npos;
  }
  EXPECT_GE(rows - 1, 6);
  EXPECT_TRUE(schw_no_chen);
  EXPECT_NE(t.find("k=-1|0|+1"), std::string::npos);
}

TEST(CApi, RunAndClassify) {
  ReportPtr rw;
  const grw_run_config c = config_for("rw", "k=0,warp=exp,H=1");
  ASSERT_EQ(grw_run(&c, &rw.r), GRW_OK);
  EXPECT_STREQ(grw_report_classification(rw.r), "RobertsonWalker");
  EXPECT_EQ(grw_report_all_expected(rw.r), 1);

  ReportPtr schw;
  const grw_run_config s = config_for("schwarzschild", "M=1");
  ASSERT_EQ(grw_run(&s, &schw.r), GRW_OK);
  EXPECT_STREQ(grw_report_classification(schw.r), "NotGRW");
  EXPECT_EQ(grw_report_all_expected(schw.r), 1);
  bool found = false;
  for (size_t i = 0; i < grw_report_check_count(schw.r); ++i) {
    const char* name = nullptr;
    int pass = -1, expected = -1;
    double residual = 0, tol = 0;
    ASSERT_EQ(grw_report_check(schw.r, i, &name, &residual, &tol, &pass, &expected), GRW_OK);
    if (std::string(name) == "concircular") {
      found = true;
      EXPECT_EQ(pass, 0);
      EXPECT_EQ(expected, 0);
      EXPECT_GT(residual, 1e-2);
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(grw_report_check(schw.r, 999, nullptr, nullptr, nullptr, nullptr, nullptr), GRW_USAGE);

  ReportPtr h;
  const grw_run_config hc = config_for("grw_h2xr", "warp=exp");
  ASSERT_EQ(grw_run(&hc, &h.r), GRW_OK);
  EXPECT_STREQ(grw_report_classification(h.r), "GrwGeneric");
}

TEST(CApi, RejectsBadConfig) {
  ReportPtr r;
  grw_run_config c = config_for("rw", "");
  c.points = 0;
  EXPECT_EQ(grw_run(&c, &r.r), GRW_USAGE);
  c = config_for("rw", "");
  c.tol = 1e-4;  // above tol_fd
  EXPECT_EQ(grw_run(&c, &r.r), GRW_USAGE);
  c = config_for("nosuch", "");
  EXPECT_EQ(grw_run(&c, &r.r), GRW_USAGE);
  EXPECT_EQ(r.r, nullptr);
}

TEST(Report, JsonSchemaAndDeterminism) {
  ReportPtr a, b;
  const grw_run_config c = config_for("grw_h2xr", "warp=power,p=2/3", 10);
  ASSERT_EQ(grw_run(&c, &a.r), GRW_OK);
  ASSERT_EQ(grw_run(&c, &b.r), GRW_OK);
  const std::string ja = render(a.r, GRW_FORMAT_JSON);
  const std::string jb = render(b.r, GRW_FORMAT_JSON);
  EXPECT_EQ(without_wall_time(ja), without_wall_time(jb));
  // byte-identical apart from the wall-time line
  auto strip = [](const std::string& s) {
    std::istringstream in(s);
    std::string out;
    for (std::string line; std::getline(in, line);)
      if (line.find("\"wall_ms\"") == std::string::npos) out += line + '\n';
    return out;
  };
  EXPECT_EQ(strip(ja), strip(jb));

  const nlohmann::ordered_json j = nlohmann::ordered_json::parse(ja);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"config", "classification", "checks", "scalars_sample", "wall_ms"}));
  EXPECT_EQ(j["checks"].size(), grw_report_check_count(a.r));
  for (const auto& chk : j["checks"]) {
    for (const char* k : {"name", "worst_residual", "tolerance", "pass", "worst_point"}) EXPECT_TRUE(chk.contains(k)) << k;
    EXPECT_EQ(chk["worst_point"].size(), 4u);
  }
  for (const char* k : {"xi", "theta", "rho", "R", "X2"}) EXPECT_TRUE(j["scalars_sample"][k].is_number()) << k;
  EXPECT_EQ(j["config"]["seed"], 42);
  EXPECT_EQ(j.dump(), nlohmann::ordered_json::parse(j.dump()).dump());  // round trip
}

TEST(Report, NullScalarsWithoutCandidate) {
  ReportPtr r;
  const grw_run_config c = config_for("schwarzschild", "", 5);
  ASSERT_EQ(grw_run(&c, &r.r), GRW_OK);
  const auto j = nlohmann::json::parse(render(r.r, GRW_FORMAT_JSON));
  EXPECT_TRUE(j["scalars_sample"]["xi"].is_null());
  EXPECT_TRUE(j["scalars_sample"]["R"].is_number());
}

TEST(Report, AtomicWriteAndIoErrors) {
  ReportPtr r;
  const grw_run_config c = config_for("minkowski", "", 5);
  ASSERT_EQ(grw_run(&c, &r.r), GRW_OK);
  const auto dir = std::filesystem::temp_directory_path() / "grw_capi_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "report.json";
  ASSERT_EQ(grw_report_write(r.r, GRW_FORMAT_JSON, path.c_str()), GRW_OK);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), render(r.r, GRW_FORMAT_JSON));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);  // no temporary left behind
  std::filesystem::remove_all(dir);

  EXPECT_EQ(grw_report_write(r.r, GRW_FORMAT_JSON, "/nonexistent-dir/x/report.json"), GRW_IO);
  EXPECT_FALSE(std::string(grw_last_error()).empty());
  const std::string text = render(r.r, GRW_FORMAT_TEXT);
  EXPECT_NE(text.find("classification: RobertsonWalker"), std::string::npos);
}
