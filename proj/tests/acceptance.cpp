// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "grw/report.hpp"
#include "grw/verify.hpp"
#include "oracles.hpp"

using namespace grw;

namespace {

constexpr int kPoints = 100;
constexpr std::uint64_t kSeed = 42;

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("criterion %d [%s] %s: %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string label(const MetricFamily& f) {
  std::string s = f.name + "(";
  bool first = true;
  for (const auto& [k, v] : f.params) {
    s += (first ? "" : ",") + k + "=" + v;
    first = false;
  }
  return s + ")";
}

std::vector<MetricFamily> rw_families() {
  std::vector<MetricFamily> out;
  for (const char* k : {"-1", "0", "1"}) {
    out.push_back(make_family("rw", {{"k", k}, {"warp", "exp"}, {"H", "1"}}));
    out.push_back(make_family("rw", {{"k", k}, {"warp", "power"}, {"p", "2/3"}}));
  }
  return out;
}

MetricFamily product_family() { return grw_h2xr(exp_warp(1.0)); }

struct PointData {
  MetricJet jet;
  CurvatureBundle b;
  ChenData chen;
};

std::vector<PointData> evaluate(const MetricFamily& f, int count) {
  std::vector<PointData> out;
  const ScalarField xi = xi_field(f);
  for (const Point& p : sample_points(f, count, kSeed)) {
    MetricJet jet = f.jet_at(p);
    CurvatureBundle b = curvature(jet);
    ChenData c = compute_chen_scalars(jet, b, chen_candidate(f, p), p, xi);
    out.push_back({std::move(jet), std::move(b), std::move(c)});
  }
  return out;
}

const std::vector<std::string> kIdentityChecks = {
    "concircular",          "ricci_eigenvector",     "xi_two_routes",         "xi_gradient_alignment",
    "riemann_contraction",  "riemann_compatibility", "ricci_decomposition",   "weyl_contraction",
    "scalar_identity",      "weyl_compatibility",    "weyl_aux_factorization", "div_weyl_expansion",
    "aux_divergence",       "aux_transport",         "grad_scalar_alignment"};

void criterion_1() {
  std::vector<MetricFamily> fams = rw_families();
  fams.push_back(product_family());
  bool ok = true;
  double worst_closed = 0.0, worst_fd = 0.0;
  std::string first_bad;
  const auto start = std::chrono::steady_clock::now();
  for (const MetricFamily& f : fams) {
    const SuiteOutcome o = run_suite(f, sample_points(f, kPoints, kSeed), Tolerances{1e-8, 1e-5});
    for (const std::string& name : kIdentityChecks) {
      const CheckSummary* c = o.find(name);
      const bool good = c && c->pass && c->evaluated == kPoints;
      if (!good && first_bad.empty()) first_bad = label(f) + " " + name;
      ok = ok && good;
      if (!c) continue;
      double& worst = c->tolerance > 1e-8 ? worst_fd : worst_closed;
      worst = std::max(worst, c->worst_residual);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 30.0;
  verdict(1, ok, "identity suite on 7 families x 100 points",
          "worst closed-form " + sci(worst_closed) + " (tol 1e-8), worst theta-dependent " + sci(worst_fd) +
              " (tol 1e-5), " + sci(secs) + " s" + (first_bad.empty() ? "" : ", first failure " + first_bad));
}

void criterion_2() {
  bool ok = true;
  double rw_cx = 0.0, rw_div = 0.0;
  for (const MetricFamily& f : rw_families()) {
    for (const PointData& d : evaluate(f, kPoints)) {
      const auto [cx, div] = probe_weyl_covanishing(d.jet, d.b, d.chen);
      rw_cx = std::max(rw_cx, cx);
      rw_div = std::max(rw_div, div);
    }
  }
  ok = ok && rw_cx <= 1e-9 && rw_div <= 1e-9;
  int both = 0;
  for (const PointData& d : evaluate(product_family(), kPoints)) {
    const auto [cx, div] = probe_weyl_covanishing(d.jet, d.b, d.chen);
    both += (cx > 1e-5 && div > 1e-5) ? 1 : 0;
  }
  const double frac = double(both) / kPoints;
  ok = ok && frac >= 0.95;
  verdict(2, ok, "C.X and div C vanish together",
          "rw max |C.X| " + sci(rw_cx) + ", max |div C| " + sci(rw_div) + " (<= 1e-9); grw_h2xr both > 1e-5 at " +
              std::to_string(both) + "/" + std::to_string(kPoints) + " points");
}

void criterion_3() {
  double worst = 0.0;
  std::string where;
  for (const MetricFamily& f : catalog()) {
    for (const Point& p : sample_points(f, kPoints, kSeed)) {
      const MetricJet jet = f.jet_at(p);
      const CurvatureBundle b = curvature(jet);
      const double r = rel_residual(div_weyl_direct(b, jet), div_weyl_via_ricci(b, jet));
      if (r > worst) {
        worst = r;
        where = label(f);
      }
    }
  }
  verdict(3, worst <= 1e-8, "two routes to div C agree on every catalog family",
          "max relative difference " + sci(worst) + " (tol 1e-8)" + (where.empty() ? "" : " at " + where));
}

void criterion_4() {
  bool ok = true;
  double worst_consistency = 0.0, worst_fit_when_flat = 0.0, min_fit_product = 1e300;
  for (const MetricFamily& f : catalog()) {
    if (!f.has_chen() || f.dim != 4) continue;
    double max_cx = 0.0, max_fit = 0.0;
    for (const PointData& d : evaluate(f, kPoints)) {
      const QuasiEinsteinFit fit = fit_quasi_einstein(d.jet, d.b, d.chen);
      max_cx = std::max(max_cx, probe_weyl_covanishing(d.jet, d.b, d.chen).first);
      max_fit = std::max(max_fit, fit.residual);
      if (fit.residual <= 1e-8) {
        worst_consistency = std::max({worst_consistency, std::abs(4 * fit.alpha + fit.beta - d.b.scalar),
                                      std::abs(fit.alpha + fit.beta - d.chen.xi)});
      }
      if (f.name == "grw_h2xr") min_fit_product = std::min(min_fit_product, fit.residual);
    }
    const bool flat = max_cx <= 1e-8;
    ok = ok && (flat == (max_fit <= 1e-8));
    if (flat) worst_fit_when_flat = std::max(worst_fit_when_flat, max_fit);
  }
  ok = ok && min_fit_product > 1e-4 && worst_consistency <= 1e-10;
  verdict(4, ok, "quasi-Einstein fit holds exactly where C.X vanishes",
          "max fit residual where C.X = 0 " + sci(worst_fit_when_flat) + ", min on grw_h2xr " + sci(min_fit_product) +
              ", max |n alpha + beta - R|, |alpha + beta - xi| " + sci(worst_consistency));
}

void criterion_5() {
  double worst = 0.0, min_product = 1e300;
  std::vector<MetricFamily> fams = rw_families();
  for (const MetricFamily& f : catalog())
    if (f.name == "rw" || f.name == "de_sitter") fams.push_back(f);
  for (const MetricFamily& f : fams) {
    const auto pts = sample_points(f, kPoints, kSeed);
    const auto data = evaluate(f, kPoints);
    for (std::size_t i = 0; i < data.size(); ++i) {
      worst = std::max(worst, check_rw_riemann_structure(data[i].jet, data[i].b, data[i].chen, pts[i], 1e-8).residual);
    }
  }
  const MetricFamily h = product_family();
  const auto pts = sample_points(h, kPoints, kSeed);
  const auto data = evaluate(h, kPoints);
  for (std::size_t i = 0; i < data.size(); ++i) {
    min_product =
        std::min(min_product, check_rw_riemann_structure(data[i].jet, data[i].b, data[i].chen, pts[i], 1e-8).residual);
  }
  verdict(5, worst <= 1e-8 && min_product > 1e-4, "quasi-constant curvature form",
          "max residual on rw/de_sitter " + sci(worst) + " (tol 1e-8), min on grw_h2xr " + sci(min_product) +
              " (> 1e-4)");
}

void criterion_6() {
  bool implication = true, classes = true;
  int harmonic = 0;
  for (const MetricFamily& f : catalog()) {
    if (!f.has_chen() || f.dim != 4) continue;
    double max_div = 0.0;
    for (const PointData& d : evaluate(f, kPoints)) {
      const auto [cx, div] = probe_weyl_covanishing(d.jet, d.b, d.chen);
      max_div = std::max(max_div, div);
      if (cx <= 1e-8 && max_abs(d.b.weyl) > 1e-7) implication = false;
    }
    if (max_div <= 1e-8) {
      ++harmonic;
      const Classification c = classify(f, sample_points(f, kPoints, kSeed), Tolerances{});
      classes = classes && c == Classification::robertson_walker;
    }
  }
  verdict(6, implication && classes && harmonic > 0, "n = 4: C.X = 0 forces C = 0",
          std::string("pointwise implication ") + (implication ? "holds" : "violated") + "; " +
              std::to_string(harmonic) + " harmonic-Weyl families, all RobertsonWalker: " + (classes ? "yes" : "no"));
}

void criterion_7() {
  bool ok = true;
  std::string detail;
  for (const MetricFamily& f : {make_family("rw", {{"k", "0"}}), make_family("rw", {{"k", "1"}}),
                                make_family("rw", {{"k", "-1"}}), product_family()}) {
    double traceless = 0.0, div = 0.0;
    for (const Point& p : sample_points(f, kPoints, kSeed)) {
      traceless = std::max(traceless, fiber_ricci(f, p).traceless_norm);
      div = std::max(div, max_abs(div_weyl_direct(f.jet_at(p))));
    }
    const bool agree = (traceless <= 1e-8) == (div <= 1e-8);
    ok = ok && agree;
    detail += (detail.empty() ? "" : "; ") + label(f) + " fiber " + sci(traceless) + " div " + sci(div);
  }
  verdict(7, ok, "Einstein fiber iff harmonic Weyl", detail);
}

void criterion_8() {
  std::mt19937_64 rng(kSeed);
  double comm = 0.0, j1 = 0.0, j2 = 0.0, j3 = 0.0;
  for (const MetricFamily& f : catalog()) {
    for (const Point& p : sample_points(f, 10, kSeed)) {
      for (int trial = 0; trial < 5; ++trial) {
        comm = std::max(comm, oracle::commutator_residual(f, p, oracle::PolyField::random(f.dim, rng)));
      }
      const MetricJet jet = f.jet_at(p);
      const oracle::FdJet fd = oracle::metric_derivatives(f, p);
      j1 = std::max(j1, rel_residual(fd.dg, jet.dg));
      j2 = std::max(j2, rel_residual(fd.ddg, jet.ddg));
      j3 = std::max(j3, rel_residual(fd.dddg, jet.dddg));
    }
  }
  const MetricFamily schw = schwarzschild(1.0);
  double vacuum = 0.0;
  const auto pts = sample_points(schw, kPoints, kSeed);
  for (const Point& p : pts) vacuum = std::max(vacuum, max_abs(curvature(schw.jet_at(p)).ricci));
  const bool not_grw = classify(schw, pts, Tolerances{}) == Classification::not_grw;

  MetricExpr sphere = [](std::span<const Taylor3> x) {
    const Taylor3 s = sin(x[0]);
    Taylor3 zero(2);
    return std::vector<Taylor3>{Taylor3(2, 1.0), zero, zero, s * s};
  };
  const MetricJet s2 = metric_jet_from(sphere, Point{{1.1, 0.4}}, Signature::riemannian);
  const double R = scalar_curvature(ricci(riemann(s2), s2), s2);

  const bool ok = comm <= 1e-6 && j1 <= 1e-6 && j2 <= 1e-5 && j3 <= 1e-4 && vacuum <= 1e-10 && not_grw &&
                  std::abs(R - 2.0) <= 1e-10;
  verdict(8, ok, "conventions and finite-difference oracles",
          "commutator " + sci(comm) + ", jets " + sci(j1) + "/" + sci(j2) + "/" + sci(j3) + ", Schwarzschild Ricci " +
              sci(vacuum) + (not_grw ? " NotGRW" : " misclassified") + ", unit sphere R - 2 = " + sci(R - 2.0));
}

void criterion_9() {
  RunConfig c;
  c.family = "grw_h2xr";
  c.params = "warp=exp,H=1";
  c.points = kPoints;
  c.seed = kSeed;
  auto strip = [](const std::string& s) {
    std::istringstream in(s);
    std::string out;
    for (std::string line; std::getline(in, line);)
      if (line.find("\"wall_ms\"") == std::string::npos) out += line + '\n';
    return out;
  };
  const SuiteResult a = run(c);
  const SuiteResult b = run(c);
  bool same = a.outcome.checks.size() == b.outcome.checks.size();
  for (std::size_t i = 0; same && i < a.outcome.checks.size(); ++i) {
    same = a.outcome.checks[i].worst_residual == b.outcome.checks[i].worst_residual &&
           a.outcome.checks[i].worst_point.coords == b.outcome.checks[i].worst_point.coords;
  }
  const bool bytes = strip(to_json(a)) == strip(to_json(b));
  verdict(9, same && bytes, "determinism",
          std::string("residuals ") + (same ? "identical" : "differ") + ", JSON modulo wall_ms " +
              (bytes ? "byte-identical" : "differs"));
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                            criterion_6, criterion_7, criterion_8, criterion_9};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), false, "aborted", e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
