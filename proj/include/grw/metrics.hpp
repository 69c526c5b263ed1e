#pragma once

// Catalog of metric families with exact third-order jets.
//
// | name            | n   | parameters                          | chen | fiber |
// |-----------------|-----|-------------------------------------|------|-------|
// | minkowski       | n   | n=4                                 | yes  | flat  |
// | de_sitter       | n   | n=4, H=1                            | yes  | S^{n-1} (closed slicing) |
// | rw              | n   | n=4, k in {-1,0,1}, warp, H, p, c0..c3 | yes | k-dependent |
// | grw_h2xr        | 4   | warp, H, p, c0..c3                  | yes  | H^2 x R |
// | schwarzschild   | 4   | M=1                                 | no   | -     |
// | einstein_static | n   | n=4, a=1                            | yes  | S^{n-1} |
//
// Warps: exp (q = e^{Ht}, t in [-1,1]), power (q = t^p, t in [0.5,3]),
// poly (q = c0 + c1 t + c2 t^2 + c3 t^3, t in [0.5,3]).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grw/autodiff.hpp"
#include "grw/jet.hpp"

namespace grw {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Metric components g_jk(x), row-major n*n, written in Taylor3 arithmetic.
using MetricExpr = std::function<std::vector<Taylor3>(std::span<const Taylor3>)>;

/// A covector field and scalar written in Taylor3 arithmetic.
struct CandidateValue {
  std::vector<Taylor3> X;  // X_k
  Taylor3 rho;
};
using CandidateExpr = std::function<CandidateValue(std::span<const Taylor3>)>;

struct ChenCandidate {
  VectorJet X;
  double rho = 0.0;
  Tensor d_rho;  // d_a rho
};

enum class WarpKind { exp, power, poly, cosh };

struct WarpSpec {
  WarpKind kind = WarpKind::exp;
  double H = 1.0;
  double p = 2.0 / 3.0;
  std::vector<double> coeffs{1.0, 0.5, 0.2, 0.05};

  Taylor3 operator()(const Taylor3& t) const;
  /// q'(t) as a field, exact through third order.
  Taylor3 rate(const Taylor3& t) const;
  /// q, q', q'', q''' at t.
  std::array<double, 4> derivatives(double t) const;
  Interval time_domain() const;
  std::string describe() const;
};

WarpSpec exp_warp(double H);
WarpSpec power_warp(double p);
WarpSpec poly_warp(std::vector<double> coeffs);

/// Throws Errc::invalid_argument unless q > 0 on the time domain and the
/// derivative evaluators agree with finite differences of the next lower
/// order to 1e-7.
void validate_warp(const WarpSpec& warp);

struct FiberSpec {
  int fiber_dim = 0;
  std::string description;
  MetricExpr metric;  // Riemannian, over the n-1 spatial coordinates
};

enum class Expect { pass, fail };

using ParamMap = std::map<std::string, std::string>;

struct MetricFamily {
  std::string name;
  int dim = 0;
  ParamMap params;  // canonical echo of the construction parameters
  std::vector<Interval> domain;
  MetricExpr metric;
  CandidateExpr chen;     // empty unless the family is a warped product
  CandidateExpr control;  // comparison field for non-warped families
  std::optional<FiberSpec> fiber;
  std::map<std::string, Expect> expectations;  // checks not listed are expected to pass

  bool has_chen() const { return static_cast<bool>(chen); }
  Expect expectation(const std::string& check) const;
  MetricJet jet_at(const Point& p) const;
};

MetricFamily minkowski(int n = 4);
MetricFamily de_sitter(int n = 4, double H = 1.0);
MetricFamily rw(int n, int k, const WarpSpec& warp);
MetricFamily grw_h2xr(const WarpSpec& warp);
MetricFamily schwarzschild(double M = 1.0);
MetricFamily einstein_static(int n = 4, double a = 1.0);

/// Builds a family from its CLI name and key=value parameters. Throws
/// Errc::invalid_argument when the name or any parameter is not recognised.
MetricFamily make_family(const std::string& name, const ParamMap& params = {});

/// Parses "k=0,warp=exp,H=1". Values may be decimal or a fraction "2/3".
ParamMap parse_params(const std::string& text);

/// Default-parameter instances covering every branch exercised by the suite.
std::vector<MetricFamily> catalog();

struct FamilyInfo {
  std::string name;
  std::string dim;
  std::string parameters;
  std::string domain;
  bool has_chen = false;
  bool has_fiber = false;
};

/// One row per family kind, for `list-families`.
std::vector<FamilyInfo> family_table();

/// Evaluates a Taylor3 metric expression at p into a validated jet.
MetricJet metric_jet_from(const MetricExpr& metric, const Point& p,
                          Signature signature = Signature::lorentzian);

ChenCandidate candidate_from(const CandidateExpr& expr, const Point& p);

/// Concircular candidate X = q(t) d_t (lowered X_t = -q), rho = q'(t).
/// Throws Errc::no_candidate for families without warped structure.
ChenCandidate chen_candidate(const MetricFamily& family, const Point& p);

/// Uniform per-coordinate samples in the family domain. The stream is
/// std::mt19937_64 seeded with `seed`; each draw u = (r >> 11) * 2^-53 maps to
/// lo + u * (hi - lo), coordinates in order, points in order.
std::vector<Point> sample_points(const MetricFamily& family, int count, std::uint64_t seed);

struct FiberRicci {
  double traceless_norm = 0.0;  // max |R*_mn - R* g*_mn / (n-1)|
  double scalar = 0.0;          // R*
};

/// Curvature of the fiber at the spatial part of spacetime point p.
/// Throws Errc::invalid_argument if the family has no fiber.
FiberRicci fiber_ricci(const MetricFamily& family, const Point& p);

MetricJet fiber_jet(const MetricFamily& family, const Point& p);

/// Same geometry in coordinates y with x = map(y). `jacobian(y)` returns
/// dx^i/dy^a row-major as [i * n + a]. The candidate transforms as a covector.
MetricFamily with_coordinate_change(const MetricFamily& family, std::string name,
                                    std::function<std::vector<Taylor3>(std::span<const Taylor3>)> map,
                                    std::function<std::vector<Taylor3>(std::span<const Taylor3>)> jacobian,
                                    std::vector<Interval> domain);

}  // namespace grw
