#include "grw/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "grw/curvature.hpp"

namespace grw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Interval kAngle{0.3, kPi - 0.3};
constexpr Interval kUnit{-1.0, 1.0};

// Shortest text that parses back to the same double.
std::string fmt_num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- fibers

enum class FiberKind { flat, sphere, hyperbolic, h2xr };

std::vector<Taylor3> fiber_diagonal(FiberKind kind, std::span<const Taylor3> x) {
  const int m = static_cast<int>(x.size());
  const int n = x.empty() ? 0 : x[0].dim();
  std::vector<Taylor3> h(m, Taylor3(n, 1.0));
  switch (kind) {
    case FiberKind::flat:
      break;
    case FiberKind::h2xr:
      h[1] = exp(2.0 * x[0]);
      break;
    case FiberKind::sphere:
    case FiberKind::hyperbolic: {
      // dchi_1^2 + S(chi_1)^2 (dchi_2^2 + sin^2 chi_2 (dchi_3^2 + ...))
      Taylor3 factor = kind == FiberKind::sphere ? square(sin(x[0])) : square(sinh(x[0]));
      for (int i = 1; i < m; ++i) {
        h[i] = factor;
        if (i + 1 < m) factor = factor * square(sin(x[i]));
      }
      break;
    }
  }
  return h;
}

std::vector<Interval> fiber_domain(FiberKind kind, int m) {
  switch (kind) {
    case FiberKind::flat:
    case FiberKind::h2xr:
      return std::vector<Interval>(m, kUnit);
    case FiberKind::sphere:
      return std::vector<Interval>(m, kAngle);
    case FiberKind::hyperbolic: {
      std::vector<Interval> d(m, kAngle);
      d[0] = {0.3, 2.0};
      return d;
    }
  }
  return {};
}

std::string fiber_description(FiberKind kind, int m) {
  switch (kind) {
    case FiberKind::flat:
      return "flat R^" + std::to_string(m);
    case FiberKind::sphere:
      return "round S^" + std::to_string(m);
    case FiberKind::hyperbolic:
      return "hyperbolic H^" + std::to_string(m);
    case FiberKind::h2xr:
      return "H^2 x R: dx^2 + e^{2x} dy^2 + dz^2";
  }
  return {};
}

std::vector<Taylor3> diagonal_matrix(const std::vector<Taylor3>& diag) {
  const int n = static_cast<int>(diag.size());
  const int vars = diag[0].dim();
  std::vector<Taylor3> g(n * n, Taylor3(vars, 0.0));
  for (int i = 0; i < n; ++i) g[i * n + i] = diag[i];
  return g;
}

// -------------------------------------------------------- warped builder

MetricFamily warped_family(std::string name, int n, const WarpSpec& warp, FiberKind fiber) {
  if (n < 3 || n > kMaxDim) {
    throw Error(Errc::invalid_argument, "dimension n must be in [3, " + std::to_string(kMaxDim) + "]");
  }
  if (fiber == FiberKind::h2xr && n != 4) throw Error(Errc::invalid_argument, "H^2 x R fiber requires n = 4");
  validate_warp(warp);

  MetricFamily f;
  f.name = std::move(name);
  f.dim = n;
  f.domain.push_back(warp.time_domain());
  for (const auto& iv : fiber_domain(fiber, n - 1)) f.domain.push_back(iv);

  f.metric = [warp, fiber](std::span<const Taylor3> x) {
    const Taylor3 q2 = square(warp(x[0]));
    const auto h = fiber_diagonal(fiber, x.subspan(1));
    std::vector<Taylor3> diag;
    diag.reserve(h.size() + 1);
    diag.push_back(Taylor3(x[0].dim(), -1.0));
    for (const auto& hi : h) diag.push_back(q2 * hi);
    return diagonal_matrix(diag);
  };
  f.chen = [warp](std::span<const Taylor3> x) {
    const int vars = x[0].dim();
    CandidateValue c;
    c.X.assign(x.size(), Taylor3(vars, 0.0));
    c.X[0] = -warp(x[0]);
    c.rho = warp.rate(x[0]);
    return c;
  };
  FiberSpec fs;
  fs.fiber_dim = n - 1;
  fs.description = fiber_description(fiber, n - 1);
  fs.metric = [fiber](std::span<const Taylor3> x) { return diagonal_matrix(fiber_diagonal(fiber, x)); };
  f.fiber = std::move(fs);
  return f;
}

// ---------------------------------------------------------------- parsing

double parse_number(const std::string& key, const std::string& text) {
  auto parse_one = [&](const std::string& s) {
    double v = 0.0;
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e || s.empty()) {
      throw Error(Errc::invalid_argument, "parameter " + key + ": not a number: '" + text + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  double v = 0.0;
  if (slash == std::string::npos) {
    v = parse_one(text);
  } else {
    const double den = parse_one(text.substr(slash + 1));
    if (den == 0.0) throw Error(Errc::invalid_argument, "parameter " + key + ": zero denominator");
    v = parse_one(text.substr(0, slash)) / den;
  }
  if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "parameter " + key + ": not finite");
  return v;
}

class ParamReader {
 public:
  ParamReader(std::string family, const ParamMap& params) : family_(std::move(family)), params_(params) {}

  double number(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : parse_number(key, it->second);
  }
  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw Error(Errc::invalid_argument, "parameter " + key + " must be positive");
    return v;
  }
  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v)) throw Error(Errc::invalid_argument, "parameter " + key + " must be an integer");
    return static_cast<int>(v);
  }
  std::string word(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }
  WarpSpec warp() {
    const std::string kind = word("warp", "exp");
    if (kind == "exp") return exp_warp(positive("H", 1.0));
    if (kind == "power") return power_warp(number("p", 2.0 / 3.0));
    if (kind == "poly") {
      return poly_warp({number("c0", 1.0), number("c1", 0.5), number("c2", 0.2), number("c3", 0.05)});
    }
    throw Error(Errc::invalid_argument, "unknown warp '" + kind + "' (expected exp, power or poly)");
  }
  void finish() const {
    for (const auto& [key, value] : params_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw Error(Errc::invalid_argument, "family " + family_ + " does not take parameter '" + key + "'");
      }
    }
  }

 private:
  std::string family_;
  const ParamMap& params_;
  std::vector<std::string> used_;
};

void echo_warp(ParamMap& params, const WarpSpec& w) {
  switch (w.kind) {
    case WarpKind::exp:
      params["warp"] = "exp";
      params["H"] = fmt_num(w.H);
      break;
    case WarpKind::power:
      params["warp"] = "power";
      params["p"] = fmt_num(w.p);
      break;
    case WarpKind::poly:
      params["warp"] = "poly";
      for (std::size_t i = 0; i < w.coeffs.size(); ++i) params["c" + std::to_string(i)] = fmt_num(w.coeffs[i]);
      break;
    case WarpKind::cosh:
      params["H"] = fmt_num(w.H);
      break;
  }
}

}  // namespace

// ------------------------------------------------------------------ warps

Taylor3 WarpSpec::operator()(const Taylor3& t) const {
  switch (kind) {
    case WarpKind::exp:
      return exp(H * t);
    case WarpKind::cosh:
      return cosh(H * t) * (1.0 / H);
    case WarpKind::power:
      return pow(t, p);
    case WarpKind::poly: {
      Taylor3 acc(t.dim(), 0.0);
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
  }
  return t;
}

Taylor3 WarpSpec::rate(const Taylor3& t) const {
  switch (kind) {
    case WarpKind::exp:
      return H * exp(H * t);
    case WarpKind::cosh:
      return sinh(H * t);
    case WarpKind::power:
      return p * pow(t, p - 1.0);
    case WarpKind::poly: {
      Taylor3 acc(t.dim(), 0.0);
      for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * coeffs[i];
      return acc;
    }
  }
  return t;
}

std::array<double, 4> WarpSpec::derivatives(double t) const {
  const Taylor3 q = (*this)(Taylor3::variable(1, 0, t));
  return {q.value(), q.d(0), q.dd(0, 0), q.ddd(0, 0, 0)};
}

Interval WarpSpec::time_domain() const {
  switch (kind) {
    case WarpKind::exp:
    case WarpKind::cosh:
      return kUnit;
    case WarpKind::power:
    case WarpKind::poly:
      return {0.5, 3.0};
  }
  return kUnit;
}

std::string WarpSpec::describe() const {
  switch (kind) {
    case WarpKind::exp:
      return "exp(H t), H=" + fmt_num(H);
    case WarpKind::cosh:
      return "cosh(H t)/H, H=" + fmt_num(H);
    case WarpKind::power:
      return "t^p, p=" + fmt_num(p);
    case WarpKind::poly: {
      std::string s = "poly";
      for (double c : coeffs) s += " " + fmt_num(c);
      return s;
    }
  }
  return {};
}

WarpSpec exp_warp(double H) {
  WarpSpec w;
  w.kind = WarpKind::exp;
  w.H = H;
  return w;
}

WarpSpec power_warp(double p) {
  WarpSpec w;
  w.kind = WarpKind::power;
  w.p = p;
  return w;
}

WarpSpec poly_warp(std::vector<double> coeffs) {
  WarpSpec w;
  w.kind = WarpKind::poly;
  w.coeffs = std::move(coeffs);
  return w;
}

void validate_warp(const WarpSpec& warp) {
  const Interval dom = warp.time_domain();
  if ((warp.kind == WarpKind::exp || warp.kind == WarpKind::cosh) && !(warp.H > 0.0)) {
    throw Error(Errc::invalid_argument, "warp parameter H must be positive");
  }
  // Positivity: endpoints plus a fine grid (catches interior minima of cubics).
  constexpr int kGrid = 400;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = dom.lo + (dom.hi - dom.lo) * i / kGrid;
    const double q = warp.derivatives(t)[0];
    if (!(q > 0.0) || !std::isfinite(q)) {
      throw Error(Errc::invalid_argument, "warp " + warp.describe() + " is not positive on [" +
                                              fmt_num(dom.lo) + ", " + fmt_num(dom.hi) + "]");
    }
  }
  // Each derivative against a Richardson central difference of the one below.
  constexpr double h = 1e-3;
  for (int i = 0; i < 5; ++i) {
    const double t = dom.lo + (dom.hi - dom.lo) * (i + 0.5) / 5.0;
    const auto at = warp.derivatives(t);
    for (int order = 1; order <= 3; ++order) {
      auto f = [&](double s) { return warp.derivatives(s)[order - 1]; };
      const double d1 = (f(t + h) - f(t - h)) / (2 * h);
      const double d2 = (f(t + h / 2) - f(t - h / 2)) / h;
      const double rich = (4 * d2 - d1) / 3;
      if (rel_residual(rich, at[order]) > 1e-7) {
        throw Error(Errc::invalid_argument, "warp " + warp.describe() + ": derivative of order " +
                                                std::to_string(order) + " inconsistent");
      }
    }
  }
}

// --------------------------------------------------------------- families

Expect MetricFamily::expectation(const std::string& check) const {
  auto it = expectations.find(check);
  return it == expectations.end() ? Expect::pass : it->second;
}

MetricJet MetricFamily::jet_at(const Point& p) const {
  if (p.dim() != dim) throw Error(Errc::shape, "point dimension does not match family " + name);
  return metric_jet_from(metric, p, Signature::lorentzian);
}

MetricFamily minkowski(int n) {
  MetricFamily f = warped_family("minkowski", n, poly_warp({1.0}), FiberKind::flat);
  f.domain[0] = kUnit;
  f.params = {{"n", std::to_string(n)}};
  return f;
}

MetricFamily de_sitter(int n, double H) {
  WarpSpec w;
  w.kind = WarpKind::cosh;
  w.H = H;
  MetricFamily f = warped_family("de_sitter", n, w, FiberKind::sphere);
  f.params = {{"n", std::to_string(n)}, {"H", fmt_num(H)}};
  return f;
}

MetricFamily rw(int n, int k, const WarpSpec& warp) {
  if (k < -1 || k > 1) throw Error(Errc::invalid_argument, "rw: k must be -1, 0 or +1");
  const FiberKind kind = k == 0 ? FiberKind::flat : (k > 0 ? FiberKind::sphere : FiberKind::hyperbolic);
  MetricFamily f = warped_family("rw", n, warp, kind);
  f.params = {{"n", std::to_string(n)}, {"k", std::to_string(k)}};
  echo_warp(f.params, warp);
  return f;
}

MetricFamily grw_h2xr(const WarpSpec& warp) {
  MetricFamily f = warped_family("grw_h2xr", 4, warp, FiberKind::h2xr);
  echo_warp(f.params, warp);
  // Non-Einstein fiber: the Ricci tensor is not of perfect-fluid form and
  // the Riemann tensor is not of quasi-constant curvature.
  f.expectations = {{"quasi_einstein", Expect::fail}, {"rw_riemann_structure", Expect::fail}};
  return f;
}

MetricFamily schwarzschild(double M) {
  if (!(M > 0.0)) throw Error(Errc::invalid_argument, "schwarzschild: M must be positive");
  MetricFamily f;
  f.name = "schwarzschild";
  f.dim = 4;
  f.params = {{"M", fmt_num(M)}};
  // 10% buffer above the horizon; the outer edge keeps the Killing field's
  // failure to be concircular well above 1e-2.
  f.domain = {{0.0, 1.0}, {2.2 * M, 8.0 * M}, kAngle, {0.0, 2.0 * kPi}};
  f.metric = [M](std::span<const Taylor3> x) {
    const Taylor3& r = x[1];
    const Taylor3 lapse = 1.0 - 2.0 * M * reciprocal(r);
    const Taylor3 r2 = square(r);
    return diagonal_matrix({-lapse, reciprocal(lapse), r2, r2 * square(sin(x[2]))});
  };
  f.control = [M](std::span<const Taylor3> x) {
    const int vars = x[0].dim();
    CandidateValue c;
    c.X.assign(4, Taylor3(vars, 0.0));
    c.X[0] = -(1.0 - 2.0 * M * reciprocal(x[1]));
    c.rho = Taylor3(vars, 0.0);
    return c;
  };
  f.expectations = {{"concircular", Expect::fail}};
  return f;
}

MetricFamily einstein_static(int n, double a) {
  if (!(a > 0.0)) throw Error(Errc::invalid_argument, "einstein_static: a must be positive");
  MetricFamily f = warped_family("einstein_static", n, poly_warp({a}), FiberKind::sphere);
  f.domain[0] = kUnit;
  f.params = {{"n", std::to_string(n)}, {"a", fmt_num(a)}};
  return f;
}

MetricFamily make_family(const std::string& name, const ParamMap& params) {
  ParamReader in(name, params);
  MetricFamily f;
  if (name == "minkowski") {
    const int n = in.integer("n", 4);
    in.finish();
    f = minkowski(n);
  } else if (name == "de_sitter") {
    const int n = in.integer("n", 4);
    const double H = in.positive("H", 1.0);
    in.finish();
    f = de_sitter(n, H);
  } else if (name == "rw") {
    const int n = in.integer("n", 4);
    const int k = in.integer("k", 0);
    const WarpSpec w = in.warp();
    in.finish();
    f = rw(n, k, w);
  } else if (name == "grw_h2xr") {
    const WarpSpec w = in.warp();
    in.finish();
    f = grw_h2xr(w);
  } else if (name == "schwarzschild") {
    const double M = in.positive("M", 1.0);
    in.finish();
    f = schwarzschild(M);
  } else if (name == "einstein_static") {
    const int n = in.integer("n", 4);
    const double a = in.positive("a", 1.0);
    in.finish();
    f = einstein_static(n, a);
  } else {
    throw Error(Errc::invalid_argument, "unknown family '" + name + "'");
  }
  return f;
}

ParamMap parse_params(const std::string& text) {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
  };
  ParamMap out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(Errc::invalid_argument, "malformed parameter '" + item + "' (expected key=value)");
      }
      const std::string key = trim(item.substr(0, eq));
      if (key.empty()) throw Error(Errc::invalid_argument, "malformed parameter '" + item + "' (empty key)");
      if (out.count(key)) throw Error(Errc::invalid_argument, "duplicate parameter '" + key + "'");
      out[key] = trim(item.substr(eq + 1));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<MetricFamily> catalog() {
  std::vector<MetricFamily> c;
  c.push_back(minkowski(4));
  c.push_back(de_sitter(4, 1.0));
  for (int k : {-1, 0, 1}) {
    c.push_back(rw(4, k, exp_warp(1.0)));
    c.push_back(rw(4, k, power_warp(2.0 / 3.0)));
    c.push_back(rw(4, k, poly_warp({1.0, 0.5, 0.2, 0.05})));
  }
  c.push_back(grw_h2xr(exp_warp(1.0)));
  c.push_back(grw_h2xr(power_warp(2.0 / 3.0)));
  c.push_back(schwarzschild(1.0));
  c.push_back(einstein_static(4, 1.0));
  return c;
}

std::vector<FamilyInfo> family_table() {
  const std::string warp = "warp=exp|power|poly, H=1, p=2/3, c0..c3=1,0.5,0.2,0.05";
  return {
      {"minkowski", "n", "n=4", "t,x in [-1,1]", true, true},
      {"de_sitter", "n", "n=4, H=1", "t in [-1,1], angles in [0.3,pi-0.3]", true, true},
      {"rw", "n", "n=4, k=-1|0|+1, " + warp,
       "t by warp (exp [-1,1]; power/poly [0.5,3]); k=0 x in [-1,1]; k=+1 angles [0.3,pi-0.3]; k=-1 chi "
       "[0.3,2]",
       true, true},
      {"grw_h2xr", "4", warp, "t by warp; x,y,z in [-1,1]", true, true},
      {"schwarzschild", "4", "M=1", "t [0,1], r [2.2M,8M], theta [0.3,pi-0.3], phi [0,2pi]", false, false},
      {"einstein_static", "n", "n=4, a=1", "t in [-1,1], angles in [0.3,pi-0.3]", true, true},
  };
}

// ------------------------------------------------------------------- jets

MetricJet metric_jet_from(const MetricExpr& metric, const Point& p, Signature signature) {
  const int n = p.dim();
  if (n < 1 || n > kMaxDim) throw Error(Errc::invalid_argument, "point dimension out of range");
  std::vector<Taylor3> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Taylor3::variable(n, i, p[i]));
  const auto comps = metric(x);
  if (static_cast<int>(comps.size()) != n * n) throw Error(Errc::shape, "metric expression has wrong size");

  Tensor g(n, down(2)), dg(n, down(3)), ddg(n, down(4)), dddg(n, down(5));
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const Taylor3& c = comps[j * n + k];
      for (int kk : {k, j}) {
        const int jj = kk == k ? j : k;
        g(jj, kk) = c.value();
        for (int a = 0; a < n; ++a) {
          dg(a, jj, kk) = c.d(a);
          for (int b = 0; b < n; ++b) {
            ddg(a, b, jj, kk) = c.dd(a, b);
            for (int e = 0; e < n; ++e) dddg(a, b, e, jj, kk) = c.ddd(a, b, e);
          }
        }
      }
    }
  return make_metric_jet(std::move(g), std::move(dg), std::move(ddg), std::move(dddg), signature);
}

ChenCandidate candidate_from(const CandidateExpr& expr, const Point& p) {
  const int n = p.dim();
  std::vector<Taylor3> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Taylor3::variable(n, i, p[i]));
  const CandidateValue v = expr(x);
  if (static_cast<int>(v.X.size()) != n) throw Error(Errc::shape, "candidate expression has wrong size");
  ChenCandidate c;
  c.X.X = Tensor(n, down(1));
  c.X.dX = Tensor(n, down(2));
  c.X.ddX = Tensor(n, down(3));
  for (int k = 0; k < n; ++k) {
    c.X.X(k) = v.X[k].value();
    for (int a = 0; a < n; ++a) {
      c.X.dX(a, k) = v.X[k].d(a);
      for (int b = 0; b < n; ++b) c.X.ddX(a, b, k) = v.X[k].dd(a, b);
    }
  }
  c.rho = v.rho.value();
  c.d_rho = Tensor(n, down(1));
  for (int a = 0; a < n; ++a) c.d_rho(a) = v.rho.d(a);
  return c;
}

ChenCandidate chen_candidate(const MetricFamily& family, const Point& p) {
  if (!family.has_chen()) {
    throw Error(Errc::no_candidate, "family " + family.name + " has no concircular candidate");
  }
  return candidate_from(family.chen, p);
}

std::vector<Point> sample_points(const MetricFamily& family, int count, std::uint64_t seed) {
  if (count < 1) throw Error(Errc::invalid_argument, "sample_points: count must be >= 1");
  std::mt19937_64 gen(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p;
    p.coords.reserve(family.domain.size());
    for (const auto& iv : family.domain) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      p.coords.push_back(iv.lo + u * (iv.hi - iv.lo));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

MetricJet fiber_jet(const MetricFamily& family, const Point& p) {
  if (!family.fiber) throw Error(Errc::invalid_argument, "family " + family.name + " has no fiber");
  Point spatial{std::vector<double>(p.coords.begin() + 1, p.coords.end())};
  return metric_jet_from(family.fiber->metric, spatial, Signature::riemannian);
}

FiberRicci fiber_ricci(const MetricFamily& family, const Point& p) {
  const MetricJet jet = fiber_jet(family, p);
  const int m = jet.dim();
  const CurvatureValues cv = curvature_values(jet);
  FiberRicci out;
  out.scalar = cv.scalar;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out.traceless_norm = std::max(out.traceless_norm, std::abs(cv.ricci(i, j) - cv.scalar * jet.g(i, j) / m));
    }
  return out;
}

MetricFamily with_coordinate_change(const MetricFamily& family, std::string name,
                                    std::function<std::vector<Taylor3>(std::span<const Taylor3>)> map,
                                    std::function<std::vector<Taylor3>(std::span<const Taylor3>)> jacobian,
                                    std::vector<Interval> domain) {
  MetricFamily f = family;
  f.name = std::move(name);
  f.domain = std::move(domain);
  const int n = family.dim;
  f.metric = [n, map, jacobian, inner = family.metric](std::span<const Taylor3> y) {
    const auto x = map(y);
    const auto J = jacobian(y);
    const auto g = inner(x);
    std::vector<Taylor3> out(n * n, Taylor3(y[0].dim(), 0.0));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Taylor3 acc(y[0].dim(), 0.0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) acc += J[i * n + a] * J[j * n + b] * g[i * n + j];
        out[a * n + b] = acc;
        out[b * n + a] = acc;
      }
    return out;
  };
  auto transform = [n, map, jacobian](const CandidateExpr& inner) -> CandidateExpr {
    if (!inner) return {};
    return [n, map, jacobian, inner](std::span<const Taylor3> y) {
      const auto x = map(y);
      const auto J = jacobian(y);
      CandidateValue v = inner(x);
      CandidateValue out;
      out.rho = v.rho;
      out.X.assign(n, Taylor3(y[0].dim(), 0.0));
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) out.X[a] += J[i * n + a] * v.X[i];
      return out;
    };
  };
  f.chen = transform(family.chen);
  f.control = transform(family.control);
  // The fiber is described in the original chart; it is not carried over.
  f.fiber.reset();
  return f;
}

}  // namespace grw
