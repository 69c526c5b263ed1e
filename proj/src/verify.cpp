#include "grw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace grw {

namespace {

IdentityReport make_report(std::string name, double residual, double tol, const Point& p) {
  IdentityReport r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  r.point = p;
  return r;
}

void require_nondegenerate(double x2) {
  if (std::abs(x2) < kDegenerateNorm) {
    throw Error(Errc::degenerate_vector, "|X^2| = " + std::to_string(std::abs(x2)) + " below guard");
  }
}

// C_jklm X^m
Tensor contract_last(const Tensor& t4, const Tensor& x_up) {
  const int n = t4.dim();
  Tensor out(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += t4(j, k, l, m) * x_up(m);
        out(j, k, l) = acc;
      }
  return out;
}

double dot(const Tensor& a_up, const Tensor& b_down) {
  double s = 0.0;
  for (int i = 0; i < a_up.dim(); ++i) s += a_up(i) * b_down(i);
  return s;
}

// d_a R - X_a (X^m d_m R) / X^2
Tensor transverse_grad_scalar(const CurvatureBundle& b, const ChenData& c) {
  const double along = dot(c.X_up, b.d_scalar) / c.X2;
  Tensor p = b.d_scalar;
  for (int a = 0; a < p.dim(); ++a) p(a) -= c.X.X(a) * along;
  return p;
}

double richardson_partial(const ScalarField& f, const Point& p, int a) {
  const double h = 1e-4 * std::max(1.0, std::abs(p[a]));
  auto central = [&](double step) {
    Point plus = p, minus = p;
    plus.coords[a] += step;
    minus.coords[a] -= step;
    return (f(plus) - f(minus)) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

// ------------------------------------------------------------ candidates

ChenCandidate scaled(const ChenCandidate& c, double scale) {
  ChenCandidate s = c;
  s.X.X = scale * c.X.X;
  s.X.dX = scale * c.X.dX;
  s.X.ddX = scale * c.X.ddX;
  s.rho = scale * c.rho;
  s.d_rho = scale * c.d_rho;
  return s;
}

ScalarField xi_field(const MetricFamily& family, double scale) {
  return [family, scale](const Point& q) {
    const MetricJet jet = family.jet_at(q);
    const ChenCandidate cand = scaled(chen_candidate(family, q), scale);
    const CurvatureValues cv = curvature_values(jet);
    const Tensor xu = raise_index(cand.X.X, 0, jet);
    const double x2 = dot(xu, cand.X.X);
    require_nondegenerate(x2);
    double num = 0.0;
    for (int j = 0; j < jet.dim(); ++j)
      for (int m = 0; m < jet.dim(); ++m) num += xu(j) * cv.ricci(j, m) * xu(m);
    return num / x2;
  };
}

ChenData compute_chen_scalars(const MetricJet& jet, const CurvatureBundle& bundle, const ChenCandidate& cand,
                              const Point& p, const ScalarField& xi, double eigen_tol, bool strict) {
  const int n = jet.dim();
  ChenData c;
  c.X = cand.X;
  c.rho = cand.rho;
  c.d_rho = cand.d_rho;
  c.X_up = raise_index(cand.X.X, 0, jet);
  c.X2 = dot(c.X_up, cand.X.X);
  require_nondegenerate(c.X2);
  c.nabla_X = covariant_derivative(cand.X.X, cand.X.dX, bundle.connection.gamma);

  Tensor rx(n, down(1));
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) rx(j) += bundle.ricci(j, m) * c.X_up(m);
  c.xi = dot(c.X_up, rx) / c.X2;
  c.eigen_residual = rel_residual(rx, c.xi * cand.X.X);
  if (strict && c.eigen_residual > eigen_tol) {
    throw Error(Errc::not_eigenvector, "X is not a Ricci eigenvector (residual " +
                                           std::to_string(c.eigen_residual) + ")");
  }
  c.xi_rho = -(n - 1.0) * dot(c.X_up, cand.d_rho) / c.X2;

  c.d_xi = Tensor(n, down(1));
  for (int a = 0; a < n; ++a) c.d_xi(a) = richardson_partial(xi, p, a);
  c.theta = dot(c.X_up, c.d_xi) / c.X2;
  return c;
}

Tensor c_aux_derivative(const MetricJet& jet, const CurvatureBundle& bundle, const ChenData& chen) {
  const int n = jet.dim();
  const Tensor& C = bundle.weyl;
  const Tensor& dC = bundle.d_weyl;
  const Tensor& xu = chen.X_up;
  const Tensor csf = c_aux(C, chen.X.X, jet);
  // nabla_i X^a and nabla_i (X^2)
  Tensor dxu(n, {Slot::down, Slot::up});
  Tensor dx2(n, down(1));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += jet.g_inv(a, q) * chen.nabla_X(i, q);
      dxu(i, a) = acc;
    }
    double acc = 0.0;
    for (int q = 0; q < n; ++q) acc += xu(q) * chen.nabla_X(i, q);
    dx2(i) = 2.0 * acc;
  }
  Tensor out(n, down(3));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            acc += dC(i, a, j, k, b) * xu(a) * xu(b) + C(a, j, k, b) * (dxu(i, a) * xu(b) + xu(a) * dxu(i, b));
          }
        out(i, j, k) = acc / chen.X2 - csf(j, k) * dx2(i) / chen.X2;
      }
  return out;
}

// ----------------------------------------------------------------- checks

IdentityReport check_concircular(const MetricJet& jet, const ChristoffelData& conn, const ChenCandidate& cand,
                                 const Point& p, double tol, bool fit_rho) {
  const int n = jet.dim();
  const Tensor nabla_x = covariant_derivative(cand.X.X, cand.X.dX, conn.gamma);
  double rho = cand.rho;
  if (fit_rho) {
    rho = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rho += jet.g_inv(j, k) * nabla_x(j, k);
    rho /= n;
  }
  double residual = rel_residual(nabla_x, rho * jet.g);
  // A spacelike or null X is not a Chen vector no matter how well it fits;
  // report total failure.
  if (!(norm2(cand.X.X, jet) < -kDegenerateNorm)) residual = std::max(residual, 1.0);
  return make_report("concircular", residual, tol, p);
}

IdentityReport check_ricci_eigenvector(const ChenData& chen, const Point& p, double tol) {
  return make_report("ricci_eigenvector", chen.eigen_residual, tol, p);
}

IdentityReport check_xi_routes(const ChenData& chen, const Point& p, double tol) {
  return make_report("xi_two_routes", rel_residual(chen.xi, chen.xi_rho), tol, p);
}

IdentityReport check_xi_gradient(const ChenData& chen, const Point& p, double tol) {
  if (!chen.theta) {
    IdentityReport r = make_report("xi_gradient_alignment", 0.0, tol, p);
    r.skipped = true;
    return r;
  }
  return make_report("xi_gradient_alignment", rel_residual(chen.d_xi, *chen.theta * chen.X.X), tol, p);
}

IdentityReport check_riemann_contraction(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                         const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor lhs = contract_last(b.riemann, c.X_up);
  Tensor rhs(n, down(3));
  const double f = -c.xi / (n - 1.0);
  const Tensor& X = c.X.X;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rhs(i, j, k) = f * (X(i) * jet.g(j, k) - X(j) * jet.g(i, k));
  return make_report("riemann_contraction", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_riemann_compatibility(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                           const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor rx = contract_last(b.riemann, c.X_up);
  const Tensor& X = c.X.X;
  // X_i X^m R_jlkm + X_j X^m R_likm + X_l X^m R_ijkm = 0, slots (i, j, l, k)
  Tensor lhs(n, down(4)), rhs(n, down(4));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          lhs(i, j, l, k) = X(i) * rx(j, l, k);
          rhs(i, j, l, k) = -(X(j) * rx(l, i, k) + X(l) * rx(i, j, k));
        }
  return make_report("riemann_compatibility", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_ricci_decomposition(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                         const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor csf = c_aux(b.weyl, c.X.X, jet);
  const Tensor& X = c.X.X;
  const double fluid = (b.scalar - c.xi) / (n - 1.0);
  Tensor rhs(n, down(2));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const double xx = X(k) * X(l) / c.X2;
      rhs(k, l) = (n - 2.0) * csf(k, l) + fluid * (jet.g(k, l) - xx) + c.xi * xx;
    }
  return make_report("ricci_decomposition", rel_residual(b.ricci, rhs), tol, p);
}

IdentityReport check_weyl_contraction(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                      const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor lhs = contract_last(b.weyl, c.X_up);
  const Tensor& X = c.X.X;
  const Tensor& g = jet.g;
  const Tensor& ric = b.ricci;
  const double f = (c.xi - b.scalar) / ((n - 1.0) * (n - 2.0));
  const double h = 1.0 / (n - 2.0);
  Tensor rhs(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        rhs(j, k, l) = f * (X(j) * g(k, l) - X(k) * g(j, l)) + h * (X(j) * ric(k, l) - X(k) * ric(j, l));
      }
  return make_report("weyl_contraction", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_scalar_identity(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                     const Point& p, double tol) {
  if (!c.theta) {
    IdentityReport r = make_report("scalar_identity", 0.0, tol, p);
    r.skipped = true;
    return r;
  }
  const int n = jet.dim();
  const double lhs = 0.5 * dot(c.X_up, b.d_scalar);
  const double rhs = n * c.rho * c.xi - c.rho * b.scalar + c.X2 * *c.theta;
  return make_report("scalar_identity", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_weyl_compatibility(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                        const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor cx = contract_last(b.weyl, c.X_up);
  const Tensor& X = c.X.X;
  // X_i X^m C_jklm + X_j X^m C_kilm + X_k X^m C_ijlm = 0, slots (i, j, k, l)
  Tensor lhs(n, down(4)), rhs(n, down(4));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          lhs(i, j, k, l) = X(i) * cx(j, k, l);
          rhs(i, j, k, l) = -(X(j) * cx(k, i, l) + X(k) * cx(i, j, l));
        }
  return make_report("weyl_compatibility", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_weyl_aux_factorization(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c, const Point& p,
                           double tol) {
  const int n = jet.dim();
  const Tensor lhs = contract_last(b.weyl, c.X_up);
  const Tensor csf = c_aux(b.weyl, c.X.X, jet);
  const Tensor& X = c.X.X;
  Tensor rhs(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) rhs(j, k, l) = X(j) * csf(k, l) - X(k) * csf(j, l);
  return make_report("weyl_aux_factorization", rel_residual(lhs, rhs), tol, p);
}

std::pair<IdentityReport, IdentityReport> check_div_weyl_expansion(const MetricJet& jet, const CurvatureBundle& b,
                                                                    const ChenData& c, const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor dcsf = c_aux_derivative(jet, b, c);
  const Tensor trans = transverse_grad_scalar(b, c);
  const Tensor& X = c.X.X;
  const Tensor& g = jet.g;
  const Tensor& dR = b.d_scalar;
  const double n3 = n - 3.0;
  const double mid = n3 / ((n - 1.0) * (n - 2.0));
  const double tail = n3 / (2.0 * (n - 1.0) * (n - 2.0));

  Tensor rhs(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        rhs(j, k, l) = -n3 * (dcsf(j, k, l) - dcsf(k, j, l)) +
                       mid * X(l) / c.X2 * (X(k) * dR(j) - X(j) * dR(k)) -
                       tail * (g(k, l) * trans(j) - g(j, l) * trans(k));
      }
  IdentityReport step = make_report("div_weyl_expansion", rel_residual(b.div_weyl, rhs), tol, p);

  Tensor div_csf(n, down(1));
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) acc += jet.g_inv(i, k) * dcsf(i, j, k);
    div_csf(j) = acc;
  }
  IdentityReport cs = make_report("aux_divergence", rel_residual(div_csf, tail * trans), tol, p);
  return {step, cs};
}

IdentityReport check_aux_transport(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                  const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor dcsf = c_aux_derivative(jet, b, c);
  const Tensor csf = c_aux(b.weyl, c.X.X, jet);
  Tensor lhs(n, down(2));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += c.X_up(j) * dcsf(j, k, l);
      lhs(k, l) = acc;
    }
  return make_report("aux_transport", rel_residual(lhs, -2.0 * c.rho * csf), tol, p);
}

IdentityReport check_grad_scalar_alignment(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                     const Point& p, double tol) {
  const int n = jet.dim();
  Tensor hyp(n, down(2));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += c.X_up(l) * b.div_weyl(j, k, l);
      hyp(j, k) = acc;
    }
  const double hyp_residual = rel_residual(hyp, Tensor(n, down(2)));

  const double along = dot(c.X_up, b.d_scalar) / c.X2;
  const double align = rel_residual(b.d_scalar, along * c.X.X);
  const Tensor dcsf = c_aux_derivative(jet, b, c);
  Tensor reduced(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) reduced(j, k, l) = -(n - 3.0) * (dcsf(j, k, l) - dcsf(k, j, l));
  const double step3 = rel_residual(b.div_weyl, reduced);

  IdentityReport r = make_report("grad_scalar_alignment", std::max(align, step3), tol, p);
  r.hypothesis = hyp_residual;
  if (hyp_residual > tol) {
    r.skipped = true;
    r.pass = true;
  }
  return r;
}

std::pair<double, double> probe_weyl_covanishing(const MetricJet&, const CurvatureBundle& b, const ChenData& c) {
  return {max_abs(contract_last(b.weyl, c.X_up)), max_abs(b.div_weyl)};
}

QuasiEinsteinFit fit_quasi_einstein(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c) {
  const int n = jet.dim();
  QuasiEinsteinFit fit;
  fit.alpha = (b.scalar - c.xi) / (n - 1.0);
  fit.beta = c.xi - fit.alpha;
  Tensor model(n, down(2));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) model(j, k) = fit.alpha * jet.g(j, k) + fit.beta * c.X.X(j) * c.X.X(k) / c.X2;
  fit.residual = rel_residual(b.ricci, model);
  return fit;
}

IdentityReport check_rw_riemann_structure(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                          const Point& p, double tol) {
  const int n = jet.dim();
  const Tensor& g = jet.g;
  const Tensor& X = c.X.X;
  const double denom = (n - 1.0) * (n - 2.0);
  const double a = (2.0 * c.xi - b.scalar) / denom;
  const double e = (b.scalar - n * c.xi) / denom;
  Tensor rhs(n, down(4));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          const double xx = g(j, m) * X(k) * X(l) - g(k, m) * X(j) * X(l) + g(k, l) * X(j) * X(m) -
                            g(j, l) * X(k) * X(m);
          rhs(j, k, l, m) = a * (g(k, l) * g(j, m) - g(k, m) * g(j, l)) + e * xx / c.X2;
        }
  return make_report("rw_riemann_structure", rel_residual(b.riemann, rhs), tol, p);
}

IdentityReport check_four_dim_annihilation(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                           const Point& p, double tol) {
  if (jet.dim() != 4) throw Error(Errc::invalid_argument, "four_dim_annihilation requires n = 4");
  const double cx = max_abs(contract_last(b.weyl, c.X_up));
  const double residual = cx <= tol ? max_abs(b.weyl) : 0.0;
  IdentityReport r = make_report("four_dim_annihilation", residual, 10.0 * tol, p);
  r.hypothesis = cx;
  return r;
}

IdentityReport check_metric_compatibility(const MetricJet& jet, const CurvatureBundle& b, const Point& p,
                                          double tol) {
  const Tensor ng = covariant_derivative(jet.g, jet.dg, b.connection.gamma);
  return make_report("metric_compatibility", rel_residual(ng, Tensor(jet.dim(), down(3))), tol, p);
}

IdentityReport check_first_bianchi(const CurvatureBundle& b, const Point& p, double tol) {
  const Tensor& R = b.riemann;
  const int n = R.dim();
  Tensor lhs(n, down(4)), rhs(n, down(4));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          lhs(j, k, l, m) = R(j, k, l, m);
          rhs(j, k, l, m) = -(R(k, l, j, m) + R(l, j, k, m));
        }
  return make_report("first_bianchi", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_second_bianchi(const CurvatureBundle& b, const Point& p, double tol) {
  const Tensor& dR = b.d_riemann;
  const int n = dR.dim();
  Tensor lhs(n, down(5)), rhs(n, down(5));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) {
            lhs(s, i, j, k, m) = dR(s, i, j, k, m);
            rhs(s, i, j, k, m) = -(dR(i, j, s, k, m) + dR(j, s, i, k, m));
          }
  return make_report("second_bianchi", rel_residual(lhs, rhs), tol, p);
}

IdentityReport check_weyl_traceless(const MetricJet& jet, const CurvatureBundle& b, const Point& p, double tol) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    const Tensor raised = raise_index(b.weyl, a, jet);
    for (int c = a + 1; c < 4; ++c) worst = std::max(worst, max_abs(contract(raised, a, c)));
  }
  return make_report("weyl_traceless", worst / std::max(1.0, max_abs(b.weyl)), tol, p);
}

IdentityReport check_div_weyl_routes(const MetricJet& jet, const CurvatureBundle& b, const Point& p, double tol) {
  return make_report("div_weyl_dual_route", rel_residual(b.div_weyl, div_weyl_via_ricci(b, jet)), tol, p);
}

// ------------------------------------------------------------------ suite

std::string to_string(Classification c) {
  switch (c) {
    case Classification::not_grw:
      return "NotGRW";
    case Classification::grw_generic:
      return "GrwGeneric";
    case Classification::grw_quasi_einstein:
      return "GrwQuasiEinstein";
    case Classification::robertson_walker:
      return "RobertsonWalker";
  }
  return "?";
}

const CheckSummary* SuiteOutcome::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool SuiteOutcome::all_as_expected() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckSummary& c) { return c.as_expected(); });
}

namespace {

class Aggregator {
 public:
  explicit Aggregator(const MetricFamily& family) : family_(family) {}

  void add(const IdentityReport& r) {
    CheckSummary& s = slot(r.name, r.tolerance);
    if (r.skipped) {
      ++s.skipped;
      return;
    }
    ++s.evaluated;
    if (s.evaluated == 1 || r.residual > s.worst_residual) {
      s.worst_residual = r.residual;
      s.worst_point = r.point;
    }
    s.pass = s.worst_residual <= s.tolerance;
  }

  void add_verdict(const std::string& name, bool agree, const Point& p) {
    IdentityReport r = make_report(name, agree ? 0.0 : 1.0, 0.0, p);
    add(r);
  }

  std::vector<CheckSummary> take() { return std::move(checks_); }

 private:
  CheckSummary& slot(const std::string& name, double tol) {
    auto it = index_.find(name);
    if (it != index_.end()) return checks_[it->second];
    CheckSummary s;
    s.name = name;
    s.tolerance = tol;
    s.expected_pass = family_.expectation(name) == Expect::pass;
    index_[name] = checks_.size();
    checks_.push_back(std::move(s));
    return checks_.back();
  }

  const MetricFamily& family_;
  std::vector<CheckSummary> checks_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace

SuiteOutcome run_suite(const MetricFamily& family, const std::vector<Point>& points, const Tolerances& tol,
                       double scale) {
  if (points.empty()) throw Error(Errc::invalid_argument, "run_suite: no points");
  SuiteOutcome out;
  Aggregator agg(family);
  const double tc = tol.closed;
  const ScalarField xi = family.has_chen() ? xi_field(family, scale) : ScalarField{};
  bool concircular_ok = true;
  bool sampled = false;

  for (const Point& p : points) {
    const MetricJet jet = family.jet_at(p);
    const CurvatureBundle b = curvature(jet);
    agg.add(check_metric_compatibility(jet, b, p, tc));
    agg.add(check_first_bianchi(b, p, tc));
    agg.add(check_second_bianchi(b, p, tc));
    agg.add(check_weyl_traceless(jet, b, p, tc));
    agg.add(check_div_weyl_routes(jet, b, p, tc));
    out.max_weyl = std::max(out.max_weyl, max_abs(b.weyl));
    out.max_div_weyl = std::max(out.max_div_weyl, max_abs(b.div_weyl));

    if (family.fiber) {
      const double tr = fiber_ricci(family, p).traceless_norm;
      out.max_fiber_traceless = std::max(out.max_fiber_traceless.value_or(0.0), tr);
    }

    if (!family.has_chen()) {
      if (family.control) {
        const ChenCandidate cand = candidate_from(family.control, p);
        const IdentityReport r = check_concircular(jet, b.connection, cand, p, tc, true);
        concircular_ok = concircular_ok && r.pass;
        agg.add(r);
      }
      if (!sampled) {
        out.sample.R = b.scalar;
        sampled = true;
      }
      continue;
    }

    const ChenCandidate cand = scaled(chen_candidate(family, p), scale);
    const IdentityReport conc = check_concircular(jet, b.connection, cand, p, tc);
    concircular_ok = concircular_ok && conc.pass;
    agg.add(conc);

    ChenData c;
    try {
      c = compute_chen_scalars(jet, b, cand, p, xi, tc, false);
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_vector) throw;
      ++out.degenerate_points;
      continue;
    }
    if (!sampled) {
      out.sample = {c.xi, c.theta, c.rho, b.scalar, c.X2};
      sampled = true;
    }

    agg.add(check_ricci_eigenvector(c, p, tc));
    agg.add(check_xi_routes(c, p, tc));
    agg.add(check_xi_gradient(c, p, tol.fd));
    agg.add(check_riemann_contraction(jet, b, c, p, tc));
    agg.add(check_riemann_compatibility(jet, b, c, p, tc));
    agg.add(check_ricci_decomposition(jet, b, c, p, tc));
    agg.add(check_weyl_contraction(jet, b, c, p, tc));
    agg.add(check_scalar_identity(jet, b, c, p, tol.fd));
    agg.add(check_weyl_compatibility(jet, b, c, p, tc));
    agg.add(check_weyl_aux_factorization(jet, b, c, p, tc));
    const auto [step, cs] = check_div_weyl_expansion(jet, b, c, p, tc);
    agg.add(step);
    agg.add(cs);
    agg.add(check_aux_transport(jet, b, c, p, tc));
    agg.add(check_grad_scalar_alignment(jet, b, c, p, tc));

    const QuasiEinsteinFit fit = fit_quasi_einstein(jet, b, c);
    agg.add(make_report("quasi_einstein", fit.residual, tc, p));
    out.max_qe_residual = std::max(out.max_qe_residual, fit.residual);
    agg.add(check_rw_riemann_structure(jet, b, c, p, tc));
    if (jet.dim() == 4) agg.add(check_four_dim_annihilation(jet, b, c, p, tc));

    out.max_cx = std::max(out.max_cx, probe_weyl_covanishing(jet, b, c).first);
  }

  const Point& first = points.front();
  if (family.has_chen()) {
    const bool cx_zero = out.max_cx <= tc;
    const bool harmonic = out.max_div_weyl <= tc;
    const bool qe = out.max_qe_residual <= tc;
    agg.add_verdict("weyl_divergence_covanishing", cx_zero == harmonic, first);
    agg.add_verdict("quasi_einstein_equivalence", qe == cx_zero, first);
    if (out.max_fiber_traceless) {
      agg.add_verdict("fiber_einstein_correlation", (*out.max_fiber_traceless <= tc) == harmonic, first);
    }
    out.harmonic_consistent = qe == harmonic;

    if (!concircular_ok) {
      out.classification = Classification::not_grw;
    } else if (!qe) {
      out.classification = Classification::grw_generic;
    } else if (out.max_weyl > tc) {
      out.classification = Classification::grw_quasi_einstein;
    } else {
      out.classification = Classification::robertson_walker;
    }
  } else {
    out.classification = Classification::not_grw;
  }
  out.checks = agg.take();
  return out;
}

Classification classify(const MetricFamily& family, const std::vector<Point>& points, const Tolerances& tol) {
  if (points.empty()) throw Error(Errc::invalid_argument, "classify: empty point list");
  return run_suite(family, points, tol).classification;
}

}  // namespace grw
