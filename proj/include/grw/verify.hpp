#pragma once

// Identity checks for generalized Robertson-Walker space-times.
//
// Every check compares two independently assembled tensors with rel_residual
// and reports the worst component. Quantities divided by X^2 throw
// Errc::degenerate_vector when |X^2| < kDegenerateNorm.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grw/curvature.hpp"
#include "grw/metrics.hpp"

namespace grw {

struct Tolerances {
  double closed = 1e-8;  // closed-form checks
  double fd = 1e-5;      // checks that involve theta (finite differences)
};

struct IdentityReport {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  Point point;
  std::optional<double> hypothesis;  // conditional checks only
  bool skipped = false;              // hypothesis did not hold; not enforced
};

struct ChenData {
  VectorJet X;
  double rho = 0.0;
  Tensor d_rho;
  Tensor X_up;          // X^k
  Tensor nabla_X;       // nabla_j X_k
  double X2 = 0.0;      // X^k X_k
  double xi = 0.0;      // X^j R_jm X^m / X^2
  double xi_rho = 0.0;  // -(n-1) X^k d_k rho / X^2
  double eigen_residual = 0.0;
  std::optional<double> theta;  // X^k d_k xi / X^2, absent when 0/0
  Tensor d_xi;                  // d_a xi, Richardson central differences
};

/// Scalar field over spacetime points, used to difference xi.
using ScalarField = std::function<double(const Point&)>;

/// X -> scale X, rho -> scale rho (with derivatives).
ChenCandidate scaled(const ChenCandidate& c, double scale);

/// Rayleigh-quotient xi of the family's candidate at every point.
ScalarField xi_field(const MetricFamily& family, double scale = 1.0);

/// Builds ChenData. With `strict`, throws Errc::not_eigenvector when
/// |R.X - xi X| exceeds `eigen_tol`.
ChenData compute_chen_scalars(const MetricJet& jet, const CurvatureBundle& bundle, const ChenCandidate& cand,
                              const Point& p, const ScalarField& xi, double eigen_tol = 1e-8,
                              bool strict = true);

/// nabla_i Csf_{jk} assembled exactly from d(Weyl) and the candidate jet.
Tensor c_aux_derivative(const MetricJet& jet, const CurvatureBundle& bundle, const ChenData& chen);

/// nabla_j X_k against rho g_jk; fails outright unless X^2 < -kDegenerateNorm.
/// With `fit_rho`, rho is replaced by the trace fit g^{jk} nabla_j X_k / n.
IdentityReport check_concircular(const MetricJet& jet, const ChristoffelData& conn, const ChenCandidate& cand,
                                 const Point& p, double tol, bool fit_rho = false);

IdentityReport check_ricci_eigenvector(const ChenData& chen, const Point& p, double tol);
IdentityReport check_xi_routes(const ChenData& chen, const Point& p, double tol);
IdentityReport check_xi_gradient(const ChenData& chen, const Point& p, double tol);
IdentityReport check_riemann_contraction(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                         const Point& p, double tol);
IdentityReport check_riemann_compatibility(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                           const Point& p, double tol);
IdentityReport check_ricci_decomposition(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                         const Point& p, double tol);
IdentityReport check_weyl_contraction(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                      const Point& p, double tol);
IdentityReport check_scalar_identity(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                     const Point& p, double tol);
IdentityReport check_weyl_compatibility(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                        const Point& p, double tol);
IdentityReport check_weyl_aux_factorization(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c, const Point& p,
                           double tol);
/// First: full divergence expansion in terms of nabla Csf. Second: its trace.
std::pair<IdentityReport, IdentityReport> check_div_weyl_expansion(const MetricJet& jet, const CurvatureBundle& b,
                                                                    const ChenData& c, const Point& p, double tol);
IdentityReport check_aux_transport(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                  const Point& p, double tol);
/// Conditional on X^l nabla^m C_jklm = 0; residual is the worse of the
/// gradient alignment and the reduced divergence formula.
IdentityReport check_grad_scalar_alignment(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                     const Point& p, double tol);

/// (max |C_jklm X^m|, max |nabla^m C_jklm|)
std::pair<double, double> probe_weyl_covanishing(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c);

struct QuasiEinsteinFit {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;
};

/// alpha = (R - xi)/(n-1), beta = xi - alpha; residual against
/// R_jk = alpha g_jk + beta X_j X_k / X^2.
QuasiEinsteinFit fit_quasi_einstein(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c);

IdentityReport check_rw_riemann_structure(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                          const Point& p, double tol);

/// n = 4 only: |C.X| <= tol implies |C| <= 10 tol. Residual is |C| when the
/// antecedent holds and 0 otherwise; tolerance is 10 tol.
IdentityReport check_four_dim_annihilation(const MetricJet& jet, const CurvatureBundle& b, const ChenData& c,
                                           const Point& p, double tol);

// Candidate-independent curvature checks.
IdentityReport check_metric_compatibility(const MetricJet& jet, const CurvatureBundle& b, const Point& p, double tol);
IdentityReport check_first_bianchi(const CurvatureBundle& b, const Point& p, double tol);
IdentityReport check_second_bianchi(const CurvatureBundle& b, const Point& p, double tol);
IdentityReport check_weyl_traceless(const MetricJet& jet, const CurvatureBundle& b, const Point& p, double tol);
IdentityReport check_div_weyl_routes(const MetricJet& jet, const CurvatureBundle& b, const Point& p, double tol);

enum class Classification { not_grw, grw_generic, grw_quasi_einstein, robertson_walker };

std::string to_string(Classification c);

struct CheckSummary {
  std::string name;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool expected_pass = true;
  Point worst_point;
  int evaluated = 0;
  int skipped = 0;

  bool as_expected() const { return pass == expected_pass; }
};

struct ScalarsSample {
  std::optional<double> xi, theta, rho, R, X2;
};

struct SuiteOutcome {
  std::vector<CheckSummary> checks;
  Classification classification = Classification::not_grw;
  /// Quasi-Einstein verdict agrees with the harmonic-Weyl verdict.
  bool harmonic_consistent = true;
  double max_cx = 0.0;        // family max |C.X|
  double max_div_weyl = 0.0;  // family max |div C|
  double max_weyl = 0.0;
  double max_qe_residual = 0.0;
  std::optional<double> max_fiber_traceless;
  ScalarsSample sample;  // at the first point
  int degenerate_points = 0;

  const CheckSummary* find(const std::string& name) const;
  bool all_as_expected() const;
};

/// Runs every applicable check at every point and aggregates by worst
/// residual. `scale` multiplies the candidate (X -> scale X).
SuiteOutcome run_suite(const MetricFamily& family, const std::vector<Point>& points, const Tolerances& tol,
                       double scale = 1.0);

/// Throws Errc::invalid_argument on an empty point list.
Classification classify(const MetricFamily& family, const std::vector<Point>& points, const Tolerances& tol);

}  // namespace grw
