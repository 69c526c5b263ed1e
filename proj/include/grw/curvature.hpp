#pragma once

// Levi-Civita curvature from a metric jet.
//
// Conventions:
//   Gamma^s_{jk} = 1/2 g^{sa} (d_j g_{ak} + d_k g_{aj} - d_a g_{jk})
//   [nabla_i, nabla_j] X_k = R_{ijk}^m X_m     (defines R, lowered on the last slot)
//   R_{ik} = g^{jm} R_{jimk},  R = g^{ik} R_{ik}
// With these, a round sphere has positive scalar curvature and
// R_{im} X^m = -(n-1) nabla_i rho for a concircular field nabla_j X_k = rho g_{jk}.
//
// Every derivative of a curvature tensor is assembled exactly from the order-3
// jet by forward-mode propagation; nothing here differences numerically.

#include "grw/jet.hpp"

namespace grw {

struct ChristoffelData {
  Tensor gamma;   // Gamma^s_{jk}, (up, down, down)
  Tensor dgamma;  // d_a Gamma^s_{jk}, (down, up, down, down)
};

ChristoffelData christoffel(const MetricJet& jet);

/// Curvature tensors without derivative information. Cheap;
/// used where only values are needed (e.g. sampling a scalar field).
struct CurvatureValues {
  Tensor riemann;  // R_{jklm}
  Tensor ricci;    // R_{jk}
  double scalar = 0.0;
  Tensor weyl;     // C_{jklm}
};

CurvatureValues curvature_values(const MetricJet& jet);

struct CurvatureBundle {
  ChristoffelData connection;
  Tensor riemann;    // R_{jklm}
  Tensor ricci;      // R_{jk}
  double scalar = 0.0;
  Tensor weyl;       // C_{jklm}
  Tensor d_riemann;  // nabla_s R_{jklm}
  Tensor d_weyl;     // nabla_s C_{jklm}
  Tensor d_ricci;    // nabla_a R_{jk}
  Tensor d_scalar;   // nabla_a R
  Tensor div_weyl;   // nabla^m C_{jklm}, direct route
};

CurvatureBundle curvature(const MetricJet& jet);

Tensor riemann(const MetricJet& jet);
Tensor ricci(const Tensor& riemann, const MetricJet& jet);
double scalar_curvature(const Tensor& ricci, const MetricJet& jet);

/// Throws Errc::invalid_argument for n < 3.
Tensor weyl(const Tensor& riemann, const Tensor& ricci, double scalar, const MetricJet& jet);

/// nabla^m C_{jklm} by covariant differentiation of the Weyl field itself.
Tensor div_weyl_direct(const MetricJet& jet);
Tensor div_weyl_direct(const CurvatureBundle& bundle, const MetricJet& jet);

/// -(n-3)/(n-2) [nabla_j R_kl - nabla_k R_jl - (g_kl nabla_j R - g_jl nabla_k R) / (2(n-1))]
Tensor div_weyl_via_ricci(const MetricJet& jet);
Tensor div_weyl_via_ricci(const CurvatureBundle& bundle, const MetricJet& jet);

/// C_{ajkb} X^a X^b / X^2 for a covector X. Throws Errc::degenerate_vector
/// when |X^2| < 1e-10.
Tensor c_aux(const Tensor& weyl, const Tensor& X, const MetricJet& jet);

/// Guard used by every quantity that divides by X^2.
inline constexpr double kDegenerateNorm = 1e-10;

/// X^a X_a for a covector X.
double norm2(const Tensor& X, const MetricJet& jet);

}  // namespace grw
