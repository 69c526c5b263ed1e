#pragma once

// Pointwise jets: a metric or covector field together with its coordinate
// partial derivatives at one point. Derivative slots always come first, so
// dg(a, j, k) is d_a g_jk and dddg(a, b, c, j, k) is d_a d_b d_c g_jk.

#include <vector>

#include "grw/tensor.hpp"

namespace grw {

struct Point {
  std::vector<double> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
};

enum class Signature { lorentzian, riemannian };

struct MetricJet {
  Tensor g;      // (down, down)
  Tensor dg;     // rank 3
  Tensor ddg;    // rank 4
  Tensor dddg;   // rank 5
  Tensor g_inv;  // (up, up)

  int dim() const { return g.dim(); }
};

/// Checks g is a finite symmetric tensor of the requested signature, then inverts it.
/// Throws Errc::singular_metric if g cannot be inverted, Errc::invalid_argument
/// if the signature or symmetries are wrong.
MetricJet make_metric_jet(Tensor g, Tensor dg, Tensor ddg, Tensor dddg,
                          Signature signature = Signature::lorentzian);

/// Covector field jet: X_k, d_a X_k, d_a d_b X_k.
struct VectorJet {
  Tensor X;
  Tensor dX;
  Tensor ddX;

  int dim() const { return X.dim(); }
};

/// Number of negative eigenvalues of g.
int negative_eigenvalues(const Tensor& g);

/// Contracts slot `slot` (which must be down) with g^{..}.
Tensor raise_index(const Tensor& t, int slot, const MetricJet& jet);

/// Contracts slot `slot` (which must be up) with g_{..}.
Tensor lower_index(const Tensor& t, int slot, const MetricJet& jet);

/// nabla_a T from T and its partials d_a T (derivative slot first).
/// `gamma` is Gamma^s_{jk} with variance (up, down, down). Down slots pick up
/// -Gamma^s_{a j} T_{..s..}, up slots +Gamma^j_{a s} T^{..s..}.
Tensor covariant_derivative(const Tensor& value, const Tensor& partial, const Tensor& gamma);

}  // namespace grw
