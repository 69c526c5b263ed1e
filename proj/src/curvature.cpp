#include "grw/curvature.hpp"

#include <cmath>
#include <vector>

#include "grw/autodiff.hpp"

namespace grw {

namespace {

// Flat index helpers over a fixed dimension.
struct Ix {
  int n;
  int operator()(int a, int b) const { return a * n + b; }
  int operator()(int a, int b, int c) const { return (a * n + b) * n + c; }
  int operator()(int a, int b, int c, int d) const { return ((a * n + b) * n + c) * n + d; }
};

// Metric data the pipeline consumes. S is double (values only) or Dual
// (values plus one coordinate derivative).
template <class S>
struct Inputs {
  int n = 0;
  std::vector<S> g, g_inv;  // n^2
  std::vector<S> dg;        // d_a g_jk, n^3
  std::vector<S> ddg;       // d_a d_b g_jk, n^4
};

template <class S>
struct Outputs {
  std::vector<S> gamma;    // Gamma^s_jk
  std::vector<S> dgamma;   // d_b Gamma^s_jk
  std::vector<S> riemann;  // R_jklm
  std::vector<S> ricci;
  S scalar{};
  std::vector<S> weyl;
};

template <class S>
Outputs<S> run_pipeline(const Inputs<S>& in) {
  const int n = in.n;
  const Ix ix{n};
  const auto n2 = static_cast<std::size_t>(n * n);
  const std::size_t n3 = n2 * n, n4 = n3 * n;
  Outputs<S> out;

  // First-kind symbols and their derivatives.
  std::vector<S> g1(n3), dg1(n4);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        g1[ix(a, j, k)] = 0.5 * (in.dg[ix(j, a, k)] + in.dg[ix(k, a, j)] - in.dg[ix(a, j, k)]);
        for (int b = 0; b < n; ++b) {
          dg1[ix(b, a, j, k)] =
              0.5 * (in.ddg[ix(b, j, a, k)] + in.ddg[ix(b, k, a, j)] - in.ddg[ix(b, a, j, k)]);
        }
      }

  // d_b g^{sa} = -g^{sp} d_b g_pq g^{qa}
  std::vector<S> dginv(n3);
  for (int b = 0; b < n; ++b)
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < n; ++a) {
        S acc{};
        for (int p = 0; p < n; ++p) {
          S inner{};
          for (int q = 0; q < n; ++q) inner += in.dg[ix(b, p, q)] * in.g_inv[ix(q, a)];
          acc += in.g_inv[ix(s, p)] * inner;
        }
        dginv[ix(b, s, a)] = -acc;
      }

  out.gamma.assign(n3, S{});
  out.dgamma.assign(n4, S{});
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S acc{};
        for (int a = 0; a < n; ++a) acc += in.g_inv[ix(s, a)] * g1[ix(a, j, k)];
        out.gamma[ix(s, j, k)] = acc;
        for (int b = 0; b < n; ++b) {
          S dacc{};
          for (int a = 0; a < n; ++a) {
            dacc += dginv[ix(b, s, a)] * g1[ix(a, j, k)] + in.g_inv[ix(s, a)] * dg1[ix(b, a, j, k)];
          }
          out.dgamma[ix(b, s, j, k)] = dacc;
        }
      }

  // Commutator convention: [nabla_i, nabla_j] X_k = R_{ijk}^m X_m with
  // R_{ijk}^m = -(d_i Gamma^m_jk - d_j Gamma^m_ik + Gamma^m_is Gamma^s_jk - Gamma^m_js Gamma^s_ik).
  std::vector<S> mixed(n4);  // R_{ijk}^m
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          S acc = out.dgamma[ix(i, m, j, k)] - out.dgamma[ix(j, m, i, k)];
          for (int s = 0; s < n; ++s) {
            acc += out.gamma[ix(m, i, s)] * out.gamma[ix(s, j, k)] -
                   out.gamma[ix(m, j, s)] * out.gamma[ix(s, i, k)];
          }
          mixed[ix(i, j, k, m)] = -acc;
        }
  out.riemann.assign(n4, S{});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          S acc{};
          for (int p = 0; p < n; ++p) acc += in.g[ix(m, p)] * mixed[ix(i, j, k, p)];
          out.riemann[ix(i, j, k, m)] = acc;
        }

  out.ricci.assign(n2, S{});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      S acc{};
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) acc += in.g_inv[ix(j, m)] * out.riemann[ix(j, i, m, k)];
      out.ricci[ix(i, k)] = acc;
    }
  out.scalar = S{};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out.scalar += in.g_inv[ix(i, k)] * out.ricci[ix(i, k)];

  if (n >= 3) {
    const double a = 1.0 / (n - 2);
    const double b = 1.0 / ((n - 1.0) * (n - 2.0));
    out.weyl.assign(n4, S{});
    const auto& g = in.g;
    const auto& rc = out.ricci;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            const int jm = ix(j, m), kl = ix(k, l), km = ix(k, m), jl = ix(j, l);
            out.weyl[ix(j, k, l, m)] =
                out.riemann[ix(j, k, l, m)] +
                a * (g[jm] * rc[kl] - g[km] * rc[jl] + rc[jm] * g[kl] - rc[km] * g[jl]) -
                b * (out.scalar * (g[jm] * g[kl] - g[jl] * g[km]));
          }
  }
  return out;
}

Inputs<double> plain_inputs(const MetricJet& jet) {
  Inputs<double> in;
  in.n = jet.dim();
  auto copy = [](const Tensor& t) { return std::vector<double>(t.data().begin(), t.data().end()); };
  in.g = copy(jet.g);
  in.g_inv = copy(jet.g_inv);
  in.dg = copy(jet.dg);
  in.ddg = copy(jet.ddg);
  return in;
}

Inputs<Dual> dual_inputs(const MetricJet& jet) {
  const int n = jet.dim();
  const Ix ix{n};
  Inputs<Dual> in;
  in.n = n;
  const auto n2 = static_cast<std::size_t>(n * n);
  in.g.resize(n2);
  in.g_inv.resize(n2);
  in.dg.resize(n2 * n);
  in.ddg.resize(n2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Dual& g = in.g[ix(j, k)];
      g.v = jet.g(j, k);
      for (int a = 0; a < n; ++a) g.d[a] = jet.dg(a, j, k);
      Dual& gi = in.g_inv[ix(j, k)];
      gi.v = jet.g_inv(j, k);
      for (int a = 0; a < n; ++a) {
        double acc = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) acc += jet.g_inv(j, p) * jet.dg(a, p, q) * jet.g_inv(q, k);
        gi.d[a] = -acc;
      }
      for (int a = 0; a < n; ++a) {
        Dual& dg = in.dg[ix(a, j, k)];
        dg.v = jet.dg(a, j, k);
        for (int b = 0; b < n; ++b) dg.d[b] = jet.ddg(b, a, j, k);
        for (int b = 0; b < n; ++b) {
          Dual& ddg = in.ddg[ix(a, b, j, k)];
          ddg.v = jet.ddg(a, b, j, k);
          for (int c = 0; c < n; ++c) ddg.d[c] = jet.dddg(c, a, b, j, k);
        }
      }
    }
  return in;
}

Tensor to_tensor(const std::vector<double>& v, int n, Variance var) {
  Tensor t(n, std::move(var));
  for (std::size_t i = 0; i < t.size(); ++i) t.flat(i) = v[i];
  return t;
}

Tensor value_of(const std::vector<Dual>& v, int n, Variance var) {
  Tensor t(n, std::move(var));
  for (std::size_t i = 0; i < t.size(); ++i) t.flat(i) = v[i].v;
  return t;
}

// Partial derivatives with the derivative slot prepended.
Tensor partial_of(const std::vector<Dual>& v, int n, const Variance& var) {
  Variance pv{Slot::down};
  pv.insert(pv.end(), var.begin(), var.end());
  Tensor t(n, pv);
  const std::size_t block = v.size();
  for (int a = 0; a < n; ++a)
    for (std::size_t i = 0; i < block; ++i) t.flat(a * block + i) = v[i].d[a];
  return t;
}

void require_dim3(int n) {
  if (n < 3) throw Error(Errc::invalid_argument, "Weyl tensor requires n >= 3, got " + std::to_string(n));
}

}  // namespace

ChristoffelData christoffel(const MetricJet& jet) {
  const auto out = run_pipeline(plain_inputs(jet));
  const int n = jet.dim();
  return {to_tensor(out.gamma, n, {Slot::up, Slot::down, Slot::down}),
          to_tensor(out.dgamma, n, {Slot::down, Slot::up, Slot::down, Slot::down})};
}

CurvatureValues curvature_values(const MetricJet& jet) {
  const int n = jet.dim();
  const auto out = run_pipeline(plain_inputs(jet));
  CurvatureValues cv;
  cv.riemann = to_tensor(out.riemann, n, down(4));
  cv.ricci = to_tensor(out.ricci, n, down(2));
  cv.scalar = out.scalar;
  if (n >= 3) cv.weyl = to_tensor(out.weyl, n, down(4));
  return cv;
}

Tensor riemann(const MetricJet& jet) { return curvature_values(jet).riemann; }

Tensor ricci(const Tensor& riemann, const MetricJet& jet) {
  if (riemann.rank() != 4 || riemann.variance() != down(4)) throw Error(Errc::variance, "ricci: expects R_{jklm}");
  // g^{jm} R_{jimk}: raise slot 0, trace it against slot 2.
  return contract(raise_index(riemann, 0, jet), 0, 2);
}

double scalar_curvature(const Tensor& ricci, const MetricJet& jet) {
  return contract(raise_index(ricci, 0, jet), 0, 1).flat(0);
}

Tensor weyl(const Tensor& riemann, const Tensor& ricci, double scalar, const MetricJet& jet) {
  const int n = jet.dim();
  require_dim3(n);
  const auto& g = jet.g;
  const double a = 1.0 / (n - 2);
  const double b = 1.0 / ((n - 1.0) * (n - 2.0));
  Tensor c(n, down(4));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          c(j, k, l, m) = riemann(j, k, l, m) +
                          a * (g(j, m) * ricci(k, l) - g(k, m) * ricci(j, l) + ricci(j, m) * g(k, l) -
                               ricci(k, m) * g(j, l)) -
                          b * scalar * (g(j, m) * g(k, l) - g(j, l) * g(k, m));
        }
  return c;
}

CurvatureBundle curvature(const MetricJet& jet) {
  const int n = jet.dim();
  require_dim3(n);
  const auto out = run_pipeline(dual_inputs(jet));

  CurvatureBundle b;
  b.connection.gamma = value_of(out.gamma, n, {Slot::up, Slot::down, Slot::down});
  b.connection.dgamma = value_of(out.dgamma, n, {Slot::down, Slot::up, Slot::down, Slot::down});
  const auto& gamma = b.connection.gamma;

  b.riemann = value_of(out.riemann, n, down(4));
  b.ricci = value_of(out.ricci, n, down(2));
  b.scalar = out.scalar.v;
  b.weyl = value_of(out.weyl, n, down(4));

  b.d_riemann = covariant_derivative(b.riemann, partial_of(out.riemann, n, down(4)), gamma);
  b.d_weyl = covariant_derivative(b.weyl, partial_of(out.weyl, n, down(4)), gamma);
  b.d_ricci = covariant_derivative(b.ricci, partial_of(out.ricci, n, down(2)), gamma);
  b.d_scalar = Tensor(n, down(1));
  for (int a = 0; a < n; ++a) b.d_scalar(a) = out.scalar.d[a];

  b.div_weyl = div_weyl_direct(b, jet);
  return b;
}

Tensor div_weyl_direct(const CurvatureBundle& bundle, const MetricJet& jet) {
  // nabla^m C_{jklm}: raise the derivative slot and trace it with slot m.
  return contract(raise_index(bundle.d_weyl, 0, jet), 0, 4);
}

Tensor div_weyl_direct(const MetricJet& jet) { return curvature(jet).div_weyl; }

Tensor div_weyl_via_ricci(const CurvatureBundle& bundle, const MetricJet& jet) {
  const int n = jet.dim();
  require_dim3(n);
  const double pre = -(n - 3.0) / (n - 2.0);
  const double half = 1.0 / (2.0 * (n - 1.0));
  const auto& dR = bundle.d_ricci;
  const auto& ds = bundle.d_scalar;
  const auto& g = jet.g;
  Tensor out(n, down(3));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        out(j, k, l) =
            pre * (dR(j, k, l) - dR(k, j, l) - half * (g(k, l) * ds(j) - g(j, l) * ds(k)));
      }
  return out;
}

Tensor div_weyl_via_ricci(const MetricJet& jet) { return div_weyl_via_ricci(curvature(jet), jet); }

double norm2(const Tensor& X, const MetricJet& jet) {
  if (X.rank() != 1 || X.variance()[0] != Slot::down) throw Error(Errc::variance, "norm2: expects a covector");
  const int n = jet.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += jet.g_inv(i, j) * X(i) * X(j);
  return s;
}

Tensor c_aux(const Tensor& weyl, const Tensor& X, const MetricJet& jet) {
  const int n = jet.dim();
  const double x2 = norm2(X, jet);
  if (std::abs(x2) < kDegenerateNorm) {
    throw Error(Errc::degenerate_vector, "c_aux: |X^2| below " + std::to_string(kDegenerateNorm));
  }
  const Tensor xu = raise_index(X, 0, jet);
  Tensor c(n, down(2));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += weyl(a, j, k, b) * xu(a) * xu(b);
      c(j, k) = acc / x2;
    }
  return c;
}

}  // namespace grw
