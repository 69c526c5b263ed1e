#include "grw/jet.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace grw {

namespace {

Eigen::MatrixXd to_matrix(const Tensor& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  return m;
}

void require_finite(const Tensor& t, const char* what) {
  for (double x : t.data()) {
    if (!std::isfinite(x)) throw Error(Errc::invalid_argument, std::string(what) + " has non-finite entries");
  }
}

// Symmetric in the trailing metric pair, relative tolerance.
void require_metric_symmetry(const Tensor& t, const char* what) {
  const int n = t.dim();
  const int r = t.rank();
  const double scale = std::max(1.0, max_abs(t));
  std::array<int, kMaxRank> idx{};
  for (std::size_t f = 0; f < t.size(); ++f) {
    unflatten(f, n, r, idx);
    std::swap(idx[r - 2], idx[r - 1]);
    std::size_t off = 0;
    for (int s = 0; s < r; ++s) off = off * n + idx[s];
    if (std::abs(t.flat(f) - t.flat(off)) > 1e-12 * scale) {
      throw Error(Errc::invalid_argument, std::string(what) + " is not symmetric in its metric slots");
    }
  }
}

// Replaces slot `slot` of t by contraction with the rank-2 tensor m.
Tensor apply_on_slot(const Tensor& t, int slot, const Tensor& m, Slot new_variance) {
  const int n = t.dim();
  const int r = t.rank();
  Variance v = t.variance();
  v[slot] = new_variance;
  Tensor out(n, v);
  std::array<int, kMaxRank> idx{};
  std::size_t stride = 1;
  for (int s = r - 1; s > slot; --s) stride *= n;
  for (std::size_t f = 0; f < out.size(); ++f) {
    unflatten(f, n, r, idx);
    const int target = idx[slot];
    const std::size_t base = f - static_cast<std::size_t>(target) * stride;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += m(target, a) * t.flat(base + a * stride);
    out.flat(f) = acc;
  }
  return out;
}

}  // namespace

int negative_eigenvalues(const Tensor& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_matrix(g), Eigen::EigenvaluesOnly);
  int neg = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) neg += es.eigenvalues()(i) < 0.0 ? 1 : 0;
  return neg;
}

MetricJet make_metric_jet(Tensor g, Tensor dg, Tensor ddg, Tensor dddg, Signature signature) {
  const int n = g.dim();
  if (g.rank() != 2 || dg.rank() != 3 || ddg.rank() != 4 || dddg.rank() != 5 || dg.dim() != n ||
      ddg.dim() != n || dddg.dim() != n) {
    throw Error(Errc::shape, "metric jet: inconsistent ranks or dimensions");
  }
  if (g.variance() != down(2)) throw Error(Errc::variance, "metric jet: g must be (down, down)");
  require_finite(g, "g");
  require_finite(dg, "dg");
  require_finite(ddg, "ddg");
  require_finite(dddg, "dddg");
  require_metric_symmetry(g, "g");
  require_metric_symmetry(dg, "dg");
  require_metric_symmetry(ddg, "ddg");
  require_metric_symmetry(dddg, "dddg");

  const Eigen::MatrixXd m = to_matrix(g);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw Error(Errc::singular_metric, "metric is singular");
  const Eigen::MatrixXd inv = lu.inverse();
  const double err = (inv * m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(err) || err > 1e-10) throw Error(Errc::singular_metric, "metric inverse is ill-conditioned");

  const int want = signature == Signature::lorentzian ? 1 : 0;
  if (negative_eigenvalues(g) != want) {
    throw Error(Errc::invalid_argument, signature == Signature::lorentzian
                                            ? "metric is not Lorentzian (-,+,...,+)"
                                            : "metric is not positive definite");
  }

  MetricJet jet{std::move(g), std::move(dg), std::move(ddg), std::move(dddg), Tensor(n, {Slot::up, Slot::up})};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) jet.g_inv(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  }
  return jet;
}

Tensor raise_index(const Tensor& t, int slot, const MetricJet& jet) {
  if (slot < 0 || slot >= t.rank()) throw Error(Errc::invalid_argument, "raise_index: slot out of range");
  if (t.dim() != jet.dim()) throw Error(Errc::shape, "raise_index: dimension mismatch");
  if (t.variance()[slot] != Slot::down) throw Error(Errc::variance, "raise_index: slot is already up");
  return apply_on_slot(t, slot, jet.g_inv, Slot::up);
}

Tensor lower_index(const Tensor& t, int slot, const MetricJet& jet) {
  if (slot < 0 || slot >= t.rank()) throw Error(Errc::invalid_argument, "lower_index: slot out of range");
  if (t.dim() != jet.dim()) throw Error(Errc::shape, "lower_index: dimension mismatch");
  if (t.variance()[slot] != Slot::up) throw Error(Errc::variance, "lower_index: slot is already down");
  return apply_on_slot(t, slot, jet.g, Slot::down);
}

Tensor covariant_derivative(const Tensor& value, const Tensor& partial, const Tensor& gamma) {
  const int n = value.dim();
  const int r = value.rank();
  if (partial.dim() != n || gamma.dim() != n) throw Error(Errc::shape, "covariant_derivative: dimension mismatch");
  if (partial.rank() != r + 1 || gamma.rank() != 3) throw Error(Errc::shape, "covariant_derivative: rank mismatch");
  if (gamma.variance() != Variance{Slot::up, Slot::down, Slot::down}) {
    throw Error(Errc::variance, "covariant_derivative: gamma must be (up, down, down)");
  }
  Variance v{Slot::down};
  v.insert(v.end(), value.variance().begin(), value.variance().end());
  Tensor out(n, v);

  std::array<int, kMaxRank> idx{};
  std::array<std::size_t, kMaxRank> stride{};
  {
    std::size_t s = 1;
    for (int k = r - 1; k >= 0; --k) {
      stride[k] = s;
      s *= n;
    }
  }
  const std::size_t block = value.size();
  for (int a = 0; a < n; ++a) {
    for (std::size_t f = 0; f < block; ++f) {
      double acc = partial.flat(a * block + f);
      if (r > 0) unflatten(f, n, r, idx);
      for (int slot = 0; slot < r; ++slot) {
        const int j = idx[slot];
        const std::size_t base = f - static_cast<std::size_t>(j) * stride[slot];
        if (value.variance()[slot] == Slot::down) {
          for (int s = 0; s < n; ++s) acc -= gamma(s, a, j) * value.flat(base + s * stride[slot]);
        } else {
          for (int s = 0; s < n; ++s) acc += gamma(j, a, s) * value.flat(base + s * stride[slot]);
        }
      }
      out.flat(a * block + f) = acc;
    }
  }
  return out;
}

}  // namespace grw
