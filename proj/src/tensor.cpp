#include "grw/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace grw {

Variance down(int rank) { return Variance(static_cast<std::size_t>(rank), Slot::down); }

std::string to_string(const Variance& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i] == Slot::up ? "up" : "down";
  }
  return s + ")";
}

Tensor scalar_tensor(int dim, double value) {
  Tensor t(dim, {});
  t.flat(0) = value;
  return t;
}

void unflatten(std::size_t flat, int dim, int rank, std::span<int> out) {
  const auto n = static_cast<std::size_t>(dim);
  for (int s = rank - 1; s >= 0; --s) {
    out[s] = static_cast<int>(flat % n);
    flat /= n;
  }
}

bool same_shape(const Tensor& a, const Tensor& b) {
  return a.dim() == b.dim() && a.variance() == b.variance();
}

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!same_shape(a, b)) {
    throw Error(Errc::shape, std::string(op) + ": shape mismatch " + to_string(a.variance()) +
                                 " vs " + to_string(b.variance()));
  }
}

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "operator+");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.flat(i) += b.flat(i);
  return out;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "operator-");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.flat(i) -= b.flat(i);
  return out;
}

Tensor operator*(double s, const Tensor& a) {
  Tensor out = a;
  for (auto& x : out.data()) x *= s;
  return out;
}

Tensor operator*(const Tensor& a, double s) { return s * a; }

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double x : t.data()) m = std::max(m, std::abs(x));
  return m;
}

double rel_residual(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "rel_residual");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a.flat(i) - b.flat(i)));
  return diff / std::max({1.0, max_abs(a), max_abs(b)});
}

double rel_residual(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

Tensor outer(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) throw Error(Errc::shape, "outer: dimension mismatch");
  Variance v = a.variance();
  v.insert(v.end(), b.variance().begin(), b.variance().end());
  Tensor out(a.dim(), std::move(v));
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) out.flat(i * nb + j) = a.flat(i) * b.flat(j);
  }
  return out;
}

Tensor contract(const Tensor& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (r < 2) throw Error(Errc::shape, "contract: rank below 2");
  if (slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r) {
    throw Error(Errc::invalid_argument, "contract: slot out of range");
  }
  if (slot_a == slot_b) throw Error(Errc::invalid_argument, "contract: same slot twice");
  const auto& var = t.variance();
  if (var[slot_a] == var[slot_b]) {
    throw Error(Errc::variance, "contract: slots " + std::to_string(slot_a) + "," +
                                    std::to_string(slot_b) + " have equal variance " +
                                    to_string(var));
  }
  Variance out_var;
  for (int s = 0; s < r; ++s) {
    if (s != slot_a && s != slot_b) out_var.push_back(var[s]);
  }
  const std::size_t n = t.dim();
  Tensor out(t.dim(), out_var);
  std::array<int, kMaxRank> idx{};
  for (std::size_t f = 0; f < t.size(); ++f) {
    unflatten(f, t.dim(), r, idx);
    if (idx[slot_a] != idx[slot_b]) continue;
    std::size_t off = 0;
    for (int s = 0; s < r; ++s) {
      if (s != slot_a && s != slot_b) off = off * n + idx[s];
    }
    out.flat(off) += t.flat(f);
  }
  return out;
}

Tensor permute(const Tensor& t, std::initializer_list<int> perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw Error(Errc::shape, "permute: wrong permutation length");
  std::array<int, kMaxRank> p{};
  std::array<bool, kMaxRank> seen{};
  int i = 0;
  for (int s : perm) {
    if (s < 0 || s >= r || seen[s]) throw Error(Errc::invalid_argument, "permute: not a permutation");
    seen[s] = true;
    p[i++] = s;
  }
  Variance v(r);
  for (int s = 0; s < r; ++s) v[s] = t.variance()[p[s]];
  const std::size_t n = t.dim();
  Tensor out(t.dim(), v);
  std::array<int, kMaxRank> idx{};
  std::array<int, kMaxRank> src{};
  for (std::size_t f = 0; f < out.size(); ++f) {
    unflatten(f, t.dim(), r, idx);
    for (int s = 0; s < r; ++s) src[p[s]] = idx[s];
    std::size_t off = 0;
    for (int s = 0; s < r; ++s) off = off * n + src[s];
    out.flat(f) = t.flat(off);
  }
  return out;
}

Tensor kronecker(int dim) {
  Tensor d(dim, {Slot::up, Slot::down});
  for (int i = 0; i < dim; ++i) d(i, i) = 1.0;
  return d;
}

}  // namespace grw
