#pragma once

// Forward-mode arithmetic over up to kMaxDim coordinates.
//
//   Dual     value + gradient; carries one derivative through the curvature
//            pipeline so that first derivatives of curvature come out exact.
//   Taylor3  all partial derivatives through order 3; metric families are
//            written once in terms of Taylor3 coordinates and yield exact jets.

#include <array>
#include <cmath>

#include "grw/tensor.hpp"

namespace grw {

struct Dual {
  double v = 0.0;
  std::array<double, kMaxDim> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator-(Dual a) { return a *= -1.0; }
inline Dual operator*(Dual a, double s) { return a *= s; }
inline Dual operator*(double s, Dual a) { return a *= s; }
inline Dual operator*(const Dual& a, const Dual& b) {
  Dual r(a.v * b.v);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

/// Truncated multivariate Taylor expansion through third order. Stores the
/// derivatives themselves, not Taylor coefficients: dd[a][b] = d_a d_b f.
class Taylor3 {
 public:
  Taylor3() = default;
  explicit Taylor3(int dim, double value = 0.0) : n_(dim), v_(value) {}

  /// Coordinate function x^index evaluated at `value`.
  static Taylor3 variable(int dim, int index, double value) {
    Taylor3 t(dim, value);
    t.d_[index] = 1.0;
    return t;
  }

  int dim() const { return n_; }
  double value() const { return v_; }
  double d(int a) const { return d_[a]; }
  double dd(int a, int b) const { return dd_[a][b]; }
  double ddd(int a, int b, int c) const { return ddd_[a][b][c]; }

  Taylor3& operator+=(const Taylor3& o) {
    v_ += o.v_;
    for (int a = 0; a < n_; ++a) {
      d_[a] += o.d_[a];
      for (int b = 0; b < n_; ++b) {
        dd_[a][b] += o.dd_[a][b];
        for (int c = 0; c < n_; ++c) ddd_[a][b][c] += o.ddd_[a][b][c];
      }
    }
    return *this;
  }
  Taylor3& operator*=(double s) {
    v_ *= s;
    for (int a = 0; a < n_; ++a) {
      d_[a] *= s;
      for (int b = 0; b < n_; ++b) {
        dd_[a][b] *= s;
        for (int c = 0; c < n_; ++c) ddd_[a][b][c] *= s;
      }
    }
    return *this;
  }
  Taylor3& operator+=(double s) {
    v_ += s;
    return *this;
  }

  friend Taylor3 operator*(const Taylor3& f, const Taylor3& g) {
    const int n = f.n_;
    Taylor3 r(n, f.v_ * g.v_);
    for (int a = 0; a < n; ++a) {
      r.d_[a] = f.d_[a] * g.v_ + f.v_ * g.d_[a];
      for (int b = 0; b < n; ++b) {
        r.dd_[a][b] = f.dd_[a][b] * g.v_ + f.d_[a] * g.d_[b] + f.d_[b] * g.d_[a] + f.v_ * g.dd_[a][b];
        for (int c = 0; c < n; ++c) {
          r.ddd_[a][b][c] = f.ddd_[a][b][c] * g.v_ + f.v_ * g.ddd_[a][b][c] +
                            f.dd_[a][b] * g.d_[c] + f.dd_[a][c] * g.d_[b] + f.dd_[b][c] * g.d_[a] +
                            f.d_[a] * g.dd_[b][c] + f.d_[b] * g.dd_[a][c] + f.d_[c] * g.dd_[a][b];
        }
      }
    }
    return r;
  }

  /// phi(f) given phi and its first three derivatives at f.value().
  Taylor3 compose(double p0, double p1, double p2, double p3) const {
    const int n = n_;
    Taylor3 r(n, p0);
    for (int a = 0; a < n; ++a) {
      r.d_[a] = p1 * d_[a];
      for (int b = 0; b < n; ++b) {
        r.dd_[a][b] = p2 * d_[a] * d_[b] + p1 * dd_[a][b];
        for (int c = 0; c < n; ++c) {
          r.ddd_[a][b][c] = p3 * d_[a] * d_[b] * d_[c] +
                            p2 * (dd_[a][b] * d_[c] + dd_[a][c] * d_[b] + dd_[b][c] * d_[a]) +
                            p1 * ddd_[a][b][c];
        }
      }
    }
    return r;
  }

 private:
  int n_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxDim> d_{};
  std::array<std::array<double, kMaxDim>, kMaxDim> dd_{};
  std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim> ddd_{};
};

inline Taylor3 operator+(Taylor3 a, const Taylor3& b) { return a += b; }
inline Taylor3 operator-(Taylor3 a, const Taylor3& b) {
  Taylor3 nb = b;
  nb *= -1.0;
  return a += nb;
}
inline Taylor3 operator-(Taylor3 a) { return a *= -1.0; }
inline Taylor3 operator*(Taylor3 a, double s) { return a *= s; }
inline Taylor3 operator*(double s, Taylor3 a) { return a *= s; }
inline Taylor3 operator+(Taylor3 a, double s) { return a += s; }
inline Taylor3 operator+(double s, Taylor3 a) { return a += s; }
inline Taylor3 operator-(Taylor3 a, double s) { return a += -s; }
inline Taylor3 operator-(double s, const Taylor3& a) { return -a + s; }

inline Taylor3 exp(const Taylor3& f) {
  const double e = std::exp(f.value());
  return f.compose(e, e, e, e);
}
inline Taylor3 sin(const Taylor3& f) {
  const double s = std::sin(f.value()), c = std::cos(f.value());
  return f.compose(s, c, -s, -c);
}
inline Taylor3 cos(const Taylor3& f) {
  const double s = std::sin(f.value()), c = std::cos(f.value());
  return f.compose(c, -s, -c, s);
}
inline Taylor3 sinh(const Taylor3& f) {
  const double s = std::sinh(f.value()), c = std::cosh(f.value());
  return f.compose(s, c, s, c);
}
inline Taylor3 cosh(const Taylor3& f) {
  const double s = std::sinh(f.value()), c = std::cosh(f.value());
  return f.compose(c, s, c, s);
}
/// f^p for f > 0.
inline Taylor3 pow(const Taylor3& f, double p) {
  const double x = f.value();
  return f.compose(std::pow(x, p), p * std::pow(x, p - 1.0), p * (p - 1.0) * std::pow(x, p - 2.0),
                   p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0));
}
inline Taylor3 reciprocal(const Taylor3& f) {
  const double x = f.value();
  const double r = 1.0 / x;
  return f.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}
inline Taylor3 operator/(const Taylor3& f, const Taylor3& g) { return f * reciprocal(g); }
inline Taylor3 square(const Taylor3& f) { return f * f; }

}  // namespace grw
