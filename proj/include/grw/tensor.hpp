#pragma once

// Dense index-aware tensors with runtime variance tracking.
//
// Storage is row-major over all slots, so component (i, j, k) of a rank-3
// tensor in dimension n lives at (i * n + j) * n + k. Ranks above 5 are
// rejected; every quantity in this library fits within rank 5.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "grw/error.hpp"

namespace grw {

inline constexpr int kMaxDim = 6;
inline constexpr int kMaxRank = 5;

enum class Slot : unsigned char { up, down };

using Variance = std::vector<Slot>;

/// All-down variance of the given rank.
Variance down(int rank);

std::string to_string(const Variance& v);

template <class T>
class BasicTensor {
 public:
  BasicTensor() = default;

  BasicTensor(int dim, Variance variance)
      : dim_(dim), variance_(std::move(variance)) {
    if (dim < 1 || dim > kMaxDim) {
      throw Error(Errc::invalid_argument, "tensor dimension out of range: " + std::to_string(dim));
    }
    if (static_cast<int>(variance_.size()) > kMaxRank) {
      throw Error(Errc::invalid_argument, "tensor rank above " + std::to_string(kMaxRank));
    }
    std::size_t size = 1;
    for (std::size_t i = 0; i < variance_.size(); ++i) size *= static_cast<std::size_t>(dim);
    data_.assign(size, T{});
  }

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  const Variance& variance() const noexcept { return variance_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  T& flat(std::size_t i) { return data_[i]; }
  const T& flat(std::size_t i) const { return data_[i]; }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  /// Same shape, replaced variance (used when a slot is raised or lowered).
  BasicTensor with_variance(Variance v) const {
    if (v.size() != variance_.size()) throw Error(Errc::shape, "with_variance: rank mismatch");
    BasicTensor out = *this;
    out.variance_ = std::move(v);
    return out;
  }

 private:
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  Variance variance_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<double>;

/// Rank-0 tensor holding `value`.
Tensor scalar_tensor(int dim, double value);

/// Unpacks a flat index into per-slot indices (most significant slot first).
void unflatten(std::size_t flat, int dim, int rank, std::span<int> out);

bool same_shape(const Tensor& a, const Tensor& b);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(double s, const Tensor& a);
Tensor operator*(const Tensor& a, double s);

double max_abs(const Tensor& t);

/// max|a - b| / max(1, max|a|, max|b|). Requires equal shape and variance.
double rel_residual(const Tensor& a, const Tensor& b);

/// Scalar analogue of rel_residual.
double rel_residual(double a, double b);

/// Tensor product; slots of `a` come first.
Tensor outer(const Tensor& a, const Tensor& b);

/// Trace over one up and one down slot. Rank drops by two; remaining slots
/// keep their order.
Tensor contract(const Tensor& t, int slot_a, int slot_b);

/// Reorders slots: result slot i is input slot perm[i].
Tensor permute(const Tensor& t, std::initializer_list<int> perm);

/// Identity map delta^j_k, variance (up, down).
Tensor kronecker(int dim);

}  // namespace grw
