#include <gtest/gtest.h>

#include <random>

#include "grw/jet.hpp"
#include "grw/tensor.hpp"

using namespace grw;

namespace {

MetricJet constant_jet(const Tensor& g, Signature sig = Signature::lorentzian) {
  const int n = g.dim();
  return make_metric_jet(g, Tensor(n, down(3)), Tensor(n, down(4)), Tensor(n, down(5)), sig);
}

Tensor random_tensor(int n, Variance v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(n, std::move(v));
  for (std::size_t i = 0; i < t.size(); ++i) t.flat(i) = u(rng);
  return t;
}

// A generic Lorentzian metric with off-diagonal terms.
Tensor skewed_lorentzian() {
  Tensor g(4, down(2));
  const double rows[4][4] = {{-1.3, 0.2, 0.1, 0.0}, {0.2, 1.1, 0.3, -0.1}, {0.1, 0.3, 2.0, 0.2}, {0.0, -0.1, 0.2, 0.9}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rows[i][j];
  return g;
}

}  // namespace

TEST(Tensor, ConstructionAndIndexing) {
  Tensor t(3, down(2));
  EXPECT_EQ(t.dim(), 3);
  EXPECT_EQ(t.rank(), 2);
  EXPECT_EQ(t.size(), 9u);
  t(1, 2) = 5.0;
  EXPECT_EQ(t.flat(5), 5.0);
  EXPECT_THROW(Tensor(0, down(1)), Error);
  EXPECT_THROW(Tensor(kMaxDim + 1, down(1)), Error);
  EXPECT_THROW(Tensor(2, down(kMaxRank + 1)), Error);
}

TEST(Tensor, UnflattenInvertsRowMajorOffset) {
  Tensor t(3, down(3));
  int idx[3];
  for (std::size_t f = 0; f < t.size(); ++f) {
    unflatten(f, 3, 3, idx);
    EXPECT_EQ(&t(idx[0], idx[1], idx[2]), &t.flat(f));
  }
}

TEST(Tensor, RelResidualDefinition) {
  Tensor a(2, down(1)), b(2, down(1));
  a(0) = 1e-3;
  EXPECT_DOUBLE_EQ(rel_residual(a, b), 1e-3);  // floor of 1 in the denominator
  a(0) = 10.0;
  b(0) = 9.0;
  EXPECT_DOUBLE_EQ(rel_residual(a, b), 0.1);
  EXPECT_DOUBLE_EQ(rel_residual(4.0, 2.0), 0.5);
  EXPECT_THROW(rel_residual(Tensor(2, down(1)), Tensor(3, down(1))), Error);
}

TEST(Tensor, RaiseLowerRoundTrip) {
  std::mt19937_64 rng(7);
  const MetricJet jet = constant_jet(skewed_lorentzian());
  const Tensor t = random_tensor(4, down(3), rng);
  for (int slot = 0; slot < 3; ++slot) {
    const Tensor back = lower_index(raise_index(t, slot, jet), slot, jet);
    EXPECT_LT(rel_residual(back, t), 1e-12) << "slot " << slot;
  }
}

TEST(Tensor, RaiseRejectsUpSlot) {
  const MetricJet jet = constant_jet(skewed_lorentzian());
  const Tensor t(4, {Slot::up, Slot::down});
  EXPECT_THROW(raise_index(t, 0, jet), Error);
  EXPECT_THROW(lower_index(t, 1, jet), Error);
  EXPECT_THROW(raise_index(t, 2, jet), Error);
}

TEST(Tensor, ContractionIsLinear) {
  std::mt19937_64 rng(11);
  const Variance v{Slot::up, Slot::down, Slot::down};
  const Tensor a = random_tensor(4, v, rng);
  const Tensor b = random_tensor(4, v, rng);
  const Tensor lhs = contract(2.5 * a + b, 0, 1);
  const Tensor rhs = 2.5 * contract(a, 0, 1) + contract(b, 0, 1);
  EXPECT_LT(rel_residual(lhs, rhs), 1e-14);
  EXPECT_EQ(lhs.rank(), 1);
}

TEST(Tensor, ContractionVarianceChecks) {
  const Tensor dd(3, down(2));
  EXPECT_THROW(contract(dd, 0, 1), Error);
  EXPECT_THROW(contract(kronecker(3), 0, 0), Error);
  EXPECT_DOUBLE_EQ(contract(kronecker(3), 0, 1).flat(0), 3.0);
}

TEST(Tensor, OuterAndPermute) {
  std::mt19937_64 rng(3);
  const Tensor a = random_tensor(3, down(1), rng);
  const Tensor b = random_tensor(3, down(2), rng);
  const Tensor ab = outer(a, b);
  ASSERT_EQ(ab.rank(), 3);
  EXPECT_DOUBLE_EQ(ab(2, 0, 1), a(2) * b(0, 1));
  const Tensor p = permute(ab, {2, 0, 1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(p(i, j, k), ab(j, k, i)) << i << j << k;
}

TEST(Jet, InverseAndSignature) {
  const MetricJet jet = constant_jet(skewed_lorentzian());
  const Tensor id = contract(outer(jet.g_inv, jet.g), 1, 2);
  EXPECT_LT(rel_residual(id, kronecker(4)), 1e-13);
  EXPECT_EQ(negative_eigenvalues(jet.g), 1);
  EXPECT_THROW(constant_jet(skewed_lorentzian(), Signature::riemannian), Error);
}

TEST(Jet, RejectsSingularAndAsymmetric) {
  Tensor g(2, down(2));
  g(0, 0) = 1.0;
  g(0, 1) = g(1, 0) = 1.0;
  g(1, 1) = 1.0;
  try {
    constant_jet(g, Signature::riemannian);
    FAIL() << "singular metric accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_metric);
  }
  Tensor h(2, down(2));
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  h(0, 1) = 0.5;
  EXPECT_THROW(constant_jet(h, Signature::riemannian), Error);
}
