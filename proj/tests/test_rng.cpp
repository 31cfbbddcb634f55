#include <gtest/gtest.h>

#include "scenfuzz/rng.hpp"

using namespace scenfuzz;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DifferentSeedsDiffer) {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next() == b.next();
  EXPECT_LT(same, 3);
}

TEST(Rng, DeriveIsStateless) {
  Rng a(7);
  a.next();
  a.next();
  Rng d1 = a.derive("mutation", 3);
  Rng fresh(7);
  Rng d2 = fresh.derive("mutation", 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(d1.next(), d2.next());
}

TEST(Rng, DeriveTagsIndependent) {
  Rng a(7);
  EXPECT_NE(a.derive("x").next(), a.derive("y").next());
  EXPECT_NE(a.derive("x", 0).next(), a.derive("x", 1).next());
}

TEST(Rng, UniformBounds) {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_int(7);
    ASSERT_LT(v, 7u);
  }
}

TEST(Rng, UniformMeanSane) {
  Rng r(11);
  double acc = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += r.uniform(-90.0, 90.0);
  EXPECT_NEAR(acc / n, 0.0, 2.0);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(5);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  r.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(Rng, SampleIndicesDistinct) {
  Rng r(9);
  const auto idx = r.sample_indices(20, 8);
  ASSERT_EQ(idx.size(), 8u);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) EXPECT_NE(idx[i], idx[j]);
  }
}
