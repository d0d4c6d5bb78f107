#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sdereg/rng.hpp"

using sdereg::Philox4x32;
using sdereg::RandomStream;

TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}),
            (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}),
            (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0}),
            (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, Reproducible) {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.gaussian(), b.gaussian());
}

TEST(RandomStream, StreamsAndSeedsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 16; ++seed)
    for (std::uint64_t stream = 0; stream < 16; ++stream)
      firsts.insert(RandomStream(seed, stream).next_u64());
  EXPECT_EQ(firsts.size(), 256u);
}

TEST(RandomStream, UniformOpenInterval) {
  RandomStream rng(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RandomStream, GaussianMoments) {
  RandomStream rng(2024, 1);
  const int n = 1000000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
    tail += std::abs(z) > 3.0;
  }
  m1 /= n, m2 /= n, m3 /= n, m4 /= n;
  // Standard errors: 1, sqrt(2), sqrt(15), sqrt(96) over sqrt(n).
  EXPECT_NEAR(m1, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m3, 0.0, 4.0 * std::sqrt(15.0 / n));
  EXPECT_NEAR(m4, 3.0, 4.0 * std::sqrt(96.0 / n));
  const double p_tail = std::erfc(3.0 / std::sqrt(2.0));
  EXPECT_NEAR(double(tail) / n, p_tail, 4.0 * std::sqrt(p_tail / n));
}

TEST(RandomStream, GaussianCdfAtQuantiles) {
  RandomStream rng(5, 9);
  const int n = 400000;
  const double qs[] = {-2.5, -1.0, 0.0, 0.5, 1.5, 3.7};
  int counts[6] = {};
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    for (int j = 0; j < 6; ++j) counts[j] += z <= qs[j];
  }
  for (int j = 0; j < 6; ++j) {
    const double p = 0.5 * std::erfc(-qs[j] / std::sqrt(2.0));
    EXPECT_NEAR(double(counts[j]) / n, p, 4.0 * std::sqrt(p * (1 - p) / n) + 1e-6) << qs[j];
  }
}
