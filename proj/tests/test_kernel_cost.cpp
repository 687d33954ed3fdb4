#include <gtest/gtest.h>

#include <random>

#include "dlmperf/kernel_cost.hpp"
#include "oracles.hpp"

using namespace dlmperf;

TEST(LinearCost, SmallProjectionMatchesOracle) {
  const auto want = oracle::linear(1, 2, 4, 4, 2);
  ASSERT_EQ(want.flops, 64u);
  ASSERT_EQ(want.bytes, 64u);
  const auto k = linear_cost(1, 2, 4, 4, 2);
  EXPECT_EQ(k.flops, want.flops);
  EXPECT_EQ(k.bytes, want.bytes);
  EXPECT_DOUBLE_EQ(arithmetic_intensity(k), 1.0);
}

TEST(LinearCost, SingleMultiplyAdd) {
  const auto k = linear_cost(1, 1, 1, 1, 2);
  EXPECT_EQ(k.flops, 2u);
  EXPECT_EQ(k.bytes, 6u);
}

TEST(LinearCost, PrefillQueryProjection) {
  // 2 · 2048 · 4096 · 4096
  EXPECT_EQ(linear_cost(1, 2048, 4096, 4096, 2).flops, 68719476736u);
}

TEST(LinearCost, ZeroArgumentRejected) {
  EXPECT_THROW(linear_cost(0, 1, 1, 1, 2), ValidationError);
  EXPECT_THROW(linear_cost(1, 0, 1, 1, 2), ValidationError);
  EXPECT_THROW(linear_cost(1, 1, 0, 1, 2), ValidationError);
  EXPECT_THROW(linear_cost(1, 1, 1, 0, 2), ValidationError);
}

TEST(LinearCost, AgreesWithOracleOnRandomShapes) {
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t b = 1 + rng() % 3, l = 1 + rng() % 4, di = 1 + rng() % 6,
                        dout = 1 + rng() % 6, dt = 1u << (rng() % 3);
    const auto k = linear_cost(b, l, di, dout, dt);
    const auto o = oracle::linear(b, l, di, dout, dt);
    EXPECT_EQ(k.flops, o.flops);
    EXPECT_EQ(k.bytes, o.bytes);
  }
}

TEST(LinearCost, FlopsLinearInEachArgument) {
  const auto base = linear_cost(3, 5, 7, 11, 2).flops;
  EXPECT_EQ(linear_cost(6, 5, 7, 11, 2).flops, 2 * base);
  EXPECT_EQ(linear_cost(3, 10, 7, 11, 2).flops, 2 * base);
  EXPECT_EQ(linear_cost(3, 5, 14, 11, 2).flops, 2 * base);
  EXPECT_EQ(linear_cost(3, 5, 7, 22, 2).flops, 2 * base);
}

TEST(AttentionCost, DecodeStep) {
  const auto o = oracle::attention(1, 1, 1, 4, 1, 8, 2, false, true);
  ASSERT_EQ(o.flops, 128u);
  ASSERT_EQ(o.bytes, 160u);
  const auto k = attention_cost(1, 1, 1, 4, 1, 8, 2, false, true);
  EXPECT_EQ(k.flops, 128u);
  EXPECT_EQ(k.bytes, 160u);
}

TEST(AttentionCost, CausalPairs) {
  EXPECT_EQ(attention_pairs(2, 2, true), 3u);
  EXPECT_EQ(attention_cost(1, 1, 1, 1, 2, 2, 2, true, false).flops, 12u);
  EXPECT_EQ(oracle::attention(1, 1, 1, 1, 2, 2, 2, true, false).flops, 12u);
}

TEST(AttentionCost, PreconditionViolations) {
  EXPECT_THROW(attention_cost(1, 1, 1, 4, 0, 8, 2, false, false), ValidationError);
  EXPECT_THROW(attention_cost(1, 1, 2, 4, 1, 8, 2, false, false), ValidationError);
  EXPECT_THROW(attention_cost(1, 1, 1, 4, 4, 2, 2, true, false), ValidationError);
}

TEST(AttentionCost, AgreesWithOracleIncludingGqa) {
  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t kvh = 1 + rng() % 2, heads = kvh * (1 + rng() % 3);
    const std::uint64_t b = 1 + rng() % 2, hd = 1 + rng() % 3, lq = 1 + rng() % 4;
    const std::uint64_t lkv = lq + rng() % 5, dt = 1u << (rng() % 3);
    const bool causal = rng() % 2, write = rng() % 2;
    const auto k = attention_cost(b, heads, kvh, hd, lq, lkv, dt, causal, write);
    const auto o = oracle::attention(b, heads, kvh, hd, lq, lkv, dt, causal, write);
    EXPECT_EQ(k.flops, o.flops) << "causal=" << causal;
    EXPECT_EQ(k.bytes, o.bytes) << "write=" << write;
  }
}

TEST(AttentionCost, CausalSquareIsTriangularFraction) {
  for (std::uint64_t l : {1u, 2u, 7u, 64u, 1000u, 4096u}) {
    const auto causal = attention_cost(2, 8, 2, 16, l, l, 2, true, false).flops;
    const auto full = attention_cost(2, 8, 2, 16, l, l, 2, false, false).flops;
    // causal / full == (L+1) / (2L)
    EXPECT_EQ(causal * 2 * l, full * (l + 1)) << l;
  }
}

TEST(AttentionCost, DisjointQueryBlocksAdd) {
  const auto a = attention_cost(2, 4, 2, 8, 3, 20, 2, false, false);
  const auto b = attention_cost(2, 4, 2, 8, 5, 20, 2, false, false);
  const auto ab = attention_cost(2, 4, 2, 8, 8, 20, 2, false, false);
  EXPECT_EQ(a.flops + b.flops, ab.flops);
}

TEST(ElementwiseBytes, Examples) {
  EXPECT_EQ(elementwise_bytes(1, 4, 4, 1, 2).bytes, 64u);
  EXPECT_EQ(elementwise_bytes(1, 4, 4, 1, 2).flops, 0u);
  EXPECT_EQ(elementwise_bytes(1, 0, 4, 1, 2).bytes, 0u);
  EXPECT_EQ(elementwise_bytes(1, 4, 4, 0, 2).bytes, 0u);
}

TEST(KernelCost, HalvingDtypeDoublesIntensity) {
  const auto a = attention_cost(1, 8, 8, 64, 16, 256, 4, false, true);
  const auto b = attention_cost(1, 8, 8, 64, 16, 256, 2, false, true);
  EXPECT_DOUBLE_EQ(arithmetic_intensity(b), 2 * arithmetic_intensity(a));
  const auto c = linear_cost(4, 9, 32, 48, 2);
  const auto d = linear_cost(4, 9, 32, 48, 1);
  EXPECT_DOUBLE_EQ(arithmetic_intensity(d), 2 * arithmetic_intensity(c));
}

TEST(KernelCost, ComputingKernelsMoveBytes) {
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto k = attention_cost(1 + rng() % 4, 4, 1 + rng() % 4 == 1 ? 1 : 2, 1 + rng() % 8,
                                  1 + rng() % 8, 8 + rng() % 8, 2, rng() % 2, rng() % 2);
    if (k.flops > 0) {
      EXPECT_GT(k.bytes, 0u);
    }
  }
}

TEST(KernelCost, OverflowIsReported) {
  EXPECT_THROW(linear_cost(1u << 20, 1u << 20, 1u << 20, 1u << 20, 2), std::overflow_error);
}
