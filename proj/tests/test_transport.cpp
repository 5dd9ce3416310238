#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gcurrents/transport.hpp"
#include "oracles.hpp"

using namespace gcurrents;

namespace {

std::vector<std::vector<double>> costs(const ClassicalBoundary& b) {
  std::vector<std::vector<double>> d(b.sources.size(), std::vector<double>(b.sinks.size()));
  for (std::size_t i = 0; i < b.sources.size(); ++i) {
    for (std::size_t j = 0; j < b.sinks.size(); ++j) d[i][j] = b.cost(i, j);
  }
  return d;
}

std::vector<std::int64_t> mults(const std::vector<WeightedPoint>& side) {
  std::vector<std::int64_t> out;
  for (const auto& w : side) out.push_back(w.mult);
  return out;
}

}  // namespace

TEST(Transport, AlternatingSquare) {
  ClassicalBoundary b{{{{1, 1}, 1}, {{-1, -1}, 1}}, {{{1, -1}, 1}, {{-1, 1}, 1}}};
  auto r = transport_min(b);
  EXPECT_NEAR(r.value, 4, 1e-12);
  EXPECT_TRUE(r.plan.integral());
  EXPECT_TRUE(has_marginals(b, r.plan));
  EXPECT_LT(r.value, 2 + 2 * std::sqrt(3.0));
}

TEST(Transport, SplitSource) {
  ClassicalBoundary b{{{{0, 0}, 2}}, {{{1, 0}, 1}, {{0, 1}, 1}}};
  auto r = transport_min(b);
  EXPECT_NEAR(r.value, 2, 1e-12);
  EXPECT_EQ(r.plan.at(0, 0), 1);
  EXPECT_EQ(r.plan.at(0, 1), 1);
  EXPECT_EQ(plan_components(b, r.plan), 1u);
}

TEST(Transport, RejectsBadBoundaries) {
  EXPECT_THROW(transport_min({{{{0, 0}, 2}}, {{{1, 0}, 1}}}), InputError);
  EXPECT_THROW(transport_min({{{{0, 0}, 0}}, {{{1, 0}, 0}}}), InputError);
  EXPECT_THROW(transport_min({{}, {{{1, 0}, 1}}}), InputError);
}

TEST(Transport, MatchesIntegerEnumeration) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 40; ++k) {
    auto b = fixtures::random_boundary(rng, 3, 3);
    auto r = transport_min(b);
    EXPECT_TRUE(has_marginals(b, r.plan));
    EXPECT_NEAR(r.value, oracle::integer_plan_min(mults(b.sources), mults(b.sinks), costs(b)), 1e-9);
  }
}

TEST(Integerize, HalfPlanOnTwoByTwo) {
  ClassicalBoundary b{{{{0, 0}, 1}, {{0, 1}, 1}}, {{{3, 0}, 1}, {{3, 1}, 1}}};
  SegmentPlan half;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) half.set(i, j, Rational(1, 2));
  }
  auto r = integerize(b, half);
  EXPECT_TRUE(r.plan.integral());
  EXPECT_TRUE(has_marginals(b, r.plan));
  EXPECT_EQ(r.cycles, 1u);
  EXPECT_LE(plan_mass(b, r.plan), plan_mass(b, half) + 1e-12);
  EXPECT_NEAR(plan_mass(b, r.plan), 6, 1e-12);
}

TEST(Integerize, IntegralPlanIsUntouched) {
  ClassicalBoundary b{{{{0, 0}, 1}, {{0, 1}, 1}}, {{{3, 0}, 1}, {{3, 1}, 1}}};
  SegmentPlan q;
  q.set(0, 1, 1);
  q.set(1, 0, 1);
  auto r = integerize(b, q);
  EXPECT_EQ(r.cycles, 0u);
  EXPECT_TRUE(r.plan == q);
}

TEST(Integerize, RejectsInfeasiblePlan) {
  ClassicalBoundary b{{{{0, 0}, 1}}, {{{1, 0}, 1}}};
  SegmentPlan q;
  q.set(0, 0, Rational(1, 2));
  EXPECT_THROW(integerize(b, q), InputError);
}

// Mix two integral plans with a random rational weight and round back.
TEST(Integerize, RandomFractionalPlans) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 60; ++k) {
    auto b = fixtures::random_boundary(rng, 4, 3);
    auto opt = transport_min(b).plan;
    // A second feasible plan: north-west corner rule.
    SegmentPlan nw;
    auto a = mults(b.sources), c = mults(b.sinks);
    for (std::size_t i = 0, j = 0; i < a.size() && j < c.size();) {
      std::int64_t x = std::min(a[i], c[j]);
      nw.set(i, j, nw.at(i, j) + x);
      a[i] -= x;
      c[j] -= x;
      if (a[i] == 0) ++i;
      if (j < c.size() && c[j] == 0) ++j;
    }
    ASSERT_TRUE(has_marginals(b, nw));
    Rational t(std::uniform_int_distribution<int>(1, 6)(rng), 7);
    SegmentPlan mix;
    for (std::size_t i = 0; i < b.sources.size(); ++i) {
      for (std::size_t j = 0; j < b.sinks.size(); ++j) mix.set(i, j, t * opt.at(i, j) + (1 - t) * nw.at(i, j));
    }
    ASSERT_TRUE(has_marginals(b, mix));
    auto r = integerize(b, mix);
    EXPECT_TRUE(r.plan.integral());
    EXPECT_TRUE(has_marginals(b, r.plan));
    EXPECT_LE(plan_mass(b, r.plan), plan_mass(b, mix) + 1e-9);
    EXPECT_GE(plan_mass(b, r.plan), transport_min(b).value - 1e-9);
  }
}
