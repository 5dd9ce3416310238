#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gcurrents/group.hpp"
#include "oracles.hpp"

using namespace gcurrents;

namespace {

EVector ev(std::vector<Rational> c) { return EVector(std::move(c)); }
EDualVector dv(std::vector<Rational> c) { return EDualVector(std::move(c)); }

std::vector<Rational> random_rationals(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  std::vector<Rational> v;
  for (std::size_t i = 0; i < m; ++i) v.emplace_back(num(rng), den(rng));
  return v;
}

}  // namespace

TEST(GroupSetup, GeneratorsSumToZero) {
  for (int n = 2; n <= 7; ++n) {
    GroupSetup s(n);
    GroupElement sum = s.zero();
    for (int i = 1; i <= n; ++i) sum += s.generator(i);
    EXPECT_TRUE(sum.is_zero()) << "n = " << n;
  }
}

TEST(GroupSetup, RejectsBadInput) {
  EXPECT_THROW(GroupSetup(1), InputError);
  GroupSetup s(3);
  EXPECT_THROW(s.generator(4), InputError);
  EXPECT_THROW(s.dual(3), InputError);
  EXPECT_THROW(norm_e(s, GroupElement{1, 2, 3}), InputError);
  EXPECT_THROW(norm_e_star(s, dv({1})), InputError);
}

TEST(NormE, Examples) {
  GroupSetup s(4);
  EXPECT_EQ(norm_e(s, s.generator(1) + s.generator(2)), 1);
  EXPECT_EQ(norm_e(s, s.zero()), 0);
  EXPECT_EQ(norm_e(s, s.generator(1) - s.generator(2)), 2);
  EXPECT_EQ(oracle::norm_e_phi({1, -1, 0}), 2);
  EXPECT_EQ(norm_e(s, s.generator(4)), 1);
}

TEST(NormE, MatchesRepresentativeOracle) {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 7; ++n) {
    GroupSetup s(n);
    for (int k = 0; k < 300; ++k) {
      auto v = random_rationals(rng, s.rank());
      Rational shift(static_cast<int>(rng() % 7) - 3, 2);
      EXPECT_EQ(norm_e(s, ev(v)), oracle::norm_e_phi(v));
      EXPECT_EQ(norm_e(s, ev(v)), oracle::norm_e_phi(v, shift));
    }
  }
}

TEST(NormE, TriangleInequalityAndHomogeneity) {
  std::mt19937_64 rng(12);
  for (int n = 2; n <= 7; ++n) {
    GroupSetup s(n);
    for (int k = 0; k < 200; ++k) {
      EVector v = ev(random_rationals(rng, s.rank())), w = ev(random_rationals(rng, s.rank()));
      EXPECT_LE(norm_e(s, v + w), norm_e(s, v) + norm_e(s, w));
      Rational q(static_cast<int>(rng() % 21) - 10, 3);
      EXPECT_EQ(norm_e(s, v * q), abs(q) * norm_e(s, v));
    }
  }
}

TEST(NormEStar, Examples) {
  EXPECT_EQ(norm_e_star(GroupSetup(3), dv({1, 0})), 1);
  EXPECT_EQ(norm_e_star(GroupSetup(3), dv({1, 1})), 2);
  EXPECT_EQ(norm_e_star(GroupSetup(3), dv({1, -1})), 1);
  EXPECT_EQ(oracle::norm_estar_brute({1, 1}), 2);
  EXPECT_EQ(oracle::norm_estar_brute({1, -1}), 1);
}

TEST(NormEStar, MatchesExtremePointMaximum) {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 7; ++n) {
    GroupSetup s(n);
    auto ext = extreme_points(s);
    for (int k = 0; k < 200; ++k) {
      auto w = random_rationals(rng, s.rank());
      Rational closed = norm_e_star(s, dv(w));
      EXPECT_EQ(closed, oracle::norm_estar_brute(w));
      Rational best = pairing(s, dv(w), ext.front());
      for (const auto& g : ext) {
        Rational p = pairing(s, dv(w), g);
        EXPECT_LE(p, closed);
        best = std::max(best, p);
      }
      EXPECT_EQ(best, closed);
    }
  }
}

TEST(ExtremePoints, CountDistinctUnitNorm) {
  for (int n = 2; n <= 7; ++n) {
    GroupSetup s(n);
    auto ext = extreme_points(s);
    std::set<GroupElement> distinct(ext.begin(), ext.end());
    EXPECT_EQ(ext.size(), 2 * ((std::size_t{1} << (n - 1)) - 1));
    EXPECT_EQ(distinct.size(), ext.size());
    for (const auto& g : ext) EXPECT_EQ(norm_e(s, g), 1);
  }
  auto three = extreme_points(GroupSetup(3));
  std::set<GroupElement> want{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};
  EXPECT_EQ(std::set<GroupElement>(three.begin(), three.end()), want);
}

// Sampled on a 1/4 grid of the unit ball: no extreme point is the midpoint
// of two other ball points.
TEST(ExtremePoints, NotMidpointsAtFour) {
  GroupSetup s(4);
  std::vector<EVector> ball;
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      for (int c = -4; c <= 4; ++c) {
        EVector v = ev({Rational(a, 4), Rational(b, 4), Rational(c, 4)});
        if (norm_e(s, v) <= 1) ball.push_back(v);
      }
    }
  }
  for (const auto& g : extreme_points(s)) {
    EVector two = embed(g) * Rational(2);
    for (const auto& x : ball) {
      EVector y = two - x;
      if (!(x == embed(g)) && norm_e(s, y) <= 1) FAIL() << to_string(g) << " splits";
    }
  }
}

TEST(Axioms, HoldForSmallN) {
  for (int n = 2; n <= 7; ++n) {
    AxiomReport r = check_axioms(GroupSetup(n), 500);
    EXPECT_TRUE(r.passed) << "n = " << n;
    ASSERT_EQ(r.results.size(), 4u);
    for (const auto& a : r.results) EXPECT_GT(a.checked, 0u) << a.axiom;
  }
  EXPECT_THROW(check_axioms(GroupSetup(3), 0), InputError);
}

TEST(Axioms, LowerBoundOnIntegerElements) {
  GroupSetup s(5);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> c(-9, 9);
  for (int k = 0; k < 500; ++k) {
    GroupElement g{c(rng), c(rng), c(rng), c(rng)};
    if (!g.is_zero()) EXPECT_GE(norm_e(s, g), 1);
  }
}
