#pragma once

// Shared random inputs for the tests and the acceptance run.

#include <random>
#include <vector>

#include "gcurrents/currents.hpp"
#include "gcurrents/transport.hpp"

namespace fixtures {

using namespace gcurrents;

/// Up to `max_segments` segments between small lattice points, so overlaps,
/// shared endpoints and closed loops are common.
inline PolyCurrent random_current(const GroupSetup& setup, std::mt19937_64& rng, std::size_t max_segments) {
  std::uniform_int_distribution<int> coord(-3, 3), coeff(-2, 2);
  std::uniform_int_distribution<std::size_t> count(1, max_segments);
  PolyCurrent t(setup, 2);
  std::size_t k = count(rng);
  while (t.size() < k) {
    Point a{static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
    Point b{static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
    if (a == b) continue;
    GroupElement th(setup.rank());
    for (std::size_t j = 0; j < setup.rank(); ++j) th[j] = coeff(rng);
    if (th.is_zero()) continue;
    t.add(a, b, th);
  }
  return t;
}

/// Balanced point masses with at most `max_side` sources and sinks.
inline ClassicalBoundary random_boundary(std::mt19937_64& rng, std::size_t max_side, std::int64_t max_mult) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::uniform_int_distribution<std::int64_t> mult(1, max_mult);
  std::uniform_real_distribution<double> coord(-5, 5);
  ClassicalBoundary b;
  std::size_t m = side(rng), n = side(rng);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    b.sources.push_back({Point{coord(rng), coord(rng)}, mult(rng)});
    total += b.sources.back().mult;
  }
  if (total < static_cast<std::int64_t>(n)) n = static_cast<std::size_t>(total);
  std::vector<std::int64_t> share(n, 1);
  for (std::int64_t left = total - static_cast<std::int64_t>(n); left > 0; --left) ++share[rng() % n];
  for (std::size_t j = 0; j < n; ++j) b.sinks.push_back({Point{coord(rng), coord(rng)}, share[j]});
  return b;
}

}  // namespace fixtures
