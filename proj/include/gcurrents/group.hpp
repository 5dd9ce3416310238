#pragma once

// The normed space E ~ R^{n-1}, its dual E*, and the lattice G generated by
// g_1..g_{n-1}. Everything is expressed in coordinates over the generators:
// v = v_1 g_1 + ... + v_{n-1} g_{n-1}, and covectors over the dual basis h_j.
//
//   ||v||_E  = max(v_1, ..., v_{n-1}, 0) - min(v_1, ..., v_{n-1}, 0)
//   ||w||_E* = max(sum_i max(w_i, 0), -sum_i min(w_i, 0))

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "gcurrents/errors.hpp"
#include "gcurrents/rational.hpp"

namespace gcurrents {

template <class T, class Tag>
class CoeffVector {
 public:
  using value_type = T;

  CoeffVector() = default;
  explicit CoeffVector(std::size_t size) : c_(size, T(0)) {}
  CoeffVector(std::initializer_list<T> init) : c_(init) {}
  explicit CoeffVector(std::vector<T> c) : c_(std::move(c)) {}

  std::size_t size() const { return c_.size(); }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  std::span<const T> coords() const { return c_; }
  const std::vector<T>& vec() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& x) { return x == T(0); });
  }

  CoeffVector& operator+=(const CoeffVector& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CoeffVector& operator-=(const CoeffVector& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  CoeffVector& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
  friend CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
  friend CoeffVector operator*(CoeffVector a, const T& s) { return a *= s; }
  friend CoeffVector operator*(const T& s, CoeffVector a) { return a *= s; }
  friend CoeffVector operator-(CoeffVector a) { return a *= T(-1); }

  friend bool operator==(const CoeffVector& a, const CoeffVector& b) { return a.c_ == b.c_; }
  friend bool operator<(const CoeffVector& a, const CoeffVector& b) { return a.c_ < b.c_; }

 private:
  void require_same_size(const CoeffVector& o) const {
    if (o.c_.size() != c_.size()) {
      throw InputError("coefficient vectors of different lengths (" + std::to_string(c_.size()) +
                       " vs " + std::to_string(o.c_.size()) + ")");
    }
  }

  std::vector<T> c_;
};

struct GroupTag {};
struct EVectorTag {};
struct EDualTag {};

/// Integer coordinates over g_1..g_{n-1}.
using GroupElement = CoeffVector<std::int64_t, GroupTag>;
/// Exact rational element of E.
using EVector = CoeffVector<Rational, EVectorTag>;
/// Exact rational element of E*, coordinates over h_1..h_{n-1}.
using EDualVector = CoeffVector<Rational, EDualTag>;

inline EVector embed(const GroupElement& g) {
  std::vector<Rational> c;
  c.reserve(g.size());
  for (auto x : g) c.emplace_back(x);
  return EVector(std::move(c));
}

template <class T, class Tag>
std::string to_string(const CoeffVector<T, Tag>& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    if constexpr (std::is_same_v<T, Rational>) {
      out << gcurrents::to_string(v[i]);
    } else {
      out << v[i];
    }
  }
  out << ')';
  return out.str();
}

// Closed forms on raw coordinates; usable with int64, Rational or double.

template <class T>
T norm_e_coords(std::span<const T> v) {
  T hi(0), lo(0);
  for (const T& x : v) {
    if (x > hi) hi = x;
    if (x < lo) lo = x;
  }
  return hi - lo;
}

template <class T>
T norm_e_star_coords(std::span<const T> w) {
  T pos(0), neg(0);
  for (const T& x : w) {
    if (x > T(0)) pos += x;
    if (x < T(0)) neg -= x;
  }
  return pos > neg ? pos : neg;
}

/// The data fixed by the terminal count n: E, E*, G, g_1..g_n, h_1..h_{n-1}.
class GroupSetup {
 public:
  static constexpr int kMaxTerminals = 30;

  explicit GroupSetup(int n) : n_(n) {
    if (n < 2 || n > kMaxTerminals) {
      throw InputError("terminal count n must lie in [2, " + std::to_string(kMaxTerminals) +
                       "], got " + std::to_string(n));
    }
  }

  int terminals() const { return n_; }
  std::size_t rank() const { return static_cast<std::size_t>(n_ - 1); }

  GroupElement zero() const { return GroupElement(rank()); }

  /// g_i for 1 <= i <= n; g_n = -(g_1 + ... + g_{n-1}).
  GroupElement generator(int i) const {
    if (i < 1 || i > n_) throw InputError("generator index out of range: " + std::to_string(i));
    GroupElement g(rank());
    if (i == n_) {
      for (std::size_t j = 0; j < rank(); ++j) g[j] = -1;
    } else {
      g[static_cast<std::size_t>(i - 1)] = 1;
    }
    return g;
  }

  /// h_i for 1 <= i <= n-1.
  EDualVector dual(int i) const {
    if (i < 1 || i >= n_) throw InputError("dual index out of range: " + std::to_string(i));
    EDualVector h(rank());
    h[static_cast<std::size_t>(i - 1)] = 1;
    return h;
  }

  template <class T, class Tag>
  void check(const CoeffVector<T, Tag>& v) const {
    if (v.size() != rank()) {
      throw InputError("expected " + std::to_string(rank()) + " coordinates for n = " +
                       std::to_string(n_) + ", got " + std::to_string(v.size()));
    }
  }

  friend bool operator==(const GroupSetup&, const GroupSetup&) = default;

 private:
  int n_;
};

inline std::int64_t norm_e(const GroupSetup& setup, const GroupElement& g) {
  setup.check(g);
  return norm_e_coords<std::int64_t>(g.coords());
}

inline Rational norm_e(const GroupSetup& setup, const EVector& v) {
  setup.check(v);
  return norm_e_coords<Rational>(v.coords());
}

inline Rational norm_e_star(const GroupSetup& setup, const EDualVector& w) {
  setup.check(w);
  return norm_e_star_coords<Rational>(w.coords());
}

inline Rational pairing(const GroupSetup& setup, const EDualVector& w, const EVector& v) {
  setup.check(w);
  setup.check(v);
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

inline Rational pairing(const GroupSetup& setup, const EDualVector& w, const GroupElement& g) {
  return pairing(setup, w, embed(g));
}

/// All +-(g_{i_1} + ... + g_{i_k}), ordered by subset bitmask, + before -.
inline std::vector<GroupElement> extreme_points(const GroupSetup& setup) {
  const std::size_t m = setup.rank();
  std::vector<GroupElement> out;
  out.reserve(2 * ((std::size_t{1} << m) - 1));
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    GroupElement g(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) g[j] = 1;
    }
    out.push_back(g);
    out.push_back(-g);
  }
  return out;
}

struct AxiomResult {
  std::string axiom;
  bool passed = true;
  std::size_t checked = 0;
  std::string witness;
};

struct AxiomReport {
  int n = 0;
  bool passed = true;
  std::vector<AxiomResult> results;

  /// First violated axiom, or nullptr.
  const AxiomResult* first_failure() const {
    for (const auto& r : results) {
      if (!r.passed) return &r;
    }
    return nullptr;
  }
};

/// Checks (P1) exactly, (P2) on every generator subset, (P3) on the integer
/// box {-2..2}^{n-1} and (P4) on `samples` random truncation pairs.
inline AxiomReport check_axioms(const GroupSetup& setup, std::size_t samples,
                                std::uint64_t seed = 0x5eed) {
  if (samples == 0) throw InputError("check_axioms needs at least one sample");
  const std::size_t m = setup.rank();
  const int n = setup.terminals();
  AxiomReport report;
  report.n = n;

  AxiomResult p1{"P1", true, 0, {}};
  for (int i = 1; i < n && p1.passed; ++i) {
    for (int j = 1; j < n; ++j) {
      ++p1.checked;
      Rational expected = (i == j) ? 1 : 0;
      if (pairing(setup, setup.dual(i), setup.generator(j)) != expected) {
        p1.passed = false;
        p1.witness = "<h_" + std::to_string(i) + "; g_" + std::to_string(j) + "> != " +
                     gcurrents::to_string(expected);
        break;
      }
    }
    if (p1.passed && (norm_e(setup, setup.generator(i)) != 1 ||
                      norm_e_star(setup, setup.dual(i)) != 1)) {
      p1.passed = false;
      p1.witness = "g_" + std::to_string(i) + " or h_" + std::to_string(i) + " is not a unit vector";
    }
  }
  GroupElement total = setup.zero();
  for (int i = 1; i <= n; ++i) total += setup.generator(i);
  if (p1.passed && !total.is_zero()) {
    p1.passed = false;
    p1.witness = "g_1 + ... + g_n = " + to_string(total);
  }
  report.results.push_back(p1);

  AxiomResult p2{"P2", true, 0, {}};
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    GroupElement g(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) g[j] = 1;
    }
    ++p2.checked;
    if (norm_e(setup, g) != 1) {
      p2.passed = false;
      p2.witness = "||" + to_string(g) + "||_E = " + std::to_string(norm_e(setup, g));
      break;
    }
  }
  report.results.push_back(p2);

  AxiomResult p3{"P3", true, 0, {}};
  GroupElement g(m);
  for (std::size_t j = 0; j < m; ++j) g[j] = -2;
  while (true) {
    if (!g.is_zero()) {
      ++p3.checked;
      if (norm_e(setup, g) < 1) {
        p3.passed = false;
        p3.witness = "||" + to_string(g) + "||_E < 1";
        break;
      }
    }
    std::size_t j = 0;
    while (j < m && g[j] == 2) g[j++] = -2;
    if (j == m) break;
    ++g[j];
  }
  report.results.push_back(p3);

  AxiomResult p4{"P4", true, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  for (std::size_t s = 0; s < samples; ++s) {
    GroupElement theta(m), truncated(m);
    for (std::size_t j = 0; j < m; ++j) {
      theta[j] = coord(rng);
      std::int64_t lo = std::min<std::int64_t>(0, theta[j]);
      std::int64_t hi = std::max<std::int64_t>(0, theta[j]);
      truncated[j] = std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    }
    ++p4.checked;
    if (norm_e(setup, truncated) > norm_e(setup, theta)) {
      p4.passed = false;
      p4.witness = "||" + to_string(truncated) + "||_E > ||" + to_string(theta) + "||_E";
      break;
    }
  }
  report.results.push_back(p4);

  for (const auto& r : report.results) report.passed = report.passed && r.passed;
  return report;
}

}  // namespace gcurrents
