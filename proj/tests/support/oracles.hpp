#pragma once

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Correctly rounded sum of doubles (Shewchuk partials, as in CPython's math.fsum).
inline double fsum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  double hi = 0.0;
  std::size_t n = partials.size();
  if (n > 0) {
    double lo = 0.0;
    hi = partials[--n];
    while (n > 0) {
      const double x = hi;
      const double y = partials[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
  }
  return hi;
}

/// Longest common subsequence by plain recursion with a memo table.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size() || j == b.size()) return 0;
    int& slot = memo[i][j];
    if (slot >= 0) return slot;
    if (a[i] == b[j]) return slot = 1 + go(i + 1, j + 1);
    return slot = std::max(go(i + 1, j), go(i, j + 1));
  };
  return static_cast<std::size_t>(go(0, 0));
}

/// F-measure from precision and recall, the textbook way, using exact rationals
/// to decide the value: F = 2L / (|r| + |c|) is the same rational as 2PR/(P+R).
inline double rouge_f_rational(std::size_t l, std::size_t ref_len, std::size_t cand_len) {
  if (ref_len == 0 && cand_len == 0) return 1.0;
  if (ref_len == 0 || cand_len == 0 || l == 0) return 0.0;
  // P = l/c, R = l/r; 2PR/(P+R) = 2 l^2/(r c) / (l (r + c)/(r c)) = 2l/(r+c)
  const std::uint64_t num = 2 * l;
  const std::uint64_t den = ref_len + cand_len;
  const std::uint64_t g = std::gcd(num, den);
  return static_cast<double>(num / g) / static_cast<double>(den / g);
}

/// Geometric mean with the same canonical evaluation order the library documents.
inline double canonical_geomean(std::vector<double> v) {
  if (v.empty()) return 1.0;
  std::sort(v.begin(), v.end());
  if (v.front() <= 0.0) return 0.0;
  double p = 1.0;
  for (double x : v) p *= x;
  return std::pow(p, 1.0 / static_cast<double>(v.size()));
}

/// Maximum canonical geometric mean over all injective row->column maps.
inline double brute_force_assignment(const std::vector<std::vector<double>>& d) {
  const std::size_t k = d.size();
  if (k == 0) return 1.0;
  const std::size_t r = d[0].size();
  if (r < k) return 0.0;
  std::vector<std::size_t> cols(r);
  std::iota(cols.begin(), cols.end(), 0);
  double best = 0.0;
  // Enumerate permutations of all columns; the first k positions give the map.
  do {
    std::vector<double> chosen;
    for (std::size_t i = 0; i < k; ++i) chosen.push_back(d[i][cols[i]]);
    best = std::max(best, canonical_geomean(chosen));
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double r = 6371.0;
  constexpr double rad = 3.14159265358979323846 / 180.0;
  const double p1 = lat1 * rad, p2 = lat2 * rad;
  const double dp = (lat2 - lat1) * rad, dl = (lon2 - lon1) * rad;
  const double h = std::pow(std::sin(dp / 2), 2) + std::cos(p1) * std::cos(p2) * std::pow(std::sin(dl / 2), 2);
  return 2 * r * std::atan2(std::sqrt(h), std::sqrt(1 - h));
}

struct BruteMatch {
  bool feasible = false;
  double best_sum = 0.0;  // correctly rounded
};

/// Exhaustive search over all n^m assignments.
inline BruteMatch brute_force_match(int m, int n, const std::vector<std::pair<int, int>>& edges, bool strict,
                                    const std::function<double(int, int, std::span<const int>)>& sim) {
  BruteMatch out;
  std::vector<int> turns(static_cast<std::size_t>(m), 1);
  if (m == 0) {
    out.feasible = true;
    return out;
  }
  while (true) {
    bool ok = true;
    for (auto [u, v] : edges) {
      const int a = turns[static_cast<std::size_t>(u)], b = turns[static_cast<std::size_t>(v)];
      if (strict ? !(a < b) : !(a <= b)) ok = false;
    }
    if (ok) {
      std::vector<double> sims;
      for (int x = 0; x < m; ++x) sims.push_back(sim(x, turns[static_cast<std::size_t>(x)], turns));
      const double s = fsum(sims);
      if (!out.feasible || s > out.best_sum) out.best_sum = s;
      out.feasible = true;
    }
    int i = 0;
    while (i < m && turns[static_cast<std::size_t>(i)] == n) turns[static_cast<std::size_t>(i++)] = 1;
    if (i == m) break;
    ++turns[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace oracle
