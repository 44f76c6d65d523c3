// Helpers shared by the unit and acceptance suites: random cluster draws and
// an independent dense solver for the block-size system.

#pragma once

#include <acide/core.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace acide::testing {

inline std::vector<PeerProfile> make_peers(const std::vector<double>& uploads,
                                           double download_floor = 0.0) {
  std::vector<PeerProfile> peers;
  double max_up = 0.0;
  for (double u : uploads) max_up = std::max(max_up, u);
  const double down = std::max(download_floor, max_up);
  for (std::size_t i = 0; i < uploads.size(); ++i) {
    peers.emplace_back("p" + std::to_string(i + 1), uploads[i], down);
  }
  return peers;
}

/// Reference-style cluster: uploads uniform in [10000, hi], downloads at least
/// the largest upload, with hi growing with n. Uses std::mt19937_64 directly,
/// independent of the library generator.
inline std::vector<PeerProfile> random_cluster(std::mt19937_64& rng, std::size_t n) {
  const double hi = 10000.0 + 750.0 * static_cast<double>(n);
  std::uniform_real_distribution<double> up(10000.0, hi);
  std::uniform_real_distribution<double> down(hi, hi + 90000.0);
  std::vector<PeerProfile> peers;
  for (std::size_t i = 0; i < n; ++i) {
    peers.emplace_back("r" + std::to_string(i), up(rng), down(rng));
  }
  return peers;
}

/// Row k of the triangular system evaluated at s (rows 1-based, uploads sorted).
/// Row 1 is sum(s); row k >= 2 is alpha_k * s_k + sum_{i>k} s_i, with alpha_k
/// recomputed here from its definition.
inline double system_row(const std::vector<double>& uploads, const std::vector<double>& s,
                         std::size_t k) {
  if (k == 1) {
    double total = 0.0;
    for (double x : s) total += x;
    return total;
  }
  double prefix = 0.0;
  for (std::size_t i = 0; i < k; ++i) prefix += uploads[i];
  double row = prefix / uploads[k - 1] * s[k - 1];
  for (std::size_t i = k; i < s.size(); ++i) row += s[i];
  return row;
}

/// Dense Gaussian elimination with partial pivoting on the full n x n
/// matrix. O(n^3), test-only.
inline std::vector<double> dense_block_sizes(const std::vector<double>& uploads, double package) {
  const std::size_t n = uploads.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0) {
      for (std::size_t c = 0; c < n; ++c) a[r][c] = 1.0;
    } else {
      double prefix = 0.0;
      for (std::size_t i = 0; i <= r; ++i) prefix += uploads[i];
      a[r][r] = prefix / uploads[r];
      for (std::size_t c = r + 1; c < n; ++c) a[r][c] = 1.0;
    }
    a[r][n] = package;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double rhs = a[r][n];
    for (std::size_t c = r + 1; c < n; ++c) rhs -= a[r][c] * x[c];
    x[r] = rhs / a[r][r];
  }
  return x;
}

inline bool rel_close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), 1e-12);
}

}  // namespace acide::testing
