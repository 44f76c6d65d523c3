// Scenario generation and parameter sweeps over cluster size, livestream
// bandwidth and admission budget.
//
// Random draws use std::mt19937_64 (a fully specified engine) and map each
// 64-bit output x to [0, 1) as (x >> 11) * 2^-53, so generated pools are
// identical on every conforming standard library. The pool for cluster size
// N in a sweep is seeded with derive_seed(seed, N); it is shared by every
// livestream bandwidth and budget evaluated for that N.

#pragma once

#include <acide/admission.hpp>
#include <acide/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace acide {

inline constexpr std::uint64_t kDefaultSeed = 20231213;
inline constexpr double kDefaultDelayBound = 0.2;  // seconds

struct BandwidthRange {
  double low = 0.0;
  double high = 0.0;

  void check(const char* what) const {
    if (!(low > 0.0) || !(high >= low) || !std::isfinite(high)) {
      throw DomainError(std::string(what) + " range must satisfy 0 < low <= high");
    }
  }
};

struct ClusterRanges {
  BandwidthRange upload;
  BandwidthRange download;
};

/// Upload/download ranges for the reference cluster sizes
/// {5, 10, 15, 20, 40, 60, 80, 100, 120}.
inline std::optional<ClusterRanges> reference_ranges(std::size_t size) {
  static const std::map<std::size_t, ClusterRanges> rows = {
      {5, {{10000, 20000}, {20000, 30000}}},     {10, {{10000, 30000}, {30000, 50000}}},
      {15, {{10000, 40000}, {40000, 70000}}},    {20, {{10000, 50000}, {50000, 90000}}},
      {40, {{10000, 60000}, {60000, 110000}}},   {60, {{10000, 70000}, {70000, 130000}}},
      {80, {{10000, 80000}, {80000, 150000}}},   {100, {{10000, 90000}, {90000, 170000}}},
      {120, {{10000, 100000}, {100000, 190000}}},
  };
  const auto it = rows.find(size);
  if (it == rows.end()) return std::nullopt;
  return it->second;
}

inline std::vector<std::size_t> reference_sizes() { return {5, 10, 15, 20, 40, 60, 80, 100, 120}; }

struct ScenarioSpec {
  std::vector<std::size_t> cluster_sizes{5, 10, 15, 20, 40, 60};
  std::map<std::size_t, ClusterRanges> ranges;  // overrides the reference rows
  double delay_bound = kDefaultDelayBound;
  std::vector<double> livestream_bandwidths{10000, 12000, 14000, 16000};
  // Union of the two reference budget grids.
  std::vector<double> budgets{10000, 12000, 14000, 16000, 18000,
                              20000, 30000, 40000, 50000, 60000};
  std::uint64_t seed = kDefaultSeed;

  ClusterRanges ranges_for(std::size_t size) const {
    if (const auto it = ranges.find(size); it != ranges.end()) return it->second;
    if (auto row = reference_ranges(size)) return *row;
    throw DomainError("no bandwidth ranges for cluster size " + std::to_string(size));
  }

  void validate() const {
    if (cluster_sizes.empty()) throw DomainError("scenario: no cluster sizes");
    for (std::size_t size : cluster_sizes) {
      if (size == 0) throw DomainError("scenario: cluster sizes must be >= 1");
      const ClusterRanges r = ranges_for(size);
      r.upload.check("upload");
      r.download.check("download");
    }
    if (!(delay_bound > 0.0)) throw DomainError("scenario: delay bound must be positive");
    for (double v : livestream_bandwidths) {
      if (!(v > 0.0)) throw DomainError("scenario: livestream bandwidths must be positive");
    }
    for (double bw : budgets) {
      if (!(bw > 0.0)) throw DomainError("scenario: budgets must be positive");
    }
  }
};

// ---------------------------------------------------------------------------
// Random generation

/// splitmix64 finaliser over (seed, size).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t size) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (size + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double draw(const BandwidthRange& r) { return r.low + (r.high - r.low) * unit(); }

 private:
  std::mt19937_64 engine_;
};

inline constexpr int kMaxRedraws = 10000;

/// Draws `size` uploads then `size` downloads, redrawing the whole set until
/// max(upload) <= min(download). Returned ascending by upload with ids
/// p1..pN in that order.
inline std::vector<PeerProfile> generate_peers(std::size_t size, const BandwidthRange& upload,
                                               const BandwidthRange& download,
                                               std::uint64_t seed) {
  upload.check("upload");
  download.check("download");
  if (size == 0) throw DomainError("generate_peers: size must be >= 1");
  if (upload.low > download.high) {
    throw DomainError("generate_peers: upload range lies above download range");
  }

  UniformSource rng(seed);
  std::vector<double> ups(size);
  std::vector<double> downs(size);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    for (auto& u : ups) u = rng.draw(upload);
    for (auto& d : downs) d = rng.draw(download);
    if (*std::max_element(ups.begin(), ups.end()) > *std::min_element(downs.begin(), downs.end())) {
      continue;
    }
    std::vector<PeerProfile> peers;
    peers.reserve(size);
    for (std::size_t i = 0; i < size; ++i) peers.emplace_back("", ups[i], downs[i]);
    peers = sort_peers(std::move(peers));
    for (std::size_t i = 0; i < size; ++i) peers[i].id = "p" + std::to_string(i + 1);
    return peers;
  }
  throw DomainError("generate_peers: no draw satisfied max(upload) <= min(download) after " +
                    std::to_string(kMaxRedraws) + " attempts");
}

/// The candidate pool a sweep uses for cluster size N.
inline std::vector<PeerProfile> scenario_pool(const ScenarioSpec& spec, std::size_t size) {
  const ClusterRanges r = spec.ranges_for(size);
  return generate_peers(size, r.upload, r.download, derive_seed(spec.seed, size));
}

// ---------------------------------------------------------------------------
// Sweeps

struct ExperimentRecord {
  std::size_t candidates = 0;  // N
  double livestream_bandwidth = 0.0;
  double budget = 0.0;  // BW
  std::size_t n_admitted = 0;
  double bw = 0.0;
  double efficiency_pct = 0.0;
  bool feasible = false;
};

inline ExperimentRecord admission_record(const std::vector<PeerProfile>& pool, double livestream,
                                         double budget, double delay_bound) {
  ExperimentRecord rec;
  rec.candidates = pool.size();
  rec.livestream_bandwidth = livestream;
  rec.budget = budget;
  try {
    const AdmissionOutcome outcome = join_cluster(
        AdmissionBudget(budget, pool, StreamParams::from_livestream(livestream, delay_bound)));
    rec.n_admitted = outcome.size();
    rec.bw = outcome.plan.total_bandwidth;
    rec.efficiency_pct = 100.0 * outcome.efficiency;
    rec.feasible = true;
  } catch (const InsufficientBudget&) {
    rec.feasible = false;
  }
  return rec;
}

/// Cross product of sizes x livestream bandwidths x budgets, ordered by N
/// ascending, v ascending, BW descending.
inline std::vector<ExperimentRecord> run_admission_sweep(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<std::size_t> sizes = spec.cluster_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<double> streams = spec.livestream_bandwidths;
  std::sort(streams.begin(), streams.end());
  streams.erase(std::unique(streams.begin(), streams.end()), streams.end());
  std::vector<double> budgets = spec.budgets;
  std::sort(budgets.begin(), budgets.end(), std::greater<>());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  std::vector<ExperimentRecord> records;
  records.reserve(sizes.size() * streams.size() * budgets.size());
  for (std::size_t size : sizes) {
    const std::vector<PeerProfile> pool = scenario_pool(spec, size);
    for (double v : streams) {
      for (double budget : budgets) {
        records.push_back(admission_record(pool, v, budget, spec.delay_bound));
      }
    }
  }
  return records;
}

struct CurvePoint {
  double budget = 0.0;
  std::size_t n = 0;
};

/// Largest bandwidth any top-m subset of the pool needs, i.e. the full pool's
/// bandwidth when that is finite.
inline double full_admission_bandwidth(const std::vector<PeerProfile>& pool,
                                       const StreamParams& stream) {
  const std::vector<PeerProfile> sorted = sort_peers(pool);
  double remaining = upload_sum(sorted);
  for (std::size_t first = 0; first < sorted.size(); ++first) {
    if (auto bw = allocated_bandwidth(sorted.size() - first, remaining, stream)) return *bw;
    remaining -= sorted[first].upload;
  }
  return stream.livestream_bandwidth();
}

/// join_cluster over `points` budgets spaced evenly from S/T to the
/// full-pool bandwidth, both ends included. Defaults to N points.
inline std::vector<CurvePoint> admitted_vs_budget_curve(const std::vector<PeerProfile>& pool,
                                                        const StreamParams& stream,
                                                        std::size_t points = 0) {
  if (pool.empty()) throw DomainError("admitted_vs_budget_curve: empty pool");
  if (points == 0) points = pool.size();
  const double low = stream.livestream_bandwidth();
  const double high = full_admission_bandwidth(pool, stream);

  std::vector<CurvePoint> curve;
  curve.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    double budget = low;
    if (points > 1) {
      budget = (k + 1 == points) ? high
                                 : low + (high - low) * static_cast<double>(k) /
                                             static_cast<double>(points - 1);
    }
    const AdmissionOutcome outcome = join_cluster(AdmissionBudget(budget, pool, stream));
    curve.push_back({budget, outcome.size()});
  }
  return curve;
}

/// Curve for the reference pool of size N drawn from `seed`.
inline std::vector<CurvePoint> admitted_vs_budget_curve(std::size_t size, double livestream,
                                                        std::uint64_t seed,
                                                        double delay_bound = kDefaultDelayBound) {
  ScenarioSpec spec;
  spec.seed = seed;
  return admitted_vs_budget_curve(scenario_pool(spec, size),
                                  StreamParams::from_livestream(livestream, delay_bound));
}

struct BaselineBandwidths {
  double unicast = 0.0;    // n * S/T
  double multicast = 0.0;  // S/T
};

inline BaselineBandwidths baseline_bandwidths(std::size_t n, const StreamParams& stream) {
  if (n == 0) throw DomainError("baseline_bandwidths: n must be >= 1");
  const double v = stream.livestream_bandwidth();
  return {static_cast<double>(n) * v, v};
}

struct ProfileRow {
  std::size_t peer_index = 0;  // 1-based, ascending upload
  double upload = 0.0;
  double block_size = 0.0;
  double bandwidth = 0.0;
};

struct ClusterProfile {
  std::size_t size = 0;
  double phase1_time = 0.0;
  std::vector<ProfileRow> rows;
};

/// Sorted (u_i, s_i, bw_i) rows of the optimal plan for each pool. Throws
/// ContractViolation if any s_i / bw_i differs from T1.
inline ClusterProfile block_size_profile(const std::vector<PeerProfile>& pool,
                                         const StreamParams& stream) {
  const AllocationPlan plan = min_bandwidth(pool, stream);
  ClusterProfile profile;
  profile.size = plan.size();
  profile.phase1_time = plan.phase1_time;
  profile.rows.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const double ratio = plan.block_sizes[i] / plan.peer_bandwidths[i];
    if (!approx_equal(ratio, plan.phase1_time)) {
      throw ContractViolation("block_size_profile: s_i/bw_i != T1 at position " +
                              std::to_string(i + 1));
    }
    profile.rows.push_back(
        {i + 1, plan.peers[i].upload, plan.block_sizes[i], plan.peer_bandwidths[i]});
  }
  return profile;
}

inline std::vector<ClusterProfile> block_size_profile(const std::vector<std::size_t>& sizes,
                                                      const ScenarioSpec& spec,
                                                      const StreamParams& stream) {
  std::vector<ClusterProfile> profiles;
  profiles.reserve(sizes.size());
  for (std::size_t size : sizes) profiles.push_back(block_size_profile(scenario_pool(spec, size), stream));
  return profiles;
}

}  // namespace acide
