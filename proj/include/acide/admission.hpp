// Cluster admission under a bandwidth budget reserved in advance by the base
// station.

#pragma once

#include <acide/core.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace acide {

/// Budget below the livestream bandwidth S/T: not even one peer fits.
class InsufficientBudget : public std::runtime_error {
 public:
  InsufficientBudget(double budget, double livestream)
      : std::runtime_error("insufficient budget: " + std::to_string(budget) +
                           " bps < livestream bandwidth " + std::to_string(livestream) + " bps"),
        budget_(budget),
        livestream_(livestream) {}

  double budget() const noexcept { return budget_; }
  double livestream() const noexcept { return livestream_; }

 private:
  double budget_;
  double livestream_;
};

class TooManyCandidates : public DomainError {
 public:
  using DomainError::DomainError;
};

struct AdmissionBudget {
  double given_allocated_bandwidth;  // BW, bps
  std::vector<PeerProfile> candidates;
  StreamParams stream;

  AdmissionBudget(double budget_bps, std::vector<PeerProfile> pool, StreamParams params)
      : given_allocated_bandwidth(budget_bps), candidates(std::move(pool)), stream(params) {
    if (!(given_allocated_bandwidth > 0.0) || !std::isfinite(given_allocated_bandwidth)) {
      throw DomainError("admission budget must be positive and finite");
    }
    if (candidates.empty()) throw DomainError("admission requires at least one candidate");
  }
};

struct AdmissionOutcome {
  std::vector<PeerProfile> admitted;  // ascending by upload
  AllocationPlan plan;
  double efficiency = 0.0;  // bw / BW
  std::vector<PeerProfile> rejected;
  std::size_t removals = 0;  // greedy iterations performed

  std::size_t size() const noexcept { return admitted.size(); }
};

/// bw fits in BW up to the relative tolerance.
inline bool fits_budget(double bw, double budget) { return approx_le(bw, budget); }

namespace detail {

inline void require_budget_reaches_livestream(const AdmissionBudget& budget) {
  const double livestream = budget.stream.livestream_bandwidth();
  if (!fits_budget(livestream, budget.given_allocated_bandwidth)) {
    throw InsufficientBudget(budget.given_allocated_bandwidth, livestream);
  }
}

inline AdmissionOutcome make_outcome(std::vector<PeerProfile> admitted,
                                     std::vector<PeerProfile> rejected, const StreamParams& stream,
                                     double budget) {
  AdmissionOutcome outcome;
  outcome.plan = min_bandwidth(admitted, stream);
  outcome.admitted = outcome.plan.peers;
  outcome.rejected = sort_peers(std::move(rejected));
  outcome.efficiency = std::min(1.0, outcome.plan.total_bandwidth / budget);
  return outcome;
}

}  // namespace detail

/// Greedy admission: start from all N candidates sorted by upload and drop
/// the lowest-upload candidate while the minimum bandwidth of the remainder
/// exceeds BW. A remainder whose Phase 2 cannot finish in time counts as
/// infinite bandwidth. O(N log N) for the sort plus O(N) for the scan.
inline AdmissionOutcome join_cluster(const AdmissionBudget& budget) {
  detail::require_budget_reaches_livestream(budget);

  const std::vector<PeerProfile> sorted = sort_peers(budget.candidates);
  const std::size_t total = sorted.size();
  double remaining_upload = upload_sum(sorted);

  std::size_t first = 0;
  for (; first + 1 < total; ++first) {
    const auto bw = allocated_bandwidth(total - first, remaining_upload, budget.stream);
    if (bw && fits_budget(*bw, budget.given_allocated_bandwidth)) break;
    remaining_upload -= sorted[first].upload;
  }

  std::vector<PeerProfile> rejected(sorted.begin(), sorted.begin() + first);
  std::vector<PeerProfile> admitted(sorted.begin() + first, sorted.end());
  AdmissionOutcome outcome = detail::make_outcome(std::move(admitted), std::move(rejected),
                                                  budget.stream, budget.given_allocated_bandwidth);
  outcome.removals = first;
  return outcome;
}

/// 1 + sum(u)/(S/T) - sum(u)/bw over all N candidates: an upper bound on the
/// number of peers a cluster drawn from them can hold at bandwidth bw.
inline double admitted_upper_bound(std::span<const PeerProfile> candidates,
                                   const StreamParams& stream, double bw) {
  const double livestream = stream.livestream_bandwidth();
  if (!approx_le(livestream, bw)) {
    throw DomainError("admitted_upper_bound: bandwidth below livestream bandwidth");
  }
  const double total = upload_sum(candidates);
  return 1.0 + total / livestream - total / bw;
}

/// Integer form of admitted_upper_bound. Values within tolerance of an
/// integer round to it so that an exact bound of N is not floored to N - 1.
inline std::size_t admitted_upper_bound_floor(std::span<const PeerProfile> candidates,
                                              const StreamParams& stream, double bw) {
  const double bound = admitted_upper_bound(candidates, stream, bw);
  const double nearest = std::round(bound);
  const double value = approx_equal(bound, nearest) ? nearest : std::floor(bound);
  return value < 0.0 ? 0 : static_cast<std::size_t>(value);
}

inline constexpr std::size_t kBruteForceMaxCandidates = 16;

/// Exhaustive search over all non-empty subsets. Picks maximum cardinality,
/// then minimum bandwidth, then the lexicographically smallest sorted id
/// list. Test oracle for join_cluster; limited to 16 candidates.
inline AdmissionOutcome brute_force_admission(const AdmissionBudget& budget) {
  const std::size_t total = budget.candidates.size();
  if (total > kBruteForceMaxCandidates) {
    throw TooManyCandidates("brute_force_admission: " + std::to_string(total) +
                            " candidates exceeds limit of " +
                            std::to_string(kBruteForceMaxCandidates));
  }
  detail::require_budget_reaches_livestream(budget);

  const std::vector<PeerProfile> sorted = sort_peers(budget.candidates);

  auto sorted_ids = [&](std::uint32_t mask) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask & (1u << i)) ids.push_back(sorted[i].id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  std::uint32_t best_mask = 0;
  int best_count = 0;
  double best_bw = std::numeric_limits<double>::infinity();

  const std::uint32_t limit = 1u << total;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int count = std::popcount(mask);
    if (count < best_count) continue;
    double subset_upload = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask & (1u << i)) subset_upload += sorted[i].upload;
    }
    const auto bw =
        allocated_bandwidth(static_cast<std::size_t>(count), subset_upload, budget.stream);
    if (!bw || !fits_budget(*bw, budget.given_allocated_bandwidth)) continue;

    bool better = count > best_count || *bw < best_bw;
    if (!better && *bw == best_bw) better = sorted_ids(mask) < sorted_ids(best_mask);
    if (better) {
      best_mask = mask;
      best_count = count;
      best_bw = *bw;
    }
  }

  if (best_mask == 0) {
    throw InsufficientBudget(budget.given_allocated_bandwidth,
                             budget.stream.livestream_bandwidth());
  }

  std::vector<PeerProfile> admitted;
  std::vector<PeerProfile> rejected;
  for (std::size_t i = 0; i < total; ++i) {
    (best_mask & (1u << i) ? admitted : rejected).push_back(sorted[i]);
  }
  return detail::make_outcome(std::move(admitted), std::move(rejected), budget.stream,
                              budget.given_allocated_bandwidth);
}

}  // namespace acide
