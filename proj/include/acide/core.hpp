// Core model types and the minimum-bandwidth block allocation solver.
//
// A cluster of n peers receives one media package of S bits within a delay
// bound T. Phase 1: the base station sends block i (s_i bits) to peer i at a
// dedicated rate bw_i. Phase 2: every peer forwards its own block to the other
// n - 1 peers over n - 1 steps using its upload link. The solver picks the
// block sizes that minimise the base-station bandwidth sum(bw_i) under
// T1 + T2 <= T.
//
// Units: bits, seconds, bits/second.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace acide {

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsFloor = 1e-12;

/// |a - b| <= rel * max(|a|, |b|), with an absolute floor for values near zero.
inline bool approx_equal(double a, double b, double rel = kRelTol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(rel * scale, kAbsFloor);
}

/// a <= b up to the relative tolerance.
inline bool approx_le(double a, double b, double rel = kRelTol) {
  return a <= b || approx_equal(a, b, rel);
}

// ---------------------------------------------------------------------------
// Errors

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The minimum-bandwidth denominator T*sum(u) - (n-1)*S is not positive.
class InfeasibleCluster : public std::runtime_error {
 public:
  InfeasibleCluster(std::size_t cluster_size, double upload_sum)
      : std::runtime_error("infeasible cluster: n=" + std::to_string(cluster_size) +
                           " with total upload " + std::to_string(upload_sum) +
                           " bps cannot finish Phase 2 within the delay bound"),
        cluster_size_(cluster_size),
        upload_sum_(upload_sum) {}

  std::size_t cluster_size() const noexcept { return cluster_size_; }
  double upload_sum() const noexcept { return upload_sum_; }

 private:
  std::size_t cluster_size_;
  double upload_sum_;
};

// ---------------------------------------------------------------------------
// Domain types

struct PeerProfile {
  std::string id;
  double upload = 0.0;    // bps
  double download = 0.0;  // bps

  PeerProfile() = default;
  PeerProfile(std::string peer_id, double upload_bps, double download_bps)
      : id(std::move(peer_id)), upload(upload_bps), download(download_bps) {
    if (!(upload > 0.0) || !(download > 0.0) || !std::isfinite(upload) ||
        !std::isfinite(download)) {
      throw DomainError("peer '" + id + "': upload and download must be positive and finite");
    }
  }

  friend bool operator==(const PeerProfile&, const PeerProfile&) = default;
};

class StreamParams {
 public:
  StreamParams(double package_bits, double delay_bound_s)
      : package_size_(package_bits), delay_bound_(delay_bound_s) {
    if (!(package_size_ > 0.0) || !(delay_bound_ > 0.0) || !std::isfinite(package_size_) ||
        !std::isfinite(delay_bound_)) {
      throw DomainError("stream: package size and delay bound must be positive and finite");
    }
  }

  /// S = v * T for a livestream bandwidth v.
  static StreamParams from_livestream(double livestream_bps, double delay_bound_s) {
    return StreamParams(livestream_bps * delay_bound_s, delay_bound_s);
  }

  double package_size() const noexcept { return package_size_; }
  double delay_bound() const noexcept { return delay_bound_; }
  double livestream_bandwidth() const noexcept { return package_size_ / delay_bound_; }

 private:
  double package_size_;
  double delay_bound_;
};

/// alpha_2..alpha_n; values[k - 2] holds alpha_k.
struct AlphaCoefficients {
  std::vector<double> values;
};

struct AllocationPlan {
  std::vector<PeerProfile> peers;  // ascending by upload
  std::vector<double> block_sizes;
  std::vector<double> peer_bandwidths;
  double total_bandwidth = 0.0;
  double phase1_time = 0.0;
  double phase2_time = 0.0;

  std::size_t size() const noexcept { return peers.size(); }
};

// ---------------------------------------------------------------------------
// Validation

enum class Condition {
  kUploadExceedsDownload,        // u_i > d_i
  kLivestreamExceedsDownloadSum, // S/T > sum(d)
  kUploadExceedsSomeDownload,    // max u > min d
  kMeanUploadBelowLivestream,    // S/T > sum(u)/n
};

/// Short machine-readable tag for a violated condition.
inline const char* condition_code(Condition c) {
  switch (c) {
    case Condition::kUploadExceedsDownload: return "A1";
    case Condition::kLivestreamExceedsDownloadSum: return "A2";
    case Condition::kUploadExceedsSomeDownload: return "A3";
    case Condition::kMeanUploadBelowLivestream: return "MEAN_UPLOAD";
  }
  return "UNKNOWN";
}

struct Violation {
  Condition condition;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Condition c) const {
    return std::any_of(violations.begin(), violations.end(),
                       [c](const Violation& v) { return v.condition == c; });
  }
};

inline double upload_sum(std::span<const PeerProfile> peers) {
  double total = 0.0;
  for (const auto& p : peers) total += p.upload;
  return total;
}

/// Checks the model assumptions and the mean-upload feasibility condition.
/// Never throws for a non-empty list; every violated condition is reported.
inline ValidationReport validate_cluster(std::span<const PeerProfile> peers,
                                         const StreamParams& params) {
  if (peers.empty()) throw DomainError("validate_cluster: empty peer list");

  ValidationReport report;
  const double livestream = params.livestream_bandwidth();
  double download_sum = 0.0;
  double max_upload = peers.front().upload;
  double min_download = peers.front().download;
  const PeerProfile* max_upload_peer = &peers.front();
  const PeerProfile* min_download_peer = &peers.front();

  for (const auto& p : peers) {
    if (p.upload > p.download) {
      report.violations.push_back(
          {Condition::kUploadExceedsDownload,
           "peer '" + p.id + "' upload " + std::to_string(p.upload) + " > download " +
               std::to_string(p.download)});
    }
    download_sum += p.download;
    if (p.upload > max_upload) {
      max_upload = p.upload;
      max_upload_peer = &p;
    }
    if (p.download < min_download) {
      min_download = p.download;
      min_download_peer = &p;
    }
  }

  // Equality is tolerated: a single peer with u = d = S/T is a valid unicast.
  if (livestream > download_sum && !approx_equal(livestream, download_sum)) {
    report.violations.push_back({Condition::kLivestreamExceedsDownloadSum,
                                 "livestream " + std::to_string(livestream) +
                                     " bps > total download " + std::to_string(download_sum)});
  }
  if (max_upload > min_download) {
    report.violations.push_back(
        {Condition::kUploadExceedsSomeDownload,
         "upload of '" + max_upload_peer->id + "' (" + std::to_string(max_upload) +
             ") > download of '" + min_download_peer->id + "' (" + std::to_string(min_download) +
             ")"});
  }
  const double mean_upload = upload_sum(peers) / static_cast<double>(peers.size());
  if (livestream > mean_upload && !approx_equal(livestream, mean_upload)) {
    report.violations.push_back({Condition::kMeanUploadBelowLivestream,
                                 "livestream " + std::to_string(livestream) +
                                     " bps > mean upload " + std::to_string(mean_upload)});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Solver

/// Ascending by upload, then download, then id.
inline std::vector<PeerProfile> sort_peers(std::vector<PeerProfile> peers) {
  std::sort(peers.begin(), peers.end(), [](const PeerProfile& a, const PeerProfile& b) {
    return std::tie(a.upload, a.download, a.id) < std::tie(b.upload, b.download, b.id);
  });
  return peers;
}

namespace detail {

inline void require_positive_uploads(std::span<const PeerProfile> peers, const char* where) {
  for (const auto& p : peers) {
    if (!(p.upload > 0.0)) {
      throw DomainError(std::string(where) + ": non-positive upload for peer '" + p.id + "'");
    }
  }
}

}  // namespace detail

/// alpha_k = (sum_{i<=k} u_i) / u_k for k = 2..n.
inline AlphaCoefficients alpha_coefficients(std::span<const PeerProfile> sorted_peers) {
  detail::require_positive_uploads(sorted_peers, "alpha_coefficients");
  AlphaCoefficients alpha;
  if (sorted_peers.size() < 2) return alpha;
  alpha.values.reserve(sorted_peers.size() - 1);
  double prefix = sorted_peers.front().upload;
  for (std::size_t k = 1; k < sorted_peers.size(); ++k) {
    prefix += sorted_peers[k].upload;
    alpha.values.push_back(prefix / sorted_peers[k].upload);
  }
  return alpha;
}

/// Back-substitution on the upper-triangular system
///
///   [ 1  1  ...  1      1  ]   [s_1]   [S]
///   [ 0 a_2 ...  1      1  ]   [s_2]   [S]
///   [ ...                  ] * [...] = [S]
///   [ 0  0  ... a_{n-1} 1  ]   [...]   [S]
///   [ 0  0  ...  0     a_n ]   [s_n]   [S]
///
/// The first row is conservation (sum s_i = S). Runs in O(n) with a running
/// suffix sum.
inline std::vector<double> solve_block_sizes(std::span<const PeerProfile> sorted_peers,
                                             const StreamParams& params) {
  if (sorted_peers.empty()) throw DomainError("solve_block_sizes: empty cluster");
  const AlphaCoefficients alpha = alpha_coefficients(sorted_peers);
  const double package = params.package_size();
  const std::size_t n = sorted_peers.size();

  std::vector<double> sizes(n, 0.0);
  double suffix = 0.0;
  for (std::size_t k = n; k-- > 1;) {
    sizes[k] = (package - suffix) / alpha.values[k - 1];
    suffix += sizes[k];
  }
  sizes[0] = package - suffix;
  return sizes;
}

/// Phase-2 duration (n-1) * S / sum(u).
inline double phase2_time(std::size_t n, double total_upload, const StreamParams& params) {
  if (n < 2) return 0.0;
  return static_cast<double>(n - 1) * params.package_size() / total_upload;
}

/// Minimum base-station bandwidth S / (T - (n-1) S / sum(u)) for a cluster of
/// n peers with the given upload sum, or nullopt when the denominator is not
/// positive. Equals S * sum(u) / (T * sum(u) - (n-1) S).
inline std::optional<double> allocated_bandwidth(std::size_t n, double total_upload,
                                                 const StreamParams& params) {
  if (n == 0) throw DomainError("allocated_bandwidth: empty cluster");
  if (!(total_upload > 0.0)) throw DomainError("allocated_bandwidth: non-positive upload sum");
  const double phase1 = params.delay_bound() - phase2_time(n, total_upload, params);
  if (!(phase1 > 0.0)) return std::nullopt;
  return params.package_size() / phase1;
}

inline std::optional<double> allocated_bandwidth(std::span<const PeerProfile> peers,
                                                 const StreamParams& params) {
  if (peers.empty()) throw DomainError("allocated_bandwidth: empty cluster");
  detail::require_positive_uploads(peers, "allocated_bandwidth");
  return allocated_bandwidth(peers.size(), upload_sum(peers), params);
}

/// Full solution: sorted peers, block sizes, per-peer Phase-1 rates, T1, T2
/// and the total bandwidth. Throws InfeasibleCluster when Phase 2 alone would
/// use up the delay bound.
inline AllocationPlan min_bandwidth(std::vector<PeerProfile> peers, const StreamParams& params) {
  if (peers.empty()) throw DomainError("min_bandwidth: empty cluster");
  detail::require_positive_uploads(peers, "min_bandwidth");

  AllocationPlan plan;
  plan.peers = sort_peers(std::move(peers));
  const std::size_t n = plan.peers.size();
  const double total_upload = upload_sum(plan.peers);

  const auto bw = allocated_bandwidth(n, total_upload, params);
  if (!bw) throw InfeasibleCluster(n, total_upload);

  plan.block_sizes = solve_block_sizes(plan.peers, params);
  plan.total_bandwidth = *bw;
  plan.phase2_time = phase2_time(n, total_upload, params);
  plan.phase1_time = params.delay_bound() - plan.phase2_time;
  plan.peer_bandwidths.reserve(n);
  for (double s : plan.block_sizes) plan.peer_bandwidths.push_back(s / plan.phase1_time);
  return plan;
}

}  // namespace acide
