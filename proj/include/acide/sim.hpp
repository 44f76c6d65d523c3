// Event-level replay of the two-phase package distribution.
//
// Phase 1: the base station sends block i to peer i at bw_i; all transfers
// start at 0. Phase 2: n - 1 barrier-synchronised steps; in each step every
// peer uploads its own block to one other peer (circulant pairing) at its
// upload rate. Event times are computed in closed form.

#pragma once

#include <acide/core.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace acide {

inline const std::string kBaseStation = "base-station";

struct ScheduleStep {
  std::size_t step;      // 1..n-1
  std::size_t sender;    // 1-based sorted position
  std::size_t receiver;  // 1-based sorted position

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

/// Circulant Phase-2 pairing: at step t, position i sends to ((i - 1 + t) mod n) + 1.
/// Every step is a perfect matching without self-sends and each ordered pair
/// (i, j), i != j, appears exactly once over the n - 1 steps.
inline std::vector<ScheduleStep> build_schedule(std::size_t n) {
  std::vector<ScheduleStep> schedule;
  if (n < 2) return schedule;
  schedule.reserve(n * (n - 1));
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t i = 1; i <= n; ++i) {
      schedule.push_back({t, i, ((i - 1 + t) % n) + 1});
    }
  }
  return schedule;
}

struct TransferEvent {
  int phase = 1;
  std::size_t step = 0;  // 0 in Phase 1
  std::string sender;
  std::string receiver;
  std::size_t block_index = 0;  // 1-based
  double start_time = 0.0;
  double end_time = 0.0;
  double rate = 0.0;
};

struct SimulationTrace {
  AllocationPlan plan;
  std::vector<TransferEvent> events;
  std::vector<double> completion_times;  // aligned with plan.peers
  double makespan = 0.0;
};

inline SimulationTrace simulate(const AllocationPlan& plan) {
  const std::size_t n = plan.peers.size();
  if (n == 0) throw ContractViolation("simulate: empty plan");
  if (plan.block_sizes.size() != n || plan.peer_bandwidths.size() != n) {
    throw ContractViolation("simulate: block_sizes/peer_bandwidths do not match peer count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(plan.block_sizes[i] > 0.0) || !(plan.peer_bandwidths[i] > 0.0) ||
        !(plan.peers[i].upload > 0.0)) {
      throw ContractViolation("simulate: non-positive block size or rate at position " +
                              std::to_string(i + 1));
    }
  }
  {
    std::unordered_set<std::string> ids;
    for (const auto& p : plan.peers) {
      if (!ids.insert(p.id).second) throw ContractViolation("simulate: duplicate peer id '" + p.id + "'");
    }
  }

  SimulationTrace trace;
  trace.plan = plan;
  trace.completion_times.assign(n, 0.0);
  trace.events.reserve(n * n);

  double phase1_end = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rate = plan.peer_bandwidths[i];
    const double end = plan.block_sizes[i] / rate;
    trace.events.push_back({1, 0, kBaseStation, plan.peers[i].id, i + 1, 0.0, end, rate});
    trace.completion_times[i] = end;
    phase1_end = std::max(phase1_end, end);
  }

  double step_length = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    step_length = std::max(step_length, plan.block_sizes[i] / plan.peers[i].upload);
  }

  for (const ScheduleStep& pair : build_schedule(n)) {
    const std::size_t from = pair.sender - 1;
    const std::size_t to = pair.receiver - 1;
    const double rate = plan.peers[from].upload;
    const double start = phase1_end + static_cast<double>(pair.step - 1) * step_length;
    const double end = start + plan.block_sizes[from] / rate;
    trace.events.push_back(
        {2, pair.step, plan.peers[from].id, plan.peers[to].id, pair.sender, start, end, rate});
    trace.completion_times[to] = std::max(trace.completion_times[to], end);
  }

  trace.makespan = *std::max_element(trace.completion_times.begin(), trace.completion_times.end());
  return trace;
}

struct PlaybackReport {
  bool continuous = true;
  double slack = 0.0;  // T - latest completion
  std::optional<std::string> worst_peer;
  double overshoot = 0.0;      // seconds past T for the worst peer
  std::size_t missing_blocks = 0;  // over all peers
};

/// Continuous iff every peer holds all n blocks by T. Completion times and
/// block coverage are recomputed from the trace events.
inline PlaybackReport playback_check(const SimulationTrace& trace, const StreamParams& params) {
  const auto& peers = trace.plan.peers;
  const std::size_t n = peers.size();
  std::vector<double> completion(n, 0.0);
  std::vector<std::vector<bool>> held(n, std::vector<bool>(n, false));

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position.emplace(peers[i].id, i);

  for (const auto& ev : trace.events) {
    const auto it = position.find(ev.receiver);
    if (it == position.end()) continue;
    const std::size_t to = it->second;
    completion[to] = std::max(completion[to], ev.end_time);
    if (ev.block_index >= 1 && ev.block_index <= n) held[to][ev.block_index - 1] = true;
  }

  PlaybackReport report;
  const double deadline = params.delay_bound();
  double latest = 0.0;
  std::optional<std::size_t> late_peer;
  std::optional<std::size_t> incomplete_peer;
  for (std::size_t i = 0; i < n; ++i) {
    const auto missing = static_cast<std::size_t>(std::count(held[i].begin(), held[i].end(), false));
    report.missing_blocks += missing;
    if (missing > 0 && !incomplete_peer) incomplete_peer = i;
    if (!late_peer || completion[i] > completion[*late_peer]) late_peer = i;
    latest = std::max(latest, completion[i]);
  }

  report.slack = deadline - latest;
  const bool late = n > 0 && !approx_le(latest, deadline);
  if (late) {
    report.continuous = false;
    report.worst_peer = peers[*late_peer].id;
    report.overshoot = latest - deadline;
  } else if (incomplete_peer) {
    report.continuous = false;
    report.worst_peer = peers[*incomplete_peer].id;
  }
  return report;
}

}  // namespace acide
