// CSV and JSON encodings for peers, plans, admission outcomes, traces and
// experiment outputs.
//
// Peer CSV:      id,u_bps,d_bps           (header required)
// Peer JSON:     {"peers": [{"id", "upload_bps", "download_bps"}, ...],
//                 "stream": {"package_bits", "delay_ms", "livestream_bps"},
//                 "budget_bps": ...}      (stream and budget optional)
// Scenario JSON: {"cluster_sizes", "ranges": {"<N>": {"upload": [lo, hi],
//                 "download": [lo, hi]}}, "delay_bound_s",
//                 "livestream_bandwidths_bps", "budgets_bps", "seed"}
//                 (every field optional; defaults are the ScenarioSpec defaults)
//
// Bandwidths are written with 2 decimals, efficiencies as percentages with
// 2 decimals, sizes and times with 9.

#pragma once

#include <acide/admission.hpp>
#include <acide/core.hpp>
#include <acide/experiments.hpp>
#include <acide/sim.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace acide::io {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " +
                           what),
        source_(source),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

inline std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

inline std::string bps(double value) { return fixed(value, 2); }
inline std::string pct(double value) { return fixed(value, 2); }
inline std::string precise(double value) { return fixed(value, 9); }

// ---------------------------------------------------------------------------
// Peers

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

inline double parse_number(const std::string& text, const std::string& source, std::size_t line,
                           const char* column) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError(source, line, std::string("bad number in column ") + column + ": '" + text + "'");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

inline std::vector<PeerProfile> parse_peers_csv(std::istream& in, const std::string& source) {
  std::vector<PeerProfile> peers;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "id" || fields[1] != "u_bps" || fields[2] != "d_bps") {
        throw ParseError(source, line_no, "expected header 'id,u_bps,d_bps'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(source, line_no, "expected 3 fields");
    if (fields[0].empty()) throw ParseError(source, line_no, "empty peer id");
    const double up = detail::parse_number(fields[1], source, line_no, "u_bps");
    const double down = detail::parse_number(fields[2], source, line_no, "d_bps");
    try {
      peers.emplace_back(fields[0], up, down);
    } catch (const DomainError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!header_seen) throw ParseError(source, line_no, "missing header 'id,u_bps,d_bps'");
  if (peers.empty()) throw ParseError(source, line_no, "no peers");
  return peers;
}

inline std::string peers_csv(const std::vector<PeerProfile>& peers) {
  std::string out = "id,u_bps,d_bps\n";
  for (const auto& p : peers) out += p.id + "," + bps(p.upload) + "," + bps(p.download) + "\n";
  return out;
}

inline json peer_to_json(const PeerProfile& p) {
  return {{"id", p.id}, {"upload_bps", p.upload}, {"download_bps", p.download}};
}

inline PeerProfile peer_from_json(const json& j) {
  return PeerProfile(j.at("id").get<std::string>(), j.at("upload_bps").get<double>(),
                     j.at("download_bps").get<double>());
}

/// Stream settings as found in an input file; any may be absent.
struct StreamFields {
  std::optional<double> package_bits;
  std::optional<double> delay_ms;
  std::optional<double> livestream_bps;
};

struct ClusterFile {
  std::vector<PeerProfile> peers;
  StreamFields stream;
  std::optional<double> budget_bps;
};

namespace detail {

template <typename Fn>
auto with_json_errors(const std::string& source, Fn&& fn) {
  try {
    return fn();
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  } catch (const DomainError& e) {
    throw ParseError(source, 0, e.what());
  }
}

inline std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace detail

inline ClusterFile parse_cluster_json(const std::string& text, const std::string& source) {
  return detail::with_json_errors(source, [&] {
    const json doc = json::parse(text);
    ClusterFile file;
    for (const auto& p : doc.at("peers")) file.peers.push_back(peer_from_json(p));
    if (file.peers.empty()) throw ParseError(source, 0, "no peers");
    if (doc.contains("stream")) {
      const json& s = doc.at("stream");
      file.stream.package_bits = detail::optional_number(s, "package_bits");
      file.stream.delay_ms = detail::optional_number(s, "delay_ms");
      file.stream.livestream_bps = detail::optional_number(s, "livestream_bps");
    }
    file.budget_bps = detail::optional_number(doc, "budget_bps");
    return file;
  });
}

/// Reads a peer list from a .json cluster file or a CSV peer file.
inline ClusterFile load_cluster(const std::string& path) {
  const std::string text = detail::read_file(path);
  if (detail::ends_with(path, ".json")) return parse_cluster_json(text, path);
  std::istringstream in(text);
  ClusterFile file;
  file.peers = parse_peers_csv(in, path);
  return file;
}

// ---------------------------------------------------------------------------
// Plans and outcomes

inline json plan_to_json(const AllocationPlan& plan) {
  json peers = json::array();
  for (const auto& p : plan.peers) peers.push_back(peer_to_json(p));
  return {{"n", plan.size()},
          {"total_bandwidth_bps", plan.total_bandwidth},
          {"phase1_time_s", plan.phase1_time},
          {"phase2_time_s", plan.phase2_time},
          {"peers", peers},
          {"block_sizes_bits", plan.block_sizes},
          {"peer_bandwidths_bps", plan.peer_bandwidths}};
}

inline AllocationPlan plan_from_json(const json& j, const std::string& source) {
  return detail::with_json_errors(source, [&] {
    AllocationPlan plan;
    for (const auto& p : j.at("peers")) plan.peers.push_back(peer_from_json(p));
    plan.block_sizes = j.at("block_sizes_bits").get<std::vector<double>>();
    plan.peer_bandwidths = j.at("peer_bandwidths_bps").get<std::vector<double>>();
    plan.total_bandwidth = j.value("total_bandwidth_bps", 0.0);
    plan.phase1_time = j.value("phase1_time_s", 0.0);
    plan.phase2_time = j.value("phase2_time_s", 0.0);
    return plan;
  });
}

/// peer_index,id,u_bps,d_bps,s_bits,bw_bps
inline std::string plan_csv(const AllocationPlan& plan) {
  std::string out = "peer_index,id,u_bps,d_bps,s_bits,bw_bps\n";
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& p = plan.peers[i];
    out += std::to_string(i + 1) + "," + p.id + "," + bps(p.upload) + "," + bps(p.download) + "," +
           precise(plan.block_sizes[i]) + "," + bps(plan.peer_bandwidths[i]) + "\n";
  }
  return out;
}

inline json outcome_to_json(const AdmissionOutcome& outcome, double budget) {
  json admitted = json::array();
  for (const auto& p : outcome.admitted) admitted.push_back(p.id);
  json rejected = json::array();
  for (const auto& p : outcome.rejected) rejected.push_back(p.id);
  return {{"n", outcome.size()},
          {"budget_bps", budget},
          {"bw_bps", outcome.plan.total_bandwidth},
          {"efficiency", outcome.efficiency},
          {"efficiency_pct", pct(100.0 * outcome.efficiency)},
          {"removals", outcome.removals},
          {"admitted", admitted},
          {"rejected", rejected},
          {"plan", plan_to_json(outcome.plan)}};
}

// ---------------------------------------------------------------------------
// Traces

inline std::string trace_csv(const SimulationTrace& trace) {
  std::string out = "phase,step,sender,receiver,block,start_s,end_s,rate_bps\n";
  for (const auto& ev : trace.events) {
    out += std::to_string(ev.phase) + "," + std::to_string(ev.step) + "," + ev.sender + "," +
           ev.receiver + "," + std::to_string(ev.block_index) + "," + precise(ev.start_time) + "," +
           precise(ev.end_time) + "," + bps(ev.rate) + "\n";
  }
  return out;
}

inline json trace_to_json(const SimulationTrace& trace) {
  json events = json::array();
  for (const auto& ev : trace.events) {
    events.push_back({{"phase", ev.phase},
                      {"step", ev.step},
                      {"sender", ev.sender},
                      {"receiver", ev.receiver},
                      {"block", ev.block_index},
                      {"start_s", ev.start_time},
                      {"end_s", ev.end_time},
                      {"rate_bps", ev.rate}});
  }
  json completion = json::object();
  for (std::size_t i = 0; i < trace.plan.size(); ++i) {
    completion[trace.plan.peers[i].id] = trace.completion_times[i];
  }
  return {{"makespan_s", trace.makespan},
          {"completion_times_s", completion},
          {"plan", plan_to_json(trace.plan)},
          {"events", events}};
}

inline json playback_to_json(const PlaybackReport& report) {
  json j = {{"continuous", report.continuous},
            {"slack_s", report.slack},
            {"overshoot_s", report.overshoot},
            {"missing_blocks", report.missing_blocks}};
  j["worst_peer"] = report.worst_peer ? json(*report.worst_peer) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Experiments

inline std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "N,livestream_bps,BW_bps,n_admitted,bw_bps,efficiency_pct\n";
  for (const auto& r : records) {
    out += std::to_string(r.candidates) + "," + bps(r.livestream_bandwidth) + "," + bps(r.budget) +
           "," + std::to_string(r.n_admitted) + "," + bps(r.bw) + "," + pct(r.efficiency_pct) + "\n";
  }
  return out;
}

inline json records_to_json(const std::vector<ExperimentRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    out.push_back({{"N", r.candidates},
                   {"livestream_bps", r.livestream_bandwidth},
                   {"BW_bps", r.budget},
                   {"n_admitted", r.n_admitted},
                   {"bw_bps", r.bw},
                   {"efficiency_pct", r.efficiency_pct},
                   {"feasible", r.feasible}});
  }
  return out;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "BW_bps,n\n";
  for (const auto& p : curve) out += bps(p.budget) + "," + std::to_string(p.n) + "\n";
  return out;
}

inline std::string profile_csv(const ClusterProfile& profile) {
  std::string out = "peer_index,u_bps,s_bits,bw_bps\n";
  for (const auto& r : profile.rows) {
    out += std::to_string(r.peer_index) + "," + bps(r.upload) + "," + precise(r.block_size) + "," +
           bps(r.bandwidth) + "\n";
  }
  return out;
}

inline json scenario_to_json(const ScenarioSpec& spec) {
  json ranges = json::object();
  for (std::size_t size : spec.cluster_sizes) {
    const ClusterRanges r = spec.ranges_for(size);
    ranges[std::to_string(size)] = {{"upload", {r.upload.low, r.upload.high}},
                                    {"download", {r.download.low, r.download.high}}};
  }
  return {{"cluster_sizes", spec.cluster_sizes},
          {"ranges", ranges},
          {"delay_bound_s", spec.delay_bound},
          {"livestream_bandwidths_bps", spec.livestream_bandwidths},
          {"budgets_bps", spec.budgets},
          {"seed", spec.seed}};
}

inline ScenarioSpec scenario_from_json(const std::string& text, const std::string& source) {
  return detail::with_json_errors(source, [&] {
    const json doc = json::parse(text);
    ScenarioSpec spec;
    if (doc.contains("cluster_sizes")) {
      spec.cluster_sizes = doc.at("cluster_sizes").get<std::vector<std::size_t>>();
    }
    if (doc.contains("ranges")) {
      for (const auto& [key, value] : doc.at("ranges").items()) {
        std::size_t size = 0;
        try {
          size = std::stoul(key);
        } catch (const std::exception&) {
          throw ParseError(source, 0, "ranges key '" + key + "' is not a cluster size");
        }
        const auto up = value.at("upload").get<std::vector<double>>();
        const auto down = value.at("download").get<std::vector<double>>();
        if (up.size() != 2 || down.size() != 2) {
          throw ParseError(source, 0, "ranges for " + key + " must be [low, high] pairs");
        }
        spec.ranges[size] = {{up[0], up[1]}, {down[0], down[1]}};
      }
    }
    spec.delay_bound = doc.value("delay_bound_s", spec.delay_bound);
    if (doc.contains("livestream_bandwidths_bps")) {
      spec.livestream_bandwidths = doc.at("livestream_bandwidths_bps").get<std::vector<double>>();
    }
    if (doc.contains("budgets_bps")) spec.budgets = doc.at("budgets_bps").get<std::vector<double>>();
    spec.seed = doc.value("seed", spec.seed);
    spec.validate();
    return spec;
  });
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << contents;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace acide::io
