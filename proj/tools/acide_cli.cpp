// acide: command-line front end.
//
//   acide solve    --input peers.csv --livestream-bps 10000 [--output plan.json]
//   acide admit    --input peers.csv --livestream-bps 10000 --budget-bps 15000
//   acide simulate --input peers.csv --livestream-bps 10000 [--output trace.csv]
//   acide sweep    [--input scenario.json] [--table1-defaults] --output records.csv
//   acide curve    --sizes 5,10 --livestream-bps 10000,16000 --output curves/
//   acide profile  --sizes 5,120 --livestream-bps 10000 --output profiles/
//
// Errors go to stderr as "error: <CODE>: <message>". Exit codes: 0 ok,
// 1 usage or I/O, 2 validation (A1, A2, A3, MEAN_UPLOAD, INFEASIBLE_CLUSTER),
// 3 INSUFFICIENT_BUDGET, 4 PARSE_ERROR, 5 PLAYBACK_VIOLATION.

#include <acide/acide.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using acide::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInsufficientBudget = 3;
constexpr int kExitParse = 4;
constexpr int kExitPlayback = 5;

constexpr const char* kSeedEnv = "ACIDE_SEED";

struct CliError {
  int exit_code;
  std::string code;
  std::string message;
};

struct Options {
  std::string input;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::vector<double> budgets;
  std::vector<double> livestreams;
  std::optional<double> delay_ms;
  std::optional<double> package_bits;
  std::vector<std::size_t> sizes;
  bool table1_defaults = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "USAGE", std::string(kSeedEnv) + " is not an unsigned integer"};
    }
  }
  return acide::kDefaultSeed;
}

bool wants_json(const Options& opt) {
  if (!opt.format.empty()) return opt.format == "json";
  return opt.output.size() >= 5 && opt.output.compare(opt.output.size() - 5, 5, ".json") == 0;
}

void emit(const Options& opt, const std::string& csv, const json& doc) {
  if (opt.output.empty()) return;
  acide::io::write_file(opt.output, wants_json(opt) ? doc.dump(2) + "\n" : csv);
}

double single(const std::vector<double>& values, const char* flag) {
  if (values.size() != 1) {
    throw CliError{kExitUsage, "USAGE", std::string(flag) + " takes exactly one value here"};
  }
  return values.front();
}

/// Flags override file values; delay defaults to 200 ms.
acide::StreamParams resolve_stream(const Options& opt, const acide::io::StreamFields& file) {
  const double delay_ms = opt.delay_ms.value_or(file.delay_ms.value_or(1000.0 * acide::kDefaultDelayBound));
  const double delay_s = delay_ms / 1000.0;
  std::optional<double> package;
  if (opt.package_bits) {
    package = opt.package_bits;
  } else if (!opt.livestreams.empty()) {
    package = single(opt.livestreams, "--livestream-bps") * delay_s;
  } else if (file.package_bits) {
    package = file.package_bits;
  } else if (file.livestream_bps) {
    package = *file.livestream_bps * delay_s;
  }
  if (!package) {
    throw CliError{kExitUsage, "USAGE",
                   "stream not specified: pass --package-bits or --livestream-bps"};
  }
  try {
    return acide::StreamParams(*package, delay_s);
  } catch (const acide::DomainError& e) {
    throw CliError{kExitUsage, "USAGE", e.what()};
  }
}

acide::io::ClusterFile load_input(const Options& opt) {
  if (opt.input.empty()) throw CliError{kExitUsage, "USAGE", "--input is required"};
  return acide::io::load_cluster(opt.input);
}

void require_valid(const std::vector<acide::PeerProfile>& peers, const acide::StreamParams& stream,
                   bool individual_only) {
  const auto report = acide::validate_cluster(peers, stream);
  std::vector<const acide::Violation*> blocking;
  for (const auto& v : report.violations) {
    if (!individual_only || v.condition == acide::Condition::kUploadExceedsDownload) {
      blocking.push_back(&v);
    }
  }
  if (blocking.empty()) return;
  for (std::size_t i = 1; i < blocking.size(); ++i) {
    std::cerr << "error: " << acide::condition_code(blocking[i]->condition) << ": "
              << blocking[i]->detail << "\n";
  }
  throw CliError{kExitValidation, acide::condition_code(blocking.front()->condition),
                 blocking.front()->detail};
}

void print_plan_summary(const acide::AllocationPlan& plan, const acide::StreamParams& stream) {
  using acide::io::bps;
  using acide::io::precise;
  const auto baseline = acide::baseline_bandwidths(plan.size(), stream);
  std::cout << "n=" << plan.size() << " bw_bps=" << bps(plan.total_bandwidth)
            << " T1_s=" << precise(plan.phase1_time) << " T2_s=" << precise(plan.phase2_time)
            << " livestream_bps=" << bps(stream.livestream_bandwidth())
            << " unicast_bps=" << bps(baseline.unicast) << "\n";
}

json stream_json(const acide::StreamParams& stream) {
  return {{"package_bits", stream.package_size()},
          {"delay_bound_s", stream.delay_bound()},
          {"livestream_bps", stream.livestream_bandwidth()}};
}

// ---------------------------------------------------------------------------

int run_solve(const Options& opt) {
  const auto file = load_input(opt);
  const auto stream = resolve_stream(opt, file.stream);
  require_valid(file.peers, stream, false);
  const auto plan = acide::min_bandwidth(file.peers, stream);
  print_plan_summary(plan, stream);
  std::cout << acide::io::plan_csv(plan);
  json doc = acide::io::plan_to_json(plan);
  doc["stream"] = stream_json(stream);
  emit(opt, acide::io::plan_csv(plan), doc);
  return kExitOk;
}

int run_admit(const Options& opt) {
  const auto file = load_input(opt);
  const auto stream = resolve_stream(opt, file.stream);
  std::optional<double> budget = file.budget_bps;
  if (!opt.budgets.empty()) budget = single(opt.budgets, "--budget-bps");
  if (!budget) throw CliError{kExitUsage, "USAGE", "--budget-bps is required"};
  require_valid(file.peers, stream, true);

  const acide::AdmissionBudget request = [&] {
    try {
      return acide::AdmissionBudget(*budget, file.peers, stream);
    } catch (const acide::DomainError& e) {
      throw CliError{kExitUsage, "USAGE", e.what()};
    }
  }();
  const auto outcome = acide::join_cluster(request);

  std::cout << "N=" << file.peers.size() << " n=" << outcome.size()
            << " bw_bps=" << acide::io::bps(outcome.plan.total_bandwidth)
            << " BW_bps=" << acide::io::bps(*budget)
            << " efficiency_pct=" << acide::io::pct(100.0 * outcome.efficiency) << "\n";
  json doc = acide::io::outcome_to_json(outcome, *budget);
  doc["stream"] = stream_json(stream);
  emit(opt, acide::io::plan_csv(outcome.plan), doc);
  return kExitOk;
}

int run_simulate(const Options& opt) {
  if (opt.input.empty()) throw CliError{kExitUsage, "USAGE", "--input is required"};

  acide::AllocationPlan plan;
  std::optional<acide::StreamParams> stream;
  const bool plan_input = [&] {
    if (opt.input.size() < 5 || opt.input.compare(opt.input.size() - 5, 5, ".json") != 0) return false;
    try {
      return json::parse(acide::io::detail::read_file(opt.input)).contains("block_sizes_bits");
    } catch (const json::exception&) {
      return false;
    }
  }();

  if (plan_input) {
    const json doc = json::parse(acide::io::detail::read_file(opt.input));
    plan = acide::io::plan_from_json(doc, opt.input);
    acide::io::StreamFields fields;
    if (doc.contains("stream")) {
      const json& s = doc.at("stream");
      if (s.contains("package_bits")) fields.package_bits = s.at("package_bits").get<double>();
      if (s.contains("delay_bound_s")) fields.delay_ms = 1000.0 * s.at("delay_bound_s").get<double>();
    }
    stream = resolve_stream(opt, fields);
  } else {
    const auto file = load_input(opt);
    stream = resolve_stream(opt, file.stream);
    require_valid(file.peers, *stream, false);
    plan = acide::min_bandwidth(file.peers, *stream);
  }

  const auto trace = acide::simulate(plan);
  const auto report = acide::playback_check(trace, *stream);
  std::cout << "n=" << plan.size() << " events=" << trace.events.size()
            << " makespan_s=" << acide::io::precise(trace.makespan)
            << " delay_bound_s=" << acide::io::precise(stream->delay_bound())
            << " continuous=" << (report.continuous ? "yes" : "no") << "\n";

  json doc = acide::io::trace_to_json(trace);
  doc["playback"] = acide::io::playback_to_json(report);
  emit(opt, acide::io::trace_csv(trace), doc);

  if (!report.continuous) {
    throw CliError{kExitPlayback, "PLAYBACK_VIOLATION",
                   "peer '" + report.worst_peer.value_or("?") + "' misses the delay bound by " +
                       acide::io::precise(report.overshoot) + " s (" +
                       std::to_string(report.missing_blocks) + " missing blocks)"};
  }
  return kExitOk;
}

acide::ScenarioSpec scenario_from_options(const Options& opt) {
  acide::ScenarioSpec spec;
  if (!opt.input.empty()) {
    spec = acide::io::scenario_from_json(acide::io::detail::read_file(opt.input), opt.input);
  } else {
    spec.seed = default_seed();
  }
  if (opt.table1_defaults) spec.cluster_sizes = acide::reference_sizes();
  if (!opt.sizes.empty()) spec.cluster_sizes = opt.sizes;
  if (!opt.livestreams.empty()) spec.livestream_bandwidths = opt.livestreams;
  if (!opt.budgets.empty()) spec.budgets = opt.budgets;
  if (opt.delay_ms) spec.delay_bound = *opt.delay_ms / 1000.0;
  if (opt.seed) spec.seed = *opt.seed;
  try {
    spec.validate();
  } catch (const acide::DomainError& e) {
    throw CliError{kExitUsage, "USAGE", e.what()};
  }
  return spec;
}

int run_sweep(const Options& opt) {
  const auto spec = scenario_from_options(opt);
  const auto records = acide::run_admission_sweep(spec);
  const std::string csv = acide::io::records_csv(records);
  if (opt.output.empty()) {
    std::cout << csv;
  } else {
    json doc = {{"scenario", acide::io::scenario_to_json(spec)},
                {"records", acide::io::records_to_json(records)}};
    emit(opt, csv, doc);
    std::cout << "records=" << records.size() << " seed=" << spec.seed << " output=" << opt.output
              << "\n";
  }
  return kExitOk;
}

fs::path prepare_directory(const Options& opt) {
  const fs::path dir(opt.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{kExitUsage, "IO_ERROR", opt.output + ": " + ec.message()};
  return dir;
}

std::string integral(double value) { return std::to_string(static_cast<long long>(value)); }

int run_curve(const Options& opt) {
  const auto spec = scenario_from_options(opt);
  const bool to_dir = !opt.output.empty();
  const fs::path dir = to_dir ? prepare_directory(opt) : fs::path();
  for (std::size_t size : spec.cluster_sizes) {
    const auto pool = acide::scenario_pool(spec, size);
    for (double v : spec.livestream_bandwidths) {
      const auto curve = acide::admitted_vs_budget_curve(
          pool, acide::StreamParams::from_livestream(v, spec.delay_bound));
      const std::string csv = acide::io::curve_csv(curve);
      const std::string name = "curve_N" + std::to_string(size) + "_v" + integral(v) + ".csv";
      if (to_dir) {
        acide::io::write_file((dir / name).string(), csv);
        std::cout << name << " points=" << curve.size() << "\n";
      } else {
        std::cout << "# " << name << "\n" << csv;
      }
    }
  }
  return kExitOk;
}

int run_profile(const Options& opt) {
  Options adjusted = opt;
  if (adjusted.sizes.empty() && adjusted.input.empty()) adjusted.sizes = acide::reference_sizes();
  if (adjusted.livestreams.empty() && adjusted.input.empty()) adjusted.livestreams = {10000};
  const auto spec = scenario_from_options(adjusted);
  const bool to_dir = !opt.output.empty();
  const fs::path dir = to_dir ? prepare_directory(opt) : fs::path();
  for (double v : spec.livestream_bandwidths) {
    const auto stream = acide::StreamParams::from_livestream(v, spec.delay_bound);
    for (const auto& profile : acide::block_size_profile(spec.cluster_sizes, spec, stream)) {
      const std::string csv = acide::io::profile_csv(profile);
      const std::string name =
          "profile_n" + std::to_string(profile.size) + "_v" + integral(v) + ".csv";
      if (to_dir) {
        acide::io::write_file((dir / name).string(), csv);
        std::cout << name << " T1_s=" << acide::io::precise(profile.phase1_time) << "\n";
      } else {
        std::cout << "# " << name << "\n" << csv;
      }
    }
  }
  return kExitOk;
}

int fail(const CliError& e) {
  std::cerr << "error: " << e.code << ": " << e.message << "\n";
  return e.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ACIDE cluster bandwidth allocation and admission toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "Input file (peers CSV/JSON, plan JSON or scenario JSON)");
    sub->add_option("--output", opt.output, "Output file or directory");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opt.seed, std::string("RNG seed (default $") + kSeedEnv + " or " +
                                            std::to_string(acide::kDefaultSeed) + ")");
    sub->add_option("--budget-bps", opt.budgets, "Given allocated bandwidth BW")->delimiter(',');
    sub->add_option("--livestream-bps", opt.livestreams, "Livestream bandwidth S/T")->delimiter(',');
    sub->add_option("--delay-ms", opt.delay_ms, "Delay bound T in milliseconds (default 200)");
    sub->add_option("--package-bits", opt.package_bits, "Package size S in bits");
    sub->add_option("--sizes", opt.sizes, "Cluster sizes N")->delimiter(',');
    sub->add_flag("--table1-defaults", opt.table1_defaults, "Use every reference cluster size (5 to 120)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Minimum-bandwidth allocation for a cluster");
  CLI::App* admit = app.add_subcommand("admit", "Greedy admission under a bandwidth budget");
  CLI::App* sim = app.add_subcommand("simulate", "Replay the two-phase distribution");
  CLI::App* sweep = app.add_subcommand("sweep", "Admission sweep over sizes, streams and budgets");
  CLI::App* curve = app.add_subcommand("curve", "Admitted peers versus budget");
  CLI::App* profile = app.add_subcommand("profile", "Optimal block sizes per peer");
  for (CLI::App* sub : {solve, admit, sim, sweep, curve, profile}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail({kExitUsage, "USAGE", e.what()});
  }

  try {
    if (*solve) return run_solve(opt);
    if (*admit) return run_admit(opt);
    if (*sim) return run_simulate(opt);
    if (*sweep) return run_sweep(opt);
    if (*curve) return run_curve(opt);
    if (*profile) return run_profile(opt);
  } catch (const CliError& e) {
    return fail(e);
  } catch (const acide::io::ParseError& e) {
    return fail({kExitParse, "PARSE_ERROR", e.what()});
  } catch (const acide::InsufficientBudget& e) {
    return fail({kExitInsufficientBudget, "INSUFFICIENT_BUDGET", e.what()});
  } catch (const acide::InfeasibleCluster& e) {
    return fail({kExitValidation, "INFEASIBLE_CLUSTER", e.what()});
  } catch (const acide::DomainError& e) {
    return fail({kExitUsage, "DOMAIN_ERROR", e.what()});
  } catch (const std::exception& e) {
    return fail({kExitUsage, "IO_ERROR", e.what()});
  }
  return kExitUsage;
}
