// Walks the library API on a small cluster: validate, solve, admit under a
// budget, simulate the resulting schedule, then a short seeded sweep.

#include <acide/acide.hpp>

#include <iostream>

int main() {
  using namespace acide;

  const std::vector<PeerProfile> peers{
      {"alice", 10000, 20000}, {"bob", 15000, 20000}, {"carol", 20000, 20000}};
  const auto stream = StreamParams::from_livestream(10000, 0.2);  // S = 2000 bits, T = 200 ms

  if (const auto report = validate_cluster(peers, stream); !report.ok()) {
    for (const auto& v : report.violations) {
      std::cerr << condition_code(v.condition) << ": " << v.detail << "\n";
    }
    return 1;
  }

  const auto plan = min_bandwidth(peers, stream);
  std::cout << "minimum base-station bandwidth " << io::bps(plan.total_bandwidth) << " bps (unicast "
            << io::bps(baseline_bandwidths(plan.size(), stream).unicast) << ")\n"
            << io::plan_csv(plan);

  const auto outcome = join_cluster(AdmissionBudget(15000, peers, stream));
  std::cout << "\nbudget 15000 bps admits " << outcome.size() << " peers, efficiency "
            << io::pct(100.0 * outcome.efficiency) << "%\n";
  for (const auto& p : outcome.rejected) std::cout << "  rejected " << p.id << "\n";

  const auto trace = simulate(plan);
  std::cout << "\nsimulated makespan " << io::precise(trace.makespan) << " s, continuous playback: "
            << (playback_check(trace, stream).continuous ? "yes" : "no") << "\n";

  ScenarioSpec spec;
  spec.cluster_sizes = {5, 10};
  spec.livestream_bandwidths = {10000};
  spec.budgets = {10000, 20000, 40000};
  std::cout << "\n" << io::records_csv(run_admission_sweep(spec));
}
