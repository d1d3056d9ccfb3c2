// Acceptance runner: one line per criterion, exit status 0 only if all pass.
//
// Set DYNEVO_SKIP_EXTENDED=1 to skip the long Pendulum runs (criterion 5 is
// then reported as SKIPPED and counts as not passed).

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "dynevo/evolution/evolution.hpp"
#include "figures.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace dynevo;

namespace {

struct SeedRun {
  std::uint64_t seed = 0;
  double test_mean = 0;
  std::size_t elite_params = 0;
  double gen0_mean = 0;
  double gen1000_mean = 0;
  bool solved = false;
};

struct Outcome {
  std::string status;  // PASS, FAIL or SKIPPED
  std::string detail;
};

std::vector<SeedRun> solved_runs;

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<SeedRun> run_task(envs::Task task, int pop, int gens, int seeds) {
  std::vector<SeedRun> runs;
  const auto spec = envs::env_spec(task);
  for (int s = 0; s < seeds; ++s) {
    evo::EvolutionConfig cfg;
    cfg.task = task;
    cfg.population_size = pop;
    cfg.generations = gens;
    cfg.master_seed = static_cast<std::uint64_t>(s);
    cfg.workers = workers();
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = evo::run_evolution(cfg);
    const auto test = evo::test_elite(result.population, spec);
    SeedRun r;
    r.seed = cfg.master_seed;
    r.test_mean = test.mean;
    r.elite_params = net::param_count(result.population.agents[evo::elite_index(result.population)].genome);
    r.gen0_mean = result.records.front().mean_fitness;
    if (result.records.size() > 1000) r.gen1000_mean = result.records[1000].mean_fitness;
    runs.push_back(r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << fmt::format("  {} seed {}: test mean {:.2f}, elite params {}, {:.0f}s\n", spec.name, s, r.test_mean,
                             r.elite_params, secs);
  }
  return runs;
}

std::string seed_summary(const std::vector<SeedRun>& runs) {
  std::string s;
  for (const auto& r : runs)
    s += fmt::format("{}s{}={:.1f}/{}p", s.empty() ? "" : " ", r.seed, r.test_mean, r.elite_params);
  return s;
}

Outcome solve_criterion(envs::Task task, int gens, double threshold, int need, std::size_t max_params = 0) {
  auto runs = run_task(task, 64, gens, 5);
  int solved = 0;
  for (auto& r : runs) {
    r.solved = r.test_mean >= threshold && (max_params == 0 || r.elite_params <= max_params);
    if (r.solved) {
      ++solved;
      solved_runs.push_back(r);
    }
  }
  const std::string extra = max_params ? fmt::format(" and <= {} params", max_params) : "";
  return {solved >= need ? "PASS" : "FAIL",
          fmt::format("{}/5 seeds with test mean >= {}{} (need {}); {}", solved, threshold, extra, need,
                      seed_summary(runs))};
}

Outcome pendulum() {
  if (const char* skip = std::getenv("DYNEVO_SKIP_EXTENDED"); skip && std::string(skip) == "1")
    return {"SKIPPED", "DYNEVO_SKIP_EXTENDED=1"};
  auto runs = run_task(envs::Task::Pendulum, 256, 3000, 3);
  int solved = 0, progressed = 0;
  std::string progress;
  for (auto& r : runs) {
    r.solved = r.test_mean >= -500;
    if (r.solved) {
      ++solved;
      solved_runs.push_back(r);
    }
    const double gain = r.gen1000_mean - r.gen0_mean;
    progressed += gain >= 300;
    progress += fmt::format(" s{}:+{:.0f}", r.seed, gain);
  }
  const bool ok = solved >= 2 && progressed == 3;
  return {ok ? "PASS" : "FAIL",
          fmt::format("{}/3 seeds with test mean >= -500 (need 2); mean-fitness gain gen 0 -> 1000 >= 300 on {}/3 "
                      "seeds (need 3:{}); {}",
                      solved, progressed, progress, seed_summary(runs))};
}

Outcome compactness() {
  const std::size_t static_params = net::param_count(net::build_static(4, 2));
  std::size_t worst = 0;
  for (const auto& r : solved_runs) worst = std::max(worst, r.elite_params);
  const bool ok = !solved_runs.empty() && worst < 1000 && static_params == 7902;
  return {ok ? "PASS" : "FAIL",
          fmt::format("{} solved runs, largest elite {} params (< 1000); static CartPole baseline {} params",
                      solved_runs.size(), worst, static_params)};
}

Outcome from_checks(const std::vector<std::pair<std::string, testsupport::Check>>& checks) {
  std::string detail;
  bool ok = true;
  for (const auto& [name, c] : checks) {
    if (!c.ok) {
      ok = false;
      detail += fmt::format("[{} FAILED: {}] ", name, c.detail);
    }
  }
  if (ok) detail = fmt::format("{} checks green", checks.size());
  return {ok ? "PASS" : "FAIL", detail};
}

Outcome figures() {
  return from_checks({{"grow connection", testsupport::figure_grow_connection()},
                      {"prune connection", testsupport::figure_prune_connection()},
                      {"grow node", testsupport::figure_grow_node()},
                      {"prune node cascade", testsupport::figure_prune_node()}});
}

Outcome properties() {
  namespace ts = testsupport;
  constexpr long kN = 100000;
  std::vector<std::pair<std::string, ts::Check>> checks;
  auto add = [&](const std::string& name, ts::Check c) {
    std::cerr << fmt::format("  {}: {} ({})\n", name, c.ok ? "ok" : "FAILED", c.detail);
    checks.emplace_back(name, std::move(c));
  };
  add("structure audit, 100000 mutations", ts::random_mutation_audit(100000, 2024));
  add("mutation choice uniformity", ts::mutation_choice_uniformity(kN, 11));
  add("grow_connection pair uniformity", ts::grow_connection_pair_uniformity(kN, 12));
  add("grow_node node uniformity", ts::grow_node_sampling_uniformity(kN, 13));
  add("prune_node uniformity", ts::prune_node_uniformity(kN, 14));
  add("prune_connection uniformity", ts::prune_connection_uniformity(kN, 15));
  add("forward equivalence, 1000 nets", ts::forward_equivalence(1000, 16));
  add("perturbation sigma", ts::perturbation_sigma(1000000, 0.1, 17));
  add("serialization round trips", ts::serialization_round_trips(1000, 18));
  add("resume equivalence", ts::resume_equivalence(40, 20, 19));
  add("worker invariance", ts::worker_invariance(
                               (std::filesystem::path(DYNEVO_SCRATCH_DIR) / "acceptance_workers").string(), 30, 20));
  return from_checks(checks);
}

Outcome golden() {
  int files = 0;
  double worst = 0;
  std::string bad;
  for (auto task : envs::kAllTasks) {
    for (int k = 0; k < 3; ++k) {
      const auto path = fmt::format("{}/{}_{}.txt", testsupport::golden_dir(), envs::task_name(task), k);
      const auto g = testsupport::load_golden(path);
      const double dev = g.steps.size() == 100 ? testsupport::golden_max_deviation(g) : INFINITY;
      worst = std::max(worst, dev);
      if (!(dev <= 1e-6)) bad += fmt::format(" {}#{}", envs::task_name(task), k);
      ++files;
    }
  }
  return {bad.empty() ? "PASS" : "FAIL",
          fmt::format("{} trajectories x 100 steps, max deviation {:.3g} (tolerance 1e-6){}", files, worst,
                      bad.empty() ? "" : "; mismatches:" + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [] { return solve_criterion(envs::Task::CartPole, 300, 475, 4); }},
      {2, [] { return solve_criterion(envs::Task::Acrobot, 300, -100, 4); }},
      {3, [] { return solve_criterion(envs::Task::MountainCar, 1000, -130, 3); }},
      {4, [] { return solve_criterion(envs::Task::MountainCarContinuous, 1000, 90, 3, 50); }},
      {5, pendulum},
      {6, compactness},
      {7, figures},
      {8, properties},
      {9, golden},
  };
  const char* names[] = {"",
                         "CartPole-v1 solve",
                         "Acrobot-v1",
                         "MountainCar-v0",
                         "MountainCarContinuous-v0",
                         "Pendulum-v1 (extended)",
                         "compactness",
                         "mutation fixtures",
                         "property suites",
                         "environment fidelity"};
  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& [id, fn] : criteria) {
    std::cerr << fmt::format("criterion {} ({}) running\n", id, names[id]);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {"FAIL", std::string("exception: ") + e.what()};
    }
    failed += o.status != "PASS";
    lines.push_back(fmt::format("criterion {} [{}] {}: {}", id, names[id], o.status, o.detail));
    std::cout << lines.back() << std::endl;
  }
  std::cout << fmt::format("acceptance: {}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
