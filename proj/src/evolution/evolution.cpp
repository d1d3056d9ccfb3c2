#include "dynevo/evolution/evolution.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

#include "dynevo/envs/episode.hpp"
#include "parallel.hpp"

namespace dynevo::evo {

std::string_view mode_name(NetMode mode) { return mode == NetMode::Dynamic ? "dynamic" : "static"; }

NetMode parse_mode(std::string_view name) {
  if (name == "dynamic") return NetMode::Dynamic;
  if (name == "static") return NetMode::Static;
  throw std::invalid_argument(fmt::format("unknown mode '{}' (expected dynamic or static)", name));
}

int default_population_size(envs::Task task) { return task == envs::Task::Pendulum ? 256 : 64; }

void validate(const EvolutionConfig& cfg) {
  if (cfg.population_size < 2 || cfg.population_size % 2 != 0)
    throw std::invalid_argument(
        fmt::format("population size must be a positive even number, got {}", cfg.population_size));
  if (cfg.generations < 0) throw std::invalid_argument("generations must be non-negative");
  if (!(cfg.perturb_sigma > 0.0) || !(cfg.init_sigma > 0.0))
    throw std::invalid_argument("sigmas must be positive");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (cfg.checkpoint_every < 0) throw std::invalid_argument("checkpoint_every must be non-negative");
}

bool operator==(const Agent& a, const Agent& b) {
  return a.slot == b.slot && a.genome == b.genome && a.standardizer == b.standardizer &&
         std::bit_cast<std::uint64_t>(a.fitness) == std::bit_cast<std::uint64_t>(b.fitness);
}

RngStream agent_rng(std::uint64_t master_seed, std::uint64_t generation, std::uint64_t slot,
                    Purpose purpose) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h, generation);
  h = mix64(h, slot);
  h = mix64(h, static_cast<std::uint64_t>(purpose));
  return RngStream(h);
}

Population init_population(const EvolutionConfig& cfg, const envs::EnvSpec& spec) {
  validate(cfg);
  const int d_out = static_cast<int>(envs::action_arity(spec.action_space));
  Population pop;
  pop.master_seed = cfg.master_seed;
  pop.agents.reserve(static_cast<std::size_t>(cfg.population_size));
  for (int i = 0; i < cfg.population_size; ++i) {
    Agent a;
    a.genome = cfg.mode == NetMode::Dynamic ? net::new_minimal(spec.obs_dim, d_out)
                                            : net::build_static(spec.obs_dim, d_out);
    a.standardizer = envs::RunningStandardizer(static_cast<std::size_t>(spec.obs_dim));
    a.slot = i;
    pop.agents.push_back(std::move(a));
  }
  return pop;
}

std::vector<net::MutationOutcome> variation(Population& pop, const EvolutionConfig& cfg) {
  std::vector<net::MutationOutcome> outcomes;
  if (cfg.mode == NetMode::Dynamic) outcomes.resize(pop.agents.size());
  detail::parallel_for(pop.agents.size(), cfg.workers, [&](std::size_t i) {
    Agent& a = pop.agents[i];
    const auto slot = static_cast<std::uint64_t>(a.slot);
    auto perturb_rng = agent_rng(pop.master_seed, pop.generation, slot, Purpose::Variation);
    net::perturb_parameters(a.genome, perturb_rng, cfg.perturb_sigma);
    if (cfg.mode == NetMode::Dynamic) {
      auto mutation_rng = agent_rng(pop.master_seed, pop.generation, slot, Purpose::Mutation);
      outcomes[i] = net::mutate(a.genome, mutation_rng, cfg.init_sigma);
    }
  });
  return outcomes;
}

std::vector<std::uint64_t> episode_seeds(std::uint64_t generation, int episodes_per_eval) {
  std::vector<std::uint64_t> seeds;
  const auto e_count = static_cast<std::uint64_t>(episodes_per_eval);
  for (std::uint64_t e = 0; e < e_count; ++e) seeds.push_back(generation * e_count + e);
  return seeds;
}

void evaluate(Population& pop, const EvolutionConfig& cfg, const envs::EnvSpec& spec) {
  const auto seeds = episode_seeds(pop.generation, spec.episodes_per_eval);
  detail::parallel_for(pop.agents.size(), cfg.workers, [&](std::size_t i) {
    Agent& a = pop.agents[i];
    try {
      a.fitness = envs::run_episode_set(a.genome, spec, a.standardizer, seeds);
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("agent in slot {}: {}", a.slot, e.what()));
    }
    if (!std::isfinite(a.fitness))
      throw std::runtime_error(
          fmt::format("agent in slot {} produced non-finite fitness {}", a.slot, a.fitness));
  });
}

namespace {

std::vector<std::size_t> ranking(const Population& pop) {
  std::vector<std::size_t> order(pop.agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Agent& x = pop.agents[a];
    const Agent& y = pop.agents[b];
    if (x.fitness != y.fitness) return x.fitness > y.fitness;
    return x.slot < y.slot;
  });
  return order;
}

}  // namespace

void select(Population& pop) {
  const auto order = ranking(pop);
  const std::size_t half = pop.agents.size() / 2;
  std::vector<Agent> next;
  next.reserve(pop.agents.size());
  for (std::size_t r = 0; r < half; ++r) next.push_back(std::move(pop.agents[order[r]]));
  for (std::size_t r = 0; r < half; ++r) next.push_back(next[r]);
  for (std::size_t i = 0; i < next.size(); ++i) next[i].slot = static_cast<int>(i);
  pop.agents = std::move(next);
  ++pop.generation;
}

std::size_t elite_index(const Population& pop) {
  if (pop.agents.empty()) throw std::invalid_argument("empty population");
  return ranking(pop).front();
}

RunRecord make_record(const Population& pop, double elapsed_seconds) {
  std::vector<double> f;
  f.reserve(pop.agents.size());
  for (const auto& a : pop.agents) f.push_back(a.fitness);
  std::sort(f.begin(), f.end());
  const std::size_t n = f.size();
  const auto& elite = pop.agents[elite_index(pop)].genome;
  RunRecord r;
  r.generation = pop.generation;
  r.best_fitness = f.back();
  r.mean_fitness = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(n);
  r.median_fitness = n % 2 == 1 ? f[n / 2] : 0.5 * (f[n / 2 - 1] + f[n / 2]);
  r.elite_params = net::param_count(elite);
  r.elite_nodes = elite.nodes().size();
  r.elite_connections = elite.connections().size();
  r.elapsed_seconds = elapsed_seconds;
  return r;
}

EvolutionResult resume_evolution(EvolutionResult state, const EvolutionConfig& cfg,
                                 const EvolutionCallbacks& callbacks) {
  validate(cfg);
  const auto spec = envs::env_spec(cfg.task);
  Population& pop = state.population;
  if (pop.master_seed != cfg.master_seed)
    throw std::invalid_argument("population was created with a different master seed");
  const double offset = state.records.empty() ? 0.0 : state.records.back().elapsed_seconds;
  const auto start = std::chrono::steady_clock::now();
  const auto target = static_cast<std::uint64_t>(cfg.generations);
  while (pop.generation < target) {
    variation(pop, cfg);
    evaluate(pop, cfg, spec);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    state.records.push_back(make_record(pop, offset + dt.count()));
    if (callbacks.on_generation) callbacks.on_generation(state.records.back());
    select(pop);
    if (cfg.checkpoint_every > 0 && pop.generation % static_cast<std::uint64_t>(cfg.checkpoint_every) == 0 &&
        callbacks.on_checkpoint)
      callbacks.on_checkpoint(pop, state.records);
  }
  return state;
}

EvolutionResult run_evolution(const EvolutionConfig& cfg, const EvolutionCallbacks& callbacks) {
  EvolutionResult state{init_population(cfg, envs::env_spec(cfg.task)), {}};
  return resume_evolution(std::move(state), cfg, callbacks);
}

TestResult test_elite(const Population& pop, const envs::EnvSpec& spec) {
  const Agent& elite = pop.agents[elite_index(pop)];
  if (std::isnan(elite.fitness)) throw std::logic_error("test_elite: population was never evaluated");
  TestResult result;
  for (int r = 0; r < kTestRuns; ++r) {
    std::vector<std::uint64_t> seeds;
    for (int e = 0; e < spec.episodes_per_eval; ++e)
      seeds.push_back(kFirstTestSeed + static_cast<std::uint64_t>(r) +
                      static_cast<std::uint64_t>(e) * kTestEpisodeStride);
    auto standardizer = elite.standardizer;
    result.scores.push_back(envs::run_episode_set(elite.genome, spec, standardizer, seeds));
  }
  result.mean = std::accumulate(result.scores.begin(), result.scores.end(), 0.0) /
                static_cast<double>(result.scores.size());
  return result;
}

std::string format_metrics_csv(const std::vector<RunRecord>& records) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& r : records)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.generation, r.best_fitness, r.mean_fitness,
                       r.median_fitness, r.elite_params, r.elite_nodes, r.elite_connections,
                       r.elapsed_seconds);
  return out;
}

}  // namespace dynevo::evo
