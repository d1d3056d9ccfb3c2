#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dynevo/envs/env.hpp"
#include "dynevo/envs/standardizer.hpp"
#include "dynevo/net/dynamic_net.hpp"
#include "dynevo/net/mutations.hpp"
#include "dynevo/rng.hpp"

namespace dynevo::evo {

enum class NetMode : std::uint8_t { Dynamic = 0, Static = 1 };

std::string_view mode_name(NetMode mode);
NetMode parse_mode(std::string_view name);

struct EvolutionConfig {
  envs::Task task = envs::Task::CartPole;
  int population_size = 64;
  int generations = 300;
  double perturb_sigma = 0.1;
  double init_sigma = 1.0;
  NetMode mode = NetMode::Dynamic;
  std::uint64_t master_seed = 0;
  int workers = 1;
  int checkpoint_every = 0;

  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

/// 256 for Pendulum, 64 for the other tasks.
int default_population_size(envs::Task task);

/// Throws std::invalid_argument describing the first invalid field.
void validate(const EvolutionConfig& cfg);

struct Agent {
  net::DynamicNet genome;
  envs::RunningStandardizer standardizer;
  /// NaN until the agent is evaluated.
  double fitness = std::numeric_limits<double>::quiet_NaN();
  int slot = 0;
};

/// Field-wise equality; fitness compared bitwise so NaN == NaN.
bool operator==(const Agent& a, const Agent& b);

struct Population {
  std::vector<Agent> agents;
  std::uint64_t generation = 0;
  std::uint64_t master_seed = 0;

  friend bool operator==(const Population&, const Population&) = default;
};

struct RunRecord {
  std::uint64_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double median_fitness = 0.0;
  std::size_t elite_params = 0;
  std::size_t elite_nodes = 0;
  std::size_t elite_connections = 0;
  double elapsed_seconds = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Streams drawn per agent and generation.
enum class Purpose : std::uint64_t { Variation = 1, Mutation = 2 };

/// Stream seeded by mix64(mix64(mix64(mix64(master), generation), slot), purpose).
/// Depends on nothing but its arguments, so results do not depend on which
/// worker processes which agent.
RngStream agent_rng(std::uint64_t master_seed, std::uint64_t generation, std::uint64_t slot,
                    Purpose purpose);

Population init_population(const EvolutionConfig& cfg, const envs::EnvSpec& spec);

/// Perturbs every agent; in dynamic mode also applies one mutation per agent.
/// Returns the mutation outcomes by slot (empty in static mode).
std::vector<net::MutationOutcome> variation(Population& pop, const EvolutionConfig& cfg);

/// Evaluation seeds of generation g: g * E + e for e in [0, E).
std::vector<std::uint64_t> episode_seeds(std::uint64_t generation, int episodes_per_eval);

/// Sets every agent's fitness. Throws std::runtime_error naming the slot if
/// any fitness is not finite.
void evaluate(Population& pop, const EvolutionConfig& cfg, const envs::EnvSpec& spec);

/// 50% truncation: rank by fitness (descending, ties to the lower slot), keep
/// the top half in rank order, append a copy of each, renumber slots and
/// advance the generation counter.
void select(Population& pop);

/// Highest fitness, lowest slot on ties.
std::size_t elite_index(const Population& pop);

RunRecord make_record(const Population& pop, double elapsed_seconds);

struct EvolutionResult {
  Population population;
  std::vector<RunRecord> records;
};

struct EvolutionCallbacks {
  std::function<void(const RunRecord&)> on_generation;
  /// Called after selection whenever generation % checkpoint_every == 0.
  std::function<void(const Population&, const std::vector<RunRecord>&)> on_checkpoint;
};

/// Initializes a population and runs cfg.generations iterations of
/// variation, evaluation and selection.
EvolutionResult run_evolution(const EvolutionConfig& cfg, const EvolutionCallbacks& callbacks = {});

/// Continues `state` until cfg.generations. Continuation from a checkpoint
/// reproduces the uninterrupted run exactly (timings aside).
EvolutionResult resume_evolution(EvolutionResult state, const EvolutionConfig& cfg,
                                 const EvolutionCallbacks& callbacks = {});

inline constexpr std::uint64_t kFirstTestSeed = 2147483638;  // 2^31 - 10
inline constexpr int kTestRuns = 10;
/// Episode e of test run r uses seed kFirstTestSeed + r + e * kTestEpisodeStride.
inline constexpr std::uint64_t kTestEpisodeStride = 10;

struct TestResult {
  double mean = 0.0;
  std::vector<double> scores;
};

/// Evaluates the elite on the held-out seeds. Each run starts from a copy of
/// the elite's standardizer.
TestResult test_elite(const Population& pop, const envs::EnvSpec& spec);

inline constexpr std::string_view kMetricsHeader =
    "generation,best_fitness,mean_fitness,median_fitness,elite_params,elite_nodes,"
    "elite_connections,elapsed_seconds";

/// CSV text with kMetricsHeader and one row per record. Reals are printed in
/// shortest round-trip form.
std::string format_metrics_csv(const std::vector<RunRecord>& records);

}  // namespace dynevo::evo
