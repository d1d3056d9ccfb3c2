#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dynevo/evolution/checkpoint.hpp"
#include "dynevo/envs/episode.hpp"
#include "dynevo/evolution/evolution.hpp"
#include "dynevo/net/serialize.hpp"
#include "properties.hpp"

using namespace dynevo;
using namespace dynevo::evo;

namespace {

EvolutionConfig small(envs::Task task = envs::Task::CartPole, int pop = 8, int gens = 5) {
  EvolutionConfig c;
  c.task = task;
  c.population_size = pop;
  c.generations = gens;
  return c;
}

Population with_fitness(std::vector<double> f) {
  auto cfg = small(envs::Task::CartPole, static_cast<int>(f.size()));
  auto pop = init_population(cfg, envs::env_spec(cfg.task));
  RngStream rng(1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    net::perturb_parameters(pop.agents[i].genome, rng, 1.0);  // make agents distinguishable
    pop.agents[i].fitness = f[i];
  }
  return pop;
}

}  // namespace

TEST(Config, DefaultsAndValidation) {
  EXPECT_EQ(default_population_size(envs::Task::Pendulum), 256);
  EXPECT_EQ(default_population_size(envs::Task::CartPole), 64);
  auto c = small();
  EXPECT_NO_THROW(validate(c));
  c.population_size = 7;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small();
  c.perturb_sigma = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small();
  c.workers = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Init, DynamicMinimalGenomes) {
  const auto cfg = small(envs::Task::CartPole, 4);
  const auto pop = init_population(cfg, envs::env_spec(cfg.task));
  ASSERT_EQ(pop.agents.size(), 4u);
  EXPECT_EQ(pop.generation, 0u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(pop.agents[i].slot, i);
    EXPECT_EQ(net::param_count(pop.agents[i].genome), 2u);
    EXPECT_TRUE(pop.agents[i].genome.connections().empty());
    EXPECT_TRUE(std::isnan(pop.agents[i].fitness));
  }
  EXPECT_EQ(pop, init_population(cfg, envs::env_spec(cfg.task)));
}

TEST(Init, StaticZeroedGenomes) {
  auto cfg = small(envs::Task::CartPole, 4);
  cfg.mode = NetMode::Static;
  const auto pop = init_population(cfg, envs::env_spec(cfg.task));
  for (const auto& a : pop.agents) {
    EXPECT_EQ(net::param_count(a.genome), 7902u);
    a.genome.visit_parameters([](double p) { ASSERT_EQ(p, 0.0); });
  }
}

TEST(Variation, StaticPerturbsEverythingAndNeverMutates) {
  auto cfg = small(envs::Task::CartPole, 4);
  cfg.mode = NetMode::Static;
  auto pop = init_population(cfg, envs::env_spec(cfg.task));
  const auto outcomes = variation(pop, cfg);
  EXPECT_TRUE(outcomes.empty());
  for (const auto& a : pop.agents) {
    EXPECT_EQ(net::param_count(a.genome), 7902u);
    std::size_t nonzero = 0;
    a.genome.visit_parameters([&](double p) { nonzero += p != 0.0; });
    EXPECT_EQ(nonzero, 7902u);
  }
}

TEST(Variation, DynamicAppliesOneMutationPerAgent) {
  auto cfg = small(envs::Task::CartPole, 16);
  auto pop = init_population(cfg, envs::env_spec(cfg.task));
  const auto outcomes = variation(pop, cfg);
  ASSERT_EQ(outcomes.size(), 16u);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto k = outcomes[i].kind;
    EXPECT_TRUE(k == net::MutationKind::GrowConnection || k == net::MutationKind::GrowNode);
    EXPECT_GT(net::param_count(pop.agents[i].genome), 2u);
  }
  auto again = init_population(cfg, envs::env_spec(cfg.task));
  variation(again, cfg);
  EXPECT_EQ(again, pop);
}

TEST(Seeds, Schedule) {
  EXPECT_EQ(episode_seeds(0, 1), std::vector<std::uint64_t>{0});
  EXPECT_EQ(episode_seeds(3, 5), (std::vector<std::uint64_t>{15, 16, 17, 18, 19}));
  EXPECT_EQ(episode_seeds(7, 1), std::vector<std::uint64_t>{7});
}

TEST(Evaluate, GenerationZeroCartPoleSharesSeedZero) {
  auto cfg = small(envs::Task::CartPole, 4);
  const auto spec = envs::env_spec(cfg.task);
  auto pop = init_population(cfg, spec);
  evaluate(pop, cfg, spec);
  envs::RunningStandardizer s(4);
  const double expect = envs::run_episode_set(pop.agents[0].genome, spec, s, std::vector<std::uint64_t>{0});
  for (const auto& a : pop.agents) EXPECT_EQ(a.fitness, expect);
}

TEST(Evaluate, WorkerCountDoesNotChangeFitness) {
  auto cfg = small(envs::Task::Acrobot, 16);
  const auto spec = envs::env_spec(cfg.task);
  auto pop = init_population(cfg, spec);
  for (int g = 0; g < 3; ++g) {
    variation(pop, cfg);
    pop.generation++;
  }
  auto a = pop, b = pop;
  cfg.workers = 1;
  evaluate(a, cfg, spec);
  cfg.workers = 8;
  evaluate(b, cfg, spec);
  EXPECT_EQ(a, b);
}

TEST(Select, RankRule) {
  auto pop = with_fitness({1, 2, 3, 4});
  const auto a3 = pop.agents[3].genome, a2 = pop.agents[2].genome;
  select(pop);
  ASSERT_EQ(pop.agents.size(), 4u);
  EXPECT_EQ(pop.agents[0].genome, a3);
  EXPECT_EQ(pop.agents[1].genome, a2);
  EXPECT_EQ(pop.agents[2].genome, a3);
  EXPECT_EQ(pop.agents[3].genome, a2);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(pop.agents[i].slot, i);
  EXPECT_EQ(pop.generation, 1u);
}

TEST(Select, TiesKeepLowestSlots) {
  auto pop = with_fitness({5, 5, 5, 5, 5, 5});
  const auto g0 = pop.agents[0].genome, g1 = pop.agents[1].genome, g2 = pop.agents[2].genome;
  select(pop);
  EXPECT_EQ(pop.agents[0].genome, g0);
  EXPECT_EQ(pop.agents[1].genome, g1);
  EXPECT_EQ(pop.agents[2].genome, g2);
  EXPECT_EQ(pop.agents[3].genome, g0);
}

TEST(Select, MultisetIsTopHalfTwice) {
  auto pop = with_fitness({3, -1, 8, 8, 0, 2, 7, 1});
  std::vector<net::DynamicNet> top;
  for (int i : {2, 3, 6, 0}) top.push_back(pop.agents[i].genome);
  select(pop);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(pop.agents[i].genome, top[i]);
    EXPECT_EQ(pop.agents[i + 4].genome, top[i]);
  }
}

TEST(Select, CopiesDivergeAfterVariation) {
  auto cfg = small(envs::Task::CartPole, 4);
  auto pop = with_fitness({1, 2, 3, 4});
  select(pop);
  variation(pop, cfg);
  EXPECT_FALSE(pop.agents[0].genome == pop.agents[2].genome);
}

TEST(Run, ZeroGenerations) {
  auto cfg = small(envs::Task::CartPole, 4, 0);
  const auto r = run_evolution(cfg);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.population, init_population(cfg, envs::env_spec(cfg.task)));
}

TEST(Run, RecordsAuditAgainstPopulation) {
  auto cfg = small(envs::Task::CartPole, 8, 12);
  const auto spec = envs::env_spec(cfg.task);
  auto pop = init_population(cfg, spec);
  for (int g = 0; g < cfg.generations; ++g) {
    variation(pop, cfg);
    evaluate(pop, cfg, spec);
    const auto rec = make_record(pop, 0.0);
    double best = -INFINITY, sum = 0;
    std::vector<double> f;
    for (const auto& a : pop.agents) {
      best = std::max(best, a.fitness);
      sum += a.fitness;
      f.push_back(a.fitness);
    }
    std::sort(f.begin(), f.end());
    EXPECT_EQ(rec.best_fitness, best);
    EXPECT_DOUBLE_EQ(rec.mean_fitness, sum / 8);
    EXPECT_DOUBLE_EQ(rec.median_fitness, (f[3] + f[4]) / 2);
    EXPECT_GE(rec.best_fitness, rec.median_fitness);
    const auto& elite = pop.agents[elite_index(pop)];
    EXPECT_EQ(elite.fitness, best);
    EXPECT_EQ(rec.elite_params, net::param_count(elite.genome));
    EXPECT_EQ(rec.elite_nodes, elite.genome.nodes().size());
    EXPECT_EQ(rec.elite_connections, elite.genome.connections().size());
    select(pop);
    EXPECT_EQ(pop.agents.size(), 8u);
  }
}

TEST(Run, StaticArchitectureFrozen) {
  auto cfg = small(envs::Task::CartPole, 4, 4);
  cfg.mode = NetMode::Static;
  EvolutionCallbacks cb;
  std::vector<std::size_t> nodes;
  cb.on_generation = [&](const RunRecord& r) {
    EXPECT_EQ(r.elite_params, 7902u);
    EXPECT_EQ(r.elite_connections, 7800u);
    nodes.push_back(r.elite_nodes);
  };
  run_evolution(cfg, cb);
  EXPECT_EQ(nodes, std::vector<std::size_t>(4, 106u));
}

TEST(Run, DynamicCapacityCanDecrease) {
  auto cfg = small(envs::Task::CartPole, 16, 40);
  const auto spec = envs::env_spec(cfg.task);
  auto pop = init_population(cfg, spec);
  bool shrank = false;
  for (int g = 0; g < cfg.generations && !shrank; ++g) {
    std::vector<std::size_t> before;
    for (const auto& a : pop.agents) before.push_back(net::param_count(a.genome));
    const auto outcomes = variation(pop, cfg);
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      shrank |= net::param_count(pop.agents[i].genome) < before[i];
    evaluate(pop, cfg, spec);
    select(pop);
  }
  EXPECT_TRUE(shrank);
}

TEST(Run, ResumeEquivalence) {
  const auto c = testsupport::resume_equivalence(30, 15, 3);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Run, CheckpointCallbackCadence) {
  auto cfg = small(envs::Task::CartPole, 4, 10);
  cfg.checkpoint_every = 3;
  std::vector<std::uint64_t> gens;
  EvolutionCallbacks cb;
  cb.on_checkpoint = [&](const Population& p, const std::vector<RunRecord>& r) {
    gens.push_back(p.generation);
    EXPECT_EQ(r.size(), p.generation);
  };
  run_evolution(cfg, cb);
  EXPECT_EQ(gens, (std::vector<std::uint64_t>{3, 6, 9}));
}

TEST(Run, EvaluationFaultReportsSlot) {
  auto cfg = small(envs::Task::CartPole, 4, 1);
  const auto spec = envs::env_spec(cfg.task);
  auto pop = init_population(cfg, spec);
  pop.agents[2].genome = net::new_minimal(3, 2);
  try {
    evaluate(pop, cfg, spec);
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("slot 2"), std::string::npos) << e.what();
  }
}

TEST(TestElite, SeedsAndDeterminism) {
  EXPECT_EQ(kFirstTestSeed, 2147483638u);
  EXPECT_EQ(kFirstTestSeed + kTestRuns - 1, 2147483647u);
  auto cfg = small(envs::Task::CartPole, 8, 10);
  const auto run = run_evolution(cfg);
  const auto spec = envs::env_spec(cfg.task);
  const auto a = test_elite(run.population, spec);
  const auto b = test_elite(run.population, spec);
  ASSERT_EQ(a.scores.size(), 10u);
  EXPECT_EQ(a.scores, b.scores);
  double sum = 0;
  for (double s : a.scores) sum += s;
  EXPECT_DOUBLE_EQ(a.mean, sum / 10);
  // Run r uses seed kFirstTestSeed + r.
  const auto& elite = run.population.agents[elite_index(run.population)];
  for (int r = 0; r < 10; ++r) {
    auto s = elite.standardizer;
    const std::vector<std::uint64_t> seeds{kFirstTestSeed + static_cast<std::uint64_t>(r)};
    EXPECT_EQ(a.scores[r], envs::run_episode_set(elite.genome, spec, s, seeds));
  }
}

TEST(TestElite, StandardizerCopiedPerRun) {
  auto cfg = small(envs::Task::Pendulum, 4, 2);
  const auto run = run_evolution(cfg);
  const auto before = run.population.agents[elite_index(run.population)].standardizer;
  const auto a = test_elite(run.population, envs::env_spec(cfg.task));
  EXPECT_EQ(run.population.agents[elite_index(run.population)].standardizer, before);
  EXPECT_EQ(a.scores.size(), 10u);
}

TEST(Metrics, CsvShape) {
  auto cfg = small(envs::Task::CartPole, 4, 3);
  const auto run = run_evolution(cfg);
  const auto csv = format_metrics_csv(run.records);
  EXPECT_EQ(csv.substr(0, kMetricsHeader.size()), kMetricsHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
