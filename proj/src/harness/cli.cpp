#include "dynevo/harness/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <stdexcept>

#include "dynevo/envs/env.hpp"
#include "dynevo/evolution/checkpoint.hpp"
#include "dynevo/net/serialize.hpp"

namespace dynevo::harness {

namespace fs = std::filesystem;

namespace {

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a temporary file and renames it into place, so a failed or
// interrupted write never leaves a partial file under `path`.
void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) throw CliError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError(fmt::format("cannot move '{}' into place: {}", path.string(), ec.message()));
}

void write_text(const fs::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shortest round-trip text, always with a decimal point or exponent.
std::string real_text(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eEna") == std::string::npos) s += ".0";
  return s;
}

bool starts_with(std::span<const std::uint8_t> bytes, std::string_view prefix) {
  return bytes.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), bytes.begin(),
                    [](char c, std::uint8_t b) { return static_cast<std::uint8_t>(c) == b; });
}

nlohmann::json config_json(const evo::EvolutionConfig& c) {
  return {{"task", envs::task_name(c.task)},
          {"mode", evo::mode_name(c.mode)},
          {"pop", c.population_size},
          {"gens", c.generations},
          {"seed", c.master_seed},
          {"workers", c.workers},
          {"checkpoint_every", c.checkpoint_every},
          {"perturb_sigma", c.perturb_sigma},
          {"init_sigma", c.init_sigma}};
}

// ------------------------------------------------------------------ evolve

struct EvolveArgs {
  std::string task = "CartPole-v1";
  std::string mode = "dynamic";
  int pop = 0;  // 0: task default
  int gens = 300;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  int checkpoint_every = 0;
  double perturb_sigma = 0.1;
  double init_sigma = 1.0;
  std::string resume;
};

int cmd_evolve(const EvolveArgs& a, const CLI::App& sub, std::ostream& err) {
  auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };

  const fs::path out_dir(a.out);
  evo::EvolutionResult state;
  evo::EvolutionConfig cfg;
  RunManifest manifest;

  if (!a.resume.empty()) {
    auto ck = evo::load_checkpoint(read_file(a.resume));
    cfg = ck.config;
    if (given("--gens")) cfg.generations = a.gens;
    if (given("--workers") || std::getenv("DYNEVO_WORKERS")) cfg.workers = a.workers;
    if (given("--checkpoint-every")) cfg.checkpoint_every = a.checkpoint_every;
    state = {std::move(ck.population), std::move(ck.records)};
    manifest.resumed_from = a.resume;
  } else {
    cfg.task = envs::parse_task(a.task);
    cfg.mode = evo::parse_mode(a.mode);
    cfg.population_size = a.pop > 0 ? a.pop : evo::default_population_size(cfg.task);
    cfg.generations = a.gens;
    cfg.master_seed = a.seed;
    cfg.workers = a.workers;
    cfg.checkpoint_every = a.checkpoint_every;
    cfg.perturb_sigma = a.perturb_sigma;
    cfg.init_sigma = a.init_sigma;
    evo::validate(cfg);
    state.population = evo::init_population(cfg, envs::env_spec(cfg.task));
  }
  evo::validate(cfg);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw CliError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

  manifest.config = cfg;
  manifest.start_timestamp = utc_timestamp();
  manifest.out_dir = out_dir;
  for (const char* name : {"--task", "--mode", "--pop", "--gens", "--seed", "--workers",
                           "--checkpoint-every", "--perturb-sigma", "--init-sigma"})
    if (!given(name)) manifest.resolved_defaults.emplace_back(name + 2);
  write_text(out_dir / "manifest.json", manifest_json(manifest));

  const auto spec = envs::env_spec(cfg.task);
  err << fmt::format("evolving {} ({} mode): population {}, {} generations, seed {}, {} workers\n",
                     spec.name, evo::mode_name(cfg.mode), cfg.population_size, cfg.generations,
                     cfg.master_seed, cfg.workers);

  auto write_checkpoint = [&](const evo::Population& pop, const std::vector<evo::RunRecord>& recs) {
    write_file(checkpoint_path(out_dir, pop.generation), evo::save_checkpoint(pop, cfg, recs));
    write_text(out_dir / "metrics.csv", evo::format_metrics_csv(recs));
  };
  evo::EvolutionCallbacks callbacks;
  callbacks.on_generation = [&](const evo::RunRecord& r) {
    err << fmt::format("gen {:>5}  best {:>10.3f}  mean {:>10.3f}  median {:>10.3f}  elite params {}\n",
                       r.generation, r.best_fitness, r.mean_fitness, r.median_fitness, r.elite_params);
  };
  callbacks.on_checkpoint = write_checkpoint;

  state = evo::resume_evolution(std::move(state), cfg, callbacks);

  const auto& pop = state.population;
  if (cfg.checkpoint_every == 0 || pop.generation % static_cast<std::uint64_t>(cfg.checkpoint_every) != 0 ||
      pop.generation == 0)
    write_checkpoint(pop, state.records);
  const auto& elite = pop.agents[evo::elite_index(pop)].genome;
  write_file(out_dir / "elite.genome", net::serialize(elite));
  write_text(out_dir / "elite.dot", net::to_dot(elite, "elite"));
  err << fmt::format("done: {} generations, elite has {} parameters\n", pop.generation,
                     net::param_count(elite));
  return 0;
}

// -------------------------------------------------------------------- test

int cmd_test(const std::string& checkpoint, std::ostream& out, std::ostream& err) {
  const auto ck = evo::load_checkpoint(read_file(checkpoint));
  const auto spec = envs::env_spec(ck.config.task);
  const auto result = evo::test_elite(ck.population, spec);
  const auto& elite = ck.population.agents[evo::elite_index(ck.population)];
  // Nothing is printed until every score is known.
  std::string text = fmt::format("task {}  generation {}  elite slot {}  params {}\n", spec.name,
                                 ck.population.generation, elite.slot, net::param_count(elite.genome));
  for (std::size_t r = 0; r < result.scores.size(); ++r)
    text += fmt::format("seed {}  score {}\n", evo::kFirstTestSeed + r, real_text(result.scores[r]));
  text += fmt::format("mean score over {} runs: {}\n", result.scores.size(), real_text(result.mean));
  text += fmt::format("TEST_MEAN={}\n", real_text(result.mean));
  out << text;
  (void)err;
  return 0;
}

// -------------------------------------------------------------- export-dot

int cmd_export_dot(const std::string& input, const std::string& output, int slot) {
  const auto bytes = read_file(input);
  net::DynamicNet genome;
  if (starts_with(bytes, "DYNEVO-CKPT")) {
    const auto ck = evo::load_checkpoint(bytes);
    const auto& agents = ck.population.agents;
    std::size_t index = 0;
    if (slot >= 0) {
      if (static_cast<std::size_t>(slot) >= agents.size())
        throw CliError(fmt::format("slot {} out of range (population {})", slot, agents.size()));
      index = static_cast<std::size_t>(slot);
    } else if (std::isnan(agents[evo::elite_index(ck.population)].fitness)) {
      index = 0;
    } else {
      index = evo::elite_index(ck.population);
    }
    genome = agents[index].genome;
  } else {
    if (slot >= 0) throw CliError("--slot only applies to checkpoint inputs");
    genome = net::deserialize(bytes);
  }
  write_text(output, net::to_dot(genome, "elite"));
  return 0;
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["config"] = config_json(m.config);
  j["start_timestamp"] = m.start_timestamp;
  j["code_version"] = m.code_version;
  j["resolved_defaults"] = m.resolved_defaults;
  j["out_dir"] = m.out_dir.string();
  j["resumed_from"] = m.resumed_from.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.resumed_from);
  return j.dump(2) + "\n";
}

fs::path checkpoint_path(const fs::path& out_dir, std::uint64_t generation) {
  return out_dir / fmt::format("ckpt_{}.bin", generation);
}

// Command line and environment win over the file.
void apply_config_file(CLI::App& sub, const std::string& path) {
  for (const auto& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub.get_name()))
      throw CLI::ConfigError::Extras(item.fullname());
    if (item.name == "config") throw CLI::ConfigError::Extras(item.fullname());
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (!opt) throw CLI::ConfigError::Extras(item.fullname());
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neuroevolution of dynamic recurrent networks on classic-control tasks", "dynevo"};
  app.require_subcommand(1);

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "run the evolutionary optimization");
  std::string config_file;
  evolve->add_option("--config", config_file, "TOML/INI file whose keys mirror these flags");
  evolve->add_option("--task", ev.task, "task identifier");
  evolve->add_option("--mode", ev.mode, "network mode")->check(CLI::IsMember({"dynamic", "static"}));
  evolve->add_option("--pop", ev.pop, "population size (even; default 64, Pendulum 256)");
  evolve->add_option("--gens", ev.gens, "number of generations");
  evolve->add_option("--seed", ev.seed, "master seed");
  evolve->add_option("--workers", ev.workers, "evaluation threads")->envname("DYNEVO_WORKERS");
  evolve->add_option("--out", ev.out, "output directory")->required();
  evolve->add_option("--checkpoint-every", ev.checkpoint_every, "generations between checkpoints (0: final only)");
  evolve->add_option("--perturb-sigma", ev.perturb_sigma, "std. dev. of parameter perturbations");
  evolve->add_option("--init-sigma", ev.init_sigma, "std. dev. of mutation-created parameters");
  evolve->add_option("--resume", ev.resume, "continue from a checkpoint file");

  std::string test_ckpt;
  auto* test = app.add_subcommand("test", "evaluate a checkpoint's elite on the held-out seeds");
  test->add_option("checkpoint,--checkpoint", test_ckpt, "checkpoint file")->required();

  std::string dot_in, dot_out;
  int dot_slot = -1;
  auto* dot = app.add_subcommand("export-dot", "write a genome as a Graphviz digraph");
  dot->add_option("--input", dot_in, "checkpoint or genome file")->required();
  dot->add_option("--out", dot_out, "output .dot path")->required();
  dot->add_option("--slot", dot_slot, "population slot (checkpoints only; default: elite)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (!config_file.empty()) apply_config_file(*evolve, config_file);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*evolve) return cmd_evolve(ev, *evolve, err);
    if (*test) return cmd_test(test_ckpt, out, err);
    if (*dot) return cmd_export_dot(dot_in, dot_out, dot_slot);
  } catch (const envs::UnsupportedTask& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dynevo::harness
