#include "dynevo/evolution/checkpoint.hpp"

#include <fmt/format.h>

#include "dynevo/net/serialize.hpp"

namespace dynevo::evo {

namespace {
constexpr std::string_view kMagic = "DYNEVO-CKPT";
constexpr std::string_view kWhat = "checkpoint";
}  // namespace

std::vector<std::uint8_t> save_checkpoint(const Population& pop, const EvolutionConfig& cfg,
                                          const std::vector<RunRecord>& records) {
  io::ByteWriter w;
  w.tag(kMagic);
  w.u32(kCheckpointFormatVersion);

  w.str(envs::task_name(cfg.task));
  w.u32(static_cast<std::uint32_t>(cfg.population_size));
  w.u32(static_cast<std::uint32_t>(cfg.generations));
  w.f64(cfg.perturb_sigma);
  w.f64(cfg.init_sigma);
  w.u8(static_cast<std::uint8_t>(cfg.mode));
  w.u64(cfg.master_seed);
  w.u32(static_cast<std::uint32_t>(cfg.workers));
  w.u32(static_cast<std::uint32_t>(cfg.checkpoint_every));

  w.u64(pop.generation);
  w.u64(pop.master_seed);
  w.u32(static_cast<std::uint32_t>(pop.agents.size()));
  for (const auto& a : pop.agents) {
    w.u32(static_cast<std::uint32_t>(a.slot));
    w.f64(a.fitness);
    net::write_genome(w, a.genome);
    w.u64(a.standardizer.count());
    w.u32(static_cast<std::uint32_t>(a.standardizer.dim()));
    for (double v : a.standardizer.mean()) w.f64(v);
    for (double v : a.standardizer.m2()) w.f64(v);
  }

  w.u32(static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    w.u64(r.generation);
    w.f64(r.best_fitness);
    w.f64(r.mean_fitness);
    w.f64(r.median_fitness);
    w.u64(r.elite_params);
    w.u64(r.elite_nodes);
    w.u64(r.elite_connections);
    w.f64(r.elapsed_seconds);
  }
  w.u32(io::crc32(w.bytes()));
  return std::move(w).take();
}

Checkpoint load_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() + 8) throw io::DecodeError("checkpoint: truncated input");
  io::ByteReader r(bytes);
  r.expect_tag(kMagic, kWhat);
  const auto version = r.u32(kWhat);
  if (version != kCheckpointFormatVersion)
    throw io::DecodeError(fmt::format("checkpoint: unsupported format version {} (expected {})",
                                      version, kCheckpointFormatVersion));
  // Verify the trailer before trusting any length field.
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + body, 4);
  if (stored != io::crc32(bytes.first(body))) throw io::DecodeError("checkpoint: checksum mismatch");

  Checkpoint ck;
  auto& cfg = ck.config;
  try {
    cfg.task = envs::parse_task(r.str(kWhat));
  } catch (const envs::UnsupportedTask& e) {
    throw io::DecodeError(std::string("checkpoint: ") + e.what());
  }
  cfg.population_size = static_cast<int>(r.u32(kWhat));
  cfg.generations = static_cast<int>(r.u32(kWhat));
  cfg.perturb_sigma = r.f64(kWhat);
  cfg.init_sigma = r.f64(kWhat);
  const auto mode = r.u8(kWhat);
  if (mode > 1) throw io::DecodeError("checkpoint: bad mode");
  cfg.mode = static_cast<NetMode>(mode);
  cfg.master_seed = r.u64(kWhat);
  cfg.workers = static_cast<int>(r.u32(kWhat));
  cfg.checkpoint_every = static_cast<int>(r.u32(kWhat));
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw io::DecodeError(std::string("checkpoint: invalid config: ") + e.what());
  }

  auto& pop = ck.population;
  pop.generation = r.u64(kWhat);
  pop.master_seed = r.u64(kWhat);
  const auto agents = r.u32(kWhat);
  if (agents != static_cast<std::uint32_t>(cfg.population_size))
    throw io::DecodeError("checkpoint: agent count differs from population size");
  if (pop.master_seed != cfg.master_seed) throw io::DecodeError("checkpoint: master seed mismatch");
  for (std::uint32_t i = 0; i < agents; ++i) {
    Agent a;
    a.slot = static_cast<int>(r.u32(kWhat));
    if (a.slot != static_cast<int>(i)) throw io::DecodeError("checkpoint: agent slots out of order");
    a.fitness = r.f64(kWhat);
    a.genome = net::read_genome(r);
    const auto count = r.u64(kWhat);
    const auto dim = r.u32(kWhat);
    if (dim > r.remaining() / 16) throw io::DecodeError("checkpoint: truncated input");
    std::vector<double> mean(dim), m2(dim);
    for (auto& v : mean) v = r.f64(kWhat);
    for (auto& v : m2) v = r.f64(kWhat);
    a.standardizer = envs::RunningStandardizer::from_parts(count, std::move(mean), std::move(m2));
    pop.agents.push_back(std::move(a));
  }

  const auto n_records = r.u32(kWhat);
  if (n_records > r.remaining() / 64) throw io::DecodeError("checkpoint: truncated input");
  for (std::uint32_t i = 0; i < n_records; ++i) {
    RunRecord rec;
    rec.generation = r.u64(kWhat);
    rec.best_fitness = r.f64(kWhat);
    rec.mean_fitness = r.f64(kWhat);
    rec.median_fitness = r.f64(kWhat);
    rec.elite_params = r.u64(kWhat);
    rec.elite_nodes = r.u64(kWhat);
    rec.elite_connections = r.u64(kWhat);
    rec.elapsed_seconds = r.f64(kWhat);
    ck.records.push_back(rec);
  }
  if (r.remaining() != 4) throw io::DecodeError("checkpoint: unexpected trailing bytes");
  return ck;
}

}  // namespace dynevo::evo
