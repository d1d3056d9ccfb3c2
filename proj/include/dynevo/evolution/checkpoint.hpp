#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynevo/evolution/evolution.hpp"
#include "dynevo/io/bytes.hpp"

namespace dynevo::evo {

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct Checkpoint {
  Population population;
  EvolutionConfig config;
  std::vector<RunRecord> records;
};

/// Layout (little-endian):
///
///   "DYNEVO-CKPT" | u32 version
///   | config:  str task | u32 population | u32 generations | f64 perturb_sigma
///              | f64 init_sigma | u8 mode | u64 master_seed | u32 workers
///              | u32 checkpoint_every
///   | u64 generation | u64 master_seed | u32 agent_count
///   | per agent: u32 slot | f64 fitness | u64 len + genome bytes
///                | u64 count | u32 dim | dim x f64 mean | dim x f64 m2
///   | u32 record_count | per record: u64 generation | f64 best | f64 mean
///                | f64 median | u64 params | u64 nodes | u64 connections | f64 elapsed
///   | u32 crc32 of every preceding byte
std::vector<std::uint8_t> save_checkpoint(const Population& pop, const EvolutionConfig& cfg,
                                          const std::vector<RunRecord>& records);

/// Throws io::DecodeError on corruption or a version mismatch.
Checkpoint load_checkpoint(std::span<const std::uint8_t> bytes);

}  // namespace dynevo::evo
