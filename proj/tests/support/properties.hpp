#pragma once

// Property checks shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <string>

#include "dynevo/net/dynamic_net.hpp"

namespace testsupport {

struct Check {
  bool ok = true;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

/// Independent structural audit: adjacency mirrors the edge list, ids unique,
/// pairs unique, layers contiguous, inputs at 0, outputs last, every hidden
/// node alive.
Check audit_structure(const dynevo::net::DynamicNet& net);

/// Applies `total` random mutations across a series of lineages and audits
/// the net after every one.
Check random_mutation_audit(long total, std::uint64_t seed);

/// Chi-square (p = 0.001) checks over `trials` samples each.
Check mutation_choice_uniformity(long trials, std::uint64_t seed);
Check grow_connection_pair_uniformity(long trials, std::uint64_t seed);
Check grow_node_sampling_uniformity(long trials, std::uint64_t seed);
Check prune_node_uniformity(long trials, std::uint64_t seed);
Check prune_connection_uniformity(long trials, std::uint64_t seed);

/// Random nets of at most 20 nodes, 10-step rollouts against the reference
/// interpreter, every kernel variant. Relative tolerance 1e-12.
Check forward_equivalence(int nets, std::uint64_t seed);

/// Sample std of `samples` perturbation deltas is within 1% of `sigma`.
Check perturbation_sigma(long samples, double sigma, std::uint64_t seed);

/// Genome fuzz round-trip on `nets` random nets (structure and forward
/// outputs bit-identical) plus checkpoint round-trip of a short run.
Check serialization_round_trips(int nets, std::uint64_t seed);

/// A run interrupted at `split`, checkpointed to bytes and resumed matches
/// the uninterrupted run of `gens` generations.
Check resume_equivalence(int gens, int split, std::uint64_t seed);

/// CLI runs with 1 and 8 workers give identical metrics.csv (elapsed time
/// column aside) and identical final checkpoints (population part).
Check worker_invariance(const std::string& scratch_dir, int gens, std::uint64_t seed);

}  // namespace testsupport
