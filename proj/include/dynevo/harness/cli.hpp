#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dynevo/evolution/evolution.hpp"

namespace dynevo::harness {

inline constexpr std::string_view kVersion = "dynevo 0.1.0";

/// Written to <out>/manifest.json before the first generation runs.
struct RunManifest {
  evo::EvolutionConfig config;
  std::string start_timestamp;  // UTC, ISO-8601
  std::string code_version{kVersion};
  std::vector<std::string> resolved_defaults;  // options that were not given explicitly
  std::filesystem::path out_dir;
  std::string resumed_from;  // empty for fresh runs
};

std::string manifest_json(const RunManifest& m);

/// Path of the checkpoint taken at `generation` inside `out_dir`.
std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, std::uint64_t generation);

/// Entry point shared by the `dynevo` binary and the tests. `args` excludes the
/// program name. Data goes to files or `out`; diagnostics and progress go to
/// `err`. Returns the process exit status.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dynevo::harness
