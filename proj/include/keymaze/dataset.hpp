#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keymaze/facts.hpp"
#include "keymaze/maze.hpp"
#include "keymaze/task.hpp"
#include "keymaze/world.hpp"

namespace keymaze {

struct gen_params {
  int n = 5;
  int m = 5;
  int b_target = 0;
  double noise_target = 0.0;
  double shuffle_ratio = 0.0;

  bool operator==(const gen_params&) const = default;
};

// A fully annotated problem: world, facts, ground truth, and the effective
// parameter values that emerged during generation.
struct task_instance {
  static constexpr int schema_version = 1;

  std::string id;
  std::uint64_t seed = 0;
  gen_params params;
  int b_effective = 0;
  int logical_depth = 0;
  fact_list facts;
  ground_truth gt;
  maze_graph maze;
  std::vector<door> doors;
  std::vector<key_info> keys;
  cell_label start;
  cell_label goal;

  world to_world() const;
};

// build_maze -> rewind_construct -> derive_ground_truth -> compile / inject /
// shuffle, then a verifier self-check of the ground truth. Deterministic in
// (params, seed); sub-stage seeds are derived from the instance seed.
task_instance assemble_instance(const gen_params& params, std::uint64_t seed,
                                const noise_options& noise = {});

// Resamples derived seeds until b_effective == b_target (rewind may stop
// early); throws data_error once max_retries is exhausted.
task_instance assemble_instance_exact_b(const gen_params& params,
                                        std::uint64_t seed,
                                        int max_retries = 64,
                                        const noise_options& noise = {});

// "{n}x{m}-b{b}-nz{noise}-sh{shuffle}-{seed in hex}"; injective over inputs.
std::string instance_id(const gen_params& params, std::uint64_t seed);
std::optional<std::pair<gen_params, std::uint64_t>> parse_instance_id(
    std::string_view id);

// One self-describing JSON object per line; read(write(x)) == x field for
// field. Read errors name the offending line.
void write_jsonl(const std::vector<task_instance>& instances,
                 const std::string& path);
std::vector<task_instance> read_jsonl(const std::string& path);

std::string instance_to_json_line(const task_instance& inst);
task_instance instance_from_json_line(const std::string& line, int line_no);

}  // namespace keymaze
