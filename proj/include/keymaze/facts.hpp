#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keymaze/maze.hpp"
#include "keymaze/world.hpp"

namespace keymaze {

enum class fact_role { supporting, distracting };

enum class fact_kind {
  open_connection,
  locked_connection,
  requires_key,
  key_location,
  agent_start,
  agent_goal,
};

std::string_view fact_kind_name(fact_kind kind);
std::optional<fact_kind> parse_fact_kind(std::string_view name);

// Sentence templates are fixed and rendered byte-for-byte from (kind,
// params); params are rooms and decimal key ids in template order.
std::string render_fact(fact_kind kind, const std::vector<std::string>& params);

struct fact {
  fact_role role = fact_role::supporting;
  fact_kind kind = fact_kind::open_connection;
  std::vector<std::string> params;
  std::string text;

  bool operator==(const fact&) const = default;
};

fact make_fact(fact_role role, fact_kind kind, std::vector<std::string> params);

struct fact_list {
  std::vector<fact> items;
  double shuffle_ratio = 0.0;

  int supporting_count() const;
  int distracting_count() const;
  // Exact ratio {distracting, supporting}; kept rational so equality checks
  // never depend on float rounding.
  std::pair<int, int> noise_effective() const;
  double noise_effective_value() const;
  std::vector<std::string> sentences() const;
};

// One sentence per open edge, a consecutive [locked, requires, key location]
// block per door, all in canonical edge order, then Bob, then Alice.
fact_list compile_supporting_facts(const maze_graph& maze,
                                   const std::vector<door>& doors,
                                   const std::vector<key_info>& keys,
                                   cell_label start, cell_label goal);

struct noise_options {
  // When set, open-connection distractors (which could create shortcuts)
  // are allowed; each candidate is kept only if it provably leaves the
  // optimal solution length unchanged, which needs the true world and a
  // search-sized instance. Off by default: the default distractor kinds are
  // inert by construction.
  bool misleading_open_doors = false;
  const world* check_world = nullptr;
};

// Appends round-half-up(noise_target * supporting) distracting sentences,
// interleaved at seeded uniform positions. Distractors are phantom locked
// doors on non-tree wall edges (two sentences, no key placement ever
// matching) and spurious keys that open nothing (one sentence).
fact_list inject_noise(fact_list facts, double noise_target,
                       std::uint64_t seed, const noise_options& opts = {});

// Picks ceil(shuffle_ratio * |facts|) positions uniformly and applies a
// uniform random permutation to the facts at those positions; 1.0 is a full
// shuffle, 0.0 the identity.
fact_list shuffle_facts(fact_list facts, double shuffle_ratio,
                        std::uint64_t seed);

// Inverse of the templates, tolerant of the door-requirement wording used by
// some worked examples ("Door between X and Y requires key k.").
std::optional<fact> parse_fact(std::string_view sentence);

// Reconstructs an executable world from rendered sentences. Spurious keys
// (no matching door) are kept with no opens edge; phantom locked doors (no
// key placement) are kept as permanently locked. Throws data_error on
// sentences that match no template or on structurally broken worlds.
world world_from_facts(const std::vector<std::string>& sentences);

}  // namespace keymaze
