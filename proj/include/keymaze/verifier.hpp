#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "keymaze/actions.hpp"
#include "keymaze/world.hpp"

namespace keymaze {

enum class violation_category {
  start,
  adjacency,
  locked_door,
  key_usage,
  unlock_sequence,
  rescue,
  parse,
};

std::string_view violation_category_name(violation_category c);

struct violation {
  int step = 0;  // 0-based index into the predicted actions
  violation_category category = violation_category::parse;
  std::string detail;
};

struct world_state {
  cell_label current_room;
  std::set<int> held_keys;
  std::set<edge_pair> opened_doors;
  std::optional<edge_pair> pending_unlock;  // set only right after a valid use_key
  bool rescued = false;
  int step = 0;
};

struct verification_report {
  bool parsed_ok = true;
  std::vector<violation> violations;
  std::optional<int> first_violation_step;
  bool goal_reached = false;
  bool exact_match = false;
};

struct parse_outcome {
  bool ok = false;
  action_seq actions;
  std::string error;
  std::size_t offset = 0;  // byte offset into the raw text

  explicit operator bool() const { return ok; }
};

// Takes everything after the LAST "Solution:" marker (case-insensitive) and
// parses a bracketed list of quoted 2-tuples. Tolerates arbitrary
// whitespace, single / double / typographic quotes, and surrounding
// Markdown code fences. Verbs outside the six-verb schema fail the parse.
parse_outcome parse_solution(std::string_view raw_model_text);

// Steps the actions through world semantics. Execution continues past
// violations by skipping the illegal action and keeping state, so the
// report carries the full violation profile; first_violation_step preserves
// halt-at-first-error semantics.
verification_report execute(const action_seq& actions, const world& w);

// Element-wise equality after normalization.
bool exact_match(const action_seq& pred, const action_seq& gt);

// parse + execute + exact-match against the ground truth; parse failures
// yield a report with a single parse violation at step 0.
verification_report verify_response(std::string_view raw_model_text,
                                    const world& w, const action_seq& gt);

}  // namespace keymaze
