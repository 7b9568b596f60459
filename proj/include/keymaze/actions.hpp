#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace keymaze {

// The six-verb action schema. Arguments are room labels for start / move_to /
// unlock_and_open_door_to, decimal key ids for pick_up_key / use_key, and
// "Alice" for rescue.
enum class verb {
  start,
  move_to,
  pick_up_key,
  use_key,
  unlock_and_open_door_to,
  rescue,
};

std::string_view verb_name(verb v);
std::optional<verb> parse_verb(std::string_view name);

struct action {
  verb v = verb::start;
  std::string arg;

  bool operator==(const action&) const = default;
};

using action_seq = std::vector<action>;

action make_action(verb v, std::string arg);

// Canonical rendering: [('start', 'A1'), ('move_to', 'A2')]
std::string render_actions(const action_seq& actions);

// Trims surrounding whitespace from the argument; verbs are already
// canonical. Comparisons (exact match, prefix, LCS) run on normalized form.
action normalize(const action& a);
action_seq normalize(const action_seq& actions);

}  // namespace keymaze
