#include "keymaze/actions.hpp"

#include <array>

namespace keymaze {

namespace {

constexpr std::array<std::string_view, 6> names = {
    "start",   "move_to", "pick_up_key",
    "use_key", "unlock_and_open_door_to", "rescue",
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\n' || s[b] == '\r'))
    ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\n' ||
                   s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view verb_name(verb v) { return names[static_cast<int>(v)]; }

std::optional<verb> parse_verb(std::string_view name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<verb>(i);
  }
  return std::nullopt;
}

action make_action(verb v, std::string arg) { return action{v, std::move(arg)}; }

std::string render_actions(const action_seq& actions) {
  std::string out = "[";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += ", ";
    out += "('";
    out += verb_name(actions[i].v);
    out += "', '";
    out += actions[i].arg;
    out += "')";
  }
  out += "]";
  return out;
}

action normalize(const action& a) { return action{a.v, trim(a.arg)}; }

action_seq normalize(const action_seq& actions) {
  action_seq out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(normalize(a));
  return out;
}

}  // namespace keymaze
