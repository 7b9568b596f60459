#include "keymaze/facts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"
#include "keymaze/task.hpp"

namespace keymaze {

namespace {

constexpr std::string_view kind_names[] = {
    "open_connection", "locked_connection", "requires_key",
    "key_location",    "agent_start",       "agent_goal",
};

void require_params(fact_kind kind, const std::vector<std::string>& params,
                    std::size_t n) {
  if (params.size() != n) {
    throw data_error("fact " + std::string(fact_kind_name(kind)) +
                     " expects " + std::to_string(n) + " params");
  }
}

// Consumes a literal prefix; returns false when it does not match.
bool eat(std::string_view& s, std::string_view lit) {
  if (s.substr(0, lit.size()) != lit) return false;
  s.remove_prefix(lit.size());
  return true;
}

// Consumes up to the next space or period; the token itself.
std::string_view eat_token(std::string_view& s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] != ' ' && s[i] != '.') ++i;
  auto tok = s.substr(0, i);
  s.remove_prefix(i);
  return tok;
}

bool valid_key_id(std::string_view tok) {
  if (tok.empty() || tok.size() > 9) return false;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
  }
  return tok[0] != '0' || tok.size() == 1;
}

}  // namespace

std::string_view fact_kind_name(fact_kind kind) {
  return kind_names[static_cast<int>(kind)];
}

std::optional<fact_kind> parse_fact_kind(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kind_names[i] == name) return static_cast<fact_kind>(i);
  }
  return std::nullopt;
}

std::string render_fact(fact_kind kind, const std::vector<std::string>& params) {
  switch (kind) {
    case fact_kind::open_connection:
      require_params(kind, params, 2);
      return "Room " + params[0] + " and " + params[1] +
             " are connected by an open door.";
    case fact_kind::locked_connection:
      require_params(kind, params, 2);
      return "Room " + params[0] + " and " + params[1] +
             " are connected by a closed and locked door.";
    case fact_kind::requires_key:
      require_params(kind, params, 3);
      return "The locked door between " + params[0] + " and " + params[1] +
             " requires key " + params[2] + ".";
    case fact_kind::key_location:
      require_params(kind, params, 2);
      return "Key " + params[0] + " is in room " + params[1] + ".";
    case fact_kind::agent_start:
      require_params(kind, params, 1);
      return "Bob is in room " + params[0] + ".";
    case fact_kind::agent_goal:
      require_params(kind, params, 1);
      return "Alice is in room " + params[0] + ".";
  }
  throw data_error("unknown fact kind");
}

fact make_fact(fact_role role, fact_kind kind,
               std::vector<std::string> params) {
  fact f;
  f.role = role;
  f.kind = kind;
  f.text = render_fact(kind, params);
  f.params = std::move(params);
  return f;
}

int fact_list::supporting_count() const {
  return static_cast<int>(std::count_if(
      items.begin(), items.end(),
      [](const fact& f) { return f.role == fact_role::supporting; }));
}

int fact_list::distracting_count() const {
  return static_cast<int>(items.size()) - supporting_count();
}

std::pair<int, int> fact_list::noise_effective() const {
  return {distracting_count(), supporting_count()};
}

double fact_list::noise_effective_value() const {
  const auto [d, s] = noise_effective();
  return s == 0 ? 0.0 : static_cast<double>(d) / static_cast<double>(s);
}

std::vector<std::string> fact_list::sentences() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& f : items) out.push_back(f.text);
  return out;
}

fact_list compile_supporting_facts(const maze_graph& maze,
                                   const std::vector<door>& doors,
                                   const std::vector<key_info>& keys,
                                   cell_label start, cell_label goal) {
  std::map<edge_pair, const door*> door_at;
  for (const auto& d : doors) door_at[d.edge()] = &d;
  std::map<int, const key_info*> key_by_id;
  for (const auto& k : keys) key_by_id[k.key_id] = &k;

  fact_list out;
  for (const auto& e : maze.edges()) {
    const auto it = door_at.find(e);
    if (it == door_at.end()) {
      out.items.push_back(make_fact(fact_role::supporting,
                                    fact_kind::open_connection,
                                    {e.first.str(), e.second.str()}));
      continue;
    }
    const door& d = *it->second;
    const auto key_it = key_by_id.find(d.key_id);
    if (key_it == key_by_id.end()) {
      throw data_error("door without a key: " + d.a.str() + "-" + d.b.str());
    }
    const std::string id = std::to_string(d.key_id);
    out.items.push_back(make_fact(fact_role::supporting,
                                  fact_kind::locked_connection,
                                  {d.a.str(), d.b.str()}));
    out.items.push_back(make_fact(fact_role::supporting,
                                  fact_kind::requires_key,
                                  {d.a.str(), d.b.str(), id}));
    out.items.push_back(make_fact(fact_role::supporting,
                                  fact_kind::key_location,
                                  {id, key_it->second->location.str()}));
  }
  out.items.push_back(
      make_fact(fact_role::supporting, fact_kind::agent_start, {start.str()}));
  out.items.push_back(
      make_fact(fact_role::supporting, fact_kind::agent_goal, {goal.str()}));
  return out;
}

fact_list inject_noise(fact_list facts, double noise_target,
                       std::uint64_t seed, const noise_options& opts) {
  if (noise_target < 0.0 || noise_target > 1.0) {
    throw data_error("noise_target must lie in [0, 1]");
  }
  if (facts.distracting_count() != 0) {
    throw data_error("inject_noise expects an all-supporting fact list");
  }
  const int supporting = facts.supporting_count();
  const int want =
      static_cast<int>(std::floor(noise_target * supporting + 0.5));
  if (want == 0) return facts;

  // The supporting facts fully describe the world; recover the grid and its
  // unused wall edges from them so phantom doors stay grid-plausible.
  world w = world_from_facts(facts.sentences());
  std::vector<edge_pair> walls;
  {
    std::set<edge_pair> tree(w.edges.begin(), w.edges.end());
    for (int row = 1; row <= w.rows; ++row) {
      for (int col = 0; col < w.cols; ++col) {
        const cell_label c{col, row};
        if (col + 1 < w.cols && !tree.count(make_edge(c, {col + 1, row}))) {
          walls.push_back(make_edge(c, {col + 1, row}));
        }
        if (row + 1 <= w.rows && !tree.count(make_edge(c, {col, row + 1}))) {
          walls.push_back(make_edge(c, {col, row + 1}));
        }
      }
    }
  }
  int fresh_id = 0;
  for (const auto& f : facts.items) {
    if (f.kind == fact_kind::requires_key) {
      fresh_id = std::max(fresh_id, std::stoi(f.params[2]));
    }
  }

  pcg32 rng(seed);
  const auto take_wall = [&]() {
    const auto i = static_cast<std::size_t>(rng.below(walls.size()));
    const edge_pair e = walls[i];
    walls[i] = walls.back();
    walls.pop_back();
    return e;
  };

  const bool shortcuts_allowed =
      opts.misleading_open_doors && opts.check_world != nullptr &&
      opts.check_world->doors.size() <= 7 &&
      opts.check_world->cols * opts.check_world->rows <= 256;
  const int base_optimal =
      shortcuts_allowed ? bfs_optimal(*opts.check_world) : 0;
  // Accepted shortcut edges accumulate here: certifying each candidate
  // against the world-so-far keeps the JOINT optimum unchanged (extra open
  // edges can only shorten, never lengthen).
  world accumulated;
  if (shortcuts_allowed) accumulated = *opts.check_world;

  std::vector<std::vector<fact>> units;
  int remaining = want;
  while (remaining > 0) {
    const bool phantom_fits = remaining >= 2 && !walls.empty();
    const bool shortcut_fits = shortcuts_allowed && !walls.empty();
    const std::uint64_t kinds = 1 + (phantom_fits ? 1 : 0) + (shortcut_fits ? 1 : 0);
    const std::uint64_t roll = rng.below(kinds);
    if (phantom_fits && roll == 1) {
      const edge_pair e = take_wall();
      const std::string id = std::to_string(++fresh_id);
      units.push_back(
          {make_fact(fact_role::distracting, fact_kind::locked_connection,
                     {e.first.str(), e.second.str()}),
           make_fact(fact_role::distracting, fact_kind::requires_key,
                     {e.first.str(), e.second.str(), id})});
      remaining -= 2;
    } else if (shortcut_fits && roll == 2) {
      const edge_pair e = take_wall();
      world candidate = accumulated;
      candidate.edges.push_back(e);
      candidate.finalize();
      if (bfs_optimal(candidate) != base_optimal) continue;  // resample
      accumulated = std::move(candidate);
      units.push_back(
          {make_fact(fact_role::distracting, fact_kind::open_connection,
                     {e.first.str(), e.second.str()})});
      remaining -= 1;
    } else {
      // Spurious key in a uniformly random room; its id never opens anything.
      const int cell = static_cast<int>(rng.below(w.cols * w.rows));
      const cell_label room{cell % w.cols, cell / w.cols + 1};
      units.push_back({make_fact(fact_role::distracting, fact_kind::key_location,
                                 {std::to_string(++fresh_id), room.str()})});
      remaining -= 1;
    }
  }

  for (const auto& unit : units) {
    const auto pos = static_cast<std::size_t>(rng.below(facts.items.size() + 1));
    facts.items.insert(facts.items.begin() + static_cast<std::ptrdiff_t>(pos),
                       unit.begin(), unit.end());
  }
  return facts;
}

fact_list shuffle_facts(fact_list facts, double shuffle_ratio,
                        std::uint64_t seed) {
  if (shuffle_ratio < 0.0 || shuffle_ratio > 1.0) {
    throw data_error("shuffle_ratio must lie in [0, 1]");
  }
  facts.shuffle_ratio = shuffle_ratio;
  const auto n = facts.items.size();
  const auto k = std::min<std::size_t>(
      n, static_cast<std::size_t>(
             std::max(0.0, std::ceil(shuffle_ratio * static_cast<double>(n) -
                                     1e-9))));
  if (k < 2) return facts;

  pcg32 rng(seed);
  std::vector<std::size_t> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(k);
  std::sort(positions.begin(), positions.end());

  std::vector<fact> picked;
  picked.reserve(k);
  for (const auto p : positions) picked.push_back(std::move(facts.items[p]));
  rng.shuffle(picked);
  for (std::size_t i = 0; i < k; ++i) {
    facts.items[positions[i]] = std::move(picked[i]);
  }
  return facts;
}

std::optional<fact> parse_fact(std::string_view s) {
  const auto room_pair = [&](std::string_view rest, fact_kind kind,
                             std::string_view mid,
                             std::string_view tail) -> std::optional<fact> {
    auto a = eat_token(rest);
    if (!eat(rest, mid)) return std::nullopt;
    auto b = eat_token(rest);
    if (rest != tail) return std::nullopt;
    if (!cell_label::parse(a) || !cell_label::parse(b)) return std::nullopt;
    return make_fact(fact_role::supporting, kind,
                     {std::string(a), std::string(b)});
  };

  std::string_view rest = s;
  if (eat(rest, "Room ")) {
    if (auto f = room_pair(rest, fact_kind::open_connection, " and ",
                           " are connected by an open door.")) {
      return f;
    }
    return room_pair(rest, fact_kind::locked_connection, " and ",
                     " are connected by a closed and locked door.");
  }
  rest = s;
  // Canonical wording first; one worked example says just "Door between".
  if (eat(rest, "The locked door between ") || eat(rest, "Door between ")) {
    auto a = eat_token(rest);
    if (!eat(rest, " and ")) return std::nullopt;
    auto b = eat_token(rest);
    if (!eat(rest, " requires key ")) return std::nullopt;
    auto k = eat_token(rest);
    if (rest != "." || !cell_label::parse(a) || !cell_label::parse(b) ||
        !valid_key_id(k)) {
      return std::nullopt;
    }
    return make_fact(fact_role::supporting, fact_kind::requires_key,
                     {std::string(a), std::string(b), std::string(k)});
  }
  rest = s;
  if (eat(rest, "Key ")) {
    auto k = eat_token(rest);
    if (!eat(rest, " is in room ")) return std::nullopt;
    auto room = eat_token(rest);
    if (rest != "." || !valid_key_id(k) || !cell_label::parse(room)) {
      return std::nullopt;
    }
    return make_fact(fact_role::supporting, fact_kind::key_location,
                     {std::string(k), std::string(room)});
  }
  rest = s;
  if (eat(rest, "Bob is in room ")) {
    auto room = eat_token(rest);
    if (rest != "." || !cell_label::parse(room)) return std::nullopt;
    return make_fact(fact_role::supporting, fact_kind::agent_start,
                     {std::string(room)});
  }
  rest = s;
  if (eat(rest, "Alice is in room ")) {
    auto room = eat_token(rest);
    if (rest != "." || !cell_label::parse(room)) return std::nullopt;
    return make_fact(fact_role::supporting, fact_kind::agent_goal,
                     {std::string(room)});
  }
  return std::nullopt;
}

world world_from_facts(const std::vector<std::string>& sentences) {
  world w;
  std::map<edge_pair, int> door_key;  // -1 until a requires_key names it
  std::map<int, cell_label> key_rooms;
  bool have_start = false;
  bool have_goal = false;

  for (const auto& s : sentences) {
    const auto f = parse_fact(s);
    if (!f) throw data_error("unrecognized fact: \"" + s + "\"");
    const auto room = [&](std::size_t i) {
      return *cell_label::parse(f->params[i]);
    };
    switch (f->kind) {
      case fact_kind::open_connection:
        w.edges.push_back(make_edge(room(0), room(1)));
        break;
      case fact_kind::locked_connection: {
        const auto e = make_edge(room(0), room(1));
        w.edges.push_back(e);
        door_key.emplace(e, -1);
        break;
      }
      case fact_kind::requires_key:
        door_key[make_edge(room(0), room(1))] = std::stoi(f->params[2]);
        break;
      case fact_kind::key_location:
        key_rooms[std::stoi(f->params[0])] = room(1);
        break;
      case fact_kind::agent_start:
        w.start = room(0);
        have_start = true;
        break;
      case fact_kind::agent_goal:
        w.goal = room(0);
        have_goal = true;
        break;
    }
  }
  if (!have_start || !have_goal) {
    throw data_error("fact list lacks Bob or Alice placement");
  }
  for (const auto& [e, key_id] : door_key) {
    if (key_id < 0) {
      throw data_error("locked door " + e.first.str() + "-" + e.second.str() +
                       " has no key requirement");
    }
    w.doors.push_back(door{e.first, e.second, key_id});
  }
  for (const auto& [key_id, room] : key_rooms) {
    std::optional<edge_pair> opens;
    for (const auto& [e, k] : door_key) {
      if (k == key_id) opens = e;
    }
    w.keys.push_back(key_info{key_id, room, opens});
  }
  for (const auto& [a, b] : w.edges) {
    w.cols = std::max({w.cols, a.col + 1, b.col + 1});
    w.rows = std::max({w.rows, a.row, b.row});
  }
  w.cols = std::max({w.cols, w.start.col + 1, w.goal.col + 1});
  w.rows = std::max({w.rows, w.start.row, w.goal.row});
  for (const auto& k : w.keys) {
    w.cols = std::max(w.cols, k.location.col + 1);
    w.rows = std::max(w.rows, k.location.row);
  }
  w.finalize();
  return w;
}

}  // namespace keymaze
