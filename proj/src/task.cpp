#include "keymaze/task.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"

namespace keymaze {

namespace {

// Cells whose tree path from x crosses none of the locked edges, x included,
// in ascending index order.
std::vector<int> reachable_avoiding(const maze_graph& maze, cell_label x,
                                    const std::set<edge_pair>& locked) {
  std::vector<bool> seen(maze.cell_count(), false);
  std::vector<int> order;
  std::queue<int> frontier;
  const int start = maze.index_of(x);
  seen[start] = true;
  frontier.push(start);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    order.push_back(u);
    for (const cell_label nb : maze.neighbors(maze.label_at(u))) {
      const int v = maze.index_of(nb);
      if (seen[v]) continue;
      if (locked.count(make_edge(maze.label_at(u), nb))) continue;
      seen[v] = true;
      frontier.push(v);
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

rewind_result rewind_construct(const maze_graph& maze, int b_target,
                               std::uint64_t seed, int max_b_target) {
  if (b_target < 0 || b_target > max_b_target) {
    throw data_error("rewind_construct: backtrack target " +
                     std::to_string(b_target) + " outside [0, " +
                     std::to_string(max_b_target) + "]");
  }
  pcg32 rng(seed);

  rewind_result out;
  out.goal = maze.label_at(static_cast<int>(rng.below(maze.cell_count())));

  cell_label x = out.goal;
  std::set<edge_pair> locked;
  // Construction order; segments[j] runs from the then-current frontier to
  // the chosen key cell.
  std::vector<std::vector<cell_label>> segments;

  for (int b = 0; b < b_target; ++b) {
    std::vector<int> reach = reachable_avoiding(maze, x, locked);
    std::erase(reach, maze.index_of(x));
    if (reach.empty()) break;  // frontier sealed off; keep the shorter chain
    const cell_label c_key =
        maze.label_at(reach[static_cast<std::size_t>(rng.below(reach.size()))]);
    std::vector<cell_label> seg = tree_path(maze, x, c_key);
    // Every segment edge is unlocked here (the path avoids locked edges), so
    // the door is uniform over the whole segment.
    const auto pick = static_cast<std::size_t>(rng.below(seg.size() - 1));
    const edge_pair d = make_edge(seg[pick], seg[pick + 1]);
    const int key_id = static_cast<int>(out.doors.size()) + 1;
    out.doors.push_back(door{d.first, d.second, key_id});
    out.keys.push_back(key_info{key_id, c_key, d});
    locked.insert(d);
    segments.push_back(std::move(seg));
    x = c_key;
  }

  // Approach segment: any start whose path to the frontier is door-free.
  const std::vector<int> reach = reachable_avoiding(maze, x, locked);
  out.start =
      maze.label_at(reach[static_cast<std::size_t>(rng.below(reach.size()))]);

  auto& items = out.skeleton.items;
  items.push_back({skeleton_tag::start, {out.start}, 0});
  items.push_back({skeleton_tag::move, tree_path(maze, out.start, x), 0});
  for (auto j = segments.size(); j-- > 0;) {
    const auto& d = out.doors[j];
    items.push_back({skeleton_tag::pickup, {out.keys[j].location}, d.key_id});
    items.push_back({skeleton_tag::unlock, {d.a, d.b}, d.key_id});
    std::vector<cell_label> forward(segments[j].rbegin(), segments[j].rend());
    items.push_back({skeleton_tag::move, std::move(forward), 0});
  }
  items.push_back({skeleton_tag::goal, {out.goal}, 0});
  return out;
}

ground_truth derive_ground_truth(const maze_graph& maze,
                                 const std::vector<door>& doors,
                                 const std::vector<key_info>& keys,
                                 const path_skeleton& skeleton) {
  const auto& items = skeleton.items;
  if (items.empty() || items.front().tag != skeleton_tag::start ||
      items.back().tag != skeleton_tag::goal) {
    throw internal_error("skeleton must run START..GOAL");
  }
  std::map<edge_pair, int> door_keys;
  for (const auto& d : doors) door_keys[d.edge()] = d.key_id;
  std::map<int, cell_label> key_rooms;
  for (const auto& k : keys) key_rooms[k.key_id] = k.location;
  for (const auto& item : items) {
    if (item.tag == skeleton_tag::pickup && !key_rooms.count(item.key_id)) {
      throw internal_error("skeleton references unknown key " +
                           std::to_string(item.key_id));
    }
    if (item.tag == skeleton_tag::unlock) {
      const auto it = door_keys.find(make_edge(item.cells[0], item.cells[1]));
      if (it == door_keys.end() || it->second != item.key_id) {
        throw internal_error("skeleton references unknown door");
      }
    }
  }

  std::map<cell_label, int> key_at_room;
  for (const auto& k : keys) key_at_room[k.location] = k.key_id;

  ground_truth gt;
  gt.start = items.front().cells.at(0);
  gt.goal = items.back().cells.at(0);

  std::set<int> held;
  std::set<edge_pair> opened;
  cell_label pos = gt.start;

  const auto arrive = [&](cell_label room) {
    const auto it = key_at_room.find(room);
    if (it != key_at_room.end() && !held.count(it->second)) {
      gt.actions.push_back(
          make_action(verb::pick_up_key, std::to_string(it->second)));
      held.insert(it->second);
    }
  };

  gt.actions.push_back(make_action(verb::start, gt.start.str()));
  arrive(pos);

  for (const auto& item : items) {
    if (item.tag != skeleton_tag::move) continue;
    if (item.cells.empty() || item.cells.front() != pos) {
      throw internal_error("skeleton segments do not chain");
    }
    for (std::size_t i = 1; i < item.cells.size(); ++i) {
      const cell_label next = item.cells[i];
      if (!maze.has_edge(pos, next)) {
        throw internal_error("skeleton step is not a maze edge");
      }
      const edge_pair e = make_edge(pos, next);
      const auto door_it = door_keys.find(e);
      if (door_it != door_keys.end() && !opened.count(e)) {
        if (!held.count(door_it->second)) {
          throw internal_error("skeleton crosses a door before its key");
        }
        gt.actions.push_back(
            make_action(verb::use_key, std::to_string(door_it->second)));
        gt.actions.push_back(
            make_action(verb::unlock_and_open_door_to, next.str()));
        opened.insert(e);
        ++gt.backtracks_effective;
      }
      gt.actions.push_back(make_action(verb::move_to, next.str()));
      pos = next;
      arrive(pos);
    }
  }
  if (pos != gt.goal) throw internal_error("skeleton does not end at the goal");
  gt.actions.push_back(make_action(verb::rescue, "Alice"));
  gt.logical_depth = static_cast<int>(gt.actions.size());
  return gt;
}

ground_truth derive_ground_truth(const maze_graph& maze,
                                 const rewind_result& rewound) {
  return derive_ground_truth(maze, rewound.doors, rewound.keys,
                             rewound.skeleton);
}

int bfs_optimal(const world& w) {
  // Only keys that exist somewhere and open an actual door can matter; a
  // door whose key has no location is an immovable wall.
  std::vector<int> usable;  // indices into w.doors
  for (std::size_t i = 0; i < w.doors.size(); ++i) {
    bool key_placed = false;
    for (const auto& k : w.keys) {
      if (k.key_id == w.doors[i].key_id) {
        key_placed = true;
        break;
      }
    }
    if (key_placed) usable.push_back(static_cast<int>(i));
  }
  const int nd = static_cast<int>(usable.size());
  if (nd > 12) {
    throw data_error("bfs_optimal: too many doors for exhaustive search");
  }

  std::map<cell_label, int> cell_index;
  {
    int next = 0;
    const auto touch = [&](cell_label c) {
      if (!cell_index.count(c)) cell_index[c] = next++;
    };
    touch(w.start);
    touch(w.goal);
    for (const auto& [a, b] : w.edges) {
      touch(a);
      touch(b);
    }
    for (const auto& k : w.keys) touch(k.location);
  }
  const int nc = static_cast<int>(cell_index.size());
  std::vector<cell_label> cells(nc);
  for (const auto& [label, idx] : cell_index) cells[idx] = label;

  // adjacency with door annotation (-1 = open edge, else usable-door bit;
  // -2 = permanently locked)
  std::vector<std::vector<std::pair<int, int>>> adj(nc);
  for (const auto& [a, b] : w.edges) {
    int tag = -1;
    const door* d = w.door_at(a, b);
    if (d) {
      tag = -2;
      for (int bit = 0; bit < nd; ++bit) {
        if (w.doors[usable[bit]].edge() == make_edge(a, b)) tag = bit;
      }
    }
    adj[cell_index[a]].push_back({cell_index[b], tag});
    adj[cell_index[b]].push_back({cell_index[a], tag});
  }

  // key bit per usable door; pickups keyed by room
  std::vector<std::vector<int>> key_bits_in_room(nc);
  for (int bit = 0; bit < nd; ++bit) {
    const key_info* k = w.key_by_id(w.doors[usable[bit]].key_id);
    key_bits_in_room[cell_index[k->location]].push_back(bit);
  }

  const auto state_of = [&](int cell, unsigned held, unsigned open) {
    return (static_cast<std::uint64_t>(open) << (20 + nd)) |
           (static_cast<std::uint64_t>(held) << 20) |
           static_cast<std::uint64_t>(cell);
  };

  std::map<std::uint64_t, int> dist;
  using entry = std::pair<int, std::uint64_t>;
  std::priority_queue<entry, std::vector<entry>, std::greater<>> pq;
  const std::uint64_t init = state_of(cell_index[w.start], 0, 0);
  dist[init] = 0;
  pq.push({0, init});
  const int goal_cell = cell_index[w.goal];

  while (!pq.empty()) {
    const auto [d, s] = pq.top();
    pq.pop();
    if (dist[s] != d) continue;
    const int cell = static_cast<int>(s & 0xfffff);
    const auto held = static_cast<unsigned>((s >> 20) & ((1u << nd) - 1));
    const auto open = static_cast<unsigned>(s >> (20 + nd));
    if (cell == goal_cell) {
      return d + 2;  // plus the mandatory start and rescue actions
    }
    const auto relax = [&](std::uint64_t ns, int ndist) {
      const auto it = dist.find(ns);
      if (it == dist.end() || it->second > ndist) {
        dist[ns] = ndist;
        pq.push({ndist, ns});
      }
    };
    for (const int bit : key_bits_in_room[cell]) {
      if (!(held & (1u << bit))) {
        relax(state_of(cell, held | (1u << bit), open), d + 1);
      }
    }
    for (const auto& [to, tag] : adj[cell]) {
      if (tag == -1) {
        relax(state_of(to, held, open), d + 1);
      } else if (tag >= 0) {
        if (open & (1u << tag)) {
          relax(state_of(to, held, open), d + 1);
        } else if (held & (1u << tag)) {
          // use_key + unlock_and_open_door_to + move_to
          relax(state_of(to, held, open | (1u << tag)), d + 3);
        }
      }
    }
  }
  throw data_error("bfs_optimal: goal unreachable from start");
}

int bfs_optimal(const maze_graph& maze, const std::vector<door>& doors,
                const std::vector<key_info>& keys, cell_label start,
                cell_label goal) {
  return bfs_optimal(make_world(maze, doors, keys, start, goal));
}

}  // namespace keymaze
