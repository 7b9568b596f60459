#include "keymaze/world.hpp"

#include <algorithm>

#include "keymaze/errors.hpp"

namespace keymaze {

bool world::has_edge(cell_label x, cell_label y) const {
  return std::binary_search(edges.begin(), edges.end(), make_edge(x, y));
}

const door* world::door_at(cell_label x, cell_label y) const {
  const auto e = make_edge(x, y);
  for (const auto& d : doors) {
    if (d.edge() == e) return &d;
  }
  return nullptr;
}

const key_info* world::key_by_id(int key_id) const {
  for (const auto& k : keys) {
    if (k.key_id == key_id) return &k;
  }
  return nullptr;
}

std::vector<const key_info*> world::keys_in_room(cell_label room) const {
  std::vector<const key_info*> out;
  for (const auto& k : keys) {
    if (k.location == room) out.push_back(&k);
  }
  return out;
}

void world::finalize() {
  for (auto& e : edges) e = make_edge(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& d : doors) {
    if (!has_edge(d.a, d.b)) {
      throw data_error("door edge " + d.a.str() + "-" + d.b.str() +
                       " is not a world edge");
    }
  }
  for (const auto& k : keys) {
    if (k.opens && !door_at(k.opens->first, k.opens->second)) {
      throw data_error("key " + std::to_string(k.key_id) +
                       " opens a nonexistent door");
    }
  }
}

world make_world(const maze_graph& maze, std::vector<door> doors,
                 std::vector<key_info> keys, cell_label start,
                 cell_label goal) {
  world w;
  w.cols = maze.cols();
  w.rows = maze.rows();
  w.edges = maze.edges();
  w.doors = std::move(doors);
  w.keys = std::move(keys);
  w.start = start;
  w.goal = goal;
  w.finalize();
  return w;
}

}  // namespace keymaze
