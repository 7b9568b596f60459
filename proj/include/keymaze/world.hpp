#pragma once

#include <optional>
#include <vector>

#include "keymaze/cell_label.hpp"
#include "keymaze/maze.hpp"

namespace keymaze {

// A locked door sits on one edge and is opened by exactly one key.
struct door {
  cell_label a, b;  // canonical order, a < b
  int key_id = 0;

  edge_pair edge() const { return {a, b}; }
  bool operator==(const door&) const = default;
};

struct key_info {
  int key_id = 0;
  cell_label location;
  // The door edge this key opens. Unset for spurious keys, which appear only
  // in augmented worlds used to certify that distracting content is inert.
  std::optional<edge_pair> opens;

  bool operator==(const key_info&) const = default;
};

// Everything the verifier and the search oracle need to execute actions.
// Unlike maze_graph this imposes no spanning-tree structure: worlds
// reconstructed from partial fact lists are forests, and augmented worlds
// carry phantom locked edges.
struct world {
  int cols = 0;
  int rows = 0;
  std::vector<edge_pair> edges;  // sorted canonical; includes door edges
  std::vector<door> doors;
  std::vector<key_info> keys;
  cell_label start;
  cell_label goal;

  bool has_edge(cell_label x, cell_label y) const;
  const door* door_at(cell_label x, cell_label y) const;
  const key_info* key_by_id(int key_id) const;
  std::vector<const key_info*> keys_in_room(cell_label room) const;

  // Sorts edges and validates door/key cross references.
  void finalize();
};

world make_world(const maze_graph& maze, std::vector<door> doors,
                 std::vector<key_info> keys, cell_label start, cell_label goal);

}  // namespace keymaze
