#pragma once

#include <cstdint>
#include <vector>

#include "keymaze/actions.hpp"
#include "keymaze/maze.hpp"
#include "keymaze/world.hpp"

namespace keymaze {

// Tagged segments in forward order: START, then alternating MOVE / PICKUP /
// UNLOCK items, then GOAL. MOVE segments chain end-to-start; PICKUP and
// UNLOCK are point annotations consumed by derive_ground_truth.
enum class skeleton_tag { start, move, pickup, unlock, goal };

struct skeleton_item {
  skeleton_tag tag = skeleton_tag::move;
  std::vector<cell_label> cells;  // MOVE: full path; UNLOCK: the door edge
  int key_id = 0;                 // PICKUP / UNLOCK only
};

struct path_skeleton {
  std::vector<skeleton_item> items;
};

struct rewind_result {
  std::vector<door> doors;
  std::vector<key_info> keys;
  path_skeleton skeleton;
  cell_label start;
  cell_label goal;
};

// Backward construction: pick a random goal, then b_target times choose a
// key cell reachable from the current frontier without crossing locked
// doors, lock a random edge of the connecting segment behind a fresh key,
// and step the frontier to the key cell. May stop early when the frontier
// has no reachable cell left, yielding fewer backtracks than requested.
// A final approach segment from a random door-free start cell is prepended
// (zero length allowed), so that backtrack-free instances still have
// nontrivial paths.
rewind_result rewind_construct(const maze_graph& maze, int b_target,
                               std::uint64_t seed, int max_b_target = 7);

struct ground_truth {
  action_seq actions;
  int logical_depth = 0;        // == actions.size()
  int backtracks_effective = 0; // == number of unlock actions
  cell_label start;
  cell_label goal;

  bool operator==(const ground_truth&) const = default;
};

// Forward traversal of the skeleton: start at the start room, pick keys up
// on first entry to their rooms, and expand each locked-door crossing into
// use_key / unlock_and_open_door_to / move_to. Throws internal_error when
// the skeleton references doors or keys missing from the sets.
ground_truth derive_ground_truth(const maze_graph& maze,
                                 const std::vector<door>& doors,
                                 const std::vector<key_info>& keys,
                                 const path_skeleton& skeleton);
ground_truth derive_ground_truth(const maze_graph& maze,
                                 const rewind_result& rewound);

// Exhaustive shortest-solution oracle: Dijkstra over (room, held keys,
// opened doors) with every action costing 1. Intended for small instances
// (the state space is cells * 4^doors). Throws data_error when the goal is
// unreachable or the door count makes the search infeasible.
int bfs_optimal(const world& w);
int bfs_optimal(const maze_graph& maze, const std::vector<door>& doors,
                const std::vector<key_info>& keys, cell_label start,
                cell_label goal);

}  // namespace keymaze
