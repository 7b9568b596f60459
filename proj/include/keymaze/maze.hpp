#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "keymaze/cell_label.hpp"

namespace keymaze {

using edge_pair = std::pair<cell_label, cell_label>;

// Canonical edge form: smaller endpoint (by column, then row) first.
edge_pair make_edge(cell_label a, cell_label b);

// An acyclic graph over an n x m grid whose edges join 4-neighborhood
// adjacent cells. build_maze always produces a spanning tree (n*m - 1 edges,
// connected); from_edges can additionally hold a forest when
// require_spanning is false, which is needed to answer path queries on
// partially described worlds.
class maze_graph {
 public:
  maze_graph() = default;

  static maze_graph from_edges(int cols, int rows, std::vector<edge_pair> edges,
                               bool require_spanning = true);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int cell_count() const { return cols_ * rows_; }

  // Edges sorted by (smaller endpoint, larger endpoint), smaller first.
  const std::vector<edge_pair>& edges() const { return edges_; }

  bool contains(cell_label c) const {
    return c.col >= 0 && c.col < cols_ && c.row >= 1 && c.row <= rows_;
  }
  bool has_edge(cell_label a, cell_label b) const;
  std::vector<cell_label> neighbors(cell_label c) const;
  bool same_component(cell_label a, cell_label b) const;

  int index_of(cell_label c) const { return (c.row - 1) * cols_ + c.col; }
  cell_label label_at(int idx) const {
    return cell_label{idx % cols_, idx / cols_ + 1};
  }

 private:
  friend maze_graph build_maze(int, int, std::uint64_t);
  void finalize();  // builds adjacency, rooted orientation, components

  int cols_ = 0;
  int rows_ = 0;
  std::vector<edge_pair> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<int> component_;

  friend std::vector<cell_label> tree_path(const maze_graph&, cell_label,
                                           cell_label);
};

// Uniform-ish random spanning tree: Kruskal over a seeded shuffle of all
// candidate wall edges. Deterministic for fixed (n, m, seed).
maze_graph build_maze(int n, int m, std::uint64_t seed);

// The unique simple path a..b inclusive ([a] when a == b). Throws data_error
// when a cell is out of range or the cells are in different components.
std::vector<cell_label> tree_path(const maze_graph& maze, cell_label a,
                                  cell_label b);

// All grid-adjacent cell pairs of the bounding grid that are NOT maze edges
// (candidate locations for phantom doors), in canonical order.
std::vector<edge_pair> wall_candidates(const maze_graph& maze);

}  // namespace keymaze
