#include "keymaze/maze.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"

namespace keymaze {

namespace {

bool grid_adjacent(cell_label a, cell_label b) {
  const int dc = a.col - b.col;
  const int dr = a.row - b.row;
  return (dc == 0 && (dr == 1 || dr == -1)) ||
         (dr == 0 && (dc == 1 || dc == -1));
}

struct union_find {
  std::vector<int> parent;
  explicit union_find(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

edge_pair make_edge(cell_label a, cell_label b) {
  return a < b ? edge_pair{a, b} : edge_pair{b, a};
}

bool maze_graph::has_edge(cell_label a, cell_label b) const {
  const auto e = make_edge(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<cell_label> maze_graph::neighbors(cell_label c) const {
  std::vector<cell_label> out;
  if (!contains(c)) return out;
  for (int idx : adj_[index_of(c)]) out.push_back(label_at(idx));
  return out;
}

bool maze_graph::same_component(cell_label a, cell_label b) const {
  if (!contains(a) || !contains(b)) return false;
  return component_[index_of(a)] == component_[index_of(b)];
}

void maze_graph::finalize() {
  std::sort(edges_.begin(), edges_.end());
  const int n = cell_count();
  adj_.assign(n, {});
  for (const auto& [a, b] : edges_) {
    adj_[index_of(a)].push_back(index_of(b));
    adj_[index_of(b)].push_back(index_of(a));
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

  parent_.assign(n, -1);
  depth_.assign(n, 0);
  component_.assign(n, -1);
  for (int root = 0; root < n; ++root) {
    if (component_[root] != -1) continue;
    component_[root] = root;
    std::queue<int> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adj_[u]) {
        if (component_[v] != -1) continue;
        component_[v] = root;
        parent_[v] = u;
        depth_[v] = depth_[u] + 1;
        frontier.push(v);
      }
    }
  }
}

maze_graph maze_graph::from_edges(int cols, int rows,
                                  std::vector<edge_pair> edges,
                                  bool require_spanning) {
  if (cols < 1 || rows < 1) {
    throw data_error("maze dimensions must be positive");
  }
  maze_graph g;
  g.cols_ = cols;
  g.rows_ = rows;
  for (auto& e : edges) e = make_edge(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw data_error("duplicate maze edge");
  }
  union_find uf(cols * rows);
  for (const auto& [a, b] : edges) {
    if (!g.contains(a) || !g.contains(b)) {
      throw data_error("maze edge endpoint out of range: " + a.str() + "-" +
                       b.str());
    }
    if (!grid_adjacent(a, b)) {
      throw data_error("maze edge is not grid-adjacent: " + a.str() + "-" +
                       b.str());
    }
    if (!uf.unite(g.index_of(a), g.index_of(b))) {
      throw data_error("maze edges contain a cycle at " + a.str() + "-" +
                       b.str());
    }
  }
  if (require_spanning &&
      static_cast<int>(edges.size()) != cols * rows - 1) {
    throw data_error("maze is not a spanning tree: expected " +
                     std::to_string(cols * rows - 1) + " edges, got " +
                     std::to_string(edges.size()));
  }
  g.edges_ = std::move(edges);
  g.finalize();
  return g;
}

maze_graph build_maze(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw data_error("build_maze: dimensions must be >= 1");
  std::vector<edge_pair> candidates;
  candidates.reserve(static_cast<std::size_t>(2 * n * m));
  for (int row = 1; row <= m; ++row) {
    for (int col = 0; col < n; ++col) {
      if (col + 1 < n) {
        candidates.push_back(make_edge({col, row}, {col + 1, row}));
      }
      if (row + 1 <= m) {
        candidates.push_back(make_edge({col, row}, {col, row + 1}));
      }
    }
  }
  pcg32 rng(seed);
  rng.shuffle(candidates);

  maze_graph g;
  g.cols_ = n;
  g.rows_ = m;
  union_find uf(n * m);
  const int wanted = n * m - 1;
  for (const auto& e : candidates) {
    if (static_cast<int>(g.edges_.size()) == wanted) break;
    if (uf.unite(g.index_of(e.first), g.index_of(e.second))) {
      g.edges_.push_back(e);
    }
  }
  g.finalize();
  return g;
}

std::vector<cell_label> tree_path(const maze_graph& maze, cell_label a,
                                  cell_label b) {
  if (!maze.contains(a)) throw data_error("tree_path: cell out of range: " + a.str());
  if (!maze.contains(b)) throw data_error("tree_path: cell out of range: " + b.str());
  if (!maze.same_component(a, b)) {
    throw data_error("tree_path: no path between " + a.str() + " and " +
                     b.str());
  }
  int u = maze.index_of(a);
  int v = maze.index_of(b);
  std::vector<int> from_a{u};
  std::vector<int> from_b{v};
  while (maze.depth_[u] > maze.depth_[v]) {
    u = maze.parent_[u];
    from_a.push_back(u);
  }
  while (maze.depth_[v] > maze.depth_[u]) {
    v = maze.parent_[v];
    from_b.push_back(v);
  }
  while (u != v) {
    u = maze.parent_[u];
    v = maze.parent_[v];
    from_a.push_back(u);
    from_b.push_back(v);
  }
  std::vector<cell_label> path;
  path.reserve(from_a.size() + from_b.size() - 1);
  for (int idx : from_a) path.push_back(maze.label_at(idx));
  for (auto it = from_b.rbegin() + 1; it != from_b.rend(); ++it) {
    path.push_back(maze.label_at(*it));
  }
  return path;
}

std::vector<edge_pair> wall_candidates(const maze_graph& maze) {
  std::vector<edge_pair> walls;
  for (int row = 1; row <= maze.rows(); ++row) {
    for (int col = 0; col < maze.cols(); ++col) {
      const cell_label c{col, row};
      if (col + 1 < maze.cols() && !maze.has_edge(c, {col + 1, row})) {
        walls.push_back(make_edge(c, {col + 1, row}));
      }
      if (row + 1 <= maze.rows() && !maze.has_edge(c, {col, row + 1})) {
        walls.push_back(make_edge(c, {col, row + 1}));
      }
    }
  }
  std::sort(walls.begin(), walls.end());
  return walls;
}

}  // namespace keymaze
