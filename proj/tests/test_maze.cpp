#include <numeric>
#include <set>

#include "doctest.h"
#include "keymaze/errors.hpp"
#include "keymaze/maze.hpp"
#include "keymaze/rng.hpp"

using namespace keymaze;

namespace {

// Independent connectivity/acyclicity checker, deliberately separate from
// the union-find inside the library.
struct check_uf {
  std::vector<int> parent;
  explicit check_uf(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

void check_spanning_tree(const maze_graph& g) {
  REQUIRE(static_cast<int>(g.edges().size()) == g.cell_count() - 1);
  check_uf uf(g.cell_count());
  for (const auto& [a, b] : g.edges()) {
    const int dc = a.col - b.col;
    const int dr = a.row - b.row;
    CHECK(((dc == 0 && std::abs(dr) == 1) || (dr == 0 && std::abs(dc) == 1)));
    REQUIRE_MESSAGE(uf.unite(g.index_of(a), g.index_of(b)),
                    "cycle at " << a.str() << "-" << b.str());
  }
  int roots = 0;
  for (int i = 0; i < g.cell_count(); ++i) {
    if (uf.find(i) == i) ++roots;
  }
  CHECK(roots == 1);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

TEST_CASE("build_maze produces spanning trees of the expected size") {
  CHECK(build_maze(5, 5, 1).edges().size() == 24);
  CHECK(build_maze(1, 1, 99).edges().empty());
  const maze_graph big = build_maze(40, 40, 7);
  CHECK(big.edges().size() == 1599);
  check_spanning_tree(big);
}

TEST_CASE("build_maze rejects degenerate dimensions") {
  CHECK_THROWS_AS(build_maze(0, 5, 1), data_error);
  CHECK_THROWS_AS(build_maze(5, -1, 1), data_error);
}

TEST_CASE("spanning-tree invariants hold across sizes and seeds") {
  for (const int n : {1, 2, 3, 7, 12}) {
    for (const int m : {1, 2, 5, 9}) {
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        check_spanning_tree(build_maze(n, m, seed));
      }
    }
  }
  check_spanning_tree(build_maze(50, 50, 4242));
}

TEST_CASE("spanning-tree invariants hold over the whole dimension domain") {
  for (int n = 1; n <= 50; ++n) {
    for (int m = 1; m <= 50; ++m) {
      check_spanning_tree(build_maze(n, m, derive_seed(808, n * 64 + m)));
    }
  }
}

TEST_CASE("identical parameters give identical edge sets") {
  const maze_graph a = build_maze(11, 9, 1234);
  const maze_graph b = build_maze(11, 9, 1234);
  CHECK(a.edges() == b.edges());
  const maze_graph c = build_maze(11, 9, 1235);
  CHECK(a.edges() != c.edges());
}

TEST_CASE("edge set for a pinned seed is frozen") {
  // Guards the cross-platform determinism of the seeded shuffle; this hash
  // was recorded from the first implementation and must never drift.
  const maze_graph g = build_maze(8, 5, 123);
  std::string listing;
  for (const auto& [a, b] : g.edges()) {
    listing += a.str() + "-" + b.str() + ";";
  }
  CHECK(fnv1a(listing) == 0xc76becc2e5761a7aULL);
}

TEST_CASE("tree_path identity and endpoints") {
  const maze_graph g = build_maze(6, 6, 5);
  const cell_label x{2, 3};
  const auto p = tree_path(g, x, x);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == x);
}

TEST_CASE("tree_path between adjacent cells sharing an edge") {
  const maze_graph g = build_maze(4, 4, 17);
  const auto& e = g.edges().front();
  const auto p = tree_path(g, e.first, e.second);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == e.first);
  CHECK(p[1] == e.second);
}

TEST_CASE("tree_path is symmetric and walks real edges") {
  const maze_graph g = build_maze(9, 7, 31);
  pcg32 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const cell_label a = g.label_at(static_cast<int>(rng.below(g.cell_count())));
    const cell_label b = g.label_at(static_cast<int>(rng.below(g.cell_count())));
    auto forward = tree_path(g, a, b);
    const auto backward = tree_path(g, b, a);
    REQUIRE(forward.front() == a);
    REQUIRE(forward.back() == b);
    std::reverse(forward.begin(), forward.end());
    CHECK(forward == backward);
    // a simple path over maze edges
    std::set<cell_label> seen;
    for (std::size_t i = 0; i < backward.size(); ++i) {
      CHECK(seen.insert(backward[i]).second);
      if (i > 0) CHECK(g.has_edge(backward[i - 1], backward[i]));
    }
  }
}

TEST_CASE("tree_path rejects out-of-range cells") {
  const maze_graph g = build_maze(3, 3, 0);
  CHECK_THROWS_AS(tree_path(g, {0, 1}, {3, 1}), data_error);
  CHECK_THROWS_AS(tree_path(g, {-1, 1}, {0, 1}), data_error);
}

TEST_CASE("the worked simple-navigation world answers its path query") {
  // Partial world: a forest over a 5x5 grid, reconstructed from the eleven
  // connection sentences of the first worked example.
  const std::vector<std::pair<const char*, const char*>> listed = {
      {"C4", "C3"}, {"C3", "D3"}, {"D5", "E5"}, {"A2", "A1"},
      {"A3", "B3"}, {"A1", "B1"}, {"A4", "A3"}, {"E5", "E4"},
      {"D4", "D3"}, {"A5", "B5"}, {"D4", "E4"},
  };
  std::vector<edge_pair> edges;
  for (const auto& [a, b] : listed) {
    edges.push_back(make_edge(*cell_label::parse(a), *cell_label::parse(b)));
  }
  const maze_graph g =
      maze_graph::from_edges(5, 5, edges, /*require_spanning=*/false);

  const auto path =
      tree_path(g, *cell_label::parse("D5"), *cell_label::parse("C4"));
  std::vector<std::string> got;
  for (const auto& c : path) got.push_back(c.str());
  CHECK(got == std::vector<std::string>{"D5", "E5", "E4", "D4", "D3", "C3", "C4"});

  // cells in different components have no path
  CHECK_THROWS_AS(tree_path(g, *cell_label::parse("A1"), *cell_label::parse("D5")),
                  data_error);
}

TEST_CASE("from_edges validates structure") {
  const auto e = [](const char* a, const char* b) {
    return make_edge(*cell_label::parse(a), *cell_label::parse(b));
  };
  CHECK_THROWS_AS(maze_graph::from_edges(2, 2, {e("A1", "B2")}, false),
                  data_error);  // diagonal
  CHECK_THROWS_AS(maze_graph::from_edges(
                      2, 2, {e("A1", "A2"), e("A2", "B2"), e("B1", "B2"),
                             e("A1", "B1")},
                      false),
                  data_error);  // cycle
  CHECK_THROWS_AS(maze_graph::from_edges(2, 2, {e("A1", "A2")}, true),
                  data_error);  // not spanning
  CHECK_THROWS_AS(maze_graph::from_edges(2, 2, {e("A1", "A2"), e("A1", "A2")},
                                         false),
                  data_error);  // duplicate
}

TEST_CASE("wall candidates complement the tree edges") {
  const maze_graph g = build_maze(7, 6, 3);
  const auto walls = wall_candidates(g);
  // grid has n(m-1) + m(n-1) candidate edges in total
  CHECK(walls.size() + g.edges().size() == 7 * 5 + 6 * 6);
  for (const auto& [a, b] : walls) CHECK_FALSE(g.has_edge(a, b));
}
