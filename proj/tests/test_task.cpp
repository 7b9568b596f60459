#include <map>
#include <set>

#include "doctest.h"
#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"
#include "keymaze/task.hpp"
#include "keymaze/verifier.hpp"
#include "worked_examples.hpp"

using namespace keymaze;

namespace {

// Door-free skeleton through the listed waypoints, for worlds assembled by
// hand from the worked examples.
path_skeleton skeleton_for(const worked::example& ex,
                           const std::vector<cell_label>& waypoints) {
  path_skeleton sk;
  sk.items.push_back({skeleton_tag::start, {ex.start}, 0});
  cell_label pos = ex.start;
  for (const auto& wp : waypoints) {
    sk.items.push_back({skeleton_tag::move, tree_path(ex.maze, pos, wp), 0});
    pos = wp;
  }
  sk.items.push_back({skeleton_tag::goal, {ex.goal}, 0});
  return sk;
}

}  // namespace

TEST_CASE("rewind with no backtracks yields a bare skeleton") {
  const maze_graph maze = build_maze(5, 5, 77);
  const rewind_result r = rewind_construct(maze, 0, 4001);
  CHECK(r.doors.empty());
  CHECK(r.keys.empty());
  REQUIRE(r.skeleton.items.size() == 3);
  CHECK(r.skeleton.items[0].tag == skeleton_tag::start);
  CHECK(r.skeleton.items[1].tag == skeleton_tag::move);
  CHECK(r.skeleton.items[2].tag == skeleton_tag::goal);
}

TEST_CASE("rewind rejects targets beyond the configured maximum") {
  const maze_graph maze = build_maze(5, 5, 1);
  CHECK_THROWS_AS(rewind_construct(maze, 8, 1), data_error);
  CHECK_THROWS_AS(rewind_construct(maze, -1, 1), data_error);
  CHECK_NOTHROW(rewind_construct(maze, 8, 1, /*max_b_target=*/8));
}

TEST_CASE("rewind stops early when the frontier is sealed") {
  // 1x2 grid: after one door the frontier cell has no reachable partner.
  const maze_graph maze = build_maze(1, 2, 5);
  const rewind_result r = rewind_construct(maze, 5, 9);
  CHECK(r.doors.size() == 1);
  CHECK(r.keys.size() == 1);
}

TEST_CASE("rewound instances verify cleanly and stay within the target") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const maze_graph maze = build_maze(10, 10, derive_seed(42, seed));
    const int b_target = static_cast<int>(seed % 4);
    const rewind_result r = rewind_construct(maze, b_target, seed);
    REQUIRE(r.doors.size() == r.keys.size());
    CHECK(static_cast<int>(r.doors.size()) <= b_target);

    const ground_truth gt = derive_ground_truth(maze, r);
    CHECK(gt.logical_depth == static_cast<int>(gt.actions.size()));
    CHECK(gt.backtracks_effective == static_cast<int>(r.doors.size()));
    CHECK(gt.actions.front().v == verb::start);
    CHECK(gt.actions.back().v == verb::rescue);

    const world w = make_world(maze, r.doors, r.keys, r.start, r.goal);
    const verification_report report = execute(gt.actions, w);
    CHECK(report.violations.empty());
    CHECK(report.goal_reached);
  }
}

TEST_CASE("each key is picked up before its door and chains simply") {
  for (std::uint64_t seed = 1000; seed < 2000; ++seed) {
    const maze_graph maze = build_maze(20, 20, derive_seed(7, seed));
    const rewind_result r = rewind_construct(maze, 3, seed);
    CHECK(r.doors.size() <= 3);
    const ground_truth gt = derive_ground_truth(maze, r);

    std::map<std::string, int> pickup_at;
    std::vector<std::pair<int, std::string>> unlocks;
    for (int i = 0; i < static_cast<int>(gt.actions.size()); ++i) {
      const auto& a = gt.actions[i];
      if (a.v == verb::pick_up_key) {
        CHECK_FALSE(pickup_at.count(a.arg));
        pickup_at[a.arg] = i;
      } else if (a.v == verb::use_key) {
        unlocks.push_back({i, a.arg});
      }
    }
    for (const auto& [i, key] : unlocks) {
      REQUIRE(pickup_at.count(key));
      const int p = pickup_at[key];
      CHECK(p < i);
      // Simple dependency chain: no other unlock sits between a key's
      // pickup and its use.
      for (const auto& [j, other] : unlocks) {
        if (j > p && j < i) CHECK(other == key);
      }
    }
  }
}

TEST_CASE("emergent depth varies across seeds at fixed parameters") {
  std::set<int> depths;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const maze_graph maze = build_maze(10, 10, derive_seed(99, seed));
    const ground_truth gt =
        derive_ground_truth(maze, rewind_construct(maze, 2, seed));
    depths.insert(gt.logical_depth);
  }
  CHECK(depths.size() > 10);
}

TEST_CASE("derivation reproduces the single-key worked solution") {
  const worked::example ex = worked::example2();
  path_skeleton sk;
  sk.items.push_back({skeleton_tag::start, {worked::cell("A1")}, 0});
  sk.items.push_back(
      {skeleton_tag::move, tree_path(ex.maze, worked::cell("A1"), worked::cell("A2")), 0});
  sk.items.push_back({skeleton_tag::pickup, {worked::cell("A2")}, 1});
  sk.items.push_back(
      {skeleton_tag::unlock, {worked::cell("C1"), worked::cell("C2")}, 1});
  sk.items.push_back(
      {skeleton_tag::move, tree_path(ex.maze, worked::cell("A2"), worked::cell("C2")), 0});
  sk.items.push_back({skeleton_tag::goal, {worked::cell("C2")}, 0});

  const ground_truth gt = derive_ground_truth(ex.maze, ex.doors, ex.keys, sk);
  CHECK(gt.actions == ex.solution);
  CHECK(gt.logical_depth == 10);
  CHECK(gt.backtracks_effective == 1);
}

TEST_CASE("derivation reproduces the multi-key worked solution") {
  const worked::example ex = worked::example3();
  const auto move = [&](const char* a, const char* b) {
    return skeleton_item{skeleton_tag::move,
                         tree_path(ex.maze, worked::cell(a), worked::cell(b)), 0};
  };
  path_skeleton sk;
  sk.items.push_back({skeleton_tag::start, {worked::cell("C5")}, 0});
  sk.items.push_back(move("C5", "C5"));
  sk.items.push_back({skeleton_tag::pickup, {worked::cell("C5")}, 16});
  sk.items.push_back(
      {skeleton_tag::unlock, {worked::cell("B5"), worked::cell("C5")}, 16});
  sk.items.push_back(move("C5", "B5"));
  sk.items.push_back({skeleton_tag::pickup, {worked::cell("B5")}, 3});
  sk.items.push_back(
      {skeleton_tag::unlock, {worked::cell("B4"), worked::cell("B5")}, 3});
  sk.items.push_back(move("B5", "C4"));
  sk.items.push_back({skeleton_tag::pickup, {worked::cell("C4")}, 10});
  sk.items.push_back(
      {skeleton_tag::unlock, {worked::cell("C3"), worked::cell("D3")}, 10});
  sk.items.push_back(move("C4", "D5"));
  sk.items.push_back({skeleton_tag::goal, {worked::cell("D5")}, 0});

  const ground_truth gt = derive_ground_truth(ex.maze, ex.doors, ex.keys, sk);
  CHECK(gt.actions == ex.solution);
  CHECK(gt.logical_depth == 18);
  CHECK(gt.backtracks_effective == 3);
}

TEST_CASE("derivation reproduces the navigation-only worked solution") {
  const worked::example ex = worked::example1();
  const path_skeleton sk = skeleton_for(ex, {ex.goal});
  const ground_truth gt = derive_ground_truth(ex.maze, ex.doors, ex.keys, sk);
  CHECK(gt.actions == ex.solution);
  CHECK(gt.logical_depth == 8);
}

TEST_CASE("derivation flags skeletons that reference unknown pieces") {
  const worked::example ex = worked::example2();
  path_skeleton sk;
  sk.items.push_back({skeleton_tag::start, {worked::cell("A1")}, 0});
  sk.items.push_back({skeleton_tag::pickup, {worked::cell("A2")}, 99});
  sk.items.push_back({skeleton_tag::goal, {worked::cell("C2")}, 0});
  CHECK_THROWS_AS(derive_ground_truth(ex.maze, ex.doors, ex.keys, sk),
                  internal_error);
}

TEST_CASE("search oracle matches the worked examples") {
  CHECK(bfs_optimal(worked::to_world(worked::example1())) == 8);
  CHECK(bfs_optimal(worked::to_world(worked::example2())) == 10);
  CHECK(bfs_optimal(worked::to_world(worked::example3())) == 18);
}

TEST_CASE("search oracle trivially costs two when Alice is at the start") {
  const maze_graph maze = build_maze(4, 4, 5);
  const cell_label c = maze.label_at(6);
  CHECK(bfs_optimal(maze, {}, {}, c, c) == 2);
}

TEST_CASE("generated depth equals the search optimum on small instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const maze_graph maze = build_maze(6, 6, derive_seed(555, seed));
    const rewind_result r = rewind_construct(maze, static_cast<int>(seed % 3), seed);
    const ground_truth gt = derive_ground_truth(maze, r);
    const int optimal = bfs_optimal(maze, r.doors, r.keys, r.start, r.goal);
    CHECK(optimal == gt.logical_depth);
  }
}

TEST_CASE("search oracle reports unreachable goals") {
  // Door with an unplaced key walls off the goal.
  const maze_graph maze = build_maze(1, 2, 3);
  world w = make_world(maze, {{{0, 1}, {0, 2}, 1}}, {}, {0, 1}, {0, 2});
  CHECK_THROWS_AS(bfs_optimal(w), data_error);
}
