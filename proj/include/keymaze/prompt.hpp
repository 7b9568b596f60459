#pragma once

#include <array>
#include <string>

#include "keymaze/dataset.hpp"

namespace keymaze {

// The four prompt components in order: (i) task instructions and action
// schema, (ii) few-shot examples, (iii) optional reasoning guidance,
// (iv) the problem's facts terminated by the "YOUR SOLUTION:" line.
struct prompt_bundle {
  std::string instructions;
  std::array<std::string, 3> few_shot;
  std::string guidance;
  std::string problem_facts;
  std::string assembled;
};

struct prompt_options {
  bool include_guidance = true;
  int few_shot_count = 3;     // 0..3 canon examples, in order
  std::string resource_dir;   // empty = default_resource_dir()
};

// Compile-time resource location, overridable with $KEYMAZE_RESOURCE_DIR.
std::string default_resource_dir();

// Reads one byte-frozen canon file (e.g. "few_shot_1.txt") from dir.
std::string load_resource(const std::string& dir, const std::string& name);

// "Maze Structure: " + facts joined by single spaces, then "YOUR SOLUTION:"
// on its own line.
std::string render_problem_facts(const fact_list& facts);

prompt_bundle build_prompt(const task_instance& inst,
                           const prompt_options& opts = {});

}  // namespace keymaze
