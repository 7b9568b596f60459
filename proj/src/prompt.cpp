#include "keymaze/prompt.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "keymaze/errors.hpp"

#ifndef KEYMAZE_RESOURCE_DIR
#define KEYMAZE_RESOURCE_DIR "resources/prompt"
#endif

namespace keymaze {

namespace {

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

std::string default_resource_dir() {
  if (const char* env = std::getenv("KEYMAZE_RESOURCE_DIR")) return env;
  return KEYMAZE_RESOURCE_DIR;
}

std::string load_resource(const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("missing prompt resource: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render_problem_facts(const fact_list& facts) {
  std::string out = "Maze Structure:";
  for (const auto& f : facts.items) {
    out += ' ';
    out += f.text;
  }
  out += "\nYOUR SOLUTION:";
  return out;
}

prompt_bundle build_prompt(const task_instance& inst,
                           const prompt_options& opts) {
  if (opts.few_shot_count < 0 || opts.few_shot_count > 3) {
    throw data_error("few_shot_count must lie in [0, 3]");
  }
  const std::string dir =
      opts.resource_dir.empty() ? default_resource_dir() : opts.resource_dir;

  prompt_bundle bundle;
  bundle.instructions =
      strip_trailing_newlines(load_resource(dir, "prompt_instructions.txt"));
  for (int i = 0; i < 3; ++i) {
    bundle.few_shot[i] = strip_trailing_newlines(
        load_resource(dir, "few_shot_" + std::to_string(i + 1) + ".txt"));
  }
  bundle.guidance =
      strip_trailing_newlines(load_resource(dir, "prompt_guidance.txt"));
  bundle.problem_facts = render_problem_facts(inst.facts);

  std::string assembled = bundle.instructions;
  for (int i = 0; i < opts.few_shot_count; ++i) {
    assembled += "\n\n";
    assembled += bundle.few_shot[i];
  }
  if (opts.include_guidance) {
    assembled += "\n\n";
    assembled += bundle.guidance;
  }
  assembled += "\n\n";
  assembled += bundle.problem_facts;
  bundle.assembled = std::move(assembled);
  return bundle;
}

}  // namespace keymaze
