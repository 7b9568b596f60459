#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "keymaze/dataset.hpp"
#include "keymaze/errors.hpp"
#include "keymaze/fit.hpp"
#include "keymaze/metrics.hpp"
#include "keymaze/prompt.hpp"
#include "keymaze/report.hpp"
#include "keymaze/rng.hpp"
#include "keymaze/runner.hpp"
#include "keymaze/task.hpp"
#include "keymaze/verifier.hpp"

namespace keymaze {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_endpoint = 3;

constexpr int max_backtracks = 7;

struct generate_args {
  int n = 40;
  int m = 40;
  int backtracks = 0;
  double noise = 0.0;
  double shuffle = 0.0;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool exact_backtracks = false;
  bool misleading = false;
};

int do_generate(const generate_args& a, std::ostream& out) {
  const gen_params base{a.n, a.m, a.backtracks, a.noise, a.shuffle};
  noise_options noise;
  noise.misleading_open_doors = a.misleading;
  std::vector<task_instance> instances;
  instances.reserve(static_cast<std::size_t>(a.count));
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = derive_seed(a.seed, static_cast<std::uint64_t>(i));
    instances.push_back(a.exact_backtracks
                            ? assemble_instance_exact_b(base, seed, 64, noise)
                            : assemble_instance(base, seed, noise));
  }
  write_jsonl(instances, a.out);
  out << "wrote " << instances.size() << " instance(s) to " << a.out << "\n";
  return exit_ok;
}

struct prompt_args {
  std::string tasks;
  std::string out;
  bool no_guidance = false;
  int few_shot = 3;
  std::string resources;
};

int do_prompt(const prompt_args& a, std::ostream& out) {
  const auto instances = read_jsonl(a.tasks);
  prompt_options opts;
  opts.include_guidance = !a.no_guidance;
  opts.few_shot_count = a.few_shot;
  opts.resource_dir = a.resources;
  std::ofstream sink(a.out, std::ios::binary);
  if (!sink) throw data_error("cannot open for writing: " + a.out);
  for (const auto& inst : instances) {
    nlohmann::json j;
    j["id"] = inst.id;
    j["prompt"] = build_prompt(inst, opts).assembled;
    sink << j.dump() << '\n';
  }
  out << "wrote " << instances.size() << " prompt(s) to " << a.out << "\n";
  return exit_ok;
}

struct run_args {
  std::string tasks;
  std::string endpoint;
  std::string out;
  int k = 5;
  bool no_guidance = false;
  int few_shot = 3;
  std::string resources;
};

int do_run(const run_args& a, std::ostream& out) {
  const auto instances = read_jsonl(a.tasks);
  const endpoint_config config = load_endpoint_config(a.endpoint);
  prompt_options opts;
  opts.include_guidance = !a.no_guidance;
  opts.few_shot_count = a.few_shot;
  opts.resource_dir = a.resources;
  const batch_summary summary = run_batch(config, instances, a.k, a.out, opts);
  out << "requested " << summary.requested << ", skipped " << summary.skipped
      << " already present, issued " << summary.issued << ", failed "
      << summary.failed << "\n";
  return exit_ok;
}

struct evaluate_args {
  std::string tasks;
  std::string responses;
  std::string out;
};

nlohmann::json verdict_json(const run_result& r) {
  nlohmann::json j;
  j["instance_id"] = r.instance_id;
  j["run_index"] = r.run_index;
  j["parsed_ok"] = r.parsed_ok;
  j["exact_match"] = r.exact_match;
  j["goal_reached"] = r.goal_reached;
  j["progress"] = r.progress;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  if (r.first_violation_step) {
    j["first_violation_step"] = *r.first_violation_step;
  } else {
    j["first_violation_step"] = nullptr;
  }
  j["output_tokens"] = r.output_tokens;
  return j;
}

run_result verdict_from_json(const nlohmann::json& j) {
  run_result r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.run_index = j.at("run_index").get<int>();
  r.parsed_ok = j.at("parsed_ok").get<bool>();
  r.exact_match = j.at("exact_match").get<bool>();
  r.goal_reached = j.value("goal_reached", false);
  r.progress = j.at("progress").get<double>();
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  if (j.contains("first_violation_step") && !j["first_violation_step"].is_null()) {
    r.first_violation_step = j["first_violation_step"].get<int>();
  }
  r.output_tokens = j.value("output_tokens", -1LL);
  return r;
}

int do_evaluate(const evaluate_args& a, std::ostream& out, std::ostream& err) {
  const auto instances = read_jsonl(a.tasks);
  std::map<std::string, const task_instance*> by_id;
  for (const auto& inst : instances) by_id[inst.id] = &inst;

  const auto responses = read_responses(a.responses);
  std::ofstream sink(a.out, std::ios::binary);
  if (!sink) throw data_error("cannot open for writing: " + a.out);

  int written = 0;
  int orphans = 0;
  for (const auto& resp : responses) {
    const auto it = by_id.find(resp.instance_id);
    if (it == by_id.end()) {
      err << "orphan response for unknown instance " << resp.instance_id
          << " (run " << resp.run_index << "), skipped\n";
      ++orphans;
      continue;
    }
    const run_result verdict = evaluate_response(
        *it->second, resp.run_index, resp.failed() ? "" : resp.raw_text,
        resp.output_tokens);
    sink << verdict_json(verdict).dump() << '\n';
    ++written;
  }
  out << "wrote " << written << " verdict(s) to " << a.out;
  if (orphans > 0) out << " (" << orphans << " orphan(s) skipped)";
  out << "\n";
  return exit_ok;
}

struct report_args {
  std::string verdicts;
  std::string tasks;
  double bin_width = 1.0;
  std::string out_prefix;
};

int do_report(const report_args& a, std::ostream& out, std::ostream& err) {
  const auto instances = read_jsonl(a.tasks);
  std::map<std::string, int> depth_by_id;
  for (const auto& inst : instances) depth_by_id[inst.id] = inst.logical_depth;

  std::vector<run_result> results;
  {
    std::ifstream in(a.verdicts, std::ios::binary);
    if (!in) throw data_error("cannot open for reading: " + a.verdicts);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        results.push_back(verdict_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw data_error("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  if (results.empty()) throw data_error("no verdicts in " + a.verdicts);

  const auto bins = aggregate_bins(results, depth_by_id, a.bin_width);
  write_bins_csv(bins, a.out_prefix + "_bins.csv");

  std::optional<fit_result> fit;
  try {
    fit = fit_l0(bins);
  } catch (const fit_error& e) {
    write_decay_svg(bins, nullptr, a.out_prefix + "_decay.svg");
    err << "fit error: " << e.what() << "\n";
    return exit_data;
  }
  write_decay_svg(bins, &*fit, a.out_prefix + "_decay.svg");
  const std::string summary = fit_summary(*fit);
  std::ofstream fit_file(a.out_prefix + "_fit.txt", std::ios::binary);
  fit_file << summary;
  out << summary;
  return exit_ok;
}

struct oracle_args {
  std::string tasks;
  int max_cells = 64;
  int max_doors = 3;
};

int do_oracle_check(const oracle_args& a, std::ostream& out, std::ostream& err) {
  const auto instances = read_jsonl(a.tasks);
  int checked = 0;
  int mismatched = 0;
  int skipped = 0;
  for (const auto& inst : instances) {
    if (inst.maze.cell_count() > a.max_cells ||
        static_cast<int>(inst.doors.size()) > a.max_doors) {
      ++skipped;
      continue;
    }
    ++checked;
    const int optimal = bfs_optimal(inst.to_world());
    if (optimal != inst.logical_depth) {
      ++mismatched;
      err << inst.id << ": annotated depth " << inst.logical_depth
          << " but optimal is " << optimal << "\n";
    }
  }
  out << checked << " instance(s) checked against the search oracle, "
      << mismatched << " mismatch(es)";
  if (skipped > 0) out << ", " << skipped << " skipped as too large";
  out << "\n";
  return mismatched == 0 ? exit_ok : exit_data;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"generate, verify, and evaluate key-and-door maze reasoning tasks"};
  app.require_subcommand(1);
  // Flags may also come from a TOML file; command-line values win.
  app.set_config("--config")->configurable(false);

  generate_args gen;
  auto* generate = app.add_subcommand("generate", "write task instances as JSONL");
  generate->add_option("--n", gen.n, "grid columns")->check(CLI::Range(1, 200));
  generate->add_option("--m", gen.m, "grid rows")->check(CLI::Range(1, 200));
  generate->add_option("--backtracks,-b", gen.backtracks, "target locked-door detours")
      ->check(CLI::Range(0, max_backtracks));
  generate->add_option("--noise", gen.noise, "distracting/supporting fact ratio")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--shuffle", gen.shuffle, "fraction of facts reordered")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--count", gen.count, "instances to generate")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "master seed; per-instance seeds derive from it");
  generate->add_option("--out", gen.out, "output JSONL path")->required();
  generate->add_flag("--exact-backtracks", gen.exact_backtracks,
                     "resample until the effective backtrack count equals the target");
  generate->add_flag("--misleading-distractors", gen.misleading,
                     "allow open-door distractors (certified optimum-preserving)");

  prompt_args pr;
  auto* prompt = app.add_subcommand("prompt", "render evaluation prompts");
  prompt->add_option("--tasks", pr.tasks, "task JSONL")->required();
  prompt->add_option("--out", pr.out, "output JSONL path")->required();
  prompt->add_flag("--no-guidance", pr.no_guidance, "omit the reasoning guidance block");
  prompt->add_option("--few-shot", pr.few_shot, "number of worked examples (0-3)")
      ->check(CLI::Range(0, 3));
  prompt->add_option("--resources", pr.resources, "prompt resource directory");

  run_args rn;
  auto* run = app.add_subcommand("run", "collect sampled completions from an endpoint");
  run->add_option("--tasks", rn.tasks, "task JSONL")->required();
  run->add_option("--endpoint", rn.endpoint, "endpoint config JSON")->required();
  run->add_option("--out", rn.out, "response JSONL path (appended, resumable)")
      ->required();
  run->add_option("--k", rn.k, "runs per instance")->check(CLI::NonNegativeNumber);
  run->add_flag("--no-guidance", rn.no_guidance, "omit the reasoning guidance block");
  run->add_option("--few-shot", rn.few_shot, "number of worked examples (0-3)")
      ->check(CLI::Range(0, 3));
  run->add_option("--resources", rn.resources, "prompt resource directory");

  evaluate_args ev;
  auto* evaluate = app.add_subcommand("evaluate", "verify responses and score them");
  evaluate->add_option("--tasks", ev.tasks, "task JSONL")->required();
  evaluate->add_option("--responses", ev.responses, "response JSONL")->required();
  evaluate->add_option("--out", ev.out, "verdict JSONL path")->required();

  report_args rp;
  auto* report = app.add_subcommand("report", "bin verdicts, plot, and fit the decay");
  report->add_option("--verdicts", rp.verdicts, "verdict JSONL")->required();
  report->add_option("--tasks", rp.tasks, "task JSONL")->required();
  report->add_option("--bin-width", rp.bin_width, "depth bin width")
      ->check(CLI::PositiveNumber);
  report->add_option("--out-prefix", rp.out_prefix, "prefix for CSV/SVG/fit outputs")
      ->required();

  oracle_args oc;
  auto* oracle = app.add_subcommand(
      "oracle-check", "certify annotated depths with the exhaustive search oracle");
  oracle->add_option("--tasks", oc.tasks, "task JSONL")->required();
  oracle->add_option("--max-cells", oc.max_cells, "skip instances above this cell count");
  oracle->add_option("--max-doors", oc.max_doors, "skip instances above this door count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  // Every run logs the fully resolved configuration it executed with.
  err << "# resolved config\n" << app.config_to_str(true, false);

  try {
    if (generate->parsed()) return do_generate(gen, out);
    if (prompt->parsed()) return do_prompt(pr, out);
    if (run->parsed()) return do_run(rn, out);
    if (evaluate->parsed()) return do_evaluate(ev, out, err);
    if (report->parsed()) return do_report(rp, out, err);
    if (oracle->parsed()) return do_oracle_check(oc, out, err);
  } catch (const endpoint_error& e) {
    err << "endpoint error: " << e.what() << "\n";
    return exit_endpoint;
  } catch (const fit_error& e) {
    err << "fit error: " << e.what() << "\n";
    return exit_data;
  } catch (const data_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_data;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_data;
  }
  return exit_usage;
}

}  // namespace keymaze
