#include "keymaze/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"
#include "keymaze/verifier.hpp"

namespace keymaze {

namespace {

using nlohmann::json;

// Sub-stage seed streams within one instance.
enum : std::uint64_t { stream_maze = 1, stream_rewind, stream_noise, stream_shuffle };

// One decimal place when that round-trips (the sweep grids use 0.2 steps),
// otherwise enough digits to stay injective.
std::string format_ratio(double v) {
  char buf[32];
  const double snapped = std::round(v * 10.0) / 10.0;
  if (std::fabs(v - snapped) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.1f", snapped);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

json label_json(cell_label c) { return c.str(); }

cell_label label_from_json(const json& j) {
  const auto parsed = cell_label::parse(j.get<std::string>());
  if (!parsed) throw data_error("bad room label: " + j.dump());
  return *parsed;
}

}  // namespace

world task_instance::to_world() const {
  return make_world(maze, doors, keys, start, goal);
}

task_instance assemble_instance(const gen_params& params, std::uint64_t seed,
                                const noise_options& noise) {
  if (params.n < 1 || params.m < 1) {
    throw data_error("assemble_instance: grid dimensions must be >= 1");
  }
  if (params.noise_target < 0.0 || params.noise_target > 1.0 ||
      params.shuffle_ratio < 0.0 || params.shuffle_ratio > 1.0) {
    throw data_error("assemble_instance: ratios must lie in [0, 1]");
  }

  task_instance inst;
  inst.seed = seed;
  inst.params = params;
  inst.maze = build_maze(params.n, params.m, derive_seed(seed, stream_maze));
  rewind_result rewound =
      rewind_construct(inst.maze, params.b_target, derive_seed(seed, stream_rewind));
  inst.doors = rewound.doors;
  inst.keys = rewound.keys;
  inst.start = rewound.start;
  inst.goal = rewound.goal;
  inst.gt = derive_ground_truth(inst.maze, rewound);
  inst.b_effective = inst.gt.backtracks_effective;
  inst.logical_depth = inst.gt.logical_depth;

  noise_options opts = noise;
  const world w = inst.to_world();
  if (opts.misleading_open_doors && opts.check_world == nullptr) {
    opts.check_world = &w;
  }
  fact_list facts = compile_supporting_facts(inst.maze, inst.doors, inst.keys,
                                             inst.start, inst.goal);
  facts = inject_noise(std::move(facts), params.noise_target,
                       derive_seed(seed, stream_noise), opts);
  inst.facts = shuffle_facts(std::move(facts), params.shuffle_ratio,
                             derive_seed(seed, stream_shuffle));
  inst.id = instance_id(params, seed);

  const verification_report check = execute(inst.gt.actions, w);
  if (!check.violations.empty() || !check.goal_reached) {
    throw internal_error("generated ground truth failed verification for " +
                         inst.id);
  }
  return inst;
}

task_instance assemble_instance_exact_b(const gen_params& params,
                                        std::uint64_t seed, int max_retries,
                                        const noise_options& noise) {
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const std::uint64_t s =
        attempt == 0 ? seed : derive_seed(seed, 0x100 + attempt);
    task_instance inst = assemble_instance(params, s, noise);
    if (inst.b_effective == params.b_target) return inst;
  }
  throw data_error("could not reach " + std::to_string(params.b_target) +
                   " backtracks in " + std::to_string(max_retries) +
                   " retries");
}

std::string instance_id(const gen_params& params, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%dx%d-b%d-nz%s-sh%s-%llx", params.n,
                params.m, params.b_target,
                format_ratio(params.noise_target).c_str(),
                format_ratio(params.shuffle_ratio).c_str(),
                static_cast<unsigned long long>(seed));
  return buf;
}

std::optional<std::pair<gen_params, std::uint64_t>> parse_instance_id(
    std::string_view id) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= id.size()) {
    const auto dash = id.find('-', begin);
    if (dash == std::string_view::npos) {
      parts.emplace_back(id.substr(begin));
      break;
    }
    parts.emplace_back(id.substr(begin, dash - begin));
    begin = dash + 1;
  }
  if (parts.size() != 5) return std::nullopt;
  gen_params p;
  std::uint64_t seed = 0;
  if (std::sscanf(parts[0].c_str(), "%dx%d", &p.n, &p.m) != 2) return std::nullopt;
  if (std::sscanf(parts[1].c_str(), "b%d", &p.b_target) != 1) return std::nullopt;
  if (std::sscanf(parts[2].c_str(), "nz%lf", &p.noise_target) != 1) return std::nullopt;
  if (std::sscanf(parts[3].c_str(), "sh%lf", &p.shuffle_ratio) != 1) return std::nullopt;
  if (std::sscanf(parts[4].c_str(), "%llx",
                  reinterpret_cast<unsigned long long*>(&seed)) != 1) {
    return std::nullopt;
  }
  return std::make_pair(p, seed);
}

std::string instance_to_json_line(const task_instance& inst) {
  json j;
  j["schema"] = task_instance::schema_version;
  j["id"] = inst.id;
  j["seed"] = inst.seed;
  j["n"] = inst.params.n;
  j["m"] = inst.params.m;
  j["b_target"] = inst.params.b_target;
  j["b_effective"] = inst.b_effective;
  j["noise_target"] = inst.params.noise_target;
  j["noise_effective"] = inst.facts.noise_effective_value();
  j["shuffle_ratio"] = inst.params.shuffle_ratio;
  j["logical_depth"] = inst.logical_depth;

  json facts = json::array();
  for (const auto& f : inst.facts.items) {
    facts.push_back({{"role", f.role == fact_role::supporting ? "supporting"
                                                              : "distracting"},
                     {"kind", std::string(fact_kind_name(f.kind))},
                     {"params", f.params},
                     {"text", f.text}});
  }
  j["facts"] = std::move(facts);

  json gt = json::array();
  for (const auto& a : inst.gt.actions) {
    gt.push_back({std::string(verb_name(a.v)), a.arg});
  }
  j["ground_truth"] = std::move(gt);

  json edges = json::array();
  for (const auto& [a, b] : inst.maze.edges()) {
    edges.push_back({label_json(a), label_json(b)});
  }
  j["edges"] = std::move(edges);

  json doors = json::array();
  for (const auto& d : inst.doors) {
    doors.push_back({{"edge", {label_json(d.a), label_json(d.b)}},
                     {"key", d.key_id}});
  }
  j["doors"] = std::move(doors);

  json keys = json::array();
  for (const auto& k : inst.keys) {
    json entry = {{"key", k.key_id}, {"room", label_json(k.location)}};
    if (k.opens) {
      entry["opens"] = {label_json(k.opens->first), label_json(k.opens->second)};
    }
    keys.push_back(std::move(entry));
  }
  j["keys"] = std::move(keys);

  j["start"] = label_json(inst.start);
  j["goal"] = label_json(inst.goal);
  return j.dump();
}

task_instance instance_from_json_line(const std::string& line, int line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw data_error(where + e.what());
  }

  const auto field = [&](const char* name) -> const json& {
    const auto it = j.find(name);
    if (it == j.end()) {
      throw data_error(where + "missing field \"" + name + "\"");
    }
    return *it;
  };

  task_instance inst;
  try {
    if (field("schema").get<int>() != task_instance::schema_version) {
      throw data_error(where + "unsupported schema version");
    }
    inst.id = field("id").get<std::string>();
    inst.seed = field("seed").get<std::uint64_t>();
    inst.params.n = field("n").get<int>();
    inst.params.m = field("m").get<int>();
    inst.params.b_target = field("b_target").get<int>();
    inst.b_effective = field("b_effective").get<int>();
    inst.params.noise_target = field("noise_target").get<double>();
    field("noise_effective").get<double>();  // presence only; derived from roles
    inst.params.shuffle_ratio = field("shuffle_ratio").get<double>();
    inst.logical_depth = field("logical_depth").get<int>();

    for (const auto& f : field("facts")) {
      const auto kind = parse_fact_kind(f.at("kind").get<std::string>());
      if (!kind) throw data_error(where + "unknown fact kind");
      fact parsed = make_fact(f.at("role").get<std::string>() == "supporting"
                                  ? fact_role::supporting
                                  : fact_role::distracting,
                              *kind, f.at("params").get<std::vector<std::string>>());
      if (parsed.text != f.at("text").get<std::string>()) {
        throw data_error(where + "fact text does not match its template");
      }
      inst.facts.items.push_back(std::move(parsed));
    }
    inst.facts.shuffle_ratio = inst.params.shuffle_ratio;

    for (const auto& a : field("ground_truth")) {
      const auto v = parse_verb(a.at(0).get<std::string>());
      if (!v) throw data_error(where + "unknown verb in ground truth");
      inst.gt.actions.push_back(make_action(*v, a.at(1).get<std::string>()));
    }

    std::vector<edge_pair> edges;
    for (const auto& e : field("edges")) {
      edges.push_back(make_edge(label_from_json(e.at(0)), label_from_json(e.at(1))));
    }
    inst.maze = maze_graph::from_edges(inst.params.n, inst.params.m,
                                       std::move(edges));

    for (const auto& d : field("doors")) {
      const auto e = make_edge(label_from_json(d.at("edge").at(0)),
                               label_from_json(d.at("edge").at(1)));
      inst.doors.push_back(door{e.first, e.second, d.at("key").get<int>()});
    }
    for (const auto& k : field("keys")) {
      key_info info;
      info.key_id = k.at("key").get<int>();
      info.location = label_from_json(k.at("room"));
      if (k.contains("opens")) {
        info.opens = make_edge(label_from_json(k.at("opens").at(0)),
                               label_from_json(k.at("opens").at(1)));
      }
      inst.keys.push_back(std::move(info));
    }
    inst.start = label_from_json(field("start"));
    inst.goal = label_from_json(field("goal"));
    inst.gt.start = inst.start;
    inst.gt.goal = inst.goal;
    inst.gt.logical_depth = static_cast<int>(inst.gt.actions.size());
    for (const auto& a : inst.gt.actions) {
      if (a.v == verb::unlock_and_open_door_to) ++inst.gt.backtracks_effective;
    }
  } catch (const json::exception& e) {
    throw data_error(where + e.what());
  }

  if (inst.logical_depth != static_cast<int>(inst.gt.actions.size())) {
    throw data_error(where + "logical_depth does not match ground truth");
  }
  if (inst.b_effective != inst.gt.backtracks_effective) {
    throw data_error(where + "b_effective does not match unlock count");
  }
  return inst;
}

void write_jsonl(const std::vector<task_instance>& instances,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open for writing: " + path);
  for (const auto& inst : instances) {
    out << instance_to_json_line(inst) << '\n';
  }
  if (!out) throw data_error("write failed: " + path);
}

std::vector<task_instance> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open for reading: " + path);
  std::vector<task_instance> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(instance_from_json_line(line, line_no));
  }
  return out;
}

}  // namespace keymaze
