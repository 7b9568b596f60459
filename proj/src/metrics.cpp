#include "keymaze/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "keymaze/errors.hpp"
#include "keymaze/verifier.hpp"

namespace keymaze {

double progress_ratio(const action_seq& pred, const action_seq& gt) {
  if (gt.empty()) throw data_error("progress_ratio: empty ground truth");
  const action_seq p = normalize(pred);
  const action_seq g = normalize(gt);
  std::size_t k = 0;
  while (k < p.size() && k < g.size() && p[k] == g[k]) ++k;
  return static_cast<double>(k) / static_cast<double>(g.size());
}

int lcs_length(const action_seq& a, const action_seq& b) {
  const action_seq x = normalize(a);
  const action_seq y = normalize(b);
  const std::size_t n = y.size();
  std::vector<int> prev(n + 1, 0);
  std::vector<int> cur(n + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (x[i - 1] == y[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::pair<double, double> precision_recall(const action_seq& pred,
                                           const action_seq& gt) {
  if (gt.empty()) throw data_error("precision_recall: empty ground truth");
  const int matched = lcs_length(pred, gt);
  const double precision =
      pred.empty() ? 0.0
                   : static_cast<double>(matched) / static_cast<double>(pred.size());
  const double recall =
      static_cast<double>(matched) / static_cast<double>(gt.size());
  return {precision, recall};
}

run_result evaluate_response(const task_instance& inst, int run_index,
                             std::string_view raw_text,
                             long long output_tokens) {
  run_result r;
  r.instance_id = inst.id;
  r.run_index = run_index;
  r.output_tokens = output_tokens;

  const parse_outcome parsed = parse_solution(raw_text);
  if (!parsed) {
    r.first_violation_step = 0;
    return r;  // parse failure scores zero everywhere
  }
  r.parsed_ok = true;

  const world w = inst.to_world();
  verification_report report = execute(parsed.actions, w);
  r.goal_reached = report.goal_reached;
  r.first_violation_step = report.first_violation_step;
  r.exact_match = exact_match(parsed.actions, inst.gt.actions);
  r.progress = progress_ratio(parsed.actions, inst.gt.actions);
  const auto [precision, recall] = precision_recall(parsed.actions, inst.gt.actions);
  r.precision = precision;
  r.recall = recall;
  return r;
}

std::vector<bin_series> aggregate_bins(
    const std::vector<run_result>& results,
    const std::map<std::string, int>& depth_by_id, double bin_width) {
  if (bin_width <= 0) throw data_error("aggregate_bins: bin_width must be > 0");

  struct accum {
    int trials = 0;
    int successes = 0;
    double progress = 0, precision = 0, recall = 0;
    long long tokens = 0;
    int token_runs = 0;
  };
  std::map<double, accum> bins;
  for (const auto& r : results) {
    const auto it = depth_by_id.find(r.instance_id);
    if (it == depth_by_id.end()) {
      throw data_error("result references unknown instance " + r.instance_id);
    }
    const double key = std::floor(it->second / bin_width) * bin_width;
    accum& a = bins[key];
    ++a.trials;
    a.successes += r.exact_match ? 1 : 0;
    a.progress += r.progress;
    a.precision += r.precision;
    a.recall += r.recall;
    if (r.output_tokens >= 0) {
      a.tokens += r.output_tokens;
      ++a.token_runs;
    }
  }

  std::vector<bin_series> out;
  for (const auto& [key, a] : bins) {
    bin_series b;
    b.bin_key = key;
    b.trials = a.trials;
    b.successes = a.successes;
    b.p = static_cast<double>(a.successes) / static_cast<double>(a.trials);
    b.mean_progress = a.progress / a.trials;
    b.mean_precision = a.precision / a.trials;
    b.mean_recall = a.recall / a.trials;
    b.mean_tokens = a.token_runs > 0
                        ? static_cast<double>(a.tokens) / a.token_runs
                        : -1.0;
    out.push_back(b);
  }
  return out;
}

std::map<int, double> first_violation_histogram(
    const std::vector<std::optional<int>>& first_steps, bool normalize) {
  std::map<int, double> hist;
  double total = 0;
  for (const auto& step : first_steps) {
    if (!step) continue;
    hist[*step] += 1.0;
    total += 1.0;
  }
  if (normalize && total > 0) {
    for (auto& [step, count] : hist) count /= total;
  }
  return hist;
}

std::map<int, double> first_violation_histogram(
    const std::vector<run_result>& results, bool normalize) {
  std::vector<std::optional<int>> steps;
  steps.reserve(results.size());
  for (const auto& r : results) steps.push_back(r.first_violation_step);
  return first_violation_histogram(steps, normalize);
}

}  // namespace keymaze
