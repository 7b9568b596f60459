#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "keymaze/actions.hpp"
#include "keymaze/dataset.hpp"

namespace keymaze {

// Per-run verdict joining parse, verification, and sequence metrics.
struct run_result {
  std::string instance_id;
  int run_index = 0;
  bool parsed_ok = false;
  bool exact_match = false;
  bool goal_reached = false;
  double progress = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::optional<int> first_violation_step;
  long long output_tokens = -1;  // -1 = provider reported nothing
};

// Longest-common-prefix fraction k/n of the ground truth (n = |gt|).
double progress_ratio(const action_seq& pred, const action_seq& gt);

int lcs_length(const action_seq& a, const action_seq& b);

// Order-preserving match: matched = LCS length; precision = matched/|pred|
// (0 for empty pred), recall = matched/|gt|.
std::pair<double, double> precision_recall(const action_seq& pred,
                                           const action_seq& gt);

// Full per-response verdict (parse + execute + metrics).
run_result evaluate_response(const task_instance& inst, int run_index,
                             std::string_view raw_text,
                             long long output_tokens = -1);

struct bin_series {
  double bin_key = 0.0;  // bin lower edge
  int trials = 0;
  int successes = 0;
  double p = 0.0;  // successes / trials, runs pooled within the bin
  double mean_progress = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_tokens = -1.0;  // over runs with known token counts
};

// Bins run results by each instance's logical depth. Throws data_error on a
// result whose instance_id is missing from depth_by_id.
std::vector<bin_series> aggregate_bins(
    const std::vector<run_result>& results,
    const std::map<std::string, int>& depth_by_id, double bin_width = 1.0);

// Count (or probability mass, when normalized) of first-violation steps;
// clean runs contribute nothing.
std::map<int, double> first_violation_histogram(
    const std::vector<std::optional<int>>& first_steps, bool normalize);
std::map<int, double> first_violation_histogram(
    const std::vector<run_result>& results, bool normalize);

}  // namespace keymaze
