#pragma once

#include <string>
#include <vector>

#include "keymaze/fit.hpp"
#include "keymaze/metrics.hpp"

namespace keymaze {

// bin_key,trials,p,mean_progress,mean_precision,mean_recall,mean_tokens
void write_bins_csv(const std::vector<bin_series>& bins,
                    const std::string& path);

// Self-contained two-panel success plot (linear on top, log-y below) with
// the fitted decay overlaid when a fit is supplied. Output is deterministic:
// no timestamps, fixed number formatting.
void write_decay_svg(const std::vector<bin_series>& bins,
                     const fit_result* fit, const std::string& path);

std::string fit_summary(const fit_result& fit);

}  // namespace keymaze
