#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "keymaze/metrics.hpp"

namespace keymaze {

enum class fit_error_kind { insufficient_data, non_decaying };

class fit_error : public std::runtime_error {
 public:
  fit_error(fit_error_kind kind, const std::string& detail)
      : std::runtime_error(
            (kind == fit_error_kind::insufficient_data ? "InsufficientData"
                                                       : "NonDecaying") +
            (detail.empty() ? "" : ": " + detail)),
        kind(kind) {}

  fit_error_kind kind;
};

struct fit_result {
  double l0_ols = 0.0;
  double l0_wls = 0.0;
  double slope_ols = 0.0;
  double slope = 0.0;      // WLS slope; l0_wls == -1 / slope
  double r_squared = 0.0;  // weighted, uncentered, on the WLS fit
  int bins_used = 0;
  int bins_dropped_zero = 0;
};

struct fit_options {
  double residual_floor = 1e-6;  // epsilon_r for the WLS weights
  bool with_intercept = false;   // diagnostics only; the model forces P(0)=1
};

// Fits ln p = s * L through the origin: OLS first, then WLS with weights
// 1 / max(residual^2, epsilon_r^2) from the OLS residuals. Bins with p = 0
// are dropped (and counted); fewer than two usable bins raises
// InsufficientData, a non-negative slope raises NonDecaying.
fit_result fit_l0(const std::vector<bin_series>& bins,
                  const fit_options& opts = {});

}  // namespace keymaze
