#include "keymaze/fit.hpp"

#include <cmath>

namespace keymaze {

namespace {

struct xy {
  double x, y;
};

// Least-squares slope of y = s*x (optionally y = a + s*x) with weights.
double weighted_slope(const std::vector<xy>& pts, const std::vector<double>& w,
                      bool with_intercept) {
  if (!with_intercept) {
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sxy += w[i] * pts[i].x * pts[i].y;
      sxx += w[i] * pts[i].x * pts[i].x;
    }
    return sxy / sxx;
  }
  double sw = 0, sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sw += w[i];
    sx += w[i] * pts[i].x;
    sy += w[i] * pts[i].y;
    sxy += w[i] * pts[i].x * pts[i].y;
    sxx += w[i] * pts[i].x * pts[i].x;
  }
  return (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
}

double intercept_of(const std::vector<xy>& pts, const std::vector<double>& w,
                    double slope) {
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sw += w[i];
    sx += w[i] * pts[i].x;
    sy += w[i] * pts[i].y;
  }
  return (sy - slope * sx) / sw;
}

}  // namespace

fit_result fit_l0(const std::vector<bin_series>& bins, const fit_options& opts) {
  std::vector<xy> pts;
  int dropped = 0;
  for (const auto& b : bins) {
    if (b.trials <= 0) continue;
    if (b.p <= 0.0) {
      ++dropped;  // ln 0 is undefined; no pseudo-count smoothing
      continue;
    }
    pts.push_back({b.bin_key, std::log(b.p)});
  }

  fit_result fit;
  fit.bins_used = static_cast<int>(pts.size());
  fit.bins_dropped_zero = dropped;
  if (pts.size() < 2) {
    throw fit_error(fit_error_kind::insufficient_data,
                    std::to_string(pts.size()) + " usable bin(s)");
  }

  const std::vector<double> unit(pts.size(), 1.0);
  const double s_ols = weighted_slope(pts, unit, opts.with_intercept);
  if (!(s_ols < 0.0)) {
    throw fit_error(fit_error_kind::non_decaying,
                    "OLS slope = " + std::to_string(s_ols));
  }
  const double a_ols =
      opts.with_intercept ? intercept_of(pts, unit, s_ols) : 0.0;

  std::vector<double> weights(pts.size());
  const double floor2 = opts.residual_floor * opts.residual_floor;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i].y - (a_ols + s_ols * pts[i].x);
    weights[i] = 1.0 / std::max(r * r, floor2);
  }
  const double s_wls = weighted_slope(pts, weights, opts.with_intercept);
  if (!(s_wls < 0.0)) {
    throw fit_error(fit_error_kind::non_decaying,
                    "WLS slope = " + std::to_string(s_wls));
  }
  const double a_wls =
      opts.with_intercept ? intercept_of(pts, weights, s_wls) : 0.0;

  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i].y - (a_wls + s_wls * pts[i].x);
    ss_res += weights[i] * r * r;
    ss_tot += weights[i] * pts[i].y * pts[i].y;
  }

  fit.slope_ols = s_ols;
  fit.slope = s_wls;
  fit.l0_ols = -1.0 / s_ols;
  fit.l0_wls = -1.0 / s_wls;
  fit.r_squared = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
  return fit;
}

}  // namespace keymaze
