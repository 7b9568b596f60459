#include <cmath>

#include "doctest.h"
#include "keymaze/fit.hpp"
#include "keymaze/rng.hpp"

using namespace keymaze;

namespace {

std::vector<bin_series> bins_on_curve(double l0, int l_min, int l_max,
                                      int step) {
  std::vector<bin_series> bins;
  for (int l = l_min; l <= l_max; l += step) {
    bin_series b;
    b.bin_key = l;
    b.trials = 200;
    b.p = std::exp(-l / l0);
    b.successes = static_cast<int>(b.p * b.trials);
    bins.push_back(b);
  }
  return bins;
}

// Binomial sampling of a decay curve; the Monte-Carlo oracle for the fitter.
std::vector<bin_series> noisy_bins(double l0, int trials, pcg32& rng) {
  std::vector<bin_series> bins;
  for (int l = 5; l <= 100; ++l) {
    const double p_true = std::exp(-l / l0);
    int successes = 0;
    for (int t = 0; t < trials; ++t) {
      if (rng.unit() < p_true) ++successes;
    }
    bin_series b;
    b.bin_key = l;
    b.trials = trials;
    b.successes = successes;
    b.p = static_cast<double>(successes) / trials;
    bins.push_back(b);
  }
  return bins;
}

}  // namespace

TEST_CASE("noiseless bins recover the decay constant exactly") {
  const auto bins = bins_on_curve(50.0, 10, 80, 10);
  const fit_result fit = fit_l0(bins);
  CHECK(fit.l0_ols == doctest::Approx(50.0).epsilon(1e-11));
  CHECK(fit.l0_wls == doctest::Approx(50.0).epsilon(1e-11));
  CHECK(std::fabs(fit.l0_ols - 50.0) < 1e-9);
  CHECK(std::fabs(fit.l0_wls - 50.0) < 1e-9);
  CHECK(fit.slope < 0);
  CHECK(fit.r_squared > 0.999999);
  CHECK(fit.bins_used == 8);
  CHECK(fit.bins_dropped_zero == 0);
}

TEST_CASE("binomial noise keeps the estimate within ten percent") {
  pcg32 rng(20250101);
  int hits = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const auto bins = noisy_bins(50.0, 200, rng);
    const fit_result fit = fit_l0(bins);
    if (std::fabs(fit.l0_wls - 50.0) <= 5.0) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("fewer than two usable bins is insufficient data") {
  std::vector<bin_series> bins(1);
  bins[0] = {10.0, 200, 100, 0.5, 0, 0, 0, -1};
  CHECK_THROWS_AS(fit_l0(bins), fit_error);
  try {
    fit_l0(bins);
  } catch (const fit_error& e) {
    CHECK(e.kind == fit_error_kind::insufficient_data);
    CHECK(std::string(e.what()).find("InsufficientData") == 0);
  }
}

TEST_CASE("all-success series has no decay to fit") {
  std::vector<bin_series> bins;
  for (int l = 10; l <= 50; l += 10) {
    bins.push_back({static_cast<double>(l), 200, 200, 1.0, 1, 1, 1, -1});
  }
  try {
    fit_l0(bins);
    FAIL("expected fit_error");
  } catch (const fit_error& e) {
    CHECK(e.kind == fit_error_kind::non_decaying);
    CHECK(std::string(e.what()).find("NonDecaying") == 0);
  }
}

TEST_CASE("zero-success bins are dropped and counted") {
  auto bins = bins_on_curve(50.0, 10, 60, 10);
  bins.push_back({200.0, 200, 0, 0.0, 0, 0, 0, -1});
  bins.push_back({220.0, 200, 0, 0.0, 0, 0, 0, -1});
  const fit_result fit = fit_l0(bins);
  CHECK(fit.bins_dropped_zero == 2);
  CHECK(fit.bins_used == 6);
  CHECK(fit.l0_wls == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("the fit ignores uniform trial-count scaling") {
  pcg32 rng(7);
  auto bins = noisy_bins(40.0, 200, rng);
  const fit_result base = fit_l0(bins);
  for (auto& b : bins) {
    b.trials *= 10;
    b.successes *= 10;  // same p
  }
  const fit_result scaled = fit_l0(bins);
  CHECK(base.l0_wls == doctest::Approx(scaled.l0_wls).epsilon(1e-12));
  CHECK(base.l0_ols == doctest::Approx(scaled.l0_ols).epsilon(1e-12));
}

TEST_CASE("an increasing sub-unity series only fails under the intercept fit") {
  std::vector<bin_series> bins;
  for (int l = 10; l <= 40; l += 10) {
    const double p = 0.1 + 0.02 * l;
    bins.push_back({static_cast<double>(l), 100,
                    static_cast<int>(p * 100), p, 0, 0, 0, -1});
  }
  // Through the origin every p < 1 series has a negative slope; the forced
  // P(0) = 1 makes NonDecaying reachable only when every bin sits at p = 1.
  CHECK_NOTHROW(fit_l0(bins));
  fit_options opts;
  opts.with_intercept = true;
  try {
    fit_l0(bins, opts);
    FAIL("expected fit_error");
  } catch (const fit_error& e) {
    CHECK(e.kind == fit_error_kind::non_decaying);
  }
}

TEST_CASE("the diagnostic intercept fit still recovers the slope") {
  const auto bins = bins_on_curve(25.0, 5, 60, 5);
  fit_options opts;
  opts.with_intercept = true;
  const fit_result fit = fit_l0(bins, opts);
  CHECK(fit.l0_wls == doctest::Approx(25.0).epsilon(1e-9));
}
