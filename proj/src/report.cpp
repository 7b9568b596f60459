#include "keymaze/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "keymaze/errors.hpp"

namespace keymaze {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct panel {
  double x0, y0, width, height;  // plot area in SVG user units
  double xmin, xmax, ymin, ymax; // data ranges

  double px(double x) const {
    return x0 + (x - xmin) / (xmax - xmin) * width;
  }
  double py(double y) const {
    return y0 + height - (y - ymin) / (ymax - ymin) * height;
  }
};

void draw_axes(std::string& svg, const panel& p, const std::string& y_label) {
  svg += "<rect x='" + num(p.x0) + "' y='" + num(p.y0) + "' width='" +
         num(p.width) + "' height='" + num(p.height) +
         "' fill='none' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = p.xmin + (p.xmax - p.xmin) * i / 4.0;
    svg += "<text x='" + num(p.px(x)) + "' y='" + num(p.y0 + p.height + 16) +
           "' font-size='11' text-anchor='middle'>" + num(x) + "</text>\n";
    const double y = p.ymin + (p.ymax - p.ymin) * i / 4.0;
    svg += "<text x='" + num(p.x0 - 6) + "' y='" + num(p.py(y) + 4) +
           "' font-size='11' text-anchor='end'>" + num(y) + "</text>\n";
  }
  svg += "<text x='" + num(p.x0 + p.width / 2) + "' y='" +
         num(p.y0 + p.height + 32) +
         "' font-size='12' text-anchor='middle'>logical depth L</text>\n";
  svg += "<text x='" + num(p.x0 - 44) + "' y='" + num(p.y0 + p.height / 2) +
         "' font-size='12' text-anchor='middle' transform='rotate(-90 " +
         num(p.x0 - 44) + " " + num(p.y0 + p.height / 2) + ")'>" + y_label +
         "</text>\n";
}

void draw_series(std::string& svg, const panel& p,
                 const std::vector<std::pair<double, double>>& pts,
                 const std::string& color, bool markers) {
  if (pts.empty()) return;
  std::string line = "<polyline fill='none' stroke='" + color +
                     "' stroke-width='1.5' points='";
  for (const auto& [x, y] : pts) {
    line += num(p.px(x)) + "," + num(p.py(y)) + " ";
  }
  line += "'/>\n";
  svg += line;
  if (markers) {
    for (const auto& [x, y] : pts) {
      svg += "<circle cx='" + num(p.px(x)) + "' cy='" + num(p.py(y)) +
             "' r='2.5' fill='" + color + "'/>\n";
    }
  }
}

}  // namespace

void write_bins_csv(const std::vector<bin_series>& bins,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open for writing: " + path);
  out << "bin_key,trials,p,mean_progress,mean_precision,mean_recall,mean_tokens\n";
  for (const auto& b : bins) {
    out << num(b.bin_key) << ',' << b.trials << ',' << num(b.p) << ','
        << num(b.mean_progress) << ',' << num(b.mean_precision) << ','
        << num(b.mean_recall) << ',' << num(b.mean_tokens) << '\n';
  }
  if (!out) throw data_error("write failed: " + path);
}

void write_decay_svg(const std::vector<bin_series>& bins,
                     const fit_result* fit, const std::string& path) {
  if (bins.empty()) throw data_error("write_decay_svg: no bins");

  double xmin = bins.front().bin_key, xmax = bins.front().bin_key;
  double log_min = 0.0;
  for (const auto& b : bins) {
    xmin = std::min(xmin, b.bin_key);
    xmax = std::max(xmax, b.bin_key);
    if (b.p > 0) log_min = std::min(log_min, std::log10(b.p));
  }
  if (xmax == xmin) xmax = xmin + 1;
  log_min = std::floor(std::min(log_min, -1.0));

  panel lin{60, 30, 480, 180, xmin, xmax, 0.0, 1.0};
  panel logp{60, 280, 480, 180, xmin, xmax, log_min, 0.0};

  std::vector<std::pair<double, double>> lin_pts;
  std::vector<std::pair<double, double>> log_pts;
  for (const auto& b : bins) {
    lin_pts.push_back({b.bin_key, b.p});
    if (b.p > 0) log_pts.push_back({b.bin_key, std::log10(b.p)});
  }

  std::string svg =
      "<svg xmlns='http://www.w3.org/2000/svg' width='600' height='520' "
      "viewBox='0 0 600 520'>\n"
      "<rect width='600' height='520' fill='white'/>\n";
  svg += "<text x='300' y='18' font-size='13' text-anchor='middle'>success "
         "rate vs. logical depth</text>\n";

  draw_axes(svg, lin, "Pass@1");
  draw_series(svg, lin, lin_pts, "#1f77b4", true);
  draw_axes(svg, logp, "log10 Pass@1");
  draw_series(svg, logp, log_pts, "#1f77b4", true);

  if (fit) {
    std::vector<std::pair<double, double>> lin_fit;
    std::vector<std::pair<double, double>> log_fit;
    for (int i = 0; i <= 100; ++i) {
      const double x = xmin + (xmax - xmin) * i / 100.0;
      const double p = std::exp(-x / fit->l0_wls);
      lin_fit.push_back({x, p});
      const double lp = std::log10(p);
      if (lp >= log_min) log_fit.push_back({x, lp});
    }
    draw_series(svg, lin, lin_fit, "#d62728", false);
    draw_series(svg, logp, log_fit, "#d62728", false);
    svg += "<text x='540' y='46' font-size='12' text-anchor='end' "
           "fill='#d62728'>L0 = " +
           num(fit->l0_wls) + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open for writing: " + path);
  out << svg;
  if (!out) throw data_error("write failed: " + path);
}

std::string fit_summary(const fit_result& fit) {
  std::string out;
  out += "L0 (WLS) = " + num(fit.l0_wls) + "\n";
  out += "L0 (OLS) = " + num(fit.l0_ols) + "\n";
  out += "slope    = " + num(fit.slope) + "\n";
  out += "r^2      = " + num(fit.r_squared) + "\n";
  out += "bins used = " + std::to_string(fit.bins_used) +
         ", zero-success bins dropped = " + std::to_string(fit.bins_dropped_zero) +
         "\n";
  return out;
}

}  // namespace keymaze
