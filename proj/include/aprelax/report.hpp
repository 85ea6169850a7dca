#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aprelax/study.hpp"

namespace aprelax {

inline constexpr const char* csv_header =
    "model,ic,N,eps,sigma,gamma,mu,T,cfl,phi0,phiT,steps,lambda_max,rate_group";

/// Scientific notation with 17 significant digits.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string csv_row(const StudyRow& r) {
  std::string line;
  line += r.model + ',' + r.ic + ',' + std::to_string(r.n) + ',' + format_real(r.eps) + ',' +
          format_real(r.sigma) + ',' + format_real(r.gamma) + ',' + format_real(r.mu) + ',' +
          format_real(r.t_final) + ',' + format_real(r.cfl) + ',' + format_real(r.phi0) + ',' +
          format_real(r.phiT) + ',' + std::to_string(r.steps) + ',' + format_real(r.lambda_max) +
          ',' + r.rate_group();
  return line;
}

/// Header plus one LF-terminated line per completed row.
inline std::string csv_text(const StudyResult& result) {
  std::string out = std::string(csv_header) + '\n';
  for (const auto& row : result.rows)
    if (row.ok) out += csv_row(row) + '\n';
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline void emit_csv(const StudyResult& result, const std::filesystem::path& path) {
  write_file(path, csv_text(result));
}

/// Cell centres, the split-scheme state and the limit-scheme state at T.
template <RelaxationModel M>
std::string fields_csv(const M&, const Grid1D& grid, const PairResult<M::dim>& pair) {
  std::string out = "x";
  for (auto c : M::components) out += ',' + std::string(c);
  for (auto c : M::components) out += ',' + std::string(c) + "_bar";
  out += '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_real(grid.center(i));
    for (std::size_t k = 0; k < M::dim; ++k) out += ',' + format_real(pair.hyperbolic[i][k]);
    for (std::size_t k = 0; k < M::dim; ++k) out += ',' + format_real(pair.limit[i][k]);
    out += '\n';
  }
  return out;
}

/// group,slope,intercept,max_residual,used,excluded per fitted group.
inline std::string rates_csv(const std::vector<GroupFit>& fits) {
  std::string out = "group,slope,intercept,max_residual,used,excluded\n";
  for (const auto& f : fits) {
    out += f.group + ',';
    if (f.fit) {
      out += format_real(f.fit->slope) + ',' + format_real(f.fit->intercept) + ',' +
             format_real(f.fit->max_residual) + ',' + std::to_string(f.fit->used) + ',' +
             std::to_string(f.fit->excluded_eps.size());
    } else {
      out += "nan,nan,nan,0,0";
    }
    out += '\n';
  }
  return out;
}

/**
 * Log-log scatter of phi(T) against eps in SVG: one polyline per rate group
 * and a dashed eps^4 guide anchored at the first series' largest eps.
 * Guide endpoints are also stored in log10 data units as data-* attributes.
 */
inline std::string plot_svg(const StudyResult& result) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  for (const auto& row : result.rows) {
    if (!row.ok || !(row.phiT > 0.0)) continue;
    const auto group = row.rate_group();
    if (!series.count(group)) order.push_back(group);
    series[group].emplace_back(std::log10(row.eps), std::log10(row.phiT));
  }
  if (order.empty()) throw std::invalid_argument("emit_plot: no rows with positive phiT");

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& [g, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  const auto& first = series[order.front()];
  const auto anchor = *std::max_element(first.begin(), first.end());
  const double gx0 = anchor.first;
  const double gy0 = anchor.second;
  const double gx1 = xmin;
  const double gy1 = gy0 + 4.0 * (gx1 - gx0);
  ymin = std::min(ymin, gy1);
  if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
  if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }

  const double w = 640, h = 480, m = 60;
  auto px = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (w - 2 * m); };
  auto py = [&](double y) { return h - m - (y - ymin) / (ymax - ymin) * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream svg;
  // legend column to the right of the plot area
  const double canvas_w = w + 200;
  const double canvas_h = std::max(h, m + 14.0 * static_cast<double>(order.size() + 2));
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas_w << "\" height=\""
      << canvas_h << "\">\n";
  svg << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\""
      << h - 2 * m << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">log10 eps</text>\n";
  svg << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
      << ")\" text-anchor=\"middle\">log10 phi(T)</text>\n";
  for (double d = std::ceil(xmin); d <= std::floor(xmax); d += 1.0)
    svg << "<text class=\"tick\" x=\"" << px(d) << "\" y=\"" << h - m + 18
        << "\" text-anchor=\"middle\">" << d << "</text>\n";
  for (double d = std::ceil(ymin); d <= std::floor(ymax); d += 2.0)
    svg << "<text class=\"tick\" x=\"" << m - 6 << "\" y=\"" << py(d)
        << "\" text-anchor=\"end\">" << d << "</text>\n";

  std::size_t k = 0;
  for (const auto& group : order) {
    const char* color = colors[k % 8];
    svg << "<polyline class=\"series\" data-group=\"" << group << "\" fill=\"none\" stroke=\""
        << color << "\" points=\"";
    for (const auto& [x, y] : series[group]) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : series[group])
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    svg << "<text x=\"" << w - m + 12 << "\" y=\"" << m + 14 * static_cast<double>(k + 1)
        << "\" font-size=\"10\" fill=\"" << color << "\">" << group << "</text>\n";
    ++k;
  }
  svg << "<line class=\"guide\" data-x0=\"" << gx0 << "\" data-y0=\"" << gy0 << "\" data-x1=\""
      << gx1 << "\" data-y1=\"" << gy1 << "\" x1=\"" << px(gx0) << "\" y1=\"" << py(gy0)
      << "\" x2=\"" << px(gx1) << "\" y2=\"" << py(gy1)
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

inline void emit_plot(const StudyResult& result, const std::filesystem::path& path) {
  write_file(path, plot_svg(result));
}

}  // namespace aprelax
