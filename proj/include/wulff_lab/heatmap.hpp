#pragma once

// SVG heatmaps of 2-d scalar fields: one rect per cell, linear colour map,
// min/max legend. Output depends only on the field values.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/field_io.hpp"

namespace wlab {

struct Rgb {
  int r, g, b;
  bool operator==(const Rgb&) const = default;
};

/// Piecewise-linear dark-blue → teal → yellow ramp; t is clamped to [0, 1].
inline Rgb colour_at(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  if (!(t > 0.0)) t = 0.0;
  if (t > 1.0) t = 1.0;
  const double x = t * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), stops.size() - 2);
  const double f = x - i;
  auto mix = [&](int c) { return static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c]))); };
  return {mix(0), mix(1), mix(2)};
}

/// Normalised position of v in [lo, hi]; a constant field maps to 0.5.
inline double colour_position(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }

inline std::string render_svg(const GridField& f, const std::string& title = "", int cell_px = 4) {
  const GridGeometry& g = f.geometry();
  if (g.dim() != 2) throw Error(Errc::DimensionMismatch, "heatmaps need a 2-d grid");
  if (f.shape() != Shape::Scalar || f.rows() != 1) throw Error(Errc::ShapeMismatch, "heatmaps need a scalar field");
  const int nx = g.cells(0), ny = g.cells(1);
  auto vals = f.values();
  double lo = vals.empty() ? 0.0 : vals[0], hi = lo;
  for (double v : vals) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "heatmap field contains a non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const int W = nx * cell_px, H = ny * cell_px;
  const int legend_h = 40;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\" "
                "shape-rendering=\"crispEdges\">\n",
                W, H + legend_h, W, H + legend_h);
  out += buf;
  if (!title.empty()) out += "<title>" + title + "</title>\n";
  // Row j = ny − 1 (largest x₁) is drawn at the top.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = vals[static_cast<std::size_t>(j) * nx + i];
      const Rgb c = colour_at(colour_position(v, lo, hi));
      std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"#%02x%02x%02x\"/>\n",
                    i * cell_px, (ny - 1 - j) * cell_px, cell_px, cell_px, c.r, c.g, c.b);
      out += buf;
    }
  // Legend: gradient bar with min and max labels.
  const int bar_w = std::max(W - 20, 10);
  for (int k = 0; k < 32; ++k) {
    const Rgb c = colour_at(k / 31.0);
    std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"10\" fill=\"#%02x%02x%02x\"/>\n",
                  10 + k * bar_w / 32, H + 6, bar_w / 32 + 1, c.r, c.g, c.b);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"10\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">min %s</text>\n"
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">max %s</text>\n",
                H + 30, detail::fmt_g17(lo).c_str(), W - 10, H + 30, detail::fmt_g17(hi).c_str());
  out += buf;
  out += "</svg>\n";
  return out;
}

inline void render_heatmap(const GridField& f, const std::filesystem::path& path, const std::string& title = "") {
  detail::atomic_write(path, render_svg(f, title));
}

}  // namespace wlab
