#pragma once

// Deterministic SVG rendering.
//
// Two pictures:
//   - portrait: the annulus picture.  The angular coordinate runs along the
//     small base circle (one angular span per sector, boundaries as radial
//     lines) and the radial coordinate is the fiber position, mapped
//     linearly from the inner to the outer rim.  Strands are polylines,
//     birth/death events are tick marks with a dot at the boundary they
//     occur on, crossings are x marks.
//   - arrangement: the base-plane picture.  Pancake boundary circles in
//     index order, singular vertices as dots labeled with their descriptor
//     and exact weight string.
//
// Output is byte-identical across runs for identical input: fixed canvas,
// fixed element order, no timestamps.  Coordinates are printed with %.6f —
// display only; every verification path elsewhere stays exact.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "arrangement.hpp"
#include "classify.hpp"
#include "portrait.hpp"
#include "weights.hpp"

namespace qsec {

namespace detail {

inline double approx(const Rational& r) { return r.convert_to<double>(); }

inline std::string fmt6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;  // avoid "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct SvgWriter {
  std::string body;

  void open(int w, int h) {
    body += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
            std::to_string(w) + "\" height=\"" + std::to_string(h) +
            "\" viewBox=\"0 0 " + std::to_string(w) + " " +
            std::to_string(h) + "\">\n";
    body += "<rect width=\"" + std::to_string(w) + "\" height=\"" +
            std::to_string(h) + "\" fill=\"#ffffff\"/>\n";
  }
  void close() { body += "</svg>\n"; }

  void circle(double cx, double cy, double r, const std::string& stroke,
              double width, const std::string& fill) {
    body += "<circle cx=\"" + fmt6(cx) + "\" cy=\"" + fmt6(cy) + "\" r=\"" +
            fmt6(r) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            fmt6(width) + "\" fill=\"" + fill + "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double width,
            const std::string& dash = "") {
    body += "<line x1=\"" + fmt6(x1) + "\" y1=\"" + fmt6(y1) + "\" x2=\"" +
            fmt6(x2) + "\" y2=\"" + fmt6(y2) + "\" stroke=\"" + stroke +
            "\" stroke-width=\"" + fmt6(width) + "\"";
    if (!dash.empty()) body += " stroke-dasharray=\"" + dash + "\"";
    body += "/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width) {
    if (pts.size() < 2) return;
    body += "<polyline points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body += " ";
      body += fmt6(pts[i].first) + "," + fmt6(pts[i].second);
    }
    body += "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt6(width) +
            "\" fill=\"none\"/>\n";
  }
  void text(double x, double y, const std::string& s) {
    std::string esc;
    for (char c : s) {
      if (c == '&') esc += "&amp;";
      else if (c == '<') esc += "&lt;";
      else if (c == '>') esc += "&gt;";
      else esc += c;
    }
    body += "<text x=\"" + fmt6(x) + "\" y=\"" + fmt6(y) +
            "\" font-family=\"monospace\" font-size=\"11\" fill=\"#000000\">" +
            esc + "</text>\n";
  }
};

}  // namespace detail

inline std::string render_portrait_svg(const Portrait& p) {
  constexpr int kCanvas = 600;
  constexpr double kCx = 300.0, kCy = 300.0;
  constexpr double kInner = 100.0, kOuter = 260.0;
  const double kTau = 6.283185307179586476925286766559;

  const size_t m = p.sector_count();
  if (m == 0) throw std::invalid_argument("cannot render an empty portrait");

  detail::SvgWriter w;
  w.open(kCanvas, kCanvas);

  auto at = [&](double radius, double angle) {
    return std::pair<double, double>{kCx + radius * std::cos(angle),
                                     kCy - radius * std::sin(angle)};
  };
  auto radius_of = [&](double fiber) {
    double f = fiber - std::floor(fiber);
    return kInner + (kOuter - kInner) * f;
  };

  // Annulus rims.
  w.circle(kCx, kCy, kInner, "#888888", 1.0, "none");
  w.circle(kCx, kCy, kOuter, "#888888", 1.0, "none");

  // Sector boundaries: boundary b joins sector b to sector b+1 and sits at
  // the end angle of sector b.
  auto boundary_angle = [&](size_t b) {
    return kTau * static_cast<double>(b + 1) / static_cast<double>(m);
  };
  for (size_t b = 0; b < m; ++b) {
    auto [x1, y1] = at(kInner, boundary_angle(b));
    auto [x2, y2] = at(kOuter, boundary_angle(b));
    w.line(x1, y1, x2, y2, "#bbbbbb", 1.0, "4 3");
  }

  // Strands: fiber position interpolates along the centered lift, so a
  // strand that passes fiber position 0 splits into polyline pieces at the
  // rim instead of jumping across the annulus.
  constexpr int kSamples = 32;
  for (size_t i = 0; i < m; ++i) {
    double a0 = kTau * static_cast<double>(i) / static_cast<double>(m);
    double a1 = kTau * static_cast<double>(i + 1) / static_cast<double>(m);
    for (const auto& s : p.sectors[i]) {
      double start = detail::approx(s.start.value());
      double d = detail::approx(drift(s));
      std::vector<std::pair<double, double>> piece;
      double prev_f = 0.0;
      for (int t = 0; t <= kSamples; ++t) {
        double u = static_cast<double>(t) / kSamples;
        double fiber = start + u * d;
        double f = fiber - std::floor(fiber);
        if (t > 0 && std::abs(f - prev_f) > 0.5) {
          w.polyline(piece, "#1a4f8a", 1.5);
          piece.clear();
        }
        piece.push_back(at(radius_of(fiber), a0 + u * (a1 - a0)));
        prev_f = f;
      }
      w.polyline(piece, "#1a4f8a", 1.5);
    }
  }

  // Events on each boundary: birth tick (green), death tick (red),
  // crossing x (purple).
  auto strand_in = [&](size_t sector, const std::string& id) -> const Strand& {
    for (const auto& s : p.sectors[sector])
      if (s.id == id) return s;
    throw std::invalid_argument("renderer: strand '" + id +
                                "' missing from its sector");
  };
  for (size_t b = 0; b < p.boundaries.size(); ++b) {
    double ang = boundary_angle(b);
    size_t left = p.left_sector(b);
    size_t right = p.right_sector(b);
    for (const auto& ev : p.boundaries[b].births) {
      double r1 = radius_of(detail::approx(strand_in(right, ev.first).start.value()));
      double r2 = radius_of(detail::approx(strand_in(right, ev.second).start.value()));
      auto [x1, y1] = at(r1, ang);
      auto [x2, y2] = at(r2, ang);
      w.line(x1, y1, x2, y2, "#2c8a2c", 2.0);
      auto [mx, my] = at((r1 + r2) / 2.0, ang);
      w.circle(mx, my, 3.0, "none", 0.0, "#2c8a2c");
    }
    for (const auto& ev : p.boundaries[b].deaths) {
      double r1 = radius_of(detail::approx(strand_in(left, ev.first).end.value()));
      double r2 = radius_of(detail::approx(strand_in(left, ev.second).end.value()));
      auto [x1, y1] = at(r1, ang);
      auto [x2, y2] = at(r2, ang);
      w.line(x1, y1, x2, y2, "#b03030", 2.0);
      auto [mx, my] = at((r1 + r2) / 2.0, ang);
      w.circle(mx, my, 3.0, "none", 0.0, "#b03030");
    }
    for (const auto& ev : p.boundaries[b].crossings) {
      double r = radius_of(detail::approx(strand_in(left, ev.first).end.value()));
      auto [x, y] = at(r, ang);
      w.line(x - 4.0, y - 4.0, x + 4.0, y + 4.0, "#6a2c8a", 2.0);
      w.line(x - 4.0, y + 4.0, x + 4.0, y - 4.0, "#6a2c8a", 2.0);
    }
  }

  VertexDescriptor d = classify(p);
  w.text(20.0, 30.0, to_string(d));
  if (d.kind != VertexDescriptor::Kind::Inessential)
    w.text(20.0, 46.0, "weight " + to_string(weight_of(d)));

  w.close();
  return w.body;
}

inline std::string render_arrangement_svg(const ArrangementDCEL& dcel) {
  constexpr int kCanvas = 600;
  constexpr double kMargin = 20.0;

  // Bounding box over the pancake circles; a pancake-free plane gets a
  // default unit window.
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& pk : dcel.spec.pancakes) {
    double cx = detail::approx(pk.center_x);
    double cy = detail::approx(pk.center_y);
    double r = detail::approx(pk.radius);
    lo_x = std::min(lo_x, cx - r);
    hi_x = std::max(hi_x, cx + r);
    lo_y = std::min(lo_y, cy - r);
    hi_y = std::max(hi_y, cy + r);
  }
  if (dcel.spec.pancakes.empty()) {
    lo_x = lo_y = -1.0;
    hi_x = hi_y = 1.0;
  }
  double span = std::max(hi_x - lo_x, hi_y - lo_y);
  if (span <= 0.0) span = 1.0;
  span *= 1.05;
  double scale = (kCanvas - 2.0 * kMargin) / span;
  double mid_x = (lo_x + hi_x) / 2.0;
  double mid_y = (lo_y + hi_y) / 2.0;
  auto map = [&](double x, double y) {
    return std::pair<double, double>{kCanvas / 2.0 + (x - mid_x) * scale,
                                     kCanvas / 2.0 - (y - mid_y) * scale};
  };

  detail::SvgWriter w;
  w.open(kCanvas, kCanvas);

  for (const auto& pk : dcel.spec.pancakes) {
    auto [cx, cy] = map(detail::approx(pk.center_x), detail::approx(pk.center_y));
    w.circle(cx, cy, detail::approx(pk.radius) * scale, "#1a4f8a", 1.5, "none");
  }

  for (const auto& v : dcel.vertices) {
    auto [x, y] = map(v.x, v.y);
    w.circle(x, y, 3.0, "none", 0.0, "#000000");
    w.text(x + 6.0, y - 6.0, to_string(v.descriptor) + "  " + to_string(v.weight));
  }

  w.close();
  return w.body;
}

}  // namespace qsec
