#pragma once

// Circle arrangements over the plane: the geometric model for the trivial
// bundle.  A pancake is a constant-height disk thickened by tau, so its
// image under the projection is a circle (a fold curve); a section is a
// constant-height global sheet.  Every crossing of two circles is a
// singular vertex whose local portrait is built by walking a small circle
// around it; the local formula then predicts the Euler number, which is 0
// for the trivial bundle regardless of the arrangement.
//
// Geometry policy: circle/circle incidence is computed in double precision
// with an explicit separation margin; inputs inside the margin are rejected
// as degenerate, never resolved.  Once the margin holds, every downstream
// quantity (fiber positions, weights, indices) is exact rational.
//
// Planar subdivision bookkeeping: every circle pair contributes two
// vertices; circles crossing nothing carry one synthetic degree-2 joint so
// that they still bound faces.  With V, E counted including the synthetic
// joints, every subdivision satisfies V - E + F = 1 + C, where C is the
// number of connected components of the union of circles (for a connected
// singular curve this is the spherical V - E + F = 2 with the outer face
// counted).  The public counts exclude the synthetic joints, which keeps
// lonely circles at V = E = 0 with a closed-curve edge cycle.

#include "qsec/classify.hpp"
#include "qsec/oracle.hpp"
#include "qsec/rng.hpp"
#include "qsec/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qsec {

struct Pancake {
  Rational center_x = 0;
  Rational center_y = 0;
  Rational radius = 0;
  Rational height = 0;     // fiber position of the disk's core
  Rational thickness = 0;  // tau: sheets sit at height +- tau
};

struct ArrangementSpec {
  std::vector<Pancake> pancakes;
  std::vector<Rational> section_heights;
};

inline ArrangementSpec arrangement_from_json(const nlohmann::json& j) {
  auto rat = [](const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
      return Rational(Integer(v.get<long long>()), Integer(1));
    throw std::invalid_argument(
        "arrangement: rational values must be strings like \"1/4\"");
  };
  if (!j.contains("pancakes") || !j.contains("sections"))
    throw std::invalid_argument(
        "arrangement: expected top-level 'pancakes' and 'sections'");
  ArrangementSpec spec;
  for (const auto& p : j.at("pancakes")) {
    Pancake pk;
    const auto& c = p.at("center");
    if (!c.is_array() || c.size() != 2)
      throw std::invalid_argument("arrangement: 'center' must be [x, y]");
    pk.center_x = rat(c[0]);
    pk.center_y = rat(c[1]);
    pk.radius = rat(p.at("radius"));
    pk.height = rat(p.at("height"));
    pk.thickness = rat(p.at("thickness"));
    spec.pancakes.push_back(pk);
  }
  for (const auto& s : j.at("sections"))
    spec.section_heights.push_back(rat(s.at("height")));
  return spec;
}

inline nlohmann::json to_json(const ArrangementSpec& spec) {
  nlohmann::json j;
  j["pancakes"] = nlohmann::json::array();
  for (const auto& p : spec.pancakes)
    j["pancakes"].push_back(
        {{"center", {to_string(p.center_x), to_string(p.center_y)}},
         {"radius", to_string(p.radius)},
         {"height", to_string(p.height)},
         {"thickness", to_string(p.thickness)}});
  j["sections"] = nlohmann::json::array();
  for (const auto& h : spec.section_heights)
    j["sections"].push_back({{"height", to_string(h)}});
  return j;
}

namespace detail {

constexpr double kGenericityMargin = 1e-9;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Circular (mod 1) distance between two exact fiber values.
inline Rational fiber_distance(const Rational& a, const Rational& b) {
  Rational d = frac(a - b);
  return std::min(d, Rational(1) - d);
}

}  // namespace detail

// Checks every stability requirement.  Exact fiber-direction checks use
// rational arithmetic; planar incidence checks use doubles with the margin.
// Returns the full list of violations (empty = generic).
inline std::vector<std::string> genericity_check(const ArrangementSpec& spec) {
  std::vector<std::string> v;
  auto tag_p = [](size_t i) { return "pancake " + std::to_string(i); };
  auto tag_s = [](size_t i) { return "section " + std::to_string(i); };

  if (spec.section_heights.empty())
    v.push_back("no sections: at least one global section is required");
  for (size_t i = 0; i < spec.pancakes.size(); ++i) {
    const auto& p = spec.pancakes[i];
    if (p.radius <= 0) v.push_back(tag_p(i) + ": radius must be positive");
    if (p.thickness <= 0)
      v.push_back(tag_p(i) + ": thickness must be positive");
    else if (2 * p.thickness >= 1)
      v.push_back(tag_p(i) + ": thickness band covers the whole fiber");
  }

  // Fiber direction, exact: distinct heights and disjoint closed bands.
  for (size_t i = 0; i < spec.section_heights.size(); ++i)
    for (size_t j = i + 1; j < spec.section_heights.size(); ++j)
      if (frac(spec.section_heights[i]) == frac(spec.section_heights[j]))
        v.push_back("height collision: " + tag_s(i) + " and " + tag_s(j));
  for (size_t i = 0; i < spec.pancakes.size(); ++i)
    for (size_t s = 0; s < spec.section_heights.size(); ++s)
      if (detail::fiber_distance(spec.section_heights[s],
                                 spec.pancakes[i].height) <=
          spec.pancakes[i].thickness)
        v.push_back("height collision: " + tag_s(s) +
                    " lies in the thickness band of " + tag_p(i));
  for (size_t i = 0; i < spec.pancakes.size(); ++i)
    for (size_t j = i + 1; j < spec.pancakes.size(); ++j)
      if (detail::fiber_distance(spec.pancakes[i].height,
                                 spec.pancakes[j].height) <=
          spec.pancakes[i].thickness + spec.pancakes[j].thickness)
        v.push_back("height collision: thickness bands of " + tag_p(i) +
                    " and " + tag_p(j) + " overlap");

  // Base direction, doubles with margin.
  double scale = 1.0;
  std::vector<std::array<double, 3>> c;
  for (const auto& p : spec.pancakes) {
    double x = detail::to_double(p.center_x);
    double y = detail::to_double(p.center_y);
    double r = detail::to_double(p.radius);
    c.push_back({x, y, r});
    scale = std::max({scale, std::abs(x), std::abs(y), r});
  }
  const double margin = detail::kGenericityMargin * scale;
  std::vector<std::array<double, 2>> points;
  for (size_t i = 0; i < c.size(); ++i) {
    for (size_t j = i + 1; j < c.size(); ++j) {
      double dx = c[j][0] - c[i][0], dy = c[j][1] - c[i][1];
      double d = std::hypot(dx, dy);
      double sum = c[i][2] + c[j][2], dif = std::abs(c[i][2] - c[j][2]);
      std::string pair = tag_p(i) + " and " + tag_p(j);
      if (d <= margin && dif <= margin) {
        v.push_back("tangent/coincident: " + pair + " coincide");
        continue;
      }
      if (std::abs(d - sum) <= margin || std::abs(d - dif) <= margin) {
        v.push_back("tangent/coincident: " + pair + " are tangent");
        continue;
      }
      if (d > sum || d < dif) continue;  // disjoint or nested: no crossing
      double a = (d * d + c[i][2] * c[i][2] - c[j][2] * c[j][2]) / (2 * d);
      double h2 = c[i][2] * c[i][2] - a * a;
      double h = std::sqrt(std::max(h2, 0.0));
      double ux = dx / d, uy = dy / d;
      for (int sgn : {+1, -1}) {
        double px = c[i][0] + a * ux - sgn * h * uy;
        double py = c[i][1] + a * uy + sgn * h * ux;
        // Transversality: the two tangent directions must not line up.
        double t1x = -(py - c[i][1]), t1y = px - c[i][0];
        double t2x = -(py - c[j][1]), t2y = px - c[j][0];
        double sin_angle = std::abs(t1x * t2y - t1y * t2x) /
                           (std::hypot(t1x, t1y) * std::hypot(t2x, t2y));
        if (sin_angle <= detail::kGenericityMargin)
          v.push_back("tangent/coincident: " + pair +
                      " meet at a near-tangent angle");
        points.push_back({px, py});
      }
    }
  }
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (std::hypot(points[i][0] - points[j][0],
                     points[i][1] - points[j][1]) <= margin)
        v.push_back(
            "concurrence: two crossing points coincide (three circles "
            "through one point, or a doubled crossing)");
  return v;
}

struct FaceRecord {
  std::set<size_t> cover;  // pancakes whose disk contains the face
  // Sheet id and fiber position, deterministic order: sections first,
  // then each covering pancake's upper and lower sheet.
  std::vector<std::pair<std::string, FiberPos>> sheets;
  bool outer = false;
};

struct EdgeRecord {
  size_t circle = 0;    // pancake index of the fold circle
  size_t face_in = 0;   // face on the disk side
  size_t face_out = 0;  // face on the other side
  bool closed_curve = false;  // whole lonely circle, no real endpoints
};

struct VertexRecord {
  size_t circle_a = 0;  // the two crossing pancakes, a < b
  size_t circle_b = 0;
  double x = 0;
  double y = 0;
  std::array<size_t, 4> face{};   // incident faces, ccw sectors
  std::array<size_t, 4> edge{};   // boundary i separates face[i], face[i+1]
  std::array<size_t, 4> boundary_circle{};
  std::array<bool, 4> birth{};    // boundary i enters its circle's disk
  Portrait portrait;
  VertexDescriptor descriptor;
  Rational weight = 0;
  std::shared_ptr<const detail::CompiledPortrait> compiled;
};

struct ArrangementDCEL {
  ArrangementSpec spec;
  std::vector<FaceRecord> faces;
  std::vector<EdgeRecord> edges;
  std::vector<VertexRecord> vertices;
  size_t outer_face = 0;
  size_t curve_components = 0;

  size_t vertex_count() const { return vertices.size(); }
  size_t face_count() const { return faces.size(); }
  // Arcs between singular vertices; lonely circles stay closed curves.
  size_t edge_count() const {
    size_t n = 0;
    for (const auto& e : edges) n += e.closed_curve ? 0 : 1;
    return n;
  }
};

namespace detail {

struct ArcGeom {
  size_t circle = 0;
  long from = -1;  // vertex ids; -1 marks the synthetic joint
  long to = -1;
  double a_from = 0;  // ccw angular span on the circle, a_to > a_from
  double a_to = 0;
};

// Half-edge 2e runs ccw along arc e (disk on its left),
// half-edge 2e+1 runs cw (outside on its left).
inline size_t he_twin(size_t h) { return h ^ 1; }
inline bool he_ccw(size_t h) { return (h & 1) == 0; }
inline size_t he_arc(size_t h) { return h >> 1; }

inline double norm_angle(double a) {
  const double tau = 2 * std::numbers::pi;
  a = std::fmod(a, tau);
  return a < 0 ? a + tau : a;
}

struct DisjointSets {
  std::vector<size_t> parent;
  explicit DisjointSets(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Builds the full planar subdivision, face coverings, and the classified
// local portrait at every singular vertex.  Throws on degenerate input and
// on any internal consistency failure.
inline ArrangementDCEL build_dcel(const ArrangementSpec& spec) {
  {
    auto violations = genericity_check(spec);
    if (!violations.empty()) {
      std::string msg = "degenerate arrangement:";
      for (const auto& w : violations) msg += "\n  - " + w;
      throw std::invalid_argument(msg);
    }
  }
  ArrangementDCEL out;
  out.spec = spec;
  const size_t P = spec.pancakes.size();
  const size_t S = spec.section_heights.size();

  std::vector<std::array<double, 3>> c;
  for (const auto& p : spec.pancakes)
    c.push_back({detail::to_double(p.center_x),
                 detail::to_double(p.center_y),
                 detail::to_double(p.radius)});

  // Crossing points.
  struct RawVertex {
    double x, y;
    size_t i, j;
  };
  std::vector<RawVertex> raw;
  detail::DisjointSets comps(P);
  for (size_t i = 0; i < P; ++i) {
    for (size_t j = i + 1; j < P; ++j) {
      double dx = c[j][0] - c[i][0], dy = c[j][1] - c[i][1];
      double d = std::hypot(dx, dy);
      if (d > c[i][2] + c[j][2] || d < std::abs(c[i][2] - c[j][2])) continue;
      double a = (d * d + c[i][2] * c[i][2] - c[j][2] * c[j][2]) / (2 * d);
      double h = std::sqrt(std::max(c[i][2] * c[i][2] - a * a, 0.0));
      double ux = dx / d, uy = dy / d;
      for (int sgn : {+1, -1})
        raw.push_back({c[i][0] + a * ux - sgn * h * uy,
                       c[i][1] + a * uy + sgn * h * ux, i, j});
      comps.unite(i, j);
    }
  }
  {
    std::set<size_t> roots;
    for (size_t i = 0; i < P; ++i) roots.insert(comps.find(i));
    out.curve_components = roots.size();
  }

  // Arcs: per circle, split at its vertices sorted by angle; circles with
  // no crossings get one full-turn arc anchored at a synthetic joint.
  std::vector<detail::ArcGeom> arcs;
  size_t synthetic_vertices = 0;
  {
    std::vector<std::vector<std::pair<double, long>>> on_circle(P);
    for (size_t vi = 0; vi < raw.size(); ++vi) {
      const auto& rv = raw[vi];
      for (size_t ci : {rv.i, rv.j})
        on_circle[ci].push_back(
            {detail::norm_angle(
                 std::atan2(rv.y - c[ci][1], rv.x - c[ci][0])),
             static_cast<long>(vi)});
    }
    for (size_t ci = 0; ci < P; ++ci) {
      auto& pts = on_circle[ci];
      if (pts.empty()) {
        arcs.push_back({ci, -1, -1, 0.0, 2 * std::numbers::pi});
        ++synthetic_vertices;
        continue;
      }
      std::sort(pts.begin(), pts.end());
      for (size_t t = 0; t < pts.size(); ++t) {
        size_t u = (t + 1) % pts.size();
        double a0 = pts[t].first;
        double a1 = u == 0 ? pts[u].first + 2 * std::numbers::pi
                           : pts[u].first;
        arcs.push_back({ci, pts[t].second, pts[u].second, a0, a1});
      }
    }
  }

  // Outgoing half-edges per vertex, sorted ccw by tangent direction.
  auto he_origin = [&](size_t h) {
    const auto& a = arcs[detail::he_arc(h)];
    return detail::he_ccw(h) ? a.from : a.to;
  };
  auto he_head = [&](size_t h) {
    const auto& a = arcs[detail::he_arc(h)];
    return detail::he_ccw(h) ? a.to : a.from;
  };
  auto he_tangent = [&](size_t h) {
    const auto& a = arcs[detail::he_arc(h)];
    return detail::he_ccw(h)
               ? detail::norm_angle(a.a_from + std::numbers::pi / 2)
               : detail::norm_angle(a.a_to - std::numbers::pi / 2);
  };
  const size_t H = 2 * arcs.size();
  std::vector<std::vector<size_t>> outgoing(raw.size());
  std::map<long, std::vector<size_t>> synthetic_outgoing;
  for (size_t h = 0; h < H; ++h) {
    long o = he_origin(h);
    if (o >= 0)
      outgoing[static_cast<size_t>(o)].push_back(h);
    else
      synthetic_outgoing[static_cast<long>(detail::he_arc(h))].push_back(h);
  }
  auto by_tangent = [&](size_t a, size_t b) {
    return he_tangent(a) < he_tangent(b);
  };
  for (auto& list : outgoing) {
    if (list.size() != 4)
      throw std::logic_error("arrangement internal: vertex degree != 4");
    std::sort(list.begin(), list.end(), by_tangent);
  }
  for (auto& [arc, list] : synthetic_outgoing)
    std::sort(list.begin(), list.end(), by_tangent);

  auto next_he = [&](size_t h) {
    long v = he_head(h);
    const auto& list = v >= 0 ? outgoing[static_cast<size_t>(v)]
                              : synthetic_outgoing.at(
                                    static_cast<long>(detail::he_arc(h)));
    size_t t = detail::he_twin(h);
    size_t pos = 0;
    while (list[pos] != t) ++pos;
    return list[(pos + list.size() - 1) % list.size()];
  };

  // Trace boundary cycles: orbits of next_he, interiors on the left.  A
  // cycle is not yet a face: a face bounded by several curve components has
  // one boundary cycle per component, and those must be merged below.
  std::vector<size_t> orbit_of(H, SIZE_MAX);
  std::vector<std::vector<size_t>> orbit_halfedges;
  for (size_t h0 = 0; h0 < H; ++h0) {
    if (orbit_of[h0] != SIZE_MAX) continue;
    size_t id = orbit_halfedges.size();
    orbit_halfedges.emplace_back();
    size_t h = h0;
    do {
      orbit_of[h] = id;
      orbit_halfedges[id].push_back(h);
      h = next_he(h);
    } while (h != h0);
  }
  const size_t n_orbits = orbit_halfedges.size();

  // Component bookkeeping: next_he never leaves a curve component, so each
  // orbit belongs to one component and, within a single component, orbits
  // already are that component's own faces (a connected curve bounds
  // connected faces).  Across components only containment matters.
  std::vector<size_t> comp_root(P), comp_of_circle(P);
  std::vector<std::vector<size_t>> circles_of_comp;
  {
    std::map<size_t, size_t> compact;
    for (size_t i = 0; i < P; ++i) {
      comp_root[i] = comps.find(i);
      auto [it, fresh] = compact.try_emplace(comp_root[i], compact.size());
      comp_of_circle[i] = it->second;
      if (fresh) circles_of_comp.emplace_back();
      circles_of_comp[comp_of_circle[i]].push_back(i);
    }
  }
  const size_t C = circles_of_comp.size();

  // The unbounded-side cycle of each component: the outside of its
  // rightmost circle at that circle's rightmost point.
  auto rightmost_orbit = [&](const std::vector<size_t>& circles) {
    size_t best = circles.front();
    for (size_t i : circles)
      if (c[i][0] + c[i][2] > c[best][0] + c[best][2]) best = i;
    for (size_t a = 0; a < arcs.size(); ++a) {
      if (arcs[a].circle != best) continue;
      double s = detail::norm_angle(0.0 - arcs[a].a_from);
      if (s < arcs[a].a_to - arcs[a].a_from) return orbit_of[2 * a + 1];
    }
    throw std::logic_error(
        "arrangement internal: no arc hosts a rightmost point");
  };
  std::vector<size_t> comp_outer_orbit(C);
  for (size_t m = 0; m < C; ++m)
    comp_outer_orbit[m] = rightmost_orbit(circles_of_comp[m]);

  // Point location against a single component: walk a ray from p and enter
  // the component's subdivision at the first circle crossing.  The ray
  // direction is chosen to stay clear of grazing contacts and vertices, so
  // double precision cannot misstep.  Returns the orbit whose region
  // contains p (possibly the component's unbounded side).
  double scale = 1.0;
  for (const auto& circ : c)
    scale = std::max(
        {scale, std::abs(circ[0]), std::abs(circ[1]), circ[2]});
  const double slack = 1e-6 * scale;
  auto locate = [&](double px, double py, size_t m) {
    double ux = 1.0, uy = 0.0;
    for (int tries = 0;; ++tries) {
      if (tries > 256)
        throw std::logic_error(
            "arrangement internal: no clean ray direction");
      double angle = 2.399963229728653 * tries;  // low-discrepancy turns
      ux = std::cos(angle);
      uy = std::sin(angle);
      bool clean = true;
      for (size_t i : circles_of_comp[m]) {
        double wx = c[i][0] - px, wy = c[i][1] - py;
        double perp = std::abs(wx * uy - wy * ux);
        if (std::abs(perp - c[i][2]) < slack) clean = false;
      }
      for (const auto& rv : raw) {
        if (comp_of_circle[rv.i] != m) continue;
        double wx = rv.x - px, wy = rv.y - py;
        if (wx * ux + wy * uy > 0 && std::abs(wx * uy - wy * ux) < slack)
          clean = false;
      }
      if (clean) break;
    }
    double best_t = 0;
    size_t best_arc = SIZE_MAX;
    for (size_t a = 0; a < arcs.size(); ++a) {
      size_t i = arcs[a].circle;
      if (comp_of_circle[i] != m) continue;
      double wx = c[i][0] - px, wy = c[i][1] - py;
      double mid = wx * ux + wy * uy;
      double disc = c[i][2] * c[i][2] - (wx * wx + wy * wy) + mid * mid;
      if (disc <= 0) continue;
      double root = std::sqrt(disc);
      for (double t : {mid - root, mid + root}) {
        if (t <= 0 || (best_arc != SIZE_MAX && t >= best_t)) continue;
        double zx = px + t * ux, zy = py + t * uy;
        double ang = detail::norm_angle(
            std::atan2(zy - c[i][1], zx - c[i][0]));
        double s = detail::norm_angle(ang - arcs[a].a_from);
        if (s >= arcs[a].a_to - arcs[a].a_from) continue;  // other arc
        best_t = t;
        best_arc = a;
      }
    }
    if (best_arc == SIZE_MAX) return comp_outer_orbit[m];
    size_t i = arcs[best_arc].circle;
    bool inside = std::hypot(px - c[i][0], py - c[i][1]) < c[i][2];
    return orbit_of[2 * best_arc + (inside ? 0 : 1)];
  };

  // Merge cycles into faces: each component's unbounded-side cycle joins
  // the face of the innermost component strictly containing it; components
  // contained in nothing bound the one outer face together.
  detail::DisjointSets merge(n_orbits == 0 ? 1 : n_orbits);
  if (C > 1) {
    std::vector<double> repx(C), repy(C);
    for (size_t m = 0; m < C; ++m) {
      size_t best = circles_of_comp[m].front();
      for (size_t i : circles_of_comp[m])
        if (c[i][0] + c[i][2] > c[best][0] + c[best][2]) best = i;
      repx[m] = c[best][0] + c[best][2];
      repy[m] = c[best][1];
    }
    std::vector<std::vector<size_t>> located(
        C, std::vector<size_t>(C, SIZE_MAX));
    auto bounded_in = [&](size_t k, size_t m) {
      return located[k][m] != comp_outer_orbit[m];
    };
    for (size_t k = 0; k < C; ++k)
      for (size_t m = 0; m < C; ++m)
        if (m != k) located[k][m] = locate(repx[k], repy[k], m);
    std::optional<size_t> top;  // a component contained in nothing
    for (size_t k = 0; k < C; ++k) {
      std::optional<size_t> innermost;
      for (size_t m = 0; m < C; ++m) {
        if (m == k || !bounded_in(k, m)) continue;
        if (!innermost || bounded_in(m, *innermost)) innermost = m;
      }
      if (innermost) {
        merge.unite(comp_outer_orbit[k], located[k][*innermost]);
      } else if (top) {
        merge.unite(comp_outer_orbit[k], comp_outer_orbit[*top]);
      } else {
        top = k;
      }
    }
  }
  std::vector<size_t> face_of(H, SIZE_MAX);
  std::vector<std::vector<size_t>> face_halfedges;
  {
    std::map<size_t, size_t> compact;
    for (size_t o = 0; o < n_orbits; ++o) {
      auto [it, fresh] = compact.try_emplace(merge.find(o), compact.size());
      if (fresh) face_halfedges.emplace_back();
      for (size_t h : orbit_halfedges[o]) {
        face_of[h] = it->second;
        face_halfedges[it->second].push_back(h);
      }
    }
  }
  if (P == 0) face_halfedges.emplace_back();  // the bare plane
  out.faces.resize(face_halfedges.size());

  // Euler relation with synthetic joints counted.
  {
    long long V = static_cast<long long>(raw.size() + synthetic_vertices);
    long long E = static_cast<long long>(arcs.size());
    long long F = static_cast<long long>(out.faces.size());
    long long C = static_cast<long long>(out.curve_components);
    if (V - E + F != 1 + C)
      throw std::logic_error(
          "arrangement internal: V - E + F = " + std::to_string(V - E + F) +
          " but 1 + components = " + std::to_string(1 + C));
  }

  // Outer face: the right side of the globally rightmost circle point.
  if (P == 0) {
    out.outer_face = 0;
  } else {
    size_t best = 0;
    for (size_t i = 1; i < P; ++i)
      if (c[i][0] + c[i][2] > c[best][0] + c[best][2]) best = i;
    std::optional<size_t> host;
    for (size_t a = 0; a < arcs.size(); ++a) {
      if (arcs[a].circle != best) continue;
      double s = detail::norm_angle(0.0 - arcs[a].a_from);
      if (s < arcs[a].a_to - arcs[a].a_from) {
        host = a;
        break;
      }
    }
    if (!host)
      throw std::logic_error(
          "arrangement internal: no arc hosts the rightmost point");
    out.outer_face = face_of[2 * *host + 1];
  }
  out.faces[out.outer_face].outer = true;

  // Face covers: cross an edge, toggle that circle's disk.
  {
    std::vector<char> known(out.faces.size(), 0);
    known[out.outer_face] = 1;
    std::vector<size_t> queue{out.outer_face};
    while (!queue.empty()) {
      size_t f = queue.back();
      queue.pop_back();
      for (size_t h : face_halfedges[f]) {
        size_t g = face_of[detail::he_twin(h)];
        std::set<size_t> cover = out.faces[f].cover;
        size_t circle = arcs[detail::he_arc(h)].circle;
        if (cover.count(circle))
          cover.erase(circle);
        else
          cover.insert(circle);
        if (!known[g]) {
          known[g] = 1;
          out.faces[g].cover = cover;
          queue.push_back(g);
        } else if (out.faces[g].cover != cover) {
          throw std::logic_error(
              "arrangement internal: inconsistent face covers");
        }
      }
    }
    for (char k : known)
      if (!k)
        throw std::logic_error("arrangement internal: unreachable face");
    if (!out.faces[out.outer_face].cover.empty())
      throw std::logic_error("arrangement internal: covered outer face");
  }

  // Sheets over each face.
  auto upper_id = [](size_t i) { return "p" + std::to_string(i) + "+"; };
  auto lower_id = [](size_t i) { return "p" + std::to_string(i) + "-"; };
  for (auto& f : out.faces) {
    for (size_t s = 0; s < S; ++s)
      f.sheets.emplace_back("sec" + std::to_string(s),
                            FiberPos(spec.section_heights[s]));
    for (size_t i : f.cover) {
      f.sheets.emplace_back(
          upper_id(i),
          FiberPos(spec.pancakes[i].height + spec.pancakes[i].thickness));
      f.sheets.emplace_back(
          lower_id(i),
          FiberPos(spec.pancakes[i].height - spec.pancakes[i].thickness));
    }
  }

  // Edge records: disk side = left of the ccw half-edge.
  for (size_t a = 0; a < arcs.size(); ++a) {
    EdgeRecord e;
    e.circle = arcs[a].circle;
    e.face_in = face_of[2 * a];
    e.face_out = face_of[2 * a + 1];
    e.closed_curve = arcs[a].from < 0;
    out.edges.push_back(e);
  }

  // Vertex records and local portraits.
  for (size_t vi = 0; vi < raw.size(); ++vi) {
    VertexRecord vr;
    vr.circle_a = raw[vi].i;
    vr.circle_b = raw[vi].j;
    vr.x = raw[vi].x;
    vr.y = raw[vi].y;
    const auto& o = outgoing[vi];
    for (size_t k = 0; k < 4; ++k) {
      vr.face[k] = face_of[o[k]];
      size_t hb = o[(k + 1) % 4];
      vr.edge[k] = detail::he_arc(hb);
      vr.boundary_circle[k] = arcs[detail::he_arc(hb)].circle;
      vr.birth[k] =
          out.faces[face_of[hb]].cover.count(vr.boundary_circle[k]) > 0;
      // Crossing an arc-end that leaves the vertex ccw along its circle
      // always enters the disk; the cover sets must agree with that.
      if (vr.birth[k] != detail::he_ccw(hb))
        throw std::logic_error(
            "arrangement internal: cover/orientation mismatch at a vertex");
      if (face_of[detail::he_twin(hb)] != vr.face[k])
        throw std::logic_error(
            "arrangement internal: sector faces disagree across a boundary");
    }
    for (size_t k = 0; k < 4; ++k) {
      for (size_t l = k + 1; l < 4; ++l)
        if (vr.face[k] == vr.face[l])
          throw std::logic_error(
              "arrangement internal: repeated face around a vertex");
      if (vr.boundary_circle[k] == vr.boundary_circle[(k + 1) % 4])
        throw std::logic_error(
            "arrangement internal: boundary circles do not alternate");
    }

    Portrait p;
    p.sectors.resize(4);
    p.boundaries.resize(4);
    for (size_t k = 0; k < 4; ++k) {
      size_t enter = (k + 3) % 4;  // boundary crossed into this sector
      const auto& f = out.faces[vr.face[k]];
      for (const auto& [id, pos] : f.sheets) {
        size_t fold_circle = SIZE_MAX;
        for (size_t circ : {vr.circle_a, vr.circle_b})
          if (id == upper_id(circ) || id == lower_id(circ))
            fold_circle = circ;
        if (fold_circle == SIZE_MAX) {
          p.sectors[k].push_back({id, pos, pos});
          continue;
        }
        FiberPos fold_height(spec.pancakes[fold_circle].height);
        if (vr.boundary_circle[enter] == fold_circle)
          p.sectors[k].push_back({id, fold_height, pos});  // born entering
        else
          p.sectors[k].push_back({id, pos, fold_height});  // dies leaving
      }
    }
    for (size_t k = 0; k < 4; ++k) {
      size_t circ = vr.boundary_circle[k];
      for (const auto& [id, pos] : out.faces[vr.face[k]].sheets)
        if (id != upper_id(circ) && id != lower_id(circ))
          p.boundaries[k].matches.push_back({id, id, Rational(0)});
      auto pair = std::make_pair(upper_id(circ), lower_id(circ));
      if (vr.birth[k])
        p.boundaries[k].births.push_back(pair);
      else
        p.boundaries[k].deaths.push_back(pair);
    }

    vr.portrait = std::move(p);
    vr.descriptor = classify(vr.portrait);
    vr.weight = weight_of(vr.descriptor);
    vr.compiled =
        std::make_shared<const detail::CompiledPortrait>(vr.portrait);
    out.vertices.push_back(std::move(vr));
  }
  return out;
}

// The local formula over the whole arrangement.  Always 0 exactly: the
// trivial bundle has Euler number zero, and the weights of the singular
// vertices must cancel regardless of the configuration.
inline Rational euler_local_formula(const ArrangementDCEL& dcel) {
  Rational total = 0;
  for (const auto& v : dcel.vertices) total += v.weight;
  return total;
}

inline Rational euler_local_formula(const ArrangementSpec& spec) {
  return euler_local_formula(build_dcel(spec));
}

// One random section: a uniformly chosen sheet over each face, plus a fair
// counterclockwise/clockwise closure for each edge where the chosen sheets
// disagree.  A flag is stored for disagreement edges only and is read as
// "the jump closes ccw when the edge is crossed towards the disk side".
struct SectionSample {
  std::vector<std::string> face_sheet;  // by face id
  std::map<size_t, bool> edge_ccw;      // disagreement edges only
};

inline SectionSample sample_section(const ArrangementDCEL& dcel,
                                    std::uint64_t seed) {
  SeededRng rng(seed);
  SectionSample s;
  s.face_sheet.reserve(dcel.faces.size());
  for (const auto& f : dcel.faces)
    s.face_sheet.push_back(f.sheets[rng.uniform(f.sheets.size())].first);
  for (size_t e = 0; e < dcel.edges.size(); ++e)
    if (s.face_sheet[dcel.edges[e].face_in] !=
        s.face_sheet[dcel.edges[e].face_out])
      s.edge_ccw[e] = rng.coin();
  return s;
}

// Configuration degree of the sampled section at each singular vertex, in
// vertex order.  The boundary closure at a vertex reuses the edge flag;
// crossing the edge out of the disk sees the same fiber arc backwards, so
// the flag flips there.
inline std::vector<long long> index_profile(const ArrangementDCEL& dcel,
                                            const SectionSample& sample) {
  if (sample.face_sheet.size() != dcel.faces.size())
    throw std::invalid_argument("sample names " +
                                std::to_string(sample.face_sheet.size()) +
                                " faces, arrangement has " +
                                std::to_string(dcel.faces.size()));
  std::vector<long long> degrees;
  degrees.reserve(dcel.vertices.size());
  for (const auto& v : dcel.vertices) {
    SectionAssignment a;
    for (size_t k = 0; k < 4; ++k)
      a.sheet.push_back(sample.face_sheet[v.face[k]]);
    ExtensionChoice ext;
    for (size_t k = 0; k < 4; ++k) {
      size_t e = v.edge[k];
      if (sample.face_sheet[dcel.edges[e].face_in] ==
          sample.face_sheet[dcel.edges[e].face_out])
        continue;
      auto it = sample.edge_ccw.find(e);
      if (it == sample.edge_ccw.end())
        throw std::invalid_argument("sample lacks a closure flag for edge " +
                                    std::to_string(e));
      ext.ccw[k] = v.birth[k] ? it->second : !it->second;
    }
    degrees.push_back(detail::configuration_degree(*v.compiled, a, ext).degree);
  }
  return degrees;
}

// Sum of the sampled indices over all singular vertices.  Always 0: each
// edge's two lifts cancel and each fold band's drifts cancel around every
// face, so the total telescopes to the trivial bundle's Euler number.
inline long long index_sum(const ArrangementDCEL& dcel,
                           const SectionSample& sample) {
  long long total = 0;
  for (long long d : index_profile(dcel, sample)) total += d;
  return total;
}

// Deterministic generic arrangement for randomized suites.  Heights are
// placed at the centers of equal fiber bins, so the fiber-direction
// genericity is exact by construction; circle degeneracies are rejected and
// redrawn from the same stream.
inline ArrangementSpec random_arrangement(std::uint64_t seed,
                                          size_t max_pancakes = 6,
                                          size_t max_sections = 4) {
  if (max_pancakes == 0 || max_sections == 0)
    throw std::invalid_argument("random_arrangement: empty ranges");
  SeededRng rng(seed);
  const size_t P = 1 + static_cast<size_t>(rng.uniform(max_pancakes));
  const size_t S = 1 + static_cast<size_t>(rng.uniform(max_sections));
  const size_t L = P + S;
  std::vector<size_t> bins(L);
  for (size_t i = 0; i < L; ++i) bins[i] = i;
  for (size_t i = L; i > 1; --i)
    std::swap(bins[i - 1], bins[rng.uniform(i)]);
  auto bin_center = [&](size_t b) {
    return Rational(Integer(2 * b + 1), Integer(2 * L));
  };
  for (int attempt = 0; attempt < 200; ++attempt) {
    ArrangementSpec spec;
    for (size_t i = 0; i < P; ++i) {
      Pancake p;
      p.center_x = Rational(Integer(rng.uniform(161)) - 80, Integer(8));
      p.center_y = Rational(Integer(rng.uniform(161)) - 80, Integer(8));
      p.radius = Rational(Integer(4 + rng.uniform(29)), Integer(8));
      p.height = bin_center(bins[i]);
      p.thickness = Rational(Integer(1), Integer(8 * L));
      spec.pancakes.push_back(p);
    }
    for (size_t s = 0; s < S; ++s)
      spec.section_heights.push_back(bin_center(bins[P + s]));
    if (genericity_check(spec).empty()) return spec;
  }
  throw std::runtime_error(
      "random_arrangement: no generic draw in 200 attempts");
}

}  // namespace qsec
