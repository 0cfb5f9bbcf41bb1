#pragma once

// Combinatorial recognition of a portrait's vertex kind.  The decision uses
// only structure that survives fiber rotation, re-basing of the sector
// indexing, and the addition of simple circles:
//
//   - the cyclic pattern of singular events (birth B, death D, crossing X),
//   - how the event strands chain through the matches,
//   - the cyclic arrangement of spectator circles relative to the fold
//     heights (for type I),
//   - the sign of the expected index (for the handedness of types II/III).
//
// Unrecognized but valid portraits classify as Inessential with a reason.

#include "qsec/oracle.hpp"
#include "qsec/portrait.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qsec {

namespace detail {

struct BoundaryView {
  char event = 'R';  // 'B', 'D', 'X', or 'R' for regular
  std::map<std::string, std::string> match_of;
};

// Ids of one unordered pair as a set for order-free comparison.
inline std::set<std::string> pair_set(
    const std::pair<std::string, std::string>& pr) {
  return {pr.first, pr.second};
}

}  // namespace detail

inline VertexDescriptor classify(const Portrait& p) {
  require_valid(p, "classify");
  const size_t m = p.sector_count();

  std::vector<detail::BoundaryView> view(m);
  size_t event_boundaries = 0;
  for (size_t b = 0; b < m; ++b) {
    const auto& bd = p.boundaries[b];
    size_t events = bd.births.size() + bd.deaths.size() + bd.crossings.size();
    if (events > 1)
      return VertexDescriptor::inessential(
          "multiple singular events on one boundary");
    if (events == 1) {
      ++event_boundaries;
      view[b].event = !bd.births.empty()    ? 'B'
                      : !bd.deaths.empty()  ? 'D'
                                            : 'X';
    }
    for (const auto& mt : bd.matches) view[b].match_of[mt.left] = mt.right;
  }
  if (event_boundaries == 0)
    return VertexDescriptor::inessential("regular point: no singular events");

  // Strands that belong to simple circles: orbits of length m through the
  // matches, never involved in any birth, death, or crossing.
  std::set<std::pair<size_t, std::string>> event_strands;
  for (size_t b = 0; b < m; ++b) {
    for (const auto& pr : p.boundaries[b].births) {
      event_strands.insert({p.right_sector(b), pr.first});
      event_strands.insert({p.right_sector(b), pr.second});
    }
    for (const auto& pr : p.boundaries[b].deaths) {
      event_strands.insert({p.left_sector(b), pr.first});
      event_strands.insert({p.left_sector(b), pr.second});
    }
    for (const auto& pr : p.boundaries[b].crossings) {
      event_strands.insert({p.left_sector(b), pr.first});
      event_strands.insert({p.left_sector(b), pr.second});
    }
  }
  std::set<std::pair<size_t, std::string>> simple_strands;
  size_t simple_circles = 0;
  {
    std::set<std::pair<size_t, std::string>> visited;
    for (size_t i = 0; i < m; ++i) {
      for (const auto& s : p.sectors[i]) {
        std::pair<size_t, std::string> here{i, s.id};
        if (visited.count(here) || event_strands.count(here)) continue;
        // Walk the match orbit for exactly m steps.
        std::vector<std::pair<size_t, std::string>> orbit;
        auto cur = here;
        bool simple = true;
        for (size_t step = 0; step < m; ++step) {
          if (event_strands.count(cur)) {
            simple = false;
            break;
          }
          orbit.push_back(cur);
          auto it = view[cur.first].match_of.find(cur.second);
          if (it == view[cur.first].match_of.end()) {
            simple = false;
            break;
          }
          cur = {(cur.first + 1) % m, it->second};
        }
        if (simple && cur == here) {
          ++simple_circles;
          for (const auto& o : orbit) {
            visited.insert(o);
            simple_strands.insert(o);
          }
        } else {
          visited.insert(here);
        }
      }
    }
  }

  // Everything that is not a spectator circle must belong to the vertex
  // figure itself, whose strand count per sector pattern is fixed.
  auto figure_accounts_for_rest = [&](size_t figure_strands) {
    size_t total = 0;
    for (const auto& sec : p.sectors) total += sec.size();
    return total == simple_strands.size() + figure_strands;
  };
  auto image_of = [&](size_t b, const std::set<std::string>& ids)
      -> std::optional<std::set<std::string>> {
    std::set<std::string> out;
    for (const auto& id : ids) {
      auto it = view[b].match_of.find(id);
      if (it == view[b].match_of.end()) return std::nullopt;
      out.insert(it->second);
    }
    return out;
  };
  auto handed = [&](int r, bool is_pleat) {
    Rational e = expected_index_shortcut(p);
    if (e == 0)
      return VertexDescriptor::inessential(
          "zero expected index despite a singular shape");
    return is_pleat ? VertexDescriptor::type_II(r, e > 0 ? Side::R : Side::L)
                    : VertexDescriptor::type_III(r, e > 0 ? Side::R : Side::L);
  };

  std::string pattern(m, 'R');
  for (size_t b = 0; b < m; ++b) pattern[b] = view[b].event;
  auto unrecognized = [&]() {
    return VertexDescriptor::inessential("unrecognized event pattern '" +
                                         pattern + "'");
  };

  // ---- Pleat: two sectors, one fold edge crossed with a tangency --------
  if (m == 2 && event_boundaries == 2) {
    size_t bb = pattern[0] == 'B' ? 0 : 1;
    size_t db = 1 - bb;
    if (pattern[bb] != 'B' || pattern[db] != 'D') return unrecognized();
    auto born = detail::pair_set(p.boundaries[bb].births[0]);
    auto dying = detail::pair_set(p.boundaries[db].deaths[0]);
    std::set<std::string> shared;
    std::set_intersection(born.begin(), born.end(), dying.begin(), dying.end(),
                          std::inserter(shared, shared.begin()));
    if (shared.size() == 2)
      return VertexDescriptor::inessential(
          "plain fold arc: the born pair dies unchanged");
    if (shared.size() != 1) return unrecognized();
    // born = {X1, X2}, dying = {X0, X1}; the through sheet P is matched
    // into X0 and receives X2 back.
    std::string x1 = *shared.begin();
    std::string x2, x0;
    for (const auto& id : born)
      if (id != x1) x2 = id;
    for (const auto& id : dying)
      if (id != x1) x0 = id;
    std::string entry_source;  // P, matched to X0 across the birth boundary
    for (const auto& kv : view[bb].match_of)
      if (kv.second == x0) entry_source = kv.first;
    if (entry_source.empty()) return unrecognized();
    auto exit_it = view[db].match_of.find(x2);
    if (exit_it == view[db].match_of.end() ||
        exit_it->second != entry_source)
      return unrecognized();
    if (!figure_accounts_for_rest(4)) return unrecognized();
    return handed(static_cast<int>(simple_circles), /*is_pleat=*/true);
  }

  // ---- Line-symmetric umbrella: birth, crossing, death on one pair ------
  if (m == 3 && event_boundaries == 3) {
    size_t bb = pattern.find('B');
    if (bb == std::string::npos) return unrecognized();
    size_t xb = (bb + 1) % 3, db = (bb + 2) % 3;
    if (pattern[xb] != 'X' || pattern[db] != 'D') return unrecognized();
    auto born = detail::pair_set(p.boundaries[bb].births[0]);
    auto crossing = detail::pair_set(p.boundaries[xb].crossings[0]);
    if (crossing != born) return unrecognized();
    auto img = image_of(xb, born);
    if (!img || *img != detail::pair_set(p.boundaries[db].deaths[0]))
      return unrecognized();
    if (!figure_accounts_for_rest(4)) return unrecognized();
    return VertexDescriptor::inessential(
        "line-symmetric umbrella point (the two sheets swap; zero weight)");
  }

  if (m != 4 || event_boundaries != 4) return unrecognized();

  // ---- Type I: two interleaved fold arcs (B B D D, cyclically) -----------
  if (std::count(pattern.begin(), pattern.end(), 'B') == 2) {
    size_t bb = SIZE_MAX;  // the birth whose cyclic successor is the other
    for (size_t b = 0; b < 4; ++b)
      if (pattern[b] == 'B' && pattern[(b + 1) % 4] == 'B') bb = b;
    if (bb == SIZE_MAX || pattern[(bb + 2) % 4] != 'D' ||
        pattern[(bb + 3) % 4] != 'D')
      return unrecognized();
    size_t b2 = (bb + 1) % 4, d1 = (bb + 2) % 4, d2 = (bb + 3) % 4;
    auto pair_a = detail::pair_set(p.boundaries[bb].births[0]);
    auto pair_b = detail::pair_set(p.boundaries[b2].births[0]);
    auto img_a = image_of(b2, pair_a);
    if (!img_a || *img_a != detail::pair_set(p.boundaries[d1].deaths[0]))
      return VertexDescriptor::inessential(
          "nested fold arcs: no second sheet between the folds");
    // pair_b is born right of b2, so it first crosses boundary d1.
    auto img_b = image_of(d1, pair_b);
    if (!img_b || *img_b != detail::pair_set(p.boundaries[d2].deaths[0]))
      return unrecognized();
    if (!figure_accounts_for_rest(8)) return unrecognized();

    // Heights, read in the sector where both fold pairs are present
    // (right of b2).  pair_a's strands have separated; the fold height of
    // a is the midpoint of the gap between them that contains nothing.
    size_t snap = p.right_sector(b2);
    auto at_start = [&](const std::string& id) -> FiberPos {
      return detail::find_strand(p.sectors[snap], id)->start;
    };
    auto a_imgs = *image_of(b2, pair_a);
    std::vector<FiberPos> apos;
    for (const auto& id : a_imgs) apos.push_back(at_start(id));
    FiberPos hb = at_start(*pair_b.begin());  // birth pair still coincides
    std::vector<FiberPos> others;  // everything except pair_a's strands
    for (const auto& s : p.sectors[snap])
      if (!a_imgs.count(s.id)) others.push_back(s.start);
    auto arc_empty = [&](const FiberPos& from, const FiberPos& to) {
      for (const auto& q : others)
        if (cyclic_open_contains(from, to, q)) return false;
      return true;
    };
    FiberPos cut = apos[0];
    if (arc_empty(apos[0], apos[1]))
      cut = apos[0].rotated(ccw_distance(apos[0], apos[1]) / 2);
    else if (arc_empty(apos[1], apos[0]))
      cut = apos[1].rotated(ccw_distance(apos[1], apos[0]) / 2);
    else
      return VertexDescriptor::inessential(
          "fold band of the first arc is not free");
    int n = 0, k = 0;
    for (const auto& pr : simple_strands) {
      if (pr.first != snap) continue;
      FiberPos q = detail::find_strand(p.sectors[snap], pr.second)->start;
      if (cyclic_open_contains(cut, hb, q))
        ++n;
      else
        ++k;
    }
    return VertexDescriptor::type_I(n, k);
  }

  // ---- Type III: fold arc through a double line (B X X D) ----------------
  size_t bb = pattern.find('B');
  if (bb == std::string::npos) return unrecognized();
  if (pattern[(bb + 1) % 4] != 'X' || pattern[(bb + 2) % 4] != 'X' ||
      pattern[(bb + 3) % 4] != 'D')
    return unrecognized();
  size_t x1b = (bb + 1) % 4, x2b = (bb + 2) % 4, db = (bb + 3) % 4;
  auto born = detail::pair_set(p.boundaries[bb].births[0]);
  auto cross1 = detail::pair_set(p.boundaries[x1b].crossings[0]);
  std::set<std::string> fold_in_cross1;
  std::set_intersection(cross1.begin(), cross1.end(), born.begin(), born.end(),
                        std::inserter(fold_in_cross1,
                                      fold_in_cross1.begin()));
  if (fold_in_cross1.size() != 1) return unrecognized();
  std::string through;  // the double-line sheet at the first crossing
  for (const auto& id : cross1)
    if (!fold_in_cross1.count(id)) through = id;
  std::string other_fold;  // the born strand missing the first crossing
  for (const auto& id : born)
    if (!fold_in_cross1.count(id)) other_fold = id;

  auto through_img = image_of(x1b, {through});
  auto other_img = image_of(x1b, {other_fold});
  if (!through_img || !other_img) return unrecognized();
  std::set<std::string> want2 = {*through_img->begin(), *other_img->begin()};
  if (detail::pair_set(p.boundaries[x2b].crossings[0]) != want2)
    return unrecognized();
  auto fold_img = image_of(x2b, *image_of(x1b, born));
  if (!fold_img || *fold_img != detail::pair_set(p.boundaries[db].deaths[0]))
    return unrecognized();
  // The double-line sheet must close into a circle around all four sectors.
  auto t2 = image_of(x2b, *through_img);
  auto t3 = t2 ? image_of(db, *t2) : std::nullopt;
  auto t4 = t3 ? image_of(bb, *t3) : std::nullopt;
  if (!t4 || *t4->begin() != through) return unrecognized();
  if (!figure_accounts_for_rest(10)) return unrecognized();
  return handed(static_cast<int>(simple_circles), /*is_pleat=*/false);
}

}  // namespace qsec
