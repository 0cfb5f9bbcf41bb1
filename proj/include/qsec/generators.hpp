#pragma once

// Canonical local portraits for each vertex kind, plus the two structural
// transforms (mirror image, adding a simple circle).
//
// Conventions used throughout:
//   - fold pairs are born/die at the fold height, separating linearly;
//   - every match is positionally continuous with winding 0;
//   - simple circles sit at constant heights well clear of the action band;
//   - the mirror transform reverses the base orientation: sector order and
//     every boundary are reversed, strand start/end swap, births and deaths
//     trade places, and crossings are renamed through the match map.

#include "qsec/portrait.hpp"

#include <stdexcept>
#include <string>

namespace qsec {

// ---------------------------------------------------------------------------
// Mirror: the same local picture seen with the base circle run backwards.

inline Portrait mirror(const Portrait& p) {
  const size_t m = p.sectors.size();
  if (m == 0) throw std::invalid_argument("mirror: portrait has no sectors");
  Portrait q;
  q.sectors.resize(m);
  q.boundaries.resize(m);
  for (size_t i = 0; i < m; ++i) {
    q.sectors[i] = p.sectors[(m - i) % m];
    for (auto& s : q.sectors[i]) std::swap(s.start, s.end);
  }
  for (size_t i = 0; i < m; ++i) {
    const Boundary& ob = p.boundaries[(m - 1 - i) % m];
    Boundary nb;
    std::map<std::string, std::string> match_of;
    for (const auto& mt : ob.matches) {
      match_of[mt.left] = mt.right;
      nb.matches.push_back({mt.right, mt.left, -mt.winding});
    }
    nb.births = ob.deaths;
    nb.deaths = ob.births;
    for (const auto& cr : ob.crossings) {
      auto a = match_of.find(cr.first);
      auto b = match_of.find(cr.second);
      if (a == match_of.end() || b == match_of.end())
        throw std::invalid_argument(
            "mirror: crossing names an unmatched strand");
      nb.crossings.emplace_back(a->second, b->second);
    }
    q.boundaries[i] = std::move(nb);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Adding a simple circle at a constant height.

inline Portrait add_simple_circle(const Portrait& p, const FiberPos& pos) {
  Portrait q = p;
  std::set<std::string> used;
  for (const auto& sec : q.sectors)
    for (const auto& s : sec) used.insert(s.id);
  std::string id;
  for (int t = 1;; ++t) {
    id = "s" + std::to_string(t);
    if (!used.count(id)) break;
  }
  for (auto& sec : q.sectors) sec.push_back({id, pos, pos});
  for (auto& b : q.boundaries) b.matches.push_back({id, id, 0});
  auto flaws = validate(q);
  if (!flaws.empty()) {
    std::ostringstream out;
    out << "add_simple_circle: height " << to_string(pos)
        << " collides with the existing portrait:";
    for (const auto& f : flaws) out << "\n  - " << f;
    throw std::invalid_argument(out.str());
  }
  return q;
}

namespace detail {

// Simple circles at heights i/(r+1), i = 1..r, ids "s1".."sr".
inline void seed_simples(Portrait& p, int r) {
  for (int i = 1; i <= r; ++i) {
    FiberPos pos{Rational(i, r + 1)};
    std::string id = "s" + std::to_string(i);
    for (auto& sec : p.sectors) sec.push_back({id, pos, pos});
    for (auto& b : p.boundaries) b.matches.push_back({id, id, 0});
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Type I: two disjoint fold arcs (heights 0 and beta), n circles between
// them on one side, k on the other.  Four sectors.

inline Portrait type_I(int n, int k) {
  if (n < 0 || k < 0 || n + k < 1)
    throw std::invalid_argument("type_I: need n,k >= 0 and n+k >= 1");
  const int N = n + k + 2;
  const Rational eps(1, 4 * N);
  const FiberPos zero{Rational(0)};
  const FiberPos beta{Rational(n + 1, N)};

  Portrait p;
  p.sectors.resize(4);
  p.boundaries.resize(4);

  // Fold pair a at height 0: present in sectors 1 and 2.
  p.sectors[1].push_back({"a-", zero, zero.rotated(-eps)});
  p.sectors[1].push_back({"a+", zero, zero.rotated(eps)});
  p.sectors[2].push_back({"a-", zero.rotated(-eps), zero});
  p.sectors[2].push_back({"a+", zero.rotated(eps), zero});
  // Fold pair b at height beta: present in sectors 2 and 3.
  p.sectors[2].push_back({"b-", beta, beta.rotated(-eps)});
  p.sectors[2].push_back({"b+", beta, beta.rotated(eps)});
  p.sectors[3].push_back({"b-", beta.rotated(-eps), beta});
  p.sectors[3].push_back({"b+", beta.rotated(eps), beta});

  p.boundaries[0].births = {{"a-", "a+"}};
  p.boundaries[1].matches = {{"a-", "a-", 0}, {"a+", "a+", 0}};
  p.boundaries[1].births = {{"b-", "b+"}};
  p.boundaries[2].matches = {{"b-", "b-", 0}, {"b+", "b+", 0}};
  p.boundaries[2].deaths = {{"a-", "a+"}};
  p.boundaries[3].deaths = {{"b-", "b+"}};

  // n circles in the arc (0, beta), k in (beta, 1); height (n+1)/N is beta.
  int idx = 0;
  for (int i = 1; i <= n + k + 1; ++i) {
    if (i == n + 1) continue;
    FiberPos pos{Rational(i, N)};
    std::string id = "s" + std::to_string(++idx);
    for (auto& sec : p.sectors) sec.push_back({id, pos, pos});
    for (auto& b : p.boundaries) b.matches.push_back({id, id, 0});
  }
  return p;
}

// ---------------------------------------------------------------------------
// Type II: a pleat point, r simple circles elsewhere.  Two sectors; the
// canonical left-handed pleat is built directly, the right-handed one is its
// mirror image.

inline Portrait type_II(int r, Side side) {
  if (r < 0) throw std::invalid_argument("type_II: need r >= 0");
  // The through sheet sweeps the whole band of width 4*step; keep that
  // strictly under half a turn so every drift lift is unambiguous.
  const Rational step(1, 10 * (r + 1));
  const FiberPos q{Rational(0)};

  Portrait p;
  p.sectors.resize(2);
  p.boundaries.resize(2);

  p.sectors[0].push_back({"P", q.rotated(2 * step), q.rotated(-2 * step)});
  p.sectors[1].push_back({"X0", q.rotated(-2 * step), q.rotated(-step)});
  p.sectors[1].push_back({"X1", q.rotated(step), q.rotated(-step)});
  p.sectors[1].push_back({"X2", q.rotated(step), q.rotated(2 * step)});

  p.boundaries[0].matches = {{"P", "X0", 0}};
  p.boundaries[0].births = {{"X1", "X2"}};
  p.boundaries[1].matches = {{"X2", "P", 0}};
  p.boundaries[1].deaths = {{"X0", "X1"}};

  detail::seed_simples(p, r);
  return side == Side::L ? p : mirror(p);
}

// ---------------------------------------------------------------------------
// Type III: a fold arc through a self-intersection line, crossed twice.
// Four sectors; the right-handed vertex is built directly.

inline Portrait type_III(int r, Side side) {
  if (r < 0) throw std::invalid_argument("type_III: need r >= 0");
  const Rational s(1, 16 * (r + 1));
  const FiberPos u{Rational(0)};
  auto at = [&](int mul) { return u.rotated(mul * s); };

  Portrait p;
  p.sectors.resize(4);
  p.boundaries.resize(4);

  p.sectors[0].push_back({"X", at(1), at(-1)});
  p.sectors[1].push_back({"X", at(-1), at(-1)});
  p.sectors[1].push_back({"f-", at(-2), at(-3)});
  p.sectors[1].push_back({"f+", at(-2), at(-1)});
  p.sectors[2].push_back({"X", at(-1), at(1)});
  p.sectors[2].push_back({"f-", at(-3), at(1)});
  p.sectors[2].push_back({"f+", at(-1), at(3)});
  p.sectors[3].push_back({"X", at(1), at(1)});
  p.sectors[3].push_back({"f-", at(1), at(2)});
  p.sectors[3].push_back({"f+", at(3), at(2)});

  p.boundaries[0].matches = {{"X", "X", 0}};
  p.boundaries[0].births = {{"f-", "f+"}};
  p.boundaries[1].matches = {{"X", "X", 0}, {"f-", "f-", 0}, {"f+", "f+", 0}};
  p.boundaries[1].crossings = {{"X", "f+"}};
  p.boundaries[2].matches = {{"X", "X", 0}, {"f-", "f-", 0}, {"f+", "f+", 0}};
  p.boundaries[2].crossings = {{"X", "f-"}};
  p.boundaries[3].matches = {{"X", "X", 0}};
  p.boundaries[3].deaths = {{"f-", "f+"}};

  detail::seed_simples(p, r);
  return side == Side::R ? p : mirror(p);
}

// ---------------------------------------------------------------------------
// Whitney umbrella point on a line-symmetric quasisection: a fold arc whose
// two sheets swap through one self-intersection edge.  Weightless by
// symmetry; needs r >= 1 spectator circles so no sector is empty.

inline Portrait whitney(int r) {
  if (r < 1) throw std::invalid_argument("whitney: need r >= 1");
  const Rational mu(1, 8 * (r + 1));
  const FiberPos zero{Rational(0)};
  const FiberPos top{mu};

  Portrait p;
  p.sectors.resize(3);
  p.boundaries.resize(3);

  p.sectors[1].push_back({"A", zero, top});
  p.sectors[1].push_back({"B", zero, top});
  p.sectors[2].push_back({"A", top, zero});
  p.sectors[2].push_back({"B", top, zero});

  p.boundaries[0].births = {{"A", "B"}};
  p.boundaries[1].matches = {{"A", "A", 0}, {"B", "B", 0}};
  p.boundaries[1].crossings = {{"A", "B"}};
  p.boundaries[2].deaths = {{"A", "B"}};

  detail::seed_simples(p, r);
  return p;
}

}  // namespace qsec
