#pragma once

// Combinatorial portraits: the intersection pattern of a quasisection with
// the fibers over a small circle around a base point.
//
// The base circle is divided into cyclically ordered sectors (the regular
// domains the circle crosses); over each sector every sheet of the
// quasisection traces a strand.  A strand's fiber position varies linearly
// (in the lifted sense) from `start` at the sector's entry boundary to `end`
// at its exit boundary, moving less than half a fiber turn.  Consecutive
// sectors are joined by boundaries (singular edges), which carry the
// combinatorial events:
//
//   - matches:   sheets continuing through the edge.  Continuity is exact:
//                the left strand's end position equals the right strand's
//                start position.  (The serialized winding slot is kept for
//                format stability and must be 0: all fiber motion lives in
//                the sector drifts.)
//   - births:    a fold edge crossed towards its sheeted side; the two new
//                strands appear at a common position (the fold height).
//   - deaths:    a fold edge crossed the other way; the two vanishing
//                strands share their final position.
//   - crossings: a self-intersection edge.  The two named left strands meet
//                the edge at equal heights (and so do their continuations),
//                so a section may switch between the two sheets there
//                without a jump.
//
// Positions are exact rationals; validation is total (every violation is
// reported, not just the first).

#include "qsec/rational.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsec {

struct Strand {
  std::string id;   // unique within its sector
  FiberPos start;   // position at the sector's entry boundary
  FiberPos end;     // position at the sector's exit boundary
};

struct Match {
  std::string left;
  std::string right;
  Rational winding = 0;  // must be 0; see header comment
};

struct Boundary {
  std::vector<Match> matches;
  std::vector<std::pair<std::string, std::string>> births;     // right ids
  std::vector<std::pair<std::string, std::string>> deaths;     // left ids
  std::vector<std::pair<std::string, std::string>> crossings;  // left ids
};

struct Portrait {
  // sectors[i] is joined to sectors[(i+1) % m] by boundaries[i].
  std::vector<std::vector<Strand>> sectors;
  std::vector<Boundary> boundaries;

  size_t sector_count() const { return sectors.size(); }
  size_t left_sector(size_t boundary) const { return boundary; }
  size_t right_sector(size_t boundary) const {
    return (boundary + 1) % sectors.size();
  }
};

// The lifted fiber displacement of a strand across its sector.
inline Rational drift(const Strand& s) {
  return centered_lift(s.end.value() - s.start.value());
}

enum class Side { L, R };

inline char side_char(Side s) { return s == Side::R ? 'R' : 'L'; }

// Discrete classification of a portrait: the vertex kind it witnesses.
struct VertexDescriptor {
  enum class Kind { TypeI, TypeII, TypeIII, Inessential };
  Kind kind = Kind::Inessential;
  int n = 0;  // TypeI
  int k = 0;  // TypeI
  int r = 0;  // TypeII / TypeIII
  Side side = Side::R;
  std::string reason;  // Inessential only

  static VertexDescriptor type_I(int n, int k) {
    VertexDescriptor d;
    d.kind = Kind::TypeI;
    d.n = n;
    d.k = k;
    return d;
  }
  static VertexDescriptor type_II(int r, Side s) {
    VertexDescriptor d;
    d.kind = Kind::TypeII;
    d.r = r;
    d.side = s;
    return d;
  }
  static VertexDescriptor type_III(int r, Side s) {
    VertexDescriptor d;
    d.kind = Kind::TypeIII;
    d.r = r;
    d.side = s;
    return d;
  }
  static VertexDescriptor inessential(std::string why) {
    VertexDescriptor d;
    d.kind = Kind::Inessential;
    d.reason = std::move(why);
    return d;
  }

  friend bool operator==(const VertexDescriptor& a, const VertexDescriptor& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::TypeI:
        return a.n == b.n && a.k == b.k;
      case Kind::TypeII:
      case Kind::TypeIII:
        return a.r == b.r && a.side == b.side;
      case Kind::Inessential:
        return true;  // reasons are informative, not identity
    }
    return false;
  }
  friend bool operator!=(const VertexDescriptor& a, const VertexDescriptor& b) {
    return !(a == b);
  }
};

inline std::string to_string(const VertexDescriptor& d) {
  std::ostringstream out;
  switch (d.kind) {
    case VertexDescriptor::Kind::TypeI:
      out << "I(" << d.n << "," << d.k << ")";
      break;
    case VertexDescriptor::Kind::TypeII:
      out << "II(" << d.r << "," << side_char(d.side) << ")";
      break;
    case VertexDescriptor::Kind::TypeIII:
      out << "III(" << d.r << "," << side_char(d.side) << ")";
      break;
    case VertexDescriptor::Kind::Inessential:
      out << "Inessential(" << d.reason << ")";
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline const Strand* find_strand(const std::vector<Strand>& sector,
                                 const std::string& id) {
  for (const auto& s : sector) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

}  // namespace detail

// Checks every structural invariant; returns all violations (empty == valid).
inline std::vector<std::string> validate(const Portrait& p) {
  std::vector<std::string> v;
  auto flaw = [&v](const std::string& msg) { v.push_back(msg); };

  const size_t m = p.sectors.size();
  if (m == 0) {
    flaw("portrait has no sectors");
    return v;
  }
  if (p.boundaries.size() != m) {
    flaw("boundary count " + std::to_string(p.boundaries.size()) +
         " does not equal sector count " + std::to_string(m));
    return v;
  }

  for (size_t i = 0; i < m; ++i) {
    if (p.sectors[i].empty()) {
      flaw("empty sector " + std::to_string(i));
    }
    std::set<std::string> seen;
    for (const auto& s : p.sectors[i]) {
      if (!seen.insert(s.id).second) {
        flaw("duplicate strand id '" + s.id + "' in sector " +
             std::to_string(i));
      }
    }
  }
  if (!v.empty()) return v;  // structural wrecks make the rest meaningless

  for (size_t i = 0; i < m; ++i) {
    for (const auto& s : p.sectors[i]) {
      if (frac(s.end.value() - s.start.value()) == Rational(1, 2)) {
        flaw("strand '" + s.id + "' in sector " + std::to_string(i) +
             " drifts exactly half a turn (ambiguous lift)");
      }
    }
  }

  size_t total_births = 0;
  size_t total_deaths = 0;

  // Per-sector sanctioned position sharing, filled while walking boundaries:
  // pairs of ids allowed to share a start (resp. end) position.
  std::vector<std::set<std::pair<std::string, std::string>>> may_share_start(m);
  std::vector<std::set<std::pair<std::string, std::string>>> may_share_end(m);
  auto sanction = [](std::set<std::pair<std::string, std::string>>& where,
                     const std::string& a, const std::string& b) {
    where.insert({std::min(a, b), std::max(a, b)});
  };

  for (size_t b = 0; b < m; ++b) {
    const auto& bd = p.boundaries[b];
    const auto& left = p.sectors[p.left_sector(b)];
    const auto& right = p.sectors[p.right_sector(b)];
    const std::string where = "boundary " + std::to_string(b);

    std::map<std::string, std::string> match_of;  // left id -> right id
    std::set<std::string> matched_left, matched_right;
    std::set<std::string> dying, born;

    for (const auto& mt : bd.matches) {
      const Strand* l = detail::find_strand(left, mt.left);
      const Strand* r = detail::find_strand(right, mt.right);
      if (!l) flaw(where + ": match source '" + mt.left + "' not in left sector");
      if (!r) flaw(where + ": match target '" + mt.right + "' not in right sector");
      if (!matched_left.insert(mt.left).second)
        flaw(where + ": strand '" + mt.left + "' matched twice (left)");
      if (!matched_right.insert(mt.right).second)
        flaw(where + ": strand '" + mt.right + "' matched twice (right)");
      if (l && r) {
        match_of[mt.left] = mt.right;
        if (mt.winding != 0)
          flaw(where + ": match " + mt.left + "->" + mt.right +
               " has nonzero winding '" + to_string(mt.winding) +
               "' (sheet motion belongs to sector drifts)");
        if (l->end != r->start)
          flaw(where + ": match " + mt.left + "->" + mt.right +
               " is discontinuous (" + to_string(l->end) + " vs " +
               to_string(r->start) + ")");
      }
    }

    auto check_pair = [&](const std::pair<std::string, std::string>& pr,
                          const std::vector<Strand>& sector, bool at_start,
                          const std::set<std::string>& already,
                          std::set<std::string>& members,
                          const char* what) {
      const Strand* a = detail::find_strand(sector, pr.first);
      const Strand* c = detail::find_strand(sector, pr.second);
      if (pr.first == pr.second)
        flaw(where + ": " + what + " pair repeats strand '" + pr.first + "'");
      if (!a) flaw(where + ": " + what + " strand '" + pr.first + "' missing");
      if (!c) flaw(where + ": " + what + " strand '" + pr.second + "' missing");
      for (const auto& id : {pr.first, pr.second}) {
        if (already.count(id))
          flaw(where + ": strand '" + id + "' both matched and in a " + what +
               " pair");
        if (!members.insert(id).second)
          flaw(where + ": strand '" + id + "' in two " + std::string(what) +
               " pairs");
      }
      if (a && c) {
        FiberPos pa = at_start ? a->start : a->end;
        FiberPos pc = at_start ? c->start : c->end;
        if (pa != pc)
          flaw(where + ": " + what + " pair (" + pr.first + "," + pr.second +
               ") does not share a position (" + to_string(pa) + " vs " +
               to_string(pc) + ")");
      }
    };

    for (const auto& pr : bd.births) {
      check_pair(pr, right, /*at_start=*/true, matched_right, born, "birth");
      sanction(may_share_start[p.right_sector(b)], pr.first, pr.second);
    }
    for (const auto& pr : bd.deaths) {
      check_pair(pr, left, /*at_start=*/false, matched_left, dying, "death");
      sanction(may_share_end[p.left_sector(b)], pr.first, pr.second);
    }
    total_births += bd.births.size();
    total_deaths += bd.deaths.size();

    // Left/right strand sets must be exactly partitioned.
    for (const auto& s : left) {
      if (!matched_left.count(s.id) && !dying.count(s.id))
        flaw(where + ": left strand '" + s.id + "' neither matched nor dying");
    }
    for (const auto& s : right) {
      if (!matched_right.count(s.id) && !born.count(s.id))
        flaw(where + ": right strand '" + s.id + "' neither matched nor born");
    }

    // Crossings: both members matched, coincident on both sides of the edge.
    std::set<std::string> crossing_members;
    for (const auto& cr : bd.crossings) {
      if (cr.first == cr.second) {
        flaw(where + ": crossing pair repeats strand '" + cr.first + "'");
        continue;
      }
      bool ok = true;
      for (const auto& id : {cr.first, cr.second}) {
        if (!match_of.count(id)) {
          flaw(where + ": crossing strand '" + id +
               "' is not a matched left strand");
          ok = false;
        }
        if (!crossing_members.insert(id).second) {
          flaw(where + ": strand '" + id + "' in two crossing pairs");
          ok = false;
        }
      }
      if (!ok) continue;
      const Strand* l1 = detail::find_strand(left, cr.first);
      const Strand* l2 = detail::find_strand(left, cr.second);
      const Strand* r1 = detail::find_strand(right, match_of[cr.first]);
      const Strand* r2 = detail::find_strand(right, match_of[cr.second]);
      if (l1->end != l2->end)
        flaw(where + ": crossing pair (" + cr.first + "," + cr.second +
             ") does not meet the edge at one height");
      if (r1->start != r2->start)
        flaw(where + ": crossing pair (" + cr.first + "," + cr.second +
             ") continuations do not leave the edge at one height");
      sanction(may_share_end[p.left_sector(b)], cr.first, cr.second);
      sanction(may_share_start[p.right_sector(b)], match_of[cr.first],
               match_of[cr.second]);
    }

    // Every genuinely discontinuous (left, right) pair must have a nonzero
    // fiber gap, otherwise the jump direction is ill-defined.
    for (const auto& ls : left) {
      std::set<std::string> continuous;
      if (match_of.count(ls.id)) continuous.insert(match_of[ls.id]);
      for (const auto& cr : bd.crossings) {
        if (cr.first == ls.id && match_of.count(cr.second))
          continuous.insert(match_of.at(cr.second));
        if (cr.second == ls.id && match_of.count(cr.first))
          continuous.insert(match_of.at(cr.first));
      }
      for (const auto& rs : right) {
        if (continuous.count(rs.id)) continue;
        if (ls.end == rs.start)
          flaw(where + ": zero-gap jump from '" + ls.id + "' to '" + rs.id +
               "' (degenerate portrait)");
      }
    }
  }

  if (total_births != total_deaths) {
    flaw("total births " + std::to_string(total_births) +
         " != total deaths " + std::to_string(total_deaths));
  }

  // Within-sector geometry: distinct positions except where sanctioned, and
  // no two strand paths crossing in the sector interior.
  for (size_t i = 0; i < m; ++i) {
    const auto& sec = p.sectors[i];
    for (size_t a = 0; a < sec.size(); ++a) {
      for (size_t c = a + 1; c < sec.size(); ++c) {
        auto key = std::make_pair(std::min(sec[a].id, sec[c].id),
                                  std::max(sec[a].id, sec[c].id));
        if (sec[a].start == sec[c].start && !may_share_start[i].count(key))
          flaw("sector " + std::to_string(i) + ": strands '" + sec[a].id +
               "' and '" + sec[c].id + "' share start position " +
               to_string(sec[a].start) + " without a shared birth/crossing");
        if (sec[a].end == sec[c].end && !may_share_end[i].count(key))
          flaw("sector " + std::to_string(i) + ": strands '" + sec[a].id +
               "' and '" + sec[c].id + "' share end position " +
               to_string(sec[a].end) + " without a shared death/crossing");
      }
    }
    // Interior crossing: ordered pair (a, c) where c overtakes a ccw.
    for (size_t a = 0; a < sec.size(); ++a) {
      for (size_t c = 0; c < sec.size(); ++c) {
        if (a == c) continue;
        Rational g0 = ccw_distance(sec[a].start, sec[c].start);
        Rational delta = drift(sec[c]) - drift(sec[a]);
        if (delta > 0 && g0 + delta > 1)
          flaw("sector " + std::to_string(i) + ": strand '" + sec[c].id +
               "' crosses '" + sec[a].id + "' inside the sector");
      }
    }
  }

  return v;
}

inline bool is_valid(const Portrait& p) { return validate(p).empty(); }

// Throws std::invalid_argument listing all violations when p is invalid.
inline void require_valid(const Portrait& p, const std::string& context) {
  auto flaws = validate(p);
  if (flaws.empty()) return;
  std::ostringstream out;
  out << context << ": invalid portrait:";
  for (const auto& f : flaws) out << "\n  - " << f;
  throw std::invalid_argument(out.str());
}

// ---------------------------------------------------------------------------
// Elementary transforms

// Rotates every fiber position by delta; a fiberwise rotation of the torus.
inline Portrait rotate_fiber(const Portrait& p, const Rational& delta) {
  Portrait q = p;
  for (auto& sec : q.sectors) {
    for (auto& s : sec) {
      s.start = s.start.rotated(delta);
      s.end = s.end.rotated(delta);
    }
  }
  return q;
}

// Re-bases the cyclic sector indexing so old sector `shift` becomes sector 0.
inline Portrait rotate_sectors(const Portrait& p, size_t shift) {
  const size_t m = p.sectors.size();
  Portrait q;
  q.sectors.resize(m);
  q.boundaries.resize(m);
  for (size_t i = 0; i < m; ++i) {
    q.sectors[i] = p.sectors[(i + shift) % m];
    q.boundaries[i] = p.boundaries[(i + shift) % m];
  }
  return q;
}

// ---------------------------------------------------------------------------
// JSON serialization
//
// {"sectors":[[{"id":"a","start":"1/4","end":"1/4"},...],...],
//  "boundaries":[{"matches":[["a","a","0"]],"births":[["x","y"]],
//                 "deaths":[],"crossings":[]},...]}
// A strand may use "pos" as shorthand for equal start and end; a match may
// omit the winding slot (defaults to 0); "crossings" may be absent.

inline nlohmann::json to_json(const Portrait& p) {
  nlohmann::json j;
  j["sectors"] = nlohmann::json::array();
  for (const auto& sec : p.sectors) {
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : sec) {
      js.push_back({{"id", s.id},
                    {"start", to_string(s.start)},
                    {"end", to_string(s.end)}});
    }
    j["sectors"].push_back(std::move(js));
  }
  j["boundaries"] = nlohmann::json::array();
  for (const auto& b : p.boundaries) {
    nlohmann::json jb;
    jb["matches"] = nlohmann::json::array();
    for (const auto& mt : b.matches)
      jb["matches"].push_back({mt.left, mt.right, to_string(mt.winding)});
    auto pairs = [](const std::vector<std::pair<std::string, std::string>>& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& pr : v) arr.push_back({pr.first, pr.second});
      return arr;
    };
    jb["births"] = pairs(b.births);
    jb["deaths"] = pairs(b.deaths);
    jb["crossings"] = pairs(b.crossings);
    j["boundaries"].push_back(std::move(jb));
  }
  return j;
}

inline Portrait portrait_from_json(const nlohmann::json& j) {
  Portrait p;
  if (!j.contains("sectors") || !j.contains("boundaries"))
    throw std::invalid_argument("portrait JSON needs 'sectors' and 'boundaries'");
  for (const auto& js : j.at("sectors")) {
    std::vector<Strand> sec;
    for (const auto& s : js) {
      Strand st;
      st.id = s.at("id").get<std::string>();
      if (s.contains("pos")) {
        st.start = FiberPos(parse_rational(s.at("pos").get<std::string>()));
        st.end = st.start;
      } else {
        st.start = FiberPos(parse_rational(s.at("start").get<std::string>()));
        st.end = FiberPos(parse_rational(s.at("end").get<std::string>()));
      }
      sec.push_back(std::move(st));
    }
    p.sectors.push_back(std::move(sec));
  }
  for (const auto& jb : j.at("boundaries")) {
    Boundary b;
    for (const auto& mt : jb.value("matches", nlohmann::json::array())) {
      Match x;
      x.left = mt.at(0).get<std::string>();
      x.right = mt.at(1).get<std::string>();
      x.winding = mt.size() > 2 ? parse_rational(mt.at(2).get<std::string>())
                                : Rational(0);
      b.matches.push_back(std::move(x));
    }
    auto pairs = [](const nlohmann::json& arr) {
      std::vector<std::pair<std::string, std::string>> out;
      for (const auto& pr : arr)
        out.emplace_back(pr.at(0).get<std::string>(),
                         pr.at(1).get<std::string>());
      return out;
    };
    b.births = pairs(jb.value("births", nlohmann::json::array()));
    b.deaths = pairs(jb.value("deaths", nlohmann::json::array()));
    b.crossings = pairs(jb.value("crossings", nlohmann::json::array()));
    p.boundaries.push_back(std::move(b));
  }
  return p;
}

}  // namespace qsec
