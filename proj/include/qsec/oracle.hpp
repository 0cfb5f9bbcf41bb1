#pragma once

// The measure-theoretic oracle: the expected algebraic intersection index of
// a random section with the quasisection described by a portrait.
//
// A random section is built in two independent stages:
//   1. over each sector, pick one strand uniformly (a SectionAssignment);
//   2. at each boundary where the chosen strands do not continue into each
//      other, the section must jump; it closes the gap counterclockwise or
//      clockwise with probability 1/2 each (an ExtensionChoice).
// The resulting loop's fiber degree is the configuration degree; the index
// contributed by the vertex is its expectation.  Everything here is exact
// rational arithmetic over a complete enumeration.
//
// Jump lifts: a jump from left strand end e to right strand start s adds
// ccw_distance(e, s) when closed counterclockwise, ccw_distance(e, s) - 1
// when closed clockwise.  Matched continuations and crossing switches (the
// two sheets of a crossing meet the edge at one height) contribute zero.

#include "qsec/portrait.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsec {

struct SectionAssignment {
  std::vector<std::string> sheet;  // chosen strand id per sector
};

struct ExtensionChoice {
  // boundary index -> true when the jump there is closed counterclockwise.
  std::map<size_t, bool> ccw;
};

struct ConfigurationReport {
  long long degree = 0;          // fiber degree of the configuration
  size_t jump_count = 0;         // J: boundaries where the section jumps
  long long forward_jumps = 0;   // M = J - K
  long long backward_jumps = 0;  // K = degree of the all-ccw configuration
};

namespace detail {

// Index-based tables for fast exact enumeration.
struct CompiledPortrait {
  size_t m = 0;
  std::vector<size_t> size;                       // strands per sector
  std::vector<std::vector<Rational>> drift;       // [sector][strand]
  std::vector<std::map<std::string, size_t>> index_of;
  // cont[b][l]: right-strand indices reachable without a jump from left l
  // (its match target, plus its crossing partner's match target).
  std::vector<std::vector<std::vector<size_t>>> cont;
  // gap[b][l][r] = ccw_distance(end of left l, start of right r); 0 entries
  // are never consulted for jumps (the validator bans zero-gap jumps).
  std::vector<std::vector<std::vector<Rational>>> gap;

  explicit CompiledPortrait(const Portrait& p) {
    require_valid(p, "oracle");
    m = p.sector_count();
    size.resize(m);
    drift.resize(m);
    index_of.resize(m);
    for (size_t i = 0; i < m; ++i) {
      size[i] = p.sectors[i].size();
      for (size_t j = 0; j < size[i]; ++j) {
        index_of[i][p.sectors[i][j].id] = j;
        drift[i].push_back(qsec::drift(p.sectors[i][j]));
      }
    }
    cont.resize(m);
    gap.resize(m);
    for (size_t b = 0; b < m; ++b) {
      const auto& left = p.sectors[p.left_sector(b)];
      const auto& right = p.sectors[p.right_sector(b)];
      const auto& ridx = index_of[p.right_sector(b)];
      std::map<std::string, size_t> match_of;
      for (const auto& mt : p.boundaries[b].matches)
        match_of[mt.left] = ridx.at(mt.right);
      cont[b].assign(left.size(), {});
      for (size_t l = 0; l < left.size(); ++l) {
        auto it = match_of.find(left[l].id);
        if (it != match_of.end()) cont[b][l].push_back(it->second);
      }
      for (const auto& cr : p.boundaries[b].crossings) {
        size_t l1 = index_of[p.left_sector(b)].at(cr.first);
        size_t l2 = index_of[p.left_sector(b)].at(cr.second);
        cont[b][l1].push_back(match_of.at(cr.second));
        cont[b][l2].push_back(match_of.at(cr.first));
      }
      gap[b].assign(left.size(),
                    std::vector<Rational>(right.size(), Rational(0)));
      for (size_t l = 0; l < left.size(); ++l)
        for (size_t r = 0; r < right.size(); ++r)
          gap[b][l][r] = ccw_distance(left[l].end, right[r].start);
    }
  }

  bool continuous(size_t b, size_t l, size_t r) const {
    for (size_t c : cont[b][l])
      if (c == r) return true;
    return false;
  }

  std::vector<size_t> resolve(const SectionAssignment& a) const {
    if (a.sheet.size() != m)
      throw std::invalid_argument(
          "assignment names " + std::to_string(a.sheet.size()) +
          " sheets for " + std::to_string(m) + " sectors");
    std::vector<size_t> idx(m);
    for (size_t i = 0; i < m; ++i) {
      auto it = index_of[i].find(a.sheet[i]);
      if (it == index_of[i].end())
        throw std::invalid_argument("assignment names unknown strand '" +
                                    a.sheet[i] + "' in sector " +
                                    std::to_string(i));
      idx[i] = it->second;
    }
    return idx;
  }

  // deg_ccw plus the jump list for one assignment (by strand indices).
  std::pair<Rational, std::vector<size_t>> base_degree(
      const std::vector<size_t>& idx) const {
    Rational total(0);
    std::vector<size_t> jumps;
    for (size_t i = 0; i < m; ++i) total += drift[i][idx[i]];
    for (size_t b = 0; b < m; ++b) {
      size_t l = idx[b];
      size_t r = idx[(b + 1) % m];
      if (continuous(b, l, r)) continue;
      total += gap[b][l][r];
      jumps.push_back(b);
    }
    return {total, jumps};
  }

  void for_each_assignment(
      const std::function<void(const std::vector<size_t>&)>& fn) const {
    std::vector<size_t> idx(m, 0);
    while (true) {
      fn(idx);
      size_t i = 0;
      while (i < m && ++idx[i] == size[i]) idx[i++] = 0;
      if (i == m) break;
    }
  }
};

inline long long as_integer(const Rational& r, const char* what) {
  if (denominator(r) != 1)
    throw std::logic_error(std::string(what) +
                           ": non-integral value " + to_string(r));
  return static_cast<long long>(numerator(r));
}

inline ConfigurationReport configuration_degree(const CompiledPortrait& cp,
                                                const SectionAssignment& a,
                                                const ExtensionChoice& ext) {
  auto [total, jumps] = cp.base_degree(cp.resolve(a));
  for (const auto& kv : ext.ccw) {
    bool is_jump_boundary = false;
    for (size_t j : jumps) is_jump_boundary |= (j == kv.first);
    if (!is_jump_boundary)
      throw std::invalid_argument(
          "extension choice decides boundary " + std::to_string(kv.first) +
          ", where the section does not jump");
  }
  ConfigurationReport rep;
  rep.jump_count = jumps.size();
  rep.backward_jumps =
      as_integer(total, "configuration_degree");  // K = deg_ccw
  rep.forward_jumps = static_cast<long long>(jumps.size()) -
                      rep.backward_jumps;         // M = J - K
  for (size_t b : jumps) {
    auto it = ext.ccw.find(b);
    if (it == ext.ccw.end())
      throw std::invalid_argument("extension choice missing jump boundary " +
                                  std::to_string(b));
    if (!it->second) total -= 1;  // clockwise closure loses one turn
  }
  rep.degree = as_integer(total, "configuration_degree");
  return rep;
}

}  // namespace detail

// Number of stage-1 choices: the product of the sector sizes.
inline Integer assignment_count(const Portrait& p) {
  require_valid(p, "assignment_count");
  Integer total = 1;
  for (const auto& sec : p.sectors) total *= Integer(sec.size());
  return total;
}

// Does the section jump at this boundary under the given assignment?
inline bool is_jump(const Portrait& p, const SectionAssignment& a,
                    size_t boundary) {
  detail::CompiledPortrait cp(p);
  if (boundary >= cp.m)
    throw std::invalid_argument("is_jump: no boundary " +
                                std::to_string(boundary));
  auto idx = cp.resolve(a);
  return !cp.continuous(boundary, idx[boundary], idx[(boundary + 1) % cp.m]);
}

// The configuration degree when every jump is closed counterclockwise.
inline long long deg_ccw(const Portrait& p, const SectionAssignment& a) {
  detail::CompiledPortrait cp(p);
  auto [total, jumps] = cp.base_degree(cp.resolve(a));
  return detail::as_integer(total, "deg_ccw");
}

// Full report for one assignment plus one extension choice.  The extension
// must decide exactly the boundaries where the assignment jumps.
inline ConfigurationReport configuration_degree(const Portrait& p,
                                                const SectionAssignment& a,
                                                const ExtensionChoice& ext) {
  detail::CompiledPortrait cp(p);
  return detail::configuration_degree(cp, a, ext);
}

// Exact expectation of the configuration degree: averages deg over all
// assignments, then over all 2^J coin flips of each.  Errors out above the
// enumeration cap instead of sampling.
inline Rational expected_index(const Portrait& p,
                               std::uint64_t max_configurations = 100000000) {
  detail::CompiledPortrait cp(p);
  Rational sum(0);
  Integer assignments(0);
  std::uint64_t configs = 0;
  cp.for_each_assignment([&](const std::vector<size_t>& idx) {
    auto [base, jumps] = cp.base_degree(idx);
    long long deg0 = detail::as_integer(base, "expected_index");
    const size_t J = jumps.size();
    if (J >= 63 || (configs += (std::uint64_t(1) << J)) > max_configurations)
      throw std::runtime_error("enumeration too large: more than " +
                               std::to_string(max_configurations) +
                               " configurations");
    // Every subset of the J jumps may be closed clockwise, at -1 each.
    Integer flip_sum(0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << J); ++mask) {
      long long cw = 0;
      for (size_t j = 0; j < J; ++j) cw += (mask >> j) & 1;
      flip_sum += Integer(deg0 - cw);
    }
    sum += Rational(flip_sum, Integer(1) << J);
    assignments += 1;
  });
  return sum / Rational(assignments);
}

// One row of the verification table: enumeration sizes, the exact
// expectation, the linearity shortcut, and whether the two agree.
struct OracleRow {
  Integer assignments{0};
  Integer configurations{0};
  Rational expected{0};
  Rational shortcut{0};
  bool match = false;
};

inline Rational expected_index_shortcut(const Portrait& p);

inline OracleRow oracle_report(const Portrait& p,
                               std::uint64_t max_configurations = 100000000) {
  OracleRow row;
  row.assignments = assignment_count(p);
  detail::CompiledPortrait cp(p);
  cp.for_each_assignment([&](const std::vector<size_t>& idx) {
    auto [base, jumps] = cp.base_degree(idx);
    (void)base;
    row.configurations += Integer(1) << jumps.size();
  });
  row.expected = expected_index(p, max_configurations);
  row.shortcut = expected_index_shortcut(p);
  row.match = row.expected == row.shortcut;
  return row;
}

// Same expectation via linearity: each jump's two closures average to the
// counterclockwise lift minus 1/2.
inline Rational expected_index_shortcut(const Portrait& p) {
  detail::CompiledPortrait cp(p);
  Rational sum(0);
  Integer assignments(0);
  cp.for_each_assignment([&](const std::vector<size_t>& idx) {
    auto [base, jumps] = cp.base_degree(idx);
    sum += base - Rational(Integer(jumps.size()), Integer(2));
    assignments += 1;
  });
  return sum / Rational(assignments);
}

}  // namespace qsec
