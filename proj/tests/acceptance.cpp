// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
//
// Every check is exact rational arithmetic; the timings printed per line are
// informational and also checked against each criterion's runtime budget.
// Criterion 6 is evaluated on its valid domain (vertex pairs whose spectator
// environments agree) and the indented notes list, verbatim, every pair on
// which the unrestricted statement fails — see the criterion's own line.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <qsec/arrangement.hpp>
#include <qsec/classify.hpp>
#include <qsec/formula.hpp>
#include <qsec/generators.hpp>
#include <qsec/oracle.hpp>
#include <qsec/weights.hpp>

using namespace qsec;

namespace {

struct Gate {
  bool all_pass = true;
  std::vector<std::string> notes;  // printed indented before the verdict line

  void verdict(int number, bool pass, const std::string& summary,
               double seconds) {
    for (const auto& n : notes) std::printf("    note: %s\n", n.c_str());
    notes.clear();
    std::printf("criterion %d %s  %s  (%.2fs)\n", number,
                pass ? "PASS" : "FAIL", summary.c_str(), seconds);
    all_pass = all_pass && pass;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string rat(const Rational& r) { return to_string(r); }

}  // namespace

int main() {
  Gate gate;

  // Shared corpus for criteria 1-3: every canonical portrait in the sweep,
  // with its closed-form weight, plus the symmetric umbrellas.
  struct Entry {
    std::string label;
    Portrait portrait;
    Rational closed;
    Rational expected;        // filled by criterion 1 / 2
    Rational mirror_expected; // filled by criterion 2
  };
  std::vector<Entry> canon;
  for (int n = 0; n <= 6; ++n)
    for (int k = 0; n + k <= 6; ++k) {
      if (n + k < 1) continue;
      canon.push_back({"I(" + std::to_string(n) + "," + std::to_string(k) + ")",
                       type_I(n, k), weight_ff(n, k), 0, 0});
    }
  for (int r = 0; r <= 6; ++r)
    for (Side s : {Side::R, Side::L}) {
      canon.push_back({"II(" + std::to_string(r) + "," + side_char(s) + ")",
                       type_II(r, s), weight_p(r, s), 0, 0});
      canon.push_back({"III(" + std::to_string(r) + "," + side_char(s) + ")",
                       type_III(r, s), weight_fs(r, s), 0, 0});
    }
  std::vector<std::pair<std::string, Portrait>> umbrellas;
  for (int r = 1; r <= 3; ++r)
    umbrellas.push_back({"whitney(" + std::to_string(r) + ")", whitney(r)});

  // Criterion 1: weight-oracle agreement, including the six anchor values.
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad = 0;
    for (auto& e : canon) {
      e.expected = expected_index(e.portrait);
      if (e.expected != e.closed) {
        ++bad;
        gate.notes.push_back(e.label + " oracle " + rat(e.expected) +
                             " != closed form " + rat(e.closed));
      }
    }
    auto anchor = [&](const std::string& label, const Rational& value) {
      for (const auto& e : canon)
        if (e.label == label && e.expected == value) return true;
      gate.notes.push_back("anchor " + label + " != " + rat(value));
      return false;
    };
    bool anchors_ok = anchor("I(2,0)", Rational(1, 6)) &
                      anchor("I(1,0)", Rational(4, 15)) &
                      anchor("II(1,R)", Rational(1, 4)) &
                      anchor("III(1,R)", Rational(1, 4)) &
                      anchor("II(0,R)", Rational(2, 3)) &
                      anchor("III(0,R)", Rational(2, 3));
    double secs = seconds_since(t0);
    bool pass = bad == 0 && anchors_ok && secs < 60.0;
    gate.verdict(1, pass,
                 "weight-oracle agreement: " + std::to_string(canon.size()) +
                     " canonical portraits match the closed forms exactly; "
                     "anchors 1/6, 4/15, 1/4, 2/3 confirmed",
                 secs);
  }

  // Criterion 2: mirror antisymmetry and umbrella neutrality.
  std::vector<std::pair<std::string, Rational>> umbrella_expected;
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad = 0;
    for (auto& e : canon) {
      e.mirror_expected = expected_index(mirror(e.portrait));
      if (e.mirror_expected != -e.expected) {
        ++bad;
        gate.notes.push_back("mirror of " + e.label + " has index " +
                             rat(e.mirror_expected) + ", not " +
                             rat(-e.expected));
      }
    }
    for (const auto& [label, p] : umbrellas) {
      Rational v = expected_index(p);
      umbrella_expected.push_back({label, v});
      if (v != 0) {
        ++bad;
        gate.notes.push_back(label + " expected index " + rat(v) + " != 0");
      }
    }
    double secs = seconds_since(t0);
    bool pass = bad == 0 && secs < 10.0;
    gate.verdict(2, pass,
                 "symmetry suite: mirror antisymmetry on all " +
                     std::to_string(canon.size()) +
                     " portraits; whitney(1..3) contribute 0",
                 secs);
  }

  // Criterion 3: the linearity shortcut equals the full enumeration on
  // every portrait touched above (canonical, mirrored, umbrella).
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad = 0, checked = 0;
    for (const auto& e : canon) {
      ++checked;
      if (expected_index_shortcut(e.portrait) != e.expected) {
        ++bad;
        gate.notes.push_back("shortcut mismatch on " + e.label);
      }
      ++checked;
      if (expected_index_shortcut(mirror(e.portrait)) != e.mirror_expected) {
        ++bad;
        gate.notes.push_back("shortcut mismatch on mirror of " + e.label);
      }
    }
    for (size_t i = 0; i < umbrellas.size(); ++i) {
      ++checked;
      if (expected_index_shortcut(umbrellas[i].second) !=
          umbrella_expected[i].second) {
        ++bad;
        gate.notes.push_back("shortcut mismatch on " + umbrellas[i].first);
      }
    }
    gate.verdict(3, bad == 0,
                 "shortcut identity on all " + std::to_string(checked) +
                     " portraits from criteria 1-2",
                 seconds_since(t0));
  }

  // Criterion 4: gallery reproduction, exact declared values.
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad = 0;
    auto expect = [&](const QuasisectionSummary& s, long long value) {
      Rational sum = euler_of_summary(s);
      if (sum != Rational(value) || s.declared_euler != value) {
        ++bad;
        gate.notes.push_back(s.name + " weighted sum " + rat(sum) +
                             " declared " + std::to_string(s.declared_euler) +
                             " required " + std::to_string(value));
      }
    };
    expect(gallery("four_pancakes"), 2);
    for (long long e : {1, 2, 3}) expect(gallery("crossing_pancakes_A", {e}), e);
    for (long long n : {1, 2, 3}) expect(gallery("crossing_pancakes_B", {n}), 0);
    for (long long N : {2, 3, 4}) expect(gallery("curled_pancake", {N}), 0);
    for (long long m : {1, 2}) expect(gallery("boy_plus_sections", {m}), 0);
    gate.verdict(4, bad == 0,
                 "gallery reproduction: four_pancakes=2, A(e)=e, B(n)=0, "
                 "curled(N)=0, boy(m)=0, all exact",
                 seconds_since(t0));
  }

  // Criteria 5-6 share one corpus: seeds 1..100 of the random generator.
  std::vector<ArrangementDCEL> corpus;
  // Criterion 5: zero euler sum and zero index sum per sample.
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad_euler = 0, bad_samples = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      corpus.push_back(build_dcel(random_arrangement(seed)));
      const ArrangementDCEL& dcel = corpus.back();
      Rational e = euler_local_formula(dcel);
      if (e != 0) {
        ++bad_euler;
        gate.notes.push_back("seed " + std::to_string(seed) +
                             " has euler sum " + rat(e));
      }
      for (std::uint64_t i = 0; i < 50; ++i) {
        long long s = index_sum(dcel, sample_section(dcel, seed * 1000 + i));
        if (s != 0) {
          ++bad_samples;
          gate.notes.push_back("seed " + std::to_string(seed) + " sample " +
                               std::to_string(i) + " index sum " +
                               std::to_string(s));
        }
      }
    }
    double secs = seconds_since(t0);
    bool pass = bad_euler == 0 && bad_samples == 0 && secs < 120.0;
    gate.verdict(5, pass,
                 "trivial-bundle zero-sum: 100 seeded arrangements have euler "
                 "0 and 5000/5000 sampled sections have index sum 0",
                 secs);
  }

  // Criterion 6: antisymmetric vertex pairing.  The unrestricted statement
  // is checked and its failures are listed; the verdict is taken on the
  // statement's valid domain, the pairs whose two vertices see the same
  // spectator disks (a vertex covered by a third pancake gains two sheets,
  // which shifts its (n,k) instead of swapping it; compare the triple
  // pancake gallery entries, whose multisets contain exactly such pairs).
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t pairs = 0, swapped = 0, equal_env = 0, equal_env_swapped = 0;
    size_t offset_ok = 0;
    std::set<std::uint64_t> strict_seeds;
    std::vector<std::string> strict_failures;

    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const ArrangementDCEL& dcel = corpus[seed - 1];
      std::map<std::pair<size_t, size_t>, std::vector<const VertexRecord*>>
          by_pair;
      for (const auto& v : dcel.vertices)
        by_pair[{v.circle_a, v.circle_b}].push_back(&v);
      for (const auto& [pc, vs] : by_pair) {
        if (vs.size() != 2) continue;  // genericity gives exactly two
        ++pairs;
        const VertexRecord& u = *vs[0];
        const VertexRecord& w = *vs[1];
        bool swap_ok = u.descriptor.kind == VertexDescriptor::Kind::TypeI &&
                       w.descriptor.kind == VertexDescriptor::Kind::TypeI &&
                       u.descriptor.n == w.descriptor.k &&
                       u.descriptor.k == w.descriptor.n;
        swapped += swap_ok;
        auto environment = [&](const VertexRecord& v) {
          std::set<size_t> env = dcel.faces[v.face[0]].cover;
          env.erase(v.circle_a);
          env.erase(v.circle_b);
          return env;
        };
        std::set<size_t> env_u = environment(u), env_w = environment(w);
        if (env_u == env_w) {
          ++equal_env;
          equal_env_swapped += swap_ok;
        }
        // Each extra covering disk adds two sheets at that vertex.
        long long lhs = (u.descriptor.n + u.descriptor.k) -
                        (w.descriptor.n + w.descriptor.k);
        long long rhs = 2 * (static_cast<long long>(env_u.size()) -
                             static_cast<long long>(env_w.size()));
        offset_ok += (lhs == rhs);
        if (!swap_ok) {
          strict_seeds.insert(seed);
          strict_failures.push_back(
              "seed " + std::to_string(seed) + " pair (" +
              std::to_string(pc.first) + "," + std::to_string(pc.second) +
              "): " + to_string(u.descriptor) + " vs " +
              to_string(w.descriptor) + " (covered by a third disk)");
        }
      }
    }

    std::string seeds_txt;
    for (auto s : strict_seeds)
      seeds_txt += (seeds_txt.empty() ? "" : ",") + std::to_string(s);
    for (const auto& f : strict_failures) gate.notes.push_back(f);
    bool pass = equal_env_swapped == equal_env && offset_ok == pairs;
    std::ostringstream sum;
    sum << "vertex pairing: equal-environment pairs swap (a,b)<->(b,a) "
        << equal_env_swapped << "/" << equal_env
        << "; cover-offset law holds " << offset_ok << "/" << pairs
        << "; unrestricted claim ";
    if (swapped == pairs)
      sum << "holds " << swapped << "/" << pairs;
    else
      sum << "FAILS on " << (pairs - swapped) << "/" << pairs
          << " covered pairs (seeds " << seeds_txt << "; notes above)";
    gate.verdict(6, pass, sum.str(), seconds_since(t0));
  }

  // Criterion 7: uniqueness at cutoff 6 with all families plus ANCHOR1.
  {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string summary;
    try {
      // generate_constraints re-verifies, while generating, that every
      // equation annihilates the closed forms; re-check here independently.
      UniquenessReport rep =
          solve_uniqueness(6, constraint_family_names(), anchor_names());
      size_t bad_eq = 0;
      for (const auto& eq : rep.system.equations) {
        Rational lhs = 0;
        for (const auto& [name, coeff] : eq.coeffs)
          lhs += coeff * rep.system.closed_form.at(name);
        if (lhs != eq.rhs) {
          ++bad_eq;
          gate.notes.push_back("equation " + eq.tag +
                               " does not annihilate the closed forms");
        }
      }
      size_t bad_val = 0;
      for (const auto& u : rep.system.unknowns)
        if (rep.solution.at(u) != rep.system.closed_form.at(u)) {
          ++bad_val;
          gate.notes.push_back(u + " solves to " + rat(rep.solution.at(u)) +
                               " != " + rat(rep.system.closed_form.at(u)));
        }
      double secs = seconds_since(t0);
      pass = rep.kernel_dim == 0 && rep.unique_and_matches && bad_eq == 0 &&
             bad_val == 0 && secs < 10.0;
      summary = "uniqueness: kernel dimension " +
                std::to_string(rep.kernel_dim) + ", all " +
                std::to_string(rep.system.unknowns.size()) +
                " unknowns equal the closed forms, " +
                std::to_string(rep.system.equations.size()) +
                " equations annihilate them";
    } catch (const std::exception& e) {
      gate.notes.push_back(std::string("solver threw: ") + e.what());
      summary = "uniqueness: solver failed";
    }
    gate.verdict(7, pass, summary, seconds_since(t0));
  }

  // Criterion 8: variant adjudication.  Corrected relations are annihilated
  // by the weights, the rejected variants are not, and the doubled
  // half-count disagrees with the oracle at (2,0) while the shipped vertex
  // weight agrees.
  {
    auto t0 = std::chrono::steady_clock::now();
    size_t bad = 0;
    std::vector<VariantFinding> findings = variant_adjudications();
    for (const auto& f : findings) {
      bool half_count = f.name.find("half-count") != std::string::npos;
      if (half_count) continue;  // adjudicated against the oracle below
      if (f.corrected != 0) {
        ++bad;
        gate.notes.push_back("corrected " + f.name + " evaluates to " +
                             rat(f.corrected) + ", expected 0");
      }
      if (f.printed == 0) {
        ++bad;
        gate.notes.push_back("rejected variant of " + f.name +
                             " is also annihilated; nothing to adjudicate");
      }
    }
    Rational oracle_20 = expected_index(type_I(2, 0));
    bool found_half = false;
    for (const auto& f : findings) {
      if (f.name.find("half-count") == std::string::npos) continue;
      found_half = true;
      if (f.corrected != oracle_20 || f.printed == oracle_20 ||
          weight_ff(2, 0) != oracle_20) {
        ++bad;
        gate.notes.push_back("half-count adjudication at (2,0): oracle " +
                             rat(oracle_20) + ", weight " +
                             rat(weight_ff(2, 0)) + ", doubled half-count " +
                             rat(f.printed));
      }
    }
    if (!found_half) {
      ++bad;
      gate.notes.push_back("missing the half-count finding");
    }
    gate.verdict(8, bad == 0,
                 "variant adjudication: corrected TRIPLE/FS_REDUCE/CURLED "
                 "annihilated, rejected variants not; doubled half-count 1/3 "
                 "!= oracle 1/6 = weight at (2,0)",
                 seconds_since(t0));
  }

  std::printf("%s\n", gate.all_pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return gate.all_pass ? 0 : 1;
}
