#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qsec/arrangement.hpp"

using namespace qsec;

namespace {

Pancake pancake(const std::string& x, const std::string& y,
                const std::string& r, const std::string& h,
                const std::string& tau) {
  Pancake p;
  p.center_x = parse_rational(x);
  p.center_y = parse_rational(y);
  p.radius = parse_rational(r);
  p.height = parse_rational(h);
  p.thickness = parse_rational(tau);
  return p;
}

// Two unit-separated pancakes of radius 2 crossing at (0, +-sqrt(3)).
ArrangementSpec two_crossing() {
  ArrangementSpec s;
  s.pancakes = {pancake("-1", "0", "2", "1/4", "1/100"),
                pancake("1", "0", "2", "3/4", "1/100")};
  s.section_heights = {parse_rational("1/2")};
  return s;
}

// Three mutually crossing pancakes; the extra section sits between the top
// band and the bottom band, so exactly one fiber arc holds a spectator.
ArrangementSpec venn() {
  ArrangementSpec s;
  s.pancakes = {pancake("0", "0", "2", "1/8", "1/64"),
                pancake("2", "0", "2", "3/8", "1/64"),
                pancake("1", "3/2", "2", "5/8", "1/64")};
  s.section_heights = {parse_rational("7/8")};
  return s;
}

std::multiset<std::string> descriptor_names(const ArrangementDCEL& d) {
  std::multiset<std::string> names;
  for (const auto& v : d.vertices) names.insert(to_string(v.descriptor));
  return names;
}

std::multiset<std::set<size_t>> cover_multiset(const ArrangementDCEL& d) {
  std::multiset<std::set<size_t>> covers;
  for (const auto& f : d.faces) covers.insert(f.cover);
  return covers;
}

size_t sheet_count_of_cover(const ArrangementDCEL& d,
                            const std::set<size_t>& cover) {
  for (const auto& f : d.faces)
    if (f.cover == cover) return f.sheets.size();
  FAIL("no face with the requested cover");
  return 0;
}

}  // namespace

TEST_CASE("two crossing pancakes subdivide the plane into four faces") {
  auto d = build_dcel(two_crossing());

  CHECK(d.vertex_count() == 2);
  CHECK(d.edge_count() == 4);
  CHECK(d.face_count() == 4);
  CHECK(d.curve_components == 1);

  CHECK(cover_multiset(d) ==
        std::multiset<std::set<size_t>>{{}, {0}, {1}, {0, 1}});
  CHECK(d.faces[d.outer_face].cover.empty());
  CHECK(d.faces[d.outer_face].outer);

  // One section plus two sheets per covering pancake.
  CHECK(sheet_count_of_cover(d, {}) == 1);
  CHECK(sheet_count_of_cover(d, {0}) == 3);
  CHECK(sheet_count_of_cover(d, {1}) == 3);
  CHECK(sheet_count_of_cover(d, {0, 1}) == 5);

  // Every edge runs between a face covered by its circle and one not.
  size_t on_circle_0 = 0;
  for (const auto& e : d.edges) {
    CHECK_FALSE(e.closed_curve);
    CHECK(d.faces[e.face_in].cover.count(e.circle) == 1);
    CHECK(d.faces[e.face_out].cover.count(e.circle) == 0);
    if (e.circle == 0) ++on_circle_0;
  }
  CHECK(d.edges.size() == 4);
  CHECK(on_circle_0 == 2);

  // The crossings sit at (0, +-sqrt(3)).
  for (const auto& v : d.vertices) {
    CHECK(v.circle_a == 0);
    CHECK(v.circle_b == 1);
    CHECK(std::abs(v.x) < 1e-9);
    CHECK(std::abs(std::abs(v.y) - std::sqrt(3.0)) < 1e-9);
  }
}

TEST_CASE("two crossing pancakes carry opposite fold-fold weights") {
  auto d = build_dcel(two_crossing());

  CHECK(descriptor_names(d) == std::multiset<std::string>{"I(1,0)", "I(0,1)"});
  for (const auto& v : d.vertices) {
    CHECK(v.weight == expected_index(v.portrait));
    CHECK(v.weight == expected_index_shortcut(v.portrait));
  }
  CHECK(euler_local_formula(d) == 0);
}

TEST_CASE("a lonely pancake bounds one closed fold curve") {
  ArrangementSpec s;
  s.pancakes = {pancake("0", "0", "3", "1/4", "1/16")};
  s.section_heights = {parse_rational("3/4")};
  auto d = build_dcel(s);

  CHECK(d.vertex_count() == 0);
  CHECK(d.edge_count() == 0);  // a closed curve is not an arc
  CHECK(d.face_count() == 2);
  CHECK(d.curve_components == 1);
  REQUIRE(d.edges.size() == 1);
  CHECK(d.edges[0].closed_curve);
  CHECK(sheet_count_of_cover(d, {0}) == 3);
  CHECK(sheet_count_of_cover(d, {}) == 1);
  CHECK(euler_local_formula(d) == 0);
}

TEST_CASE("disjoint and nested pancakes split the plane into rings") {
  SECTION("side by side") {
    ArrangementSpec s;
    s.pancakes = {pancake("-3", "0", "1", "1/5", "1/32"),
                  pancake("3", "0", "1", "3/5", "1/32")};
    s.section_heights = {parse_rational("9/10")};
    auto d = build_dcel(s);
    CHECK(d.vertex_count() == 0);
    CHECK(d.face_count() == 3);
    CHECK(d.curve_components == 2);
    CHECK(cover_multiset(d) ==
          std::multiset<std::set<size_t>>{{}, {0}, {1}});
  }
  SECTION("nested") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "4", "1/5", "1/32"),
                  pancake("1/2", "0", "1", "3/5", "1/32")};
    s.section_heights = {parse_rational("9/10")};
    auto d = build_dcel(s);
    CHECK(d.vertex_count() == 0);
    CHECK(d.face_count() == 3);
    CHECK(d.curve_components == 2);
    CHECK(cover_multiset(d) ==
          std::multiset<std::set<size_t>>{{}, {0}, {0, 1}});
    CHECK(sheet_count_of_cover(d, {0, 1}) == 5);
  }
  SECTION("two separated crossing pairs share one outer face") {
    ArrangementSpec s;
    s.pancakes = {pancake("-8", "0", "2", "1/8", "1/64"),
                  pancake("-6", "0", "2", "3/8", "1/64"),
                  pancake("8", "0", "2", "5/8", "1/64"),
                  pancake("6", "0", "2", "7/8", "1/64")};
    s.section_heights = {parse_rational("1/4")};
    auto d = build_dcel(s);
    CHECK(d.vertex_count() == 4);
    CHECK(d.face_count() == 7);
    CHECK(d.curve_components == 2);
    CHECK(euler_local_formula(d) == 0);
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
      CHECK(index_sum(d, sample_section(d, seed)) == 0);
  }
}

TEST_CASE("three mutually crossing pancakes cancel only in total") {
  auto d = build_dcel(venn());
  REQUIRE(d.vertex_count() == 6);
  CHECK(d.edge_count() == 12);
  CHECK(d.face_count() == 8);

  CHECK(descriptor_names(d) ==
        std::multiset<std::string>{"I(0,3)", "I(0,3)", "I(1,0)", "I(1,0)",
                                   "I(0,1)", "I(1,2)"});
  for (const auto& v : d.vertices) CHECK(v.weight == expected_index(v.portrait));
  CHECK(euler_local_formula(d) == 0);

  // The two crossings of one circle pair do not swap (n,k): the third disk
  // covers exactly one of them and contributes two extra spectator sheets
  // there, so the covered vertex always shows n+k = 3 and the free one
  // n+k = 1.
  std::map<std::pair<size_t, size_t>, std::vector<const VertexRecord*>> pairs;
  for (const auto& v : d.vertices)
    pairs[{v.circle_a, v.circle_b}].push_back(&v);
  REQUIRE(pairs.size() == 3);
  for (const auto& [key, vs] : pairs) {
    REQUIRE(vs.size() == 2);
    size_t third = 3 - key.first - key.second;
    for (const auto* v : vs) {
      const Pancake& t = d.spec.pancakes[third];
      double dx = v->x - detail::to_double(t.center_x);
      double dy = v->y - detail::to_double(t.center_y);
      bool covered = std::hypot(dx, dy) < detail::to_double(t.radius);
      REQUIRE(v->descriptor.kind == VertexDescriptor::Kind::TypeI);
      CHECK(v->descriptor.n + v->descriptor.k == (covered ? 3 : 1));
    }
  }
}

TEST_CASE("four mutually crossing pancakes") {
  ArrangementSpec s;
  s.pancakes = {pancake("1/2", "1/2", "2", "1/10", "1/40"),
                pancake("-1/2", "1/2", "2", "3/10", "1/40"),
                pancake("-1/2", "-1/2", "2", "1/2", "1/40"),
                pancake("1/2", "-1/2", "2", "7/10", "1/40")};
  s.section_heights = {parse_rational("9/10")};
  auto d = build_dcel(s);

  CHECK(d.vertex_count() == 12);
  CHECK(d.edge_count() == 24);
  CHECK(d.face_count() == 14);
  CHECK(d.curve_components == 1);
  for (const auto& v : d.vertices) {
    CHECK(v.descriptor.kind == VertexDescriptor::Kind::TypeI);
    CHECK(v.weight == expected_index_shortcut(v.portrait));
  }
  CHECK(euler_local_formula(d) == 0);
}

TEST_CASE("degenerate arrangements are rejected with reasons") {
  auto violations_contain = [](const ArrangementSpec& s,
                               const std::string& needle) {
    for (const auto& w : genericity_check(s))
      if (w.find(needle) != std::string::npos) return true;
    return false;
  };

  SECTION("missing sections") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "1", "1/4", "1/16")};
    CHECK(violations_contain(s, "no sections"));
  }
  SECTION("fat thickness band") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "1", "1/4", "1/2")};
    s.section_heights = {parse_rational("3/4")};
    CHECK(violations_contain(s, "covers the whole fiber"));
  }
  SECTION("equal section heights mod 1") {
    ArrangementSpec s;
    s.section_heights = {parse_rational("1/4"), parse_rational("5/4")};
    CHECK(violations_contain(s, "height collision"));
  }
  SECTION("section inside a thickness band") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "1", "1/4", "1/16")};
    s.section_heights = {parse_rational("5/16")};
    CHECK(violations_contain(s, "thickness band"));
  }
  SECTION("overlapping thickness bands") {
    ArrangementSpec s;
    s.pancakes = {pancake("-3", "0", "1", "1/4", "1/8"),
                  pancake("3", "0", "1", "1/2", "1/8")};
    s.section_heights = {parse_rational("7/8")};
    CHECK(violations_contain(s, "overlap"));
  }
  SECTION("coincident circles") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "2", "1/4", "1/32"),
                  pancake("0", "0", "2", "3/4", "1/32")};
    s.section_heights = {parse_rational("1/2")};
    CHECK(violations_contain(s, "coincide"));
  }
  SECTION("tangent circles") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "2", "1/4", "1/32"),
                  pancake("4", "0", "2", "3/4", "1/32")};
    s.section_heights = {parse_rational("1/2")};
    CHECK(violations_contain(s, "tangent"));
  }
  SECTION("three circles through one point") {
    ArrangementSpec s;
    s.pancakes = {pancake("3", "4", "5", "1/8", "1/64"),
                  pancake("5", "0", "5", "3/8", "1/64"),
                  pancake("0", "5", "5", "5/8", "1/64")};
    s.section_heights = {parse_rational("7/8")};
    CHECK(violations_contain(s, "concurrence"));
  }
  SECTION("build refuses and lists every reason") {
    ArrangementSpec s;
    s.pancakes = {pancake("0", "0", "2", "1/4", "1/32"),
                  pancake("4", "0", "2", "1/4", "1/32")};
    CHECK_THROWS_WITH(
        build_dcel(s),
        Catch::Matchers::ContainsSubstring("degenerate arrangement") &&
            Catch::Matchers::ContainsSubstring("tangent") &&
            Catch::Matchers::ContainsSubstring("no sections") &&
            Catch::Matchers::ContainsSubstring("height collision"));
  }
}

TEST_CASE("the shipped demo arrangement loads, is generic, and balances") {
  std::ifstream in(std::string(QSEC_DATA_DIR) + "/demo_arrangement.json");
  REQUIRE(in.good());
  auto spec = arrangement_from_json(nlohmann::json::parse(in));
  REQUIRE(genericity_check(spec).empty());
  auto d = build_dcel(spec);
  CHECK(d.vertex_count() == 2);
  CHECK(euler_local_formula(d) == 0);
}

TEST_CASE("arrangement specs round-trip through json") {
  auto spec = venn();
  auto back = arrangement_from_json(to_json(spec));
  REQUIRE(back.pancakes.size() == spec.pancakes.size());
  for (size_t i = 0; i < spec.pancakes.size(); ++i) {
    CHECK(back.pancakes[i].center_x == spec.pancakes[i].center_x);
    CHECK(back.pancakes[i].center_y == spec.pancakes[i].center_y);
    CHECK(back.pancakes[i].radius == spec.pancakes[i].radius);
    CHECK(back.pancakes[i].height == spec.pancakes[i].height);
    CHECK(back.pancakes[i].thickness == spec.pancakes[i].thickness);
  }
  CHECK(back.section_heights == spec.section_heights);

  SECTION("malformed documents are rejected") {
    CHECK_THROWS_AS(arrangement_from_json(nlohmann::json{{"pancakes", {}}}),
                    std::invalid_argument);
    auto j = to_json(spec);
    j["pancakes"][0]["center"] = 3;
    CHECK_THROWS_WITH(arrangement_from_json(j),
                      Catch::Matchers::ContainsSubstring("[x, y]"));
    j = to_json(spec);
    j["pancakes"][0]["radius"] = 2.5;  // floats are not exact input
    CHECK_THROWS_AS(arrangement_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("a pancake-free plane is one face with the trivial sample") {
  ArrangementSpec s;
  s.section_heights = {parse_rational("1/4"), parse_rational("3/4")};
  auto d = build_dcel(s);
  CHECK(d.face_count() == 1);
  CHECK(d.vertex_count() == 0);
  CHECK(d.curve_components == 0);
  CHECK(d.faces[0].outer);
  CHECK(d.faces[0].sheets.size() == 2);
  auto sample = sample_section(d, 5);
  CHECK(sample.edge_ccw.empty());
  CHECK(index_sum(d, sample) == 0);
}

TEST_CASE("every sampled section has zero total index") {
  for (const auto& spec : {two_crossing(), venn()}) {
    auto d = build_dcel(spec);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      auto sample = sample_section(d, seed);
      CHECK(index_sum(d, sample) == 0);
    }
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  auto d = build_dcel(venn());
  auto a = sample_section(d, 7);
  auto b = sample_section(d, 7);
  CHECK(a.face_sheet == b.face_sheet);
  CHECK(a.edge_ccw == b.edge_ccw);
  bool saw_different = false;
  for (std::uint64_t seed = 8; seed < 16 && !saw_different; ++seed)
    saw_different = sample_section(d, seed).face_sheet != a.face_sheet;
  CHECK(saw_different);
}

TEST_CASE("sampled sheets are uniform over each face") {
  auto d = build_dcel(two_crossing());
  const int trials = 12000;
  std::map<size_t, std::map<std::string, int>> counts;
  for (int t = 0; t < trials; ++t) {
    auto sample = sample_section(d, 100000 + static_cast<std::uint64_t>(t));
    for (size_t f = 0; f < sample.face_sheet.size(); ++f)
      counts[f][sample.face_sheet[f]]++;
  }
  for (size_t f = 0; f < d.faces.size(); ++f) {
    const double expected = 1.0 / static_cast<double>(d.faces[f].sheets.size());
    REQUIRE(counts[f].size() == d.faces[f].sheets.size());
    for (const auto& [sheet, n] : counts[f])
      CHECK(std::abs(static_cast<double>(n) / trials - expected) <
            0.05 * 1.0);
  }
}

TEST_CASE("random generic arrangements always balance to zero") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto spec = random_arrangement(seed);
    REQUIRE(genericity_check(spec).empty());
    auto d = build_dcel(spec);
    CHECK(euler_local_formula(d) == 0);
    if (seed <= 5)
      for (std::uint64_t s = 0; s < 5; ++s)
        CHECK(index_sum(d, sample_section(d, 900 + s)) == 0);
  }
}
