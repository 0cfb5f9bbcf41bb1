#pragma once

// Command-line surface: verification sweeps, arrangement evaluation,
// sampling checks, uniqueness reports, gallery checks, and SVG rendering.
//
// run_cli takes the argument vector (without the program name) and the two
// output streams, so the whole surface is testable in-process.  Exit codes:
//   0  success / verified
//   1  verification failure (an exact identity did not hold)
//   2  input error (flags, files, parsing, degenerate arrangements)
// All configuration is via flags; no environment variables are read.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "arrangement.hpp"
#include "formula.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "svg.hpp"
#include "weights.hpp"

namespace qsec {
namespace cli_detail {

inline std::string pad(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = item.find_last_not_of(" \t");
    parts.push_back(item.substr(b, e - b + 1));
  }
  return parts;
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

// Aggregates a descriptor multiset into "I(2,0) x12"-style cells, in
// canonical descriptor order.
inline std::string multiset_cells(std::vector<VertexDescriptor> ds) {
  std::sort(ds.begin(), ds.end(), detail::descriptor_less);
  std::string out;
  for (size_t i = 0; i < ds.size();) {
    size_t count = 1;
    while (i + count < ds.size() && ds[i + count] == ds[i]) ++count;
    if (!out.empty()) out += ", ";
    out += to_string(ds[i]);
    if (count > 1) out += " x" + std::to_string(count);
    i += count;
  }
  return out;
}

inline bool load_json_file(const std::string& path, nlohmann::json& j,
                           std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot open '" << path << "'\n";
    return false;
  }
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return false;
  }
  return true;
}

inline int cmd_verify_weights(int max_nk, int max_r, std::ostream& out,
                              std::ostream& err) {
  struct Row {
    std::string label;
    Portrait portrait;
    Rational closed;  // 0 for the symmetric umbrella rows
  };
  std::vector<Row> rows;
  for (int n = 0; n <= max_nk; ++n)
    for (int k = 0; n + k <= max_nk; ++k) {
      if (n + k < 1) continue;
      rows.push_back({to_string(VertexDescriptor::type_I(n, k)), type_I(n, k),
                      weight_ff(n, k)});
    }
  for (int r = 0; r <= max_r; ++r)
    for (Side s : {Side::R, Side::L})
      rows.push_back({to_string(VertexDescriptor::type_II(r, s)),
                      type_II(r, s), weight_p(r, s)});
  for (int r = 0; r <= max_r; ++r)
    for (Side s : {Side::R, Side::L})
      rows.push_back({to_string(VertexDescriptor::type_III(r, s)),
                      type_III(r, s), weight_fs(r, s)});
  for (int r = 1; r <= std::min(max_r, 3); ++r)
    rows.push_back({"whitney(" + std::to_string(r) + ")", whitney(r),
                    Rational(0)});

  out << pad("descriptor", 12) << pad("assignments", 13)
      << pad("configurations", 16) << pad("oracle", 12) << pad("closed", 12)
      << "match\n";
  size_t ok_weight = 0, ok_shortcut = 0, ok_mirror = 0;
  for (const auto& row : rows) {
    OracleRow rep = oracle_report(row.portrait);
    bool weight_match = rep.expected == row.closed;
    bool mirror_match = expected_index(mirror(row.portrait)) == -rep.expected;
    ok_weight += weight_match;
    ok_shortcut += rep.match;
    ok_mirror += mirror_match;
    out << pad(row.label, 12) << pad(rep.assignments.str(), 13)
        << pad(rep.configurations.str(), 16) << pad(to_string(rep.expected), 12)
        << pad(to_string(row.closed), 12)
        << (weight_match && rep.match && mirror_match ? "yes" : "NO") << "\n";
  }
  out << "rows " << rows.size() << "  weight matches " << ok_weight << "/"
      << rows.size() << "  shortcut identities " << ok_shortcut << "/"
      << rows.size() << "  mirror antisymmetry " << ok_mirror << "/"
      << rows.size() << "\n";
  bool all = ok_weight == rows.size() && ok_shortcut == rows.size() &&
             ok_mirror == rows.size();
  if (!all) err << "error: some rows failed verification\n";
  return all ? 0 : 1;
}

// Arrangement vertices in canonical report order: by descriptor, then by
// exact coordinates.
inline std::vector<const VertexRecord*> sorted_vertices(
    const ArrangementDCEL& dcel) {
  std::vector<const VertexRecord*> vs;
  vs.reserve(dcel.vertices.size());
  for (const auto& v : dcel.vertices) vs.push_back(&v);
  std::sort(vs.begin(), vs.end(),
            [](const VertexRecord* a, const VertexRecord* b) {
              if (detail::descriptor_less(a->descriptor, b->descriptor))
                return true;
              if (detail::descriptor_less(b->descriptor, a->descriptor))
                return false;
              if (a->x != b->x) return a->x < b->x;
              return a->y < b->y;
            });
  return vs;
}

inline int cmd_euler(const std::string& path, std::ostream& out,
                     std::ostream& err) {
  nlohmann::json j;
  if (!load_json_file(path, j, err)) return 2;

  if (j.is_object() && j.contains("pancakes")) {
    ArrangementDCEL dcel;
    try {
      dcel = build_dcel(arrangement_from_json(j));
    } catch (const std::exception& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return 2;
    }
    out << dcel.vertices.size() << " singular vertices, "
        << dcel.faces.size() << " faces, " << dcel.edges.size()
        << " edges\n";
    for (const VertexRecord* v : sorted_vertices(dcel))
      out << pad(to_string(v->descriptor), 10) << " at ("
          << detail::fmt6(v->x) << ", " << detail::fmt6(v->y)
          << ")  weight " << to_string(v->weight) << "\n";
    out << to_string(euler_local_formula(dcel)) << "\n";
    return 0;
  }

  if (j.is_object() && j.contains("vertices")) {
    QuasisectionSummary s;
    try {
      s = summary_from_json(j);
    } catch (const std::exception& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return 2;
    }
    out << "summary '" << s.name << "' over base " << s.base << "\n";
    std::vector<VertexDescriptor> ds = s.vertices;
    std::sort(ds.begin(), ds.end(), detail::descriptor_less);
    for (size_t i = 0; i < ds.size();) {
      size_t count = 1;
      while (i + count < ds.size() && ds[i + count] == ds[i]) ++count;
      out << pad(to_string(ds[i]), 10) << " x" << pad(std::to_string(count), 4)
          << " weight " << pad(to_string(weight_of(ds[i])), 8) << " subtotal "
          << to_string(Rational(count) * weight_of(ds[i])) << "\n";
      i += count;
    }
    Rational total = euler_of_summary(s);
    out << to_string(total) << "\n";
    if (total != Rational(s.declared_euler)) {
      err << "error: declared euler " << s.declared_euler
          << " but the weighted vertex sum is " << to_string(total) << "\n";
      return 1;
    }
    return 0;
  }

  err << "error: " << path
      << ": unrecognized input (expected an arrangement with \"pancakes\" or "
         "a summary with \"vertices\")\n";
  return 2;
}

inline int cmd_sample(const std::string& path, std::uint64_t samples,
                      std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
  nlohmann::json j;
  if (!load_json_file(path, j, err)) return 2;
  if (!j.is_object() || !j.contains("pancakes")) {
    err << "error: " << path << ": sampling needs an arrangement file\n";
    return 2;
  }
  ArrangementDCEL dcel;
  try {
    dcel = build_dcel(arrangement_from_json(j));
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return 2;
  }

  if (samples == 0) {
    out << "0 samples requested; nothing to draw\n";
    return 0;
  }

  std::vector<Integer> totals(dcel.vertices.size(), Integer(0));
  for (std::uint64_t i = 0; i < samples; ++i) {
    SectionSample smp = sample_section(dcel, seed + i);
    std::vector<long long> profile = index_profile(dcel, smp);
    long long sum = 0;
    for (long long d : profile) sum += d;
    if (sum != 0) {
      err << "error: sample " << i << " (seed " << seed + i
          << ") has index sum " << sum << ", expected 0\n";
      return 1;
    }
    for (size_t v = 0; v < profile.size(); ++v) totals[v] += profile[v];
  }

  out << samples << "/" << samples << " samples have index sum 0\n";
  std::vector<std::pair<const VertexRecord*, size_t>> order;
  for (size_t v = 0; v < dcel.vertices.size(); ++v)
    order.push_back({&dcel.vertices[v], v});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (detail::descriptor_less(a.first->descriptor, b.first->descriptor))
      return true;
    if (detail::descriptor_less(b.first->descriptor, a.first->descriptor))
      return false;
    if (a.first->x != b.first->x) return a.first->x < b.first->x;
    return a.first->y < b.first->y;
  });
  for (const auto& [v, idx] : order) {
    Rational mean(totals[idx], Integer(samples));
    out << pad(to_string(v->descriptor), 10) << " at ("
        << detail::fmt6(v->x) << ", " << detail::fmt6(v->y)
        << ")  empirical mean " << pad(to_string(mean), 12) << " expected "
        << to_string(v->weight) << "\n";
  }
  return 0;
}

inline int cmd_uniqueness(int cutoff, const std::string& families_csv,
                          const std::string& anchors_csv, std::ostream& out,
                          std::ostream& err) {
  if (cutoff < 4) {
    err << "error: --cutoff must be at least 4\n";
    return 2;
  }
  std::set<std::string> families;
  if (families_csv == "all") {
    families = constraint_family_names();
  } else {
    for (const auto& f : split_list(families_csv)) {
      if (!constraint_family_names().count(f)) {
        err << "error: unknown constraint family '" << f << "' (known: "
            << join({constraint_family_names().begin(),
                     constraint_family_names().end()})
            << ")\n";
        return 2;
      }
      families.insert(f);
    }
  }
  std::set<std::string> anchors;
  if (anchors_csv != "none") {
    for (const auto& a : split_list(anchors_csv)) {
      if (!anchor_names().count(a)) {
        err << "error: unknown anchor '" << a << "' (known: "
            << join({anchor_names().begin(), anchor_names().end()})
            << ", or the keyword none)\n";
        return 2;
      }
      anchors.insert(a);
    }
  }

  UniquenessReport rep;
  try {
    rep = solve_uniqueness(cutoff, families, anchors);
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  out << "cutoff " << cutoff << "\n";
  out << "families "
      << join({families.begin(), families.end()}) << "\n";
  out << "anchors "
      << (anchors.empty() ? std::string("none")
                          : join({anchors.begin(), anchors.end()}))
      << "\n";
  out << "unknowns " << rep.system.unknowns.size() << "\n";
  out << "equations " << rep.system.equations.size() << "\n";
  out << "kernel dimension " << rep.kernel_dim << "\n";
  if (!rep.free_unknowns.empty())
    out << "free unknowns " << join(rep.free_unknowns) << "\n";
  for (size_t i = 0; i < rep.kernel_basis.size(); ++i) {
    out << "kernel vector " << i << ":";
    for (const auto& [name, coeff] : rep.kernel_basis[i])
      if (coeff != 0) out << " " << name << "=" << to_string(coeff);
    out << "\n";
  }
  out << "solution:\n";
  for (const auto& u : rep.system.unknowns) {
    bool free_u = std::find(rep.free_unknowns.begin(),
                            rep.free_unknowns.end(),
                            u) != rep.free_unknowns.end();
    bool mismatch = std::find(rep.mismatches.begin(), rep.mismatches.end(),
                              u) != rep.mismatches.end();
    out << "  " << pad(u, 12) << " = " << pad(to_string(rep.solution.at(u)), 10)
        << " closed form " << pad(to_string(rep.system.closed_form.at(u)), 10)
        << (free_u ? " free" : (mismatch ? " MISMATCH" : " ok")) << "\n";
  }
  out << "mismatches "
      << (rep.mismatches.empty() ? std::string("none") : join(rep.mismatches))
      << "\n";

  if (anchors.empty()) {
    out << "warning: no anchors chosen; the normalization gauge is free and "
           "uniqueness is reported up to it\n";
    return 0;
  }
  if (rep.unique_and_matches) {
    out << "verdict: unique solution, equal to the closed-form weights\n";
    return 0;
  }
  out << "verdict: NOT unique or not matching the closed-form weights\n";
  err << "error: uniqueness verification failed\n";
  return 1;
}

inline int cmd_render(const std::string& path, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
  nlohmann::json j;
  if (!load_json_file(path, j, err)) return 2;

  std::string svg;
  try {
    if (j.is_object() && j.contains("sectors")) {
      Portrait p = portrait_from_json(j);
      auto violations = validate(p);
      if (!violations.empty()) {
        err << "error: " << path << ": invalid portrait:\n";
        for (const auto& v : violations) err << "  " << v << "\n";
        return 2;
      }
      svg = render_portrait_svg(p);
    } else if (j.is_object() && j.contains("pancakes")) {
      svg = render_arrangement_svg(build_dcel(arrangement_from_json(j)));
    } else {
      err << "error: " << path
          << ": unrecognized input (expected a portrait with \"sectors\" or "
             "an arrangement with \"pancakes\")\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return 2;
  }

  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot open '" << out_path << "' for writing\n";
    return 2;
  }
  f << svg;
  f.flush();
  if (!f) {
    err << "error: writing '" << out_path << "' failed\n";
    return 2;
  }
  out << "wrote " << out_path << " (" << svg.size() << " bytes)\n";
  return 0;
}

inline int cmd_gallery(const std::string& action, std::ostream& out,
                       std::ostream& err) {
  std::vector<QuasisectionSummary> catalog = gallery_catalog();
  if (action == "list") {
    for (const auto& entry : catalog) {
      out << pad(entry.name, 26) << " euler "
          << pad(std::to_string(entry.declared_euler), 4) << " degree "
          << pad(entry.declared_degree
                     ? std::to_string(*entry.declared_degree)
                     : std::string("UNKNOWN"),
                 8)
          << " vertices " << multiset_cells(entry.vertices) << "\n";
    }
    return 0;
  }
  // check
  bool all_ok = true;
  for (const auto& entry : catalog) {
    Rational sum = euler_of_summary(entry);
    bool ok = sum == Rational(entry.declared_euler);
    all_ok = all_ok && ok;
    out << (ok ? "ok   " : "FAIL ") << pad(entry.name, 26) << " declared "
        << pad(std::to_string(entry.declared_euler), 4) << " weighted sum "
        << to_string(sum) << "\n";
  }
  if (!all_ok) err << "error: some gallery entries failed the euler check\n";
  return all_ok ? 0 : 1;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"exact verifier for the quasisection local Euler formula"};
  app.name("qsec");
  app.require_subcommand(1);

  auto* vw = app.add_subcommand(
      "verify-weights",
      "sweep the enumeration oracle against the closed-form weights");
  int max_nk = 6;
  int max_r = 6;
  vw->add_option("--max-nk", max_nk, "largest n+k for fold-fold rows")
      ->check(CLI::Range(1, 8));
  vw->add_option("--max-r", max_r, "largest r for pleat/fold-switch rows")
      ->check(CLI::Range(0, 8));

  auto* eu = app.add_subcommand(
      "euler", "evaluate the local formula on an arrangement or summary file");
  std::string eu_file;
  eu->add_option("file", eu_file, "input JSON file")->required();

  auto* sm = app.add_subcommand(
      "sample", "draw random sections and check every per-sample index sum");
  std::string sm_file;
  std::uint64_t sm_samples = 100;
  std::uint64_t sm_seed = 0;
  sm->add_option("file", sm_file, "arrangement JSON file")->required();
  sm->add_option("--samples", sm_samples, "number of sections to draw");
  sm->add_option("--seed", sm_seed, "seed of the first sample");

  auto* un = app.add_subcommand(
      "uniqueness", "solve the local-formula constraint system exactly");
  int cutoff = 6;
  std::string families = "all";
  std::string anchors = "ANCHOR1";
  un->add_option("--cutoff", cutoff, "truncation degree (>= 4)");
  un->add_option("--families", families,
                 "comma-separated constraint families, or 'all'");
  un->add_option("--anchors", anchors,
                 "comma-separated anchors, or 'none'");

  auto* rd = app.add_subcommand("render",
                                "render a portrait or arrangement to SVG");
  std::string rd_file;
  std::string rd_out;
  rd->add_option("file", rd_file, "portrait or arrangement JSON file")
      ->required();
  rd->add_option("--out", rd_out, "output SVG path")->required();

  auto* gl = app.add_subcommand("gallery", "curated quasisection examples");
  std::string gl_action;
  gl->add_option("action", gl_action, "'list' or 'check'")
      ->required()
      ->check(CLI::IsMember({"list", "check"}));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e, out, err);
    app.exit(e, err, err);
    err << "run 'qsec --help' for usage\n";
    return 2;
  }

  try {
    if (app.got_subcommand(vw))
      return cli_detail::cmd_verify_weights(max_nk, max_r, out, err);
    if (app.got_subcommand(eu)) return cli_detail::cmd_euler(eu_file, out, err);
    if (app.got_subcommand(sm))
      return cli_detail::cmd_sample(sm_file, sm_samples, sm_seed, out, err);
    if (app.got_subcommand(un))
      return cli_detail::cmd_uniqueness(cutoff, families, anchors, out, err);
    if (app.got_subcommand(rd))
      return cli_detail::cmd_render(rd_file, rd_out, out, err);
    if (app.got_subcommand(gl))
      return cli_detail::cmd_gallery(gl_action, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace qsec
