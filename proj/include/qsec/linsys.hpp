#pragma once

// Exact linear algebra over the rationals for string-keyed unknowns.
//
// Systems are lists of equations sum(coeff_i * var_i) = rhs.  solve_exact runs
// fraction-free-ish Gaussian elimination (exact rationals, so no pivot growth
// concerns beyond size) and reports either inconsistency (with the offending
// equation tags) or a particular solution plus a basis of the solution space
// of the homogeneous system (the kernel restricted to the named unknowns).

#include "qsec/rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qsec {

struct Equation {
  std::map<std::string, Rational> coeffs;  // zero coefficients may be omitted
  Rational rhs;
  std::string tag;  // human-readable origin, reported on inconsistency
};

struct LinearSolution {
  bool consistent = false;
  // Tags of equations that reduced to 0 = nonzero (empty when consistent).
  std::vector<std::string> conflict_tags;
  // Particular solution with every free variable set to 0.
  std::map<std::string, Rational> particular;
  // Basis of the homogeneous solution space; empty iff the solution is unique.
  std::vector<std::map<std::string, Rational>> kernel_basis;
  // Unknowns that were free (one kernel vector per entry, same order).
  std::vector<std::string> free_variables;
};

inline LinearSolution solve_exact(const std::vector<Equation>& equations) {
  // Collect variables in deterministic (sorted) order.
  std::set<std::string> var_set;
  for (const auto& eq : equations) {
    for (const auto& [name, c] : eq.coeffs) {
      if (c != 0) var_set.insert(name);
    }
  }
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::map<std::string, size_t> index;
  for (size_t j = 0; j < vars.size(); ++j) index[vars[j]] = j;
  const size_t n = vars.size();

  struct Row {
    std::vector<Rational> a;
    Rational b;
    std::string tag;
  };
  std::vector<Row> rows;
  rows.reserve(equations.size());
  for (const auto& eq : equations) {
    Row row;
    row.a.assign(n, Rational(0));
    for (const auto& [name, c] : eq.coeffs) {
      if (c != 0) row.a[index.at(name)] = c;
    }
    row.b = eq.rhs;
    row.tag = eq.tag;
    rows.push_back(std::move(row));
  }

  LinearSolution out;

  // Forward elimination with per-column pivot selection.
  std::vector<size_t> pivot_row_of_col(n, SIZE_MAX);
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < rows.size(); ++col) {
    size_t pivot = SIZE_MAX;
    for (size_t r = rank; r < rows.size(); ++r) {
      if (rows[r].a[col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == SIZE_MAX) continue;
    std::swap(rows[rank], rows[pivot]);
    // Normalize pivot row.
    Rational p = rows[rank].a[col];
    for (size_t j = col; j < n; ++j) rows[rank].a[j] /= p;
    rows[rank].b /= p;
    // Eliminate the column everywhere else.
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r].a[col] == 0) continue;
      Rational f = rows[r].a[col];
      for (size_t j = col; j < n; ++j) rows[r].a[j] -= f * rows[rank].a[j];
      rows[r].b -= f * rows[rank].b;
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }

  // Inconsistency check: rows 0 = nonzero.
  for (size_t r = rank; r < rows.size(); ++r) {
    bool all_zero = std::all_of(rows[r].a.begin(), rows[r].a.end(),
                                [](const Rational& c) { return c == 0; });
    if (all_zero && rows[r].b != 0) out.conflict_tags.push_back(rows[r].tag);
  }
  if (!out.conflict_tags.empty()) {
    out.consistent = false;
    return out;
  }
  out.consistent = true;

  // Particular solution: free variables 0, pivot variables from their rows.
  std::vector<bool> is_pivot_col(n, false);
  for (size_t col = 0; col < n; ++col) {
    if (pivot_row_of_col[col] != SIZE_MAX) is_pivot_col[col] = true;
  }
  std::vector<Rational> x(n, Rational(0));
  for (size_t col = 0; col < n; ++col) {
    if (is_pivot_col[col]) x[col] = rows[pivot_row_of_col[col]].b;
  }
  for (size_t j = 0; j < n; ++j) out.particular[vars[j]] = x[j];

  // Kernel basis: one vector per free column.
  for (size_t fc = 0; fc < n; ++fc) {
    if (is_pivot_col[fc]) continue;
    out.free_variables.push_back(vars[fc]);
    std::map<std::string, Rational> vec;
    for (size_t j = 0; j < n; ++j) vec[vars[j]] = Rational(0);
    vec[vars[fc]] = Rational(1);
    for (size_t col = 0; col < n; ++col) {
      if (!is_pivot_col[col]) continue;
      // Pivot row: x[col] + sum(a[j] * x[j] over non-pivot j) = b.
      vec[vars[col]] = -rows[pivot_row_of_col[col]].a[fc];
    }
    out.kernel_basis.push_back(std::move(vec));
  }
  return out;
}

}  // namespace qsec
