#pragma once

// The local index weights: the closed-form values of the expected index for
// each vertex kind.  These are what the formula sums; the oracle exists to
// certify them.
//
//   fold-fold vertex, n circles one side / k the other:
//       w = 4(n-k) / ((n+k)(n+k+2)(n+k+4)),  n+k >= 1
//   pleat and fold-switch vertices, r spectator circles:
//       w = 2 / ((r+1)(r+3)), negated for the left-handed version.
//
// Inessential points weigh zero.

#include "qsec/portrait.hpp"
#include "qsec/rational.hpp"

#include <stdexcept>

namespace qsec {

inline Rational weight_ff(int n, int k) {
  if (n < 0 || k < 0 || n + k < 1)
    throw std::invalid_argument("weight_ff: need n,k >= 0 and n+k >= 1");
  const long long s = n + k;
  return Rational(4 * (static_cast<long long>(n) - k),
                  s * (s + 2) * (s + 4));
}

inline Rational weight_p(int r, Side side) {
  if (r < 0) throw std::invalid_argument("weight_p: need r >= 0");
  Rational w(2, static_cast<long long>(r + 1) * (r + 3));
  return side == Side::R ? w : -w;
}

inline Rational weight_fs(int r, Side side) {
  if (r < 0) throw std::invalid_argument("weight_fs: need r >= 0");
  Rational w(2, static_cast<long long>(r + 1) * (r + 3));
  return side == Side::R ? w : -w;
}

inline Rational weight_of(const VertexDescriptor& d) {
  switch (d.kind) {
    case VertexDescriptor::Kind::TypeI:
      return weight_ff(d.n, d.k);
    case VertexDescriptor::Kind::TypeII:
      return weight_p(d.r, d.side);
    case VertexDescriptor::Kind::TypeIII:
      return weight_fs(d.r, d.side);
    case VertexDescriptor::Kind::Inessential:
      return Rational(0);
  }
  return Rational(0);
}

}  // namespace qsec
