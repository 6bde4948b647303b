#pragma once

// Modular-symbol algebra: continued-fraction reduction of cusp-to-cusp paths
// into unimodular symbols, and identification of a unimodular symbol with a
// signed orientable edge orbit of the Voronoi complex.

#include "steinberg/voronoi.hpp"

#include <array>
#include <vector>

namespace steinberg {

using IMat22 = std::array<std::array<Int, 2>, 2>;

inline Int idet(const IMat22& g) { return g[0][0] * g[1][1] - g[0][1] * g[1][0]; }

// A point of P^1(Q): p/q in lowest terms with q >= 0; (1, 0) is infinity.
struct Cusp {
  Int p = 1, q = 0;

  Cusp() = default;
  Cusp(Int num, Int den) : p(std::move(num)), q(std::move(den)) {
    if (p == 0 && q == 0) throw std::invalid_argument("Cusp: (0, 0) is not a point");
    Int g = gcd(p, q);
    p /= g, q /= g;
    if (q < 0 || (q == 0 && p < 0)) p = -p, q = -q;
  }
  static Cusp infinity() { return Cusp(); }
  bool is_infinity() const { return q == 0; }
  bool operator==(const Cusp& o) const { return p == o.p && q == o.q; }
};

struct SymbolTerm {
  int coeff = 1;
  IMat22 mat;  // columns are the two endpoint cusps, |det| = 1
};

using SymbolChain = std::vector<SymbolTerm>;

namespace detail {

inline void normalize_column_signs(IMat22& m) {
  for (int j = 0; j < 2; ++j) {
    const Int& lead = m[0][j] != 0 ? m[0][j] : m[1][j];
    if (lead < 0) m[0][j] = -m[0][j], m[1][j] = -m[1][j];
  }
}

// Chain for [infinity, p/q] through the continued-fraction convergents.
inline SymbolChain chain_from_infinity(const Cusp& w) {
  SymbolChain chain;
  if (w.is_infinity()) return chain;
  Int num = w.p, den = w.q;  // den > 0
  Int pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;  // convergents p_{-1}/q_{-1}, p_{-2}/q_{-2}
  int k = 0;
  while (den != 0) {
    Int a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Int pk = a * pm1 + pm2, qk = a * qm1 + qm2;
    // [x_{k-1}, x_k] as a determinant -1 matrix; the sign twist on the first
    // column keeps |det| = 1 for every k
    IMat22 m{{{(k % 2 == 0 ? -pm1 : pm1), pk}, {(k % 2 == 0 ? -qm1 : qm1), qk}}};
    normalize_column_signs(m);
    chain.push_back({1, m});
    pm2 = pm1, pm1 = pk, qm2 = qm1, qm1 = qk;
    num = den, den = r;
    ++k;
  }
  return chain;
}

}  // namespace detail

// [v, w] as a sum of unimodular symbols; possibly empty (v = w).
inline SymbolChain cusp_path_to_unimodular(const Cusp& v, const Cusp& w) {
  if (v == w) return {};
  SymbolChain chain;
  if (!v.is_infinity()) {
    // [v, w] = -[infinity, v] + [infinity, w]; the negated terms are emitted
    // in reverse so consecutive endpoints telescope from v through infinity
    SymbolChain head = detail::chain_from_infinity(v);
    for (auto it = head.rbegin(); it != head.rend(); ++it) {
      SymbolTerm term = *it;
      term.coeff = -term.coeff;
      chain.push_back(term);
    }
  }
  for (const auto& term : detail::chain_from_infinity(w)) chain.push_back(term);
  return chain;
}

struct EdgeClass {
  int sign = 0;            // 0 when the symbol lands on an unorientable orbit
  std::size_t orbit = 0;   // edge orbit id
};

// Locate the Gamma-coset of g via its bottom row (and, for Gamma_0(N), the
// determinant sheet) and return the signed orientable edge orbit.
inline EdgeClass edge_class(const IMat22& g, const VoronoiComplex& cx) {
  Int d = idet(g);
  if (d != 1 && d != -1) throw std::invalid_argument("edge_class: matrix must have det +-1");
  const std::int64_t N = cx.N;
  auto r = [N](const Int& x) { return static_cast<std::int64_t>(mpz_fdiv_ui(x.get_mpz_t(), N)); };
  std::size_t pt = cx.p1.normalize(r(g[1][0]), r(g[1][1])).index;
  std::size_t sheet = (cx.flavor == GammaFlavor::Gamma0 && d == -1) ? 1 : 0;
  return {cx.edge.sign_of[2 * pt + sheet],
          static_cast<std::size_t>(cx.edge.orbit_of[2 * pt + sheet])};
}

// Signed edge-orbit coordinates of a chain, over the orientable edge rows.
inline std::vector<Int> edge_vector(const SymbolChain& chain, const VoronoiComplex& cx) {
  std::vector<Int> y(cx.edge_rows.size());
  for (const auto& term : chain) {
    EdgeClass ec = edge_class(term.mat, cx);
    if (ec.sign == 0) continue;
    y[cx.edge_row_of_orbit[ec.orbit]] += term.coeff * ec.sign;
  }
  return y;
}

// Coordinates of a chain's class in the cycle basis of H.  Signals a
// consistency error if the chain is not cuspidal.
inline std::vector<Int> symbol_class(const SymbolChain& chain, const CuspidalHomology& h) {
  return h.project(edge_vector(chain, *h.complex));
}

// [e, gamma e]_Gamma in cycle-basis coordinates, e = (1:0).
inline std::vector<Int> class_of_gamma(const IMat22& gamma, const CuspidalHomology& h) {
  Cusp target(gamma[0][0], gamma[1][0]);
  return symbol_class(cusp_path_to_unimodular(Cusp::infinity(), target), h);
}

}  // namespace steinberg
