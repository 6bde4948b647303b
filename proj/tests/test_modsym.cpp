#include <catch2/catch_amalgamated.hpp>

#include "steinberg/modsym.hpp"

#include <random>

using namespace steinberg;

namespace {

IMat22 imat_mul(const IMat22& a, const IMat22& b) {
  return {{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
           {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

IMat22 random_gamma0(std::mt19937_64& rng, std::int64_t N, GammaFlavor flavor, int len = 10) {
  const IMat22 T{{{1, 1}, {0, 1}}}, L{{{1, 0}, {Int(N), 1}}}, J{{{1, 0}, {0, -1}}};
  IMat22 m{{{1, 0}, {0, 1}}};
  std::uniform_int_distribution<int> pick(0, flavor == GammaFlavor::Gamma0Pm ? 2 : 1);
  std::uniform_int_distribution<int> steps(1, len);
  for (int i = steps(rng); i > 0; --i) {
    switch (pick(rng)) {
      case 0: m = imat_mul(m, T); break;
      case 1: m = imat_mul(m, L); break;
      default: m = imat_mul(m, J); break;
    }
  }
  return m;
}

IMat22 random_unimodular(std::mt19937_64& rng, int len = 10) {
  const IMat22 S{{{0, 1}, {-1, 0}}}, T{{{1, 1}, {0, 1}}}, J{{{1, 0}, {0, -1}}};
  IMat22 m{{{1, 0}, {0, 1}}};
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> steps(1, len);
  for (int i = steps(rng); i > 0; --i) {
    switch (pick(rng)) {
      case 0: m = imat_mul(m, S); break;
      case 1: m = imat_mul(m, T); break;
      default: m = imat_mul(m, J); break;
    }
  }
  return m;
}

bool same_cusp(const Int& p, const Int& q, const Int& p2, const Int& q2) {
  return p * q2 == p2 * q;
}

Cusp apply_moebius(const IMat22& g, const Cusp& v) {
  return Cusp(g[0][0] * v.p + g[0][1] * v.q, g[1][0] * v.p + g[1][1] * v.q);
}

std::vector<Int> add(std::vector<Int> a, const std::vector<Int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

bool in_presentation_span(const CuspidalHomology& h, const std::vector<Int>& coords) {
  HnfSpan span(h.cycle_rank());
  for (std::size_t r = 0; r < h.presentation.rows(); ++r) {
    std::vector<Int> row(h.cycle_rank());
    for (std::size_t j = 0; j < h.cycle_rank(); ++j) row[j] = h.presentation(r, j);
    span.insert(std::move(row));
  }
  std::vector<Int> copy = coords;
  return !span.insert(copy);
}

}  // namespace

TEST_CASE("continued fraction chains") {
  SymbolChain zero = cusp_path_to_unimodular(Cusp(5, 3), Cusp(5, 3));
  CHECK(zero.empty());

  SymbolChain inf0 = cusp_path_to_unimodular(Cusp::infinity(), Cusp(0, 1));
  REQUIRE(inf0.size() == 1);
  CHECK(inf0[0].coeff == 1);
  CHECK(inf0[0].mat == IMat22{{{1, 0}, {0, 1}}});

  SymbolChain path = cusp_path_to_unimodular(Cusp::infinity(), Cusp(5, 3));
  REQUIRE(path.size() == 3);
  // convergents infinity -> 1 -> 2 -> 5/3
  std::vector<std::pair<Int, Int>> waypoints = {{1, 0}, {1, 1}, {2, 1}, {5, 3}};
  for (std::size_t k = 0; k < path.size(); ++k) {
    CHECK(abs(idet(path[k].mat)) == 1);
    const IMat22& m = path[k].mat;
    CHECK(same_cusp(m[0][0], m[1][0], waypoints[k].first, waypoints[k].second));
    CHECK(same_cusp(m[0][1], m[1][1], waypoints[k + 1].first, waypoints[k + 1].second));
  }
}

TEST_CASE("chains telescope for random cusp pairs") {
  std::mt19937_64 rng(314159);
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(0, 15);
  for (int trial = 0; trial < 200; ++trial) {
    long p = num(rng), q = den(rng), p2 = num(rng), q2 = den(rng);
    if ((p == 0 && q == 0) || (p2 == 0 && q2 == 0)) continue;
    Cusp v(p, q), w(p2, q2);
    SymbolChain chain = cusp_path_to_unimodular(v, w);
    if (v == w) {
      CHECK(chain.empty());
      continue;
    }
    // walk the chain: each term travels col0 -> col1 (or reversed when -1)
    Cusp at = v;
    for (const auto& term : chain) {
      REQUIRE(abs(idet(term.mat)) == 1);
      const IMat22& m = term.mat;
      Cusp from(m[0][term.coeff == 1 ? 0 : 1], m[1][term.coeff == 1 ? 0 : 1]);
      Cusp to(m[0][term.coeff == 1 ? 1 : 0], m[1][term.coeff == 1 ? 1 : 0]);
      CHECK(from == at);
      at = to;
    }
    CHECK(at == w);
  }
}

TEST_CASE("edge classes at N = 11") {
  VoronoiComplex cx(11, GammaFlavor::Gamma0Pm);
  EdgeClass id = edge_class(IMat22{{{1, 0}, {0, 1}}}, cx);
  CHECK(id.sign == 1);
  CHECK(id.orbit == 0);  // tau_1

  EdgeClass unor = edge_class(IMat22{{{1, 0}, {1, 1}}}, cx);
  CHECK(unor.sign == 0);  // bottom row (1, 1) lies in the unorientable orbit e2

  EdgeClass swapped = edge_class(IMat22{{{0, 1}, {1, 0}}}, cx);
  CHECK(swapped.sign == -1);
  CHECK(swapped.orbit == 0);

  CHECK_THROWS_AS(edge_class(IMat22{{{2, 0}, {0, 1}}}, cx), std::invalid_argument);
}

TEST_CASE("triangular elements have zero class") {
  for (GammaFlavor flavor : {GammaFlavor::Gamma0Pm, GammaFlavor::Gamma0}) {
    for (std::int64_t N : {7, 11, 13}) {
      auto h = cuspidal_homology(N, flavor);
      std::vector<Int> zero(h->cycle_rank());
      // upper triangular fixes e, so the chain is literally empty
      CHECK(class_of_gamma(IMat22{{{1, 0}, {0, 1}}}, *h) == zero);
      CHECK(class_of_gamma(IMat22{{{1, 7}, {0, 1}}}, *h) == zero);
      CHECK(class_of_gamma(IMat22{{{-1, 3}, {0, -1}}}, *h) == zero);
      // lower triangular vanishes in the quotient by the boundary relations
      CHECK(in_presentation_span(*h, class_of_gamma(IMat22{{{1, 0}, {Int(4 * N), 1}}}, *h)));
      CHECK(in_presentation_span(*h, class_of_gamma(IMat22{{{-1, 0}, {Int(3 * N), -1}}}, *h)));
    }
  }
}

TEST_CASE("antisymmetry of edge classes") {
  std::mt19937_64 rng(2718281);
  const IMat22 swap{{{0, 1}, {1, 0}}};
  for (GammaFlavor flavor : {GammaFlavor::Gamma0Pm, GammaFlavor::Gamma0}) {
    for (std::int64_t N : {7, 11, 12, 15}) {
      VoronoiComplex cx(N, flavor);
      for (int trial = 0; trial < 100; ++trial) {
        IMat22 g = random_unimodular(rng);
        EdgeClass a = edge_class(g, cx);
        EdgeClass b = edge_class(imat_mul(g, swap), cx);
        if (a.sign == 0) {
          CHECK(b.sign == 0);
        } else {
          CHECK(a.orbit == b.orbit);
          CHECK(a.sign == -b.sign);
        }
      }
    }
  }
}

TEST_CASE("Bykovskii three-term relation holds modulo boundaries") {
  std::mt19937_64 rng(46368);
  const auto& st = stabilizer_tables();
  IMat22 U{{{0, 1}, {-1, 1}}}, V{{{1, -1}, {1, 0}}};
  (void)st;
  for (GammaFlavor flavor : {GammaFlavor::Gamma0Pm, GammaFlavor::Gamma0}) {
    for (std::int64_t N : {7, 11, 13, 15, 24, 30}) {
      auto h = cuspidal_homology(N, flavor);
      const VoronoiComplex& cx = *h->complex;
      for (int trial = 0; trial < 60; ++trial) {
        IMat22 g = random_unimodular(rng);
        // <a,b> + <-b,a+b> + <a+b,-a> as edge vectors
        std::vector<Int> y(cx.edge_rows.size());
        for (const IMat22& m : {g, imat_mul(g, U), imat_mul(g, V)}) {
          EdgeClass ec = edge_class(m, cx);
          if (ec.sign != 0) y[cx.edge_row_of_orbit[ec.orbit]] += ec.sign;
        }
        auto coords = h->project(std::move(y));  // boundaries are cuspidal
        CHECK(in_presentation_span(*h, coords));
      }
    }
  }
}

TEST_CASE("base-point independence, homomorphism and Gamma-invariance") {
  std::mt19937_64 rng(1729);
  std::uniform_int_distribution<long> num(-8, 8);
  std::uniform_int_distribution<long> den(0, 5);
  for (GammaFlavor flavor : {GammaFlavor::Gamma0Pm, GammaFlavor::Gamma0}) {
    for (std::int64_t N : {7, 11, 13, 15}) {
      auto h = cuspidal_homology(N, flavor);
      for (int trial = 0; trial < 40; ++trial) {
        IMat22 g1 = random_gamma0(rng, N, flavor);
        IMat22 g2 = random_gamma0(rng, N, flavor);

        // [e, g1 g2 e] = [e, g1 e] + [e, g2 e]
        auto lhs = class_of_gamma(imat_mul(g1, g2), *h);
        auto rhs = add(class_of_gamma(g1, *h), class_of_gamma(g2, *h));
        std::vector<Int> diff(lhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
        CHECK(in_presentation_span(*h, diff));

        // [f, g1 f] = [e, g1 e] for a random base cusp f
        long fp = num(rng), fq = den(rng);
        if (fp == 0 && fq == 0) fp = 1;
        Cusp f(fp, fq);
        auto base = class_of_gamma(g1, *h);
        auto moved = symbol_class(cusp_path_to_unimodular(f, apply_moebius(g1, f)), *h);
        std::vector<Int> d2(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) d2[i] = base[i] - moved[i];
        CHECK(in_presentation_span(*h, d2));

        // left-multiplying every symbol by a fixed gamma preserves the class
        SymbolChain chain =
            cusp_path_to_unimodular(Cusp::infinity(), Cusp(g1[0][0], g1[1][0]));
        SymbolChain translated = chain;
        for (auto& term : translated) term.mat = imat_mul(g2, term.mat);
        auto a = symbol_class(chain, *h);
        auto b = symbol_class(translated, *h);
        std::vector<Int> d3(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d3[i] = a[i] - b[i];
        CHECK(in_presentation_span(*h, d3));
      }
    }
  }
}
