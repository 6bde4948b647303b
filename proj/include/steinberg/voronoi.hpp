#pragma once

// The Voronoi cell complex of the GL_2(Z) tessellation by ideal triangles,
// modulo Gamma_0(N)^pm or Gamma_0(N): cell orbits with orientation data,
// boundary matrices, and the cuspidal homology presentation.
//
// Cells of dimension i correspond to double cosets Gamma \ GL_2(Z) / Gbar_i,
// i.e. orbits of the standard-cell stabilizers Gbar_i acting on P^1(Z/N) from
// the right.  For Gamma_0(N) (determinant 1) the coset space is modelled as
// pairs (point, det-sheet), acted on by (p, s).g = (p.g, s*det g).

#include "steinberg/exactalg.hpp"
#include "steinberg/projline.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>

namespace steinberg {

enum class GammaFlavor { Gamma0Pm, Gamma0 };

inline const char* flavor_name(GammaFlavor f) {
  return f == GammaFlavor::Gamma0Pm ? "pm" : "sl";
}

// Stabilizers of the standard triangle {e1, e2, e1+e2}, edge {e1, e2} and
// vertex {e1}, and the matrices appearing in the boundary formulas
// d2(F2) = (1 + U + V) F1 and d1(F1) = (S - 1) F0.
struct StabilizerTables {
  std::vector<Mat22> tri;        // 12 elements
  std::vector<Mat22> tri_plus;   // orientation preserving, 6
  std::vector<Mat22> edge;       // 8 elements
  std::vector<Mat22> edge_plus;  // orientation preserving, 4
  Mat22 U, V, S, T;
};

inline const StabilizerTables& stabilizer_tables() {
  static const StabilizerTables t = [] {
    StabilizerTables s;
    s.tri = {
        Mat22{{{-1, 1}, {-1, 0}}}, Mat22{{{1, 0}, {0, 1}}},   Mat22{{{0, 1}, {1, 0}}},
        Mat22{{{1, -1}, {0, -1}}}, Mat22{{{-1, 1}, {0, 1}}},  Mat22{{{0, 1}, {-1, 1}}},
        Mat22{{{1, -1}, {1, 0}}},  Mat22{{{-1, 0}, {0, -1}}}, Mat22{{{0, -1}, {-1, 0}}},
        Mat22{{{0, -1}, {1, -1}}}, Mat22{{{-1, 0}, {-1, 1}}}, Mat22{{{1, 0}, {1, -1}}}};
    s.tri_plus = {Mat22{{{-1, 1}, {-1, 0}}}, Mat22{{{1, 0}, {0, 1}}},
                  Mat22{{{0, 1}, {-1, 1}}},  Mat22{{{1, -1}, {1, 0}}},
                  Mat22{{{-1, 0}, {0, -1}}}, Mat22{{{0, -1}, {1, -1}}}};
    s.edge = {Mat22{{{-1, 0}, {0, -1}}}, Mat22{{{0, -1}, {1, 0}}}, Mat22{{{1, 0}, {0, -1}}},
              Mat22{{{0, -1}, {-1, 0}}}, Mat22{{{0, 1}, {1, 0}}},  Mat22{{{1, 0}, {0, 1}}},
              Mat22{{{-1, 0}, {0, 1}}},  Mat22{{{0, 1}, {-1, 0}}}};
    s.edge_plus = {Mat22{{{-1, 0}, {0, -1}}}, Mat22{{{1, 0}, {0, -1}}},
                   Mat22{{{1, 0}, {0, 1}}},   Mat22{{{-1, 0}, {0, 1}}}};
    s.U = Mat22{{{0, 1}, {-1, 1}}};
    s.V = Mat22{{{1, -1}, {1, 0}}};
    s.S = Mat22{{{0, 1}, {-1, 0}}};
    s.T = Mat22{{{1, 1}, {0, 1}}};
    return s;
  }();
  return t;
}

// Orientation characters of the standard stabilizers.
inline int chi_tri(const Mat22& g) { return det(g) > 0 ? 1 : -1; }
inline int chi_edge(const Mat22& g) { return g[0][1] == 0 ? 1 : -1; }  // swap reverses

struct CellOrbit {
  int dim = 0;
  std::vector<std::size_t> members;  // point indices (det-sheet +1)
  std::size_t representative = 0;    // smallest member
  bool orientable = true;
};

// Per-(point, sheet) lookup produced by the orbit enumeration.
struct OrbitTable {
  std::vector<CellOrbit> orbits;
  // indexed by point*2 + sheet; sheet 1 unused for Gamma0Pm
  std::vector<std::int32_t> orbit_of;
  std::vector<std::int8_t> sign_of;  // chi of a transporter to the rep; 0 if unorientable
};

namespace detail {

inline OrbitTable enumerate_orbits(const P1List& p1, const std::vector<Mat22>& gens,
                                   const std::function<int(const Mat22&)>& chi,
                                   bool two_sheets, int dim) {
  OrbitTable t;
  const std::size_t n = p1.size();
  t.orbit_of.assign(2 * n, -1);
  t.sign_of.assign(2 * n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (t.orbit_of[2 * start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(t.orbits.size());
    CellOrbit orbit;
    orbit.dim = dim;
    orbit.representative = start;
    bool orientable = true;
    std::deque<std::pair<std::size_t, int>> queue;  // (pair index, sign)
    t.orbit_of[2 * start] = id;
    t.sign_of[2 * start] = 1;
    queue.emplace_back(2 * start, 1);
    while (!queue.empty()) {
      auto [pair, sg] = queue.front();
      queue.pop_front();
      std::size_t pt = pair / 2, sheet = pair % 2;
      for (const auto& g : gens) {
        std::size_t npt = p1.act(p1[pt], g).index;
        std::size_t nsheet = two_sheets ? (sheet ^ (det(g) < 0 ? 1u : 0u)) : 0;
        int nsg = sg * chi(g);
        std::size_t npair = 2 * npt + nsheet;
        if (t.orbit_of[npair] < 0) {
          t.orbit_of[npair] = id;
          t.sign_of[npair] = static_cast<std::int8_t>(nsg);
          queue.emplace_back(npair, nsg);
        } else if (t.sign_of[npair] != nsg) {
          orientable = false;
        }
      }
    }
    for (std::size_t p = 0; p < n; ++p)
      if (t.orbit_of[2 * p] == id) orbit.members.push_back(p);
    orbit.orientable = orientable;
    if (!orientable)
      for (std::size_t p = 0; p < 2 * n; ++p)
        if (t.orbit_of[p] == id) t.sign_of[p] = 0;
    t.orbits.push_back(std::move(orbit));
  }
  return t;
}

}  // namespace detail

struct VoronoiComplex {
  std::int64_t N = 1;
  GammaFlavor flavor = GammaFlavor::Gamma0Pm;
  P1List p1;
  OrbitTable tri, edge, vert;
  std::vector<std::size_t> tri_cols;             // orientable triangle orbit ids
  std::vector<std::size_t> edge_rows;            // orientable edge orbit ids
  std::vector<std::ptrdiff_t> edge_row_of_orbit; // orbit id -> row, -1 if dropped
  IntMatrix d2;  // edge-orbit coordinates of each orientable triangle boundary
  IntMatrix d1;  // vertex-orbit coordinates of each orientable edge boundary

  explicit VoronoiComplex(std::int64_t n, GammaFlavor f) : N(n), flavor(f), p1(n) {
    const auto& st = stabilizer_tables();
    const bool sl = flavor == GammaFlavor::Gamma0;
    const auto chi1 = [] (const Mat22& g) { return chi_edge(g); };
    const auto chi2 = [] (const Mat22& g) { return chi_tri(g); };
    const auto chi0 = [] (const Mat22&) { return 1; };
    Mat22 Tinv{{{1, -1}, {0, 1}}}, J{{{1, 0}, {0, -1}}}, minusI{{{-1, 0}, {0, -1}}};
    tri = detail::enumerate_orbits(p1, st.tri, chi2, sl, 2);
    edge = detail::enumerate_orbits(p1, st.edge, chi1, sl, 1);
    vert = detail::enumerate_orbits(p1, {st.T, Tinv, J, minusI}, chi0, sl, 0);

    for (std::size_t i = 0; i < tri.orbits.size(); ++i)
      if (tri.orbits[i].orientable) tri_cols.push_back(i);
    edge_row_of_orbit.assign(edge.orbits.size(), -1);
    for (std::size_t i = 0; i < edge.orbits.size(); ++i)
      if (edge.orbits[i].orientable) {
        edge_row_of_orbit[i] = static_cast<std::ptrdiff_t>(edge_rows.size());
        edge_rows.push_back(i);
      }

    d2 = IntMatrix(edge_rows.size(), tri_cols.size());
    for (std::size_t c = 0; c < tri_cols.size(); ++c) {
      const auto& rep = p1[tri.orbits[tri_cols[c]].representative];
      for (const Mat22& M : {Mat22{{{1, 0}, {0, 1}}}, st.U, st.V}) {
        std::size_t q = p1.act(rep, M).index;
        int sg = edge.sign_of[2 * q];
        if (sg != 0) d2(edge_row_of_orbit[edge.orbit_of[2 * q]], c) += sg;
      }
    }
    d1 = IntMatrix(vert.orbits.size(), edge_rows.size());
    for (std::size_t c = 0; c < edge_rows.size(); ++c) {
      const auto& rep = p1[edge.orbits[edge_rows[c]].representative];
      d1(vert.orbit_of[2 * p1.act(rep, st.S).index], c) += 1;
      d1(vert.orbit_of[2 * rep.index], c) -= 1;
    }
  }
};

// Presentation of H_0^cusp as ker(d1)/im(d2) with a projection onto a fixed
// Z-basis of ker(d1).
struct CuspidalHomology {
  std::shared_ptr<const VoronoiComplex> complex;
  IntMatrix cycle_basis;              // rows form a basis of ker d1, in row HNF
  std::vector<std::size_t> pivot_col; // pivot column of each basis row
  IntMatrix presentation;             // rows: images of orientable triangles
  FgAbGroup group;

  std::size_t cycle_rank() const { return cycle_basis.rows(); }

  // Coordinates of an edge-coordinate vector in the cycle basis.
  // Signals a consistency error if the vector lies outside ker d1.
  std::vector<Int> project(std::vector<Int> y) const {
    const std::size_t k = cycle_basis.rows(), e = cycle_basis.cols();
    if (y.size() != e) throw std::invalid_argument("project: wrong length");
    std::vector<Int> z(k);
    for (std::size_t i = 0; i < k; ++i) {
      const Int& piv = cycle_basis(i, pivot_col[i]);
      Int& lead = y[pivot_col[i]];
      if (lead % piv != 0)
        throw consistency_error("class is not cuspidal (outside ker d1)");
      z[i] = lead / piv;
      if (z[i] == 0) continue;
      for (std::size_t j = pivot_col[i]; j < e; ++j) y[j] -= z[i] * cycle_basis(i, j);
    }
    for (const auto& v : y)
      if (v != 0) throw consistency_error("class is not cuspidal (outside ker d1)");
    return z;
  }
};

inline std::shared_ptr<const CuspidalHomology> cuspidal_homology(std::int64_t N,
                                                                 GammaFlavor flavor) {
  auto h = std::make_shared<CuspidalHomology>();
  h->complex = std::make_shared<const VoronoiComplex>(N, flavor);
  const VoronoiComplex& cx = *h->complex;
  h->cycle_basis = kernel_basis(cx.d1);
  const std::size_t k = h->cycle_basis.rows();
  h->pivot_col.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = 0;
    while (j < h->cycle_basis.cols() && h->cycle_basis(i, j) == 0) ++j;
    h->pivot_col[i] = j;
  }
  h->presentation = IntMatrix(cx.d2.cols(), k);
  for (std::size_t c = 0; c < cx.d2.cols(); ++c) {
    std::vector<Int> y(cx.d2.rows());
    for (std::size_t r = 0; r < cx.d2.rows(); ++r) y[r] = cx.d2(r, c);
    std::vector<Int> z = h->project(std::move(y));  // d1*d2 = 0
    for (std::size_t i = 0; i < k; ++i) h->presentation(c, i) = z[i];
  }
  h->group = quotient_structure(k, h->presentation);
  for (const auto& f : h->group.invariant_factors)
    if (f % 2 == 0)
      throw consistency_error("2-torsion in cuspidal homology at N=" + std::to_string(N));
  return h;
}

inline std::vector<CellOrbit> cell_orbits(std::int64_t N, GammaFlavor flavor, int dim) {
  VoronoiComplex cx(N, flavor);
  switch (dim) {
    case 0: return cx.vert.orbits;
    case 1: return cx.edge.orbits;
    case 2: return cx.tri.orbits;
    default: throw std::invalid_argument("cell_orbits: dim must be 0, 1 or 2");
  }
}

// (d2, d1) with d1 * d2 = 0.
inline std::pair<IntMatrix, IntMatrix> boundary_matrices(std::int64_t N, GammaFlavor flavor) {
  VoronoiComplex cx(N, flavor);
  return {cx.d2, cx.d1};
}

// Genus of the modular curve X_0(N) via the index / elliptic point / cusp
// count formula.
inline std::int64_t genus_g0(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("genus_g0: N must be >= 1");
  std::int64_t mu = p1_size_formula(N);
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2, M = N; M > 1; ++p) {
    if (p * p > M) p = M;
    if (M % p != 0) continue;
    primes.push_back(p);
    while (M % p == 0) M /= p;
  }
  std::int64_t nu2 = N % 4 == 0 ? 0 : 1;
  std::int64_t nu3 = N % 9 == 0 ? 0 : 1;
  for (std::int64_t p : primes) {
    if (p != 2) nu2 *= (p % 4 == 1) ? 2 : 0;
    if (p != 3) nu3 *= (p % 3 == 1) ? 2 : 0;
  }
  std::int64_t nuinf = 0;
  for (std::int64_t d = 1; d * d <= N; ++d) {
    if (N % d != 0) continue;
    auto phi = [](std::int64_t n) {
      std::int64_t r = n;
      for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
          r -= r / p;
          while (n % p == 0) n /= p;
        }
      if (n > 1) r -= r / n;
      return r;
    };
    nuinf += phi(std::gcd(d, N / d));
    if (d != N / d) nuinf += phi(std::gcd(N / d, d));
  }
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 nuinf
  return (12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf) / 12;
}

// Build-once cache of homology presentations, shared across concurrent jobs.
class HomologyCache {
public:
  std::shared_ptr<const CuspidalHomology> get(std::int64_t N, GammaFlavor flavor) {
    using Task = std::packaged_task<std::shared_ptr<const CuspidalHomology>()>;
    std::shared_future<std::shared_ptr<const CuspidalHomology>> fut;
    std::shared_ptr<Task> to_run;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto key = std::make_pair(N, static_cast<int>(flavor));
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        to_run = std::make_shared<Task>([N, flavor] { return cuspidal_homology(N, flavor); });
        fut = to_run->get_future().share();
        cache_.emplace(key, fut);
      } else {
        fut = it->second;
      }
    }
    if (to_run) (*to_run)();  // first requester builds, outside the lock
    return fut.get();
  }

private:
  std::mutex mutex_;
  std::map<std::pair<std::int64_t, int>, std::shared_future<std::shared_ptr<const CuspidalHomology>>>
      cache_;
};

}  // namespace steinberg
