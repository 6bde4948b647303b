#pragma once

// Unit-residue analysis: the unit groups U = (Z/N)^x (optionally mod +-1),
// the subgroups A_E(N) and A_E(N)^* generated by roots of the characteristic
// polynomials f_eta of units, and the quotients Q = U/A.

#include "steinberg/quadfield.hpp"
#include "steinberg/unital.hpp"
#include "steinberg/voronoi.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace steinberg {

// (Z/N)^x through its CRT decomposition into cyclic factors with explicit
// generator residues.  Discrete logs are brute-forced per factor; N stays
// small enough (<= a few thousand) for that to be free.
class UnitGroup {
public:
  UnitGroup(std::int64_t N, bool mod_pm) : N_(N), mod_pm_(mod_pm) {
    if (N < 1) throw std::invalid_argument("UnitGroup: N must be >= 1");
    factor(N);
    for (const auto& [p, e] : factors_) {
      std::int64_t pe = ipow(p, e);
      if (p == 2) {
        if (e == 2) add_component(crt_lift(3, pe), 2);
        if (e >= 3) {
          add_component(crt_lift(pe - 1, pe), 2);
          add_component(crt_lift(5, pe), ipow(2, e - 2));
        }
      } else {
        std::int64_t g = primitive_root_mod_pe(p, e);
        add_component(crt_lift(g, pe), ipow(p, e - 1) * (p - 1));
      }
    }
    base_relations_ = IntMatrix(orders_.size() + (mod_pm_ ? 1 : 0), orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) base_relations_(i, i) = orders_[i];
    if (mod_pm_ && N_ > 2) {
      auto v = dlog(N_ - 1);
      for (std::size_t i = 0; i < orders_.size(); ++i)
        base_relations_(orders_.size(), i) = v[i];
    }
    structure_ = quotient_structure(orders_.size(), base_relations_);
  }

  std::int64_t level() const { return N_; }
  std::size_t num_components() const { return orders_.size(); }
  const std::vector<std::int64_t>& generators() const { return gens_; }
  const FgAbGroup& structure() const { return structure_; }
  const IntMatrix& base_relations() const { return base_relations_; }

  // component exponents of x with respect to the generators
  std::vector<std::int64_t> dlog(std::int64_t x) const {
    x = ((x % N_) + N_) % N_;
    if (std::gcd(x, N_) != 1) throw std::invalid_argument("dlog: not a unit");
    std::vector<std::int64_t> v(orders_.size());
    std::size_t idx = 0;
    for (const auto& [p, e] : factors_) {
      std::int64_t pe = ipow(p, e);
      std::int64_t xr = x % pe;
      if (p == 2) {
        if (e == 1) continue;
        if (e == 2) {
          v[idx++] = (xr == 3) ? 1 : 0;
          continue;
        }
        // xr = +-5^j mod 2^e
        std::int64_t pw = 1;
        bool found = false;
        for (std::int64_t j = 0; j < ipow(2, e - 2) && !found; ++j) {
          if (pw == xr) v[idx] = 0, v[idx + 1] = j, found = true;
          if (pe - pw == xr) v[idx] = 1, v[idx + 1] = j, found = true;
          pw = pw * 5 % pe;
        }
        if (!found) throw std::logic_error("dlog: 2-power component not found");
        idx += 2;
      } else {
        std::int64_t g = gens_[idx] % pe;
        std::int64_t pw = 1;
        bool found = false;
        for (std::int64_t j = 0; j < orders_[idx] && !found; ++j) {
          if (pw == xr) v[idx] = j, found = true;
          pw = pw * g % pe;
        }
        if (!found) throw std::logic_error("dlog: odd component not found");
        ++idx;
      }
    }
    return v;
  }

  // structure of the subgroup generated by the given residues
  FgAbGroup subgroup_structure(const std::vector<std::int64_t>& residues) const {
    const std::size_t m = orders_.size();
    if (m == 0) return FgAbGroup{};
    IntMatrix gens(residues.size(), m);
    for (std::size_t i = 0; i < residues.size(); ++i) {
      auto v = dlog(residues[i]);
      for (std::size_t j = 0; j < m; ++j) gens(i, j) = v[j];
    }
    IntMatrix ha = hnf(IntMatrix::vstack(gens, base_relations_)).first;
    IntMatrix hr = hnf(base_relations_).first;
    // both lattices have full rank m; express the base relations in the
    // subgroup lattice basis and read off the quotient
    IntMatrix C(m, m);
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<Int> x(m);
      for (std::size_t j = 0; j < m; ++j) {
        Int acc = hr(r, j);
        for (std::size_t i = 0; i < j; ++i) acc -= x[i] * ha(i, j);
        if (ha(j, j) == 0 || acc % ha(j, j) != 0)
          throw std::logic_error("subgroup_structure: lattice solve failed");
        x[j] = acc / ha(j, j);
        C(r, j) = x[j];
      }
    }
    return quotient_structure(m, C);
  }

  // structure of U / <residues>
  FgAbGroup quotient_by(const std::vector<std::int64_t>& residues) const {
    const std::size_t m = orders_.size();
    if (m == 0) return FgAbGroup{};
    IntMatrix gens(residues.size(), m);
    for (std::size_t i = 0; i < residues.size(); ++i) {
      auto v = dlog(residues[i]);
      for (std::size_t j = 0; j < m; ++j) gens(i, j) = v[j];
    }
    return quotient_structure(m, IntMatrix::vstack(gens, base_relations_));
  }

private:
  static std::int64_t ipow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    while (e--) r *= b;
    return r;
  }

  void factor(std::int64_t n) {
    for (std::int64_t p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        std::int64_t e = 0;
        while (n % p == 0) n /= p, ++e;
        factors_.emplace_back(p, e);
      }
    if (n > 1) factors_.emplace_back(n, 1);
  }

  std::int64_t crt_lift(std::int64_t r, std::int64_t pe) const {
    // residue r mod pe, 1 mod every other prime-power factor
    r = ((r % pe) + pe) % pe;
    for (std::int64_t x = 1; x < N_; ++x) {
      if (x % pe != r) continue;
      bool ok = true;
      for (const auto& [q, f] : factors_) {
        std::int64_t qe = ipow(q, f);
        if (qe != pe && x % qe != 1 % qe) ok = false;
      }
      if (ok) return x;
    }
    throw std::logic_error("crt_lift: no lift found");
  }

  static std::int64_t primitive_root_mod_pe(std::int64_t p, std::int64_t e) {
    auto order_mod = [](std::int64_t g, std::int64_t m, std::int64_t group_order) {
      std::int64_t o = 1, pw = g % m;
      while (pw != 1) {
        pw = pw * g % m;
        ++o;
        if (o > group_order) throw std::logic_error("order_mod overflow");
      }
      return o;
    };
    std::int64_t g = 2;
    for (;; ++g)
      if (g % p != 0 && order_mod(g, p, p - 1) == p - 1) break;
    if (e == 1) return g;
    std::int64_t pe = ipow(p, e);
    // g or g + p generates mod p^e
    Int pw = 1;
    Int gg = g;
    for (std::int64_t i = 0; i < p - 1; ++i) pw = pw * gg % (p * p);
    if (pw == 1) g += p;
    return g % pe;
  }

  void add_component(std::int64_t gen, std::int64_t order) {
    gens_.push_back(gen);
    orders_.push_back(order);
  }

  std::int64_t N_;
  bool mod_pm_;
  std::vector<std::pair<std::int64_t, std::int64_t>> factors_;
  std::vector<std::int64_t> gens_;
  std::vector<std::int64_t> orders_;
  IntMatrix base_relations_;
  FgAbGroup structure_;
};

inline FgAbGroup unit_group_structure(std::int64_t N, bool mod_pm) {
  return UnitGroup(N, mod_pm).structure();
}

struct UnitResidueOrbit {
  std::vector<QuadResidue> residues;                 // eps^k mod N, k = 0..period-1
  std::vector<std::pair<std::int64_t, int>> trace_norm;  // (t mod N, n) per k
};

// Powers of eps in O_E/N until the first repeat (the residue is invertible,
// so the repeat closes the cycle at eps^period = 1).
inline UnitResidueOrbit unit_residue_orbit(const QuadraticField& F, std::int64_t N) {
  UnitResidueOrbit orbit;
  QuadResidueRing ring(F, N);
  QuadUnit eps = fundamental_unit(F);
  QuadResidue e = ring.reduce(eps.value);
  QuadResidue cur = ring.one();
  int n = 1;
  for (std::int64_t k = 0;; ++k) {
    if (k > 0 && cur == ring.one()) break;
    orbit.residues.push_back(cur);
    orbit.trace_norm.emplace_back(ring.trace(cur), n);
    cur = ring.mul(cur, e);
    n *= eps.norm;
    if (k > 4 * static_cast<std::int64_t>(N) * N)
      throw std::logic_error("unit_residue_orbit: period not found");
  }
  return orbit;
}

struct AneReport {
  std::int64_t N = 1;
  std::int64_t delta = 0;
  GammaFlavor flavor = GammaFlavor::Gamma0Pm;
  FgAbGroup U, A, Q;
  std::vector<std::int64_t> root_residues;  // sorted; mod +-1 for Gamma0Pm
};

// Definition AE made executable: root_residues are all a in (Z/N)^x that are
// roots of f_eta for some unit eta (norm 1 only for flavor Gamma0), and A is
// the subgroup they generate.
inline AneReport compute_ane(const QuadraticField& F, std::int64_t N, GammaFlavor flavor) {
  AneReport rep;
  rep.N = N, rep.delta = F.delta, rep.flavor = flavor;
  if (N == 1) return rep;
  const bool mod_pm = flavor == GammaFlavor::Gamma0Pm;
  UnitGroup U(N, mod_pm);
  rep.U = U.structure();

  UnitResidueOrbit orbit = unit_residue_orbit(F, N);
  // eta ranges over +-eps^k (and inverses); traces +-t_k cover all of them
  std::set<std::pair<std::int64_t, int>> pairs;
  for (auto [t, n] : orbit.trace_norm) {
    if (flavor == GammaFlavor::Gamma0 && n != 1) continue;
    pairs.emplace(t, n);
    pairs.emplace((N - t) % N, n);
  }
  std::set<std::int64_t> roots;
  std::vector<std::int64_t> inv(N, -1);
  for (std::int64_t a = 1; a < N; ++a) {
    if (std::gcd(a, N) != 1) continue;
    std::int64_t t0 = 0, nt = 1, r = N, nr = a;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::swap(t0 -= q * nt, nt);
      std::swap(r -= q * nr, nr);
    }
    inv[a] = t0 < 0 ? t0 + N : t0;
  }
  for (auto [t, n] : pairs)
    for (std::int64_t a = 1; a < N; ++a) {
      if (inv[a] < 0) continue;
      if (((a + n * inv[a] - t) % N + N) % N == 0) roots.insert(a);
    }

  std::vector<std::int64_t> gens(roots.begin(), roots.end());
  rep.A = U.subgroup_structure(gens);
  rep.Q = U.quotient_by(gens);
  if (mod_pm) {
    std::set<std::int64_t> folded;
    for (auto a : roots) folded.insert(std::min(a, N - a));
    rep.root_residues.assign(folded.begin(), folded.end());
  } else {
    rep.root_residues.assign(roots.begin(), roots.end());
  }
  return rep;
}

}  // namespace steinberg
