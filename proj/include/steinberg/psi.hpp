#pragma once

// The psi-image engine: accumulate the span of the classes [e, gamma e] over
// unital candidates, detect stabilization, and compute the cokernel inside
// the cuspidal homology.

#include "steinberg/ane.hpp"
#include "steinberg/modsym.hpp"
#include "steinberg/unital.hpp"

#include <chrono>
#include <cstdint>
#include <map>

namespace steinberg {

struct PsiBudget {
  std::int64_t k_max = 24;
  std::int64_t c_max = 128;
  std::int64_t stall_limit = 500;
  double time_limit_seconds = 100.0;
};

struct ImageReport {
  std::int64_t N = 1;
  std::int64_t delta = 0;
  GammaFlavor flavor = GammaFlavor::Gamma0Pm;
  FgAbGroup homology;        // full isomorphism type of H_0^cusp
  std::size_t image_rank = 0;
  FgAbGroup cokernel;
  Int q_order = 1;           // |Q| from the unit-residue analysis
  Int shrinkage = 0;         // |Q|/|C|; 0 flags an infinite cokernel
  std::int64_t candidates_used = 0;
  bool stabilized = false;
  bool early_exit = false;

  FgAbGroup torsion() const { return FgAbGroup{0, homology.invariant_factors}; }
};

// |Q| / |C|; integral by the conjectured surjection Q ->> C.
inline Int shrinkage(const FgAbGroup& Q, const FgAbGroup& C) {
  if (!Q.is_finite() || !C.is_finite())
    throw std::invalid_argument("shrinkage: group is infinite");
  Int q = Q.order(), c = C.order();
  if (q % c != 0) throw consistency_error("shrinkage is not an integer");
  return q / c;
}

inline ImageReport image_of_psi(std::int64_t N, const QuadraticField& F, GammaFlavor flavor,
                                const PsiBudget& budget, HomologyCache& cache) {
  ImageReport rep;
  rep.N = N, rep.delta = F.delta, rep.flavor = flavor;
  auto H = cache.get(N, flavor);
  AneReport ane = compute_ane(F, N, flavor);
  rep.homology = H->group;
  rep.q_order = ane.Q.order();

  const std::size_t k = H->cycle_rank();
  HnfSpan span(k);
  for (std::size_t r = 0; r < H->presentation.rows(); ++r) {
    std::vector<Int> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = H->presentation(r, j);
    span.insert(std::move(row));
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  bool exhausted = false, timed_out = false;
  std::int64_t stall = 0;
  if (span.is_full()) {
    rep.early_exit = true;  // includes trivial homology
  } else {
    UnitalEnumerator stream(F, N, flavor, budget.k_max, budget.c_max);
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Int>> cusp_memo;
    for (;;) {
      auto cand = stream.next();
      if (!cand) { exhausted = true; break; }
      auto key = std::make_pair(cand->A, cand->c * N);
      auto it = cusp_memo.find(key);
      if (it == cusp_memo.end()) {
        Cusp target(cand->gamma[0][0], cand->gamma[1][0]);
        auto cls = symbol_class(cusp_path_to_unimodular(Cusp::infinity(), target), *H);
        it = cusp_memo.emplace(key, std::move(cls)).first;
      }
      ++rep.candidates_used;
      if (span.insert(it->second)) {
        stall = 0;
        if (span.is_full()) { rep.early_exit = true; break; }
      } else if (++stall >= budget.stall_limit) {
        break;
      }
      if (elapsed() > budget.time_limit_seconds) { timed_out = true; break; }
    }
  }
  rep.stabilized = rep.early_exit || stall >= budget.stall_limit || (exhausted && !timed_out);

  rep.cokernel = quotient_structure(k, span.matrix());
  rep.image_rank = rep.homology.free_rank - rep.cokernel.free_rank;
  if (rep.cokernel.is_finite() && rep.q_order % rep.cokernel.order() == 0) {
    rep.shrinkage = shrinkage(ane.Q, rep.cokernel);
  } else {
    // rank-deficient span, or a cokernel whose order does not divide |Q|:
    // the true image provably contains more classes than the budget found
    rep.stabilized = false;
    rep.shrinkage = 0;
  }
  return rep;
}

}  // namespace steinberg
