#pragma once

// Batch driver and table rendering: per-(N, delta) rows with the
// U, A, Q, C, r, T, s columns, a bounded worker pool, and CSV/JSON output
// that is byte-stable for fixed inputs and budgets.

#include "steinberg/psi.hpp"

#include <atomic>
#include <optional>
#include <sstream>
#include <thread>

namespace steinberg {

struct TableRow {
  std::int64_t N = 1, delta = 0;
  std::string U, A, Q, C;
  std::int64_t r = 0;
  std::string T;
  Int s = 0;
  bool stabilized = false, early_exit = false;
  std::int64_t candidates = 0;
};

inline std::optional<TableRow> run_pair(std::int64_t N, std::int64_t delta, GammaFlavor flavor,
                                        const PsiBudget& budget, HomologyCache& cache) {
  auto H = cache.get(N, flavor);
  if (H->group.is_trivial()) return std::nullopt;  // no row when H_0^cusp = 0
  QuadraticField F = make_field(delta);
  AneReport ane = compute_ane(F, N, flavor);
  ImageReport im = image_of_psi(N, F, flavor, budget, cache);
  TableRow row;
  row.N = N, row.delta = delta;
  row.U = ane.U.str(), row.A = ane.A.str(), row.Q = ane.Q.str();
  row.C = im.cokernel.str();
  row.r = static_cast<std::int64_t>(im.homology.free_rank);
  row.T = im.torsion().str();
  row.s = im.shrinkage;
  row.stabilized = im.stabilized, row.early_exit = im.early_exit;
  row.candidates = im.candidates_used;
  return row;
}

inline std::vector<std::int64_t> squarefree_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::int64_t d = std::max<std::int64_t>(2, lo); d <= hi; ++d)
    if (is_squarefree(d)) {
      std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d)));
      if (s * s != d && (s + 1) * (s + 1) != d) v.push_back(d);
    }
  return v;
}

// All (N, delta) jobs fan out to a bounded worker pool; results are sorted by
// (N, delta) regardless of completion order.
inline std::vector<TableRow> run_batch(std::int64_t n_lo, std::int64_t n_hi, std::int64_t d_lo,
                                       std::int64_t d_hi, GammaFlavor flavor,
                                       const PsiBudget& budget, unsigned jobs = 0) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::int64_t> discs = squarefree_in(d_lo, d_hi);
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (std::int64_t N = std::max<std::int64_t>(1, n_lo); N <= n_hi; ++N)
    for (std::int64_t d : discs) pairs.emplace_back(N, d);

  HomologyCache cache;
  std::vector<std::optional<TableRow>> results(pairs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        results[i] = run_pair(pairs[i].first, pairs[i].second, flavor, budget, cache);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 0; t + 1 < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<TableRow> rows;
  for (auto& r : results)
    if (r) rows.push_back(std::move(*r));
  return rows;  // pairs were generated in (N, delta) order
}

inline std::string render_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "N,delta,U,A,Q,C,r,T,s,stabilized,early_exit,candidates\n";
  for (const auto& row : rows)
    out << row.N << ',' << row.delta << ',' << row.U << ',' << row.A << ',' << row.Q << ','
        << row.C << ',' << row.r << ',' << row.T << ',' << row.s.get_str() << ','
        << (row.stabilized ? "true" : "false") << ',' << (row.early_exit ? "true" : "false")
        << ',' << row.candidates << '\n';
  return out.str();
}

// One row per (N, U, A, Q, C, r, T, s) with the matching deltas aggregated
// into an ascending delta-list.
struct AggregatedRow {
  std::int64_t N = 1;
  std::string U, A, Q, C;
  std::int64_t r = 0;
  std::string T;
  Int s = 0;
  std::vector<std::int64_t> delta_list;

  bool operator==(const AggregatedRow& o) const {
    return N == o.N && U == o.U && A == o.A && Q == o.Q && C == o.C && r == o.r && T == o.T &&
           s == o.s && delta_list == o.delta_list;
  }
};

inline std::vector<AggregatedRow> aggregate_rows(const std::vector<TableRow>& rows) {
  std::map<std::tuple<std::int64_t, std::string, std::string, std::string, std::string,
                      std::int64_t, std::string, Int>,
           std::vector<std::int64_t>>
      groups;
  for (const auto& row : rows)
    groups[{row.N, row.U, row.A, row.Q, row.C, row.r, row.T, row.s}].push_back(row.delta);
  std::vector<AggregatedRow> agg;
  for (auto& [key, deltas] : groups) {
    std::sort(deltas.begin(), deltas.end());
    AggregatedRow a;
    std::tie(a.N, a.U, a.A, a.Q, a.C, a.r, a.T, a.s) = key;
    a.delta_list = deltas;
    agg.push_back(std::move(a));
  }
  std::sort(agg.begin(), agg.end(), [](const AggregatedRow& x, const AggregatedRow& y) {
    if (x.N != y.N) return x.N < y.N;
    return x.delta_list.front() < y.delta_list.front();
  });
  return agg;
}

}  // namespace steinberg
