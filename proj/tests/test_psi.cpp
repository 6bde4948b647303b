#include <catch2/catch_amalgamated.hpp>

#include "steinberg/psi.hpp"
#include "steinberg/table.hpp"

using namespace steinberg;

namespace {

ImageReport quick_image(std::int64_t N, std::int64_t delta, GammaFlavor flavor) {
  HomologyCache cache;
  PsiBudget budget;
  budget.time_limit_seconds = 30.0;
  return image_of_psi(N, make_field(delta), flavor, budget, cache);
}

}  // namespace

TEST_CASE("image cokernels from the tables") {
  auto a = quick_image(11, 3, GammaFlavor::Gamma0Pm);
  CHECK(a.cokernel == FgAbGroup{});
  CHECK(a.early_exit);
  CHECK(a.stabilized);
  CHECK(a.shrinkage == 1);

  auto b = quick_image(11, 2, GammaFlavor::Gamma0Pm);
  CHECK(b.cokernel == FgAbGroup{0, {5}});
  CHECK(b.stabilized);
  CHECK(b.shrinkage == 1);

  auto c = quick_image(7, 3, GammaFlavor::Gamma0Pm);
  CHECK(c.cokernel == FgAbGroup{0, {3}});
  CHECK(c.shrinkage == 1);

  auto d = quick_image(13, 10, GammaFlavor::Gamma0Pm);
  CHECK(d.cokernel == FgAbGroup{});
  CHECK(d.shrinkage == 2);

  auto e = quick_image(11, 3, GammaFlavor::Gamma0);
  CHECK(e.cokernel == FgAbGroup{});
  CHECK(e.homology.free_rank == 2);

  auto f = quick_image(13, 2, GammaFlavor::Gamma0);  // Table 2: C = C3, s = 2
  CHECK(f.cokernel == FgAbGroup{0, {3}});
  CHECK(f.shrinkage == 2);
}

TEST_CASE("trivial homology short-circuits") {
  auto rep = quick_image(5, 2, GammaFlavor::Gamma0Pm);
  CHECK(rep.early_exit);
  CHECK(rep.candidates_used == 0);
  CHECK(rep.cokernel == FgAbGroup{});
  CHECK(rep.homology == FgAbGroup{});
}

TEST_CASE("shrinkage arithmetic") {
  CHECK(shrinkage(FgAbGroup{0, {2}}, FgAbGroup{}) == 2);
  CHECK(shrinkage(FgAbGroup{0, {2, 4}}, FgAbGroup{0, {2}}) == 4);
  CHECK(shrinkage(FgAbGroup{0, {6}}, FgAbGroup{0, {6}}) == 1);
  CHECK_THROWS_AS(shrinkage(FgAbGroup{1, {}}, FgAbGroup{}), std::invalid_argument);
  CHECK_THROWS_AS(shrinkage(FgAbGroup{0, {3}}, FgAbGroup{0, {2}}), consistency_error);
}

TEST_CASE("invariants over a small sweep") {
  HomologyCache cache;
  PsiBudget budget;
  for (std::int64_t N : {7, 11, 13, 14, 15}) {
    for (std::int64_t delta : {2, 3, 5, 6, 7, 10}) {
      for (GammaFlavor flavor : {GammaFlavor::Gamma0Pm, GammaFlavor::Gamma0}) {
        QuadraticField F = make_field(delta);
        // image_of_psi enforces cuspidality of every class and that the
        // cokernel order divides |Q|; any violation throws
        ImageReport rep = image_of_psi(N, F, flavor, budget, cache);
        INFO("N = " << N << " delta = " << delta << " flavor " << flavor_name(flavor));
        // full-rank image for every computed pair
        CHECK(rep.cokernel.free_rank == 0);
        CHECK(rep.image_rank == rep.homology.free_rank);
        CHECK(rep.shrinkage >= 1);
        // the image accumulated with a larger budget is no smaller; an
        // under-budget prefix may have an infinite cokernel, which surjects
        // onto anything
        PsiBudget tight = budget;
        tight.k_max = 6, tight.c_max = 2;
        ImageReport small = image_of_psi(N, F, flavor, tight, cache);
        if (small.cokernel.is_finite())
          CHECK(small.cokernel.order() % rep.cokernel.order() == 0);
      }
    }
  }
}

TEST_CASE("table rows and rendering") {
  PsiBudget budget;
  auto rows = run_batch(7, 7, 2, 50, GammaFlavor::Gamma0Pm, budget, 2);
  CHECK(rows.size() == 30);  // every squarefree delta in [2, 50]
  auto agg = aggregate_rows(rows);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].U == "C3");
  CHECK(agg[0].A == "C3");
  CHECK(agg[0].Q == "C1");
  CHECK(agg[0].C == "C1");
  CHECK(agg[0].r == 0);
  CHECK(agg[0].T == "C3");
  CHECK(agg[0].s == 1);
  CHECK(agg[0].delta_list ==
        std::vector<std::int64_t>{2, 11, 15, 23, 29, 30, 37, 39, 43, 46});
  CHECK(agg[1].A == "C1");
  CHECK(agg[1].Q == "C3");
  CHECK(agg[1].C == "C3");
  CHECK(agg[1].delta_list ==
        std::vector<std::int64_t>{3,  5,  6,  7,  10, 13, 14, 17, 19, 21,
                                  22, 26, 31, 33, 34, 35, 38, 41, 42, 47});

  // byte-stable output
  auto rows2 = run_batch(7, 7, 2, 50, GammaFlavor::Gamma0Pm, budget, 1);
  CHECK(render_csv(rows) == render_csv(rows2));

  // levels with trivial homology produce no rows; empty disc range likewise
  CHECK(run_batch(1, 6, 2, 10, GammaFlavor::Gamma0Pm, budget, 2).empty());
  CHECK(run_batch(7, 7, 24, 25, GammaFlavor::Gamma0Pm, budget, 1).empty());
  CHECK(render_csv({}) == "N,delta,U,A,Q,C,r,T,s,stabilized,early_exit,candidates\n");
}
