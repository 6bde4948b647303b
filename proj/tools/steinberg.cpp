// Command-line surface: homology, image, ane and table subcommands.
// Exit codes: 0 success, 2 bad arguments, 3 internal consistency failure.

#include "steinberg/steinberg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace steinberg;

namespace {

std::int64_t env_int(const char* name, std::int64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtoll(v, nullptr, 10) : fallback;
}

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtod(v, nullptr) : fallback;
}

GammaFlavor parse_flavor(const std::string& s) {
  if (s == "pm") return GammaFlavor::Gamma0Pm;
  if (s == "sl") return GammaFlavor::Gamma0;
  throw CLI::ValidationError("--group must be pm or sl");
}

struct Range {
  std::int64_t lo = 0, hi = 0;
};

Range parse_range(const std::string& s) {
  Range r;
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    r.lo = r.hi = std::stoll(s);
  } else {
    r.lo = std::stoll(s.substr(0, colon));
    r.hi = std::stoll(s.substr(colon + 1));
  }
  return r;
}

void add_budget_flags(CLI::App* cmd, PsiBudget& budget) {
  budget.k_max = env_int("STEINBERG_KMAX", budget.k_max);
  budget.c_max = env_int("STEINBERG_CMAX", budget.c_max);
  budget.stall_limit = env_int("STEINBERG_STALL", budget.stall_limit);
  budget.time_limit_seconds = env_double("STEINBERG_SECONDS", budget.time_limit_seconds);
  cmd->add_option("--kmax", budget.k_max, "largest unit power");
  cmd->add_option("--cmax", budget.c_max, "largest lower-left multiplier");
  cmd->add_option("--stall", budget.stall_limit, "consecutive non-growing candidates before stopping");
  cmd->add_option("--seconds", budget.time_limit_seconds, "wall-clock limit per (N, delta) pair");
}

json homology_json(std::int64_t N, GammaFlavor flavor, const CuspidalHomology& h) {
  const VoronoiComplex& cx = *h.complex;
  auto count_orientable = [](const OrbitTable& t) {
    std::size_t n = 0;
    for (const auto& o : t.orbits) n += o.orientable ? 1 : 0;
    return n;
  };
  json j;
  j["N"] = N;
  j["flavor"] = flavor_name(flavor);
  j["rank"] = h.group.free_rank;
  j["torsion"] = FgAbGroup{0, h.group.invariant_factors}.str();
  j["orbit_counts"] = {{"dim0", cx.vert.orbits.size()},
                       {"dim1", cx.edge.orbits.size()},
                       {"dim1_orientable", count_orientable(cx.edge)},
                       {"dim2", cx.tri.orbits.size()},
                       {"dim2_orientable", count_orientable(cx.tri)}};
  return j;
}

json image_json(const ImageReport& rep) {
  json j;
  j["N"] = rep.N;
  j["delta"] = rep.delta;
  j["flavor"] = flavor_name(rep.flavor);
  j["rank"] = rep.homology.free_rank;
  j["torsion"] = rep.torsion().str();
  j["cokernel"] = rep.cokernel.str();
  j["shrinkage"] = rep.shrinkage.get_si();
  j["stabilized"] = rep.stabilized;
  j["early_exit"] = rep.early_exit;
  j["candidates"] = rep.candidates_used;
  return j;
}

json ane_json(const AneReport& rep) {
  json j;
  j["N"] = rep.N;
  j["delta"] = rep.delta;
  j["flavor"] = flavor_name(rep.flavor);
  j["U"] = rep.U.str();
  j["A"] = rep.A.str();
  j["Q"] = rep.Q.str();
  j["roots"] = rep.root_residues;
  return j;
}

std::string rows_to_json(const std::vector<TableRow>& rows) {
  json arr = json::array();
  for (const auto& a : aggregate_rows(rows)) {
    json j;
    j["N"] = a.N;
    j["U"] = a.U;
    j["A"] = a.A;
    j["Q"] = a.Q;
    j["C"] = a.C;
    j["r"] = a.r;
    j["T"] = a.T;
    j["s"] = a.s.get_si();
    j["delta_list"] = a.delta_list;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuspidal Steinberg homology and unit-residue computations for Gamma_0(N)"};
  app.require_subcommand(1);

  std::string group = "pm", format = "json", out_path, levels_arg, discs_arg;
  std::int64_t level = 1, disc = 5;
  unsigned jobs = static_cast<unsigned>(env_int("STEINBERG_JOBS", 0));
  PsiBudget budget;

  auto* cmd_homology = app.add_subcommand("homology", "cuspidal homology of Gamma_0(N)");
  cmd_homology->add_option("--level,-N", level, "level N")->required();
  cmd_homology->add_option("--group", group, "pm (Gamma_0^pm) or sl (Gamma_0)");
  cmd_homology->add_option("--format", format, "json");

  auto* cmd_image = app.add_subcommand("image", "image and cokernel of psi for one (N, delta)");
  cmd_image->add_option("--level,-N", level, "level N")->required();
  cmd_image->add_option("--disc,-D", disc, "squarefree delta >= 2")->required();
  cmd_image->add_option("--group", group, "pm or sl");
  cmd_image->add_option("--format", format, "json");
  add_budget_flags(cmd_image, budget);

  auto* cmd_ane = app.add_subcommand("ane", "unit-residue subgroup A_E(N) and quotient Q");
  cmd_ane->add_option("--level,-N", level, "level N")->required();
  cmd_ane->add_option("--disc,-D", disc, "squarefree delta >= 2")->required();
  cmd_ane->add_option("--group", group, "pm or sl");
  cmd_ane->add_option("--format", format, "json");

  auto* cmd_table = app.add_subcommand("table", "batch table over level and disc ranges");
  cmd_table->add_option("--levels", levels_arg, "level range lo:hi (or single level)")->required();
  cmd_table->add_option("--discs", discs_arg, "disc range lo:hi (or single disc)")->required();
  cmd_table->add_option("--group", group, "pm or sl");
  cmd_table->add_option("--format", format, "csv or json");
  cmd_table->add_option("--out", out_path, "output file (stdout when omitted)");
  cmd_table->add_option("--jobs", jobs, "worker pool size (default: logical CPU count)");
  add_budget_flags(cmd_table, budget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    GammaFlavor flavor = parse_flavor(group);
    HomologyCache cache;
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw CLI::ValidationError("cannot open output file " + out_path);
      out = &file;
    }

    if (!*cmd_table && format != "json")
      throw CLI::ValidationError("--format must be json for this subcommand");
    if (*cmd_homology) {
      if (level < 1) throw CLI::ValidationError("--level must be >= 1");
      *out << homology_json(level, flavor, *cache.get(level, flavor)).dump(2) << "\n";
    } else if (*cmd_image) {
      if (level < 1) throw CLI::ValidationError("--level must be >= 1");
      QuadraticField F = make_field(disc);
      *out << image_json(image_of_psi(level, F, flavor, budget, cache)).dump(2) << "\n";
    } else if (*cmd_ane) {
      if (level < 1) throw CLI::ValidationError("--level must be >= 1");
      QuadraticField F = make_field(disc);
      *out << ane_json(compute_ane(F, level, flavor)).dump(2) << "\n";
    } else if (*cmd_table) {
      if (format != "csv" && format != "json")
        throw CLI::ValidationError("--format must be csv or json");
      Range lv = parse_range(levels_arg), dc = parse_range(discs_arg);
      if (lv.lo < 1) throw CLI::ValidationError("--levels must start at 1 or above");
      auto rows = run_batch(lv.lo, lv.hi, dc.lo, dc.hi, flavor, budget, jobs);
      *out << (format == "csv" ? render_csv(rows) : rows_to_json(rows));
    }
    return 0;
  } catch (const consistency_error& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
