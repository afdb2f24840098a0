// dsf: generate, solve, audit and replay Directed Steiner Forest instances.
//
// Exit codes: 0 success, 1 domain failure (infeasible, failed audit, failed
// claim, malformed document), 2 usage error.

#include "dsf/bench.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dsf;

namespace {

constexpr const char* kSchema =
    "instance JSON: {\"vertices\": [name], \"edges\": [{\"id\", \"tail\", \"head\", \"cost\"}], "
    "\"pairs\": [{\"id\", \"s\", \"t\"}]}\n"
    "solution JSON: {\"edges\": [edge-id], \"cost\": string, \"certificates\": {pair-id: [edge-id]}}\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::size_t default_parallelism() {
  if (const char* env = std::getenv("DSF_PARALLELISM")) {
    char* end = nullptr;
    auto v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1;
}

DstStrategy strategy_of(const std::string& name) {
  auto s = parse_dst_strategy(name);
  if (!s) throw UsageError("unknown --dst-strategy '" + name + "' (exact-fpt | shortest-path-union)");
  return *s;
}

struct GenFlags {
  std::string kind = "grid";
  int rows = 4, cols = 4, width = 3, layers = 3, density = 50, k = 4, bidirected = 3;
  long cost_min = 1, cost_max = 10;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> pair_seed;

  void add(CLI::App* app, bool with_seed) {
    app->add_option("--kind,--gen", kind, "grid | layered")->check(CLI::IsMember({"grid", "layered"}));
    app->add_option("--rows", rows)->check(CLI::Range(2, 1000));
    app->add_option("--cols", cols)->check(CLI::Range(2, 1000));
    app->add_option("--width", width)->check(CLI::Range(1, 1000));
    app->add_option("--layers", layers)->check(CLI::Range(1, 1000));
    app->add_option("--density", density, "connector probability in percent")->check(CLI::Range(0, 100));
    app->add_option("--k", k)->check(CLI::Range(1, 100000));
    app->add_option("--cost-min", cost_min)->check(CLI::NonNegativeNumber);
    app->add_option("--cost-max", cost_max)->check(CLI::NonNegativeNumber);
    app->add_option("--bidirected-one-in", bidirected, "grid edges are bidirected with probability 1/N")
        ->check(CLI::PositiveNumber);
    if (with_seed) {
      app->add_option("--seed", seed, "structure seed")->required();
      app->add_option("--pair-seed", pair_seed, "defaults to --seed");
    }
  }

  Instance make(std::uint64_t s, std::uint64_t ps) const {
    if (cost_min > cost_max) throw UsageError("--cost-min exceeds --cost-max");
    if (kind == "grid")
      return gen_grid({.rows = rows, .cols = cols, .orientation_seed = s, .cost_min = cost_min,
                       .cost_max = cost_max, .k = k, .pair_seed = ps, .bidirected_one_in = bidirected});
    return gen_layered_random({.width = width, .layers = layers, .density_percent = density,
                               .structure_seed = s, .pair_seed = ps, .cost_min = cost_min,
                               .cost_max = cost_max, .k = k});
  }
};

std::vector<VertexId> vertices_by_name(const Instance& inst, const std::vector<std::string>& names) {
  std::vector<VertexId> out;
  for (const auto& n : names) {
    auto v = inst.find_vertex_by_name(n);
    if (!v) throw UsageError("unknown vertex '" + n + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed Steiner Forest in planar digraphs: solver, oracles and proof replay"};
  app.require_subcommand(1);
  app.fallthrough();  // --parallelism may follow the subcommand
  std::size_t parallelism = default_parallelism();
  std::string dst_strategy = "exact-fpt";
  app.add_option("--parallelism", parallelism, "worker threads (default $DSF_PARALLELISM or 1)")
      ->check(CLI::PositiveNumber);

  std::string in, out, solution_path, trace_path, ratio_path;
  std::size_t edge_budget = 40;  // branch and bound handles 4x4 grids easily
  bool oracle = false, replay = false, detail = false;

  auto* gen = app.add_subcommand("gen", "generate a seeded planar instance");
  GenFlags gflags;
  gflags.add(gen, true);
  gen->add_option("--out", out, "output path (default stdout)");

  auto* solve = app.add_subcommand("solve", "greedy junction covering");
  solve->add_option("--in", in)->required();
  solve->add_option("--out", out, "solution JSON (default stdout)");
  solve->add_option("--trace", trace_path, "also write the covering trace JSON");
  solve->add_option("--dst-strategy", dst_strategy);
  solve->add_flag("--oracle", oracle, "compare with the exact optimum");
  solve->add_option("--ratio", ratio_path, "ratio report path (default stdout when --out is a file)");
  solve->add_option("--edge-budget", edge_budget);

  auto* junction = app.add_subcommand("junction", "one minimum-density junction search");
  junction->add_option("--in", in)->required();
  junction->add_option("--out", out);
  junction->add_option("--dst-strategy", dst_strategy);

  auto* orc = app.add_subcommand("oracle", "exact solvers");
  std::string oracle_kind = "dsf", root_name;
  std::vector<std::string> terminals;
  orc->add_option("--in", in)->required();
  orc->add_option("--kind", oracle_kind, "dsf | density | dst")->check(CLI::IsMember({"dsf", "density", "dst"}));
  orc->add_option("--root", root_name, "dst root");
  orc->add_option("--terminals", terminals, "dst terminals")->delimiter(',');
  orc->add_option("--edge-budget", edge_budget, "relevant-edge cap for the exact oracles");
  orc->add_option("--out", out);

  auto* ver = app.add_subcommand("verify", "audit a solution");
  ver->add_option("--in", in)->required();
  ver->add_option("--solution", solution_path)->required();

  auto* rep = app.add_subcommand("replay-proof", "replay the existence argument on a solution");
  rep->add_option("--in", in)->required();
  rep->add_option("--solution", solution_path)->required();
  rep->add_option("--out", out);

  auto* bench = app.add_subcommand("bench", "batch over a seed range");
  GenFlags bflags;
  bflags.add(bench, false);
  std::string seeds_text, format = "csv";
  bench->add_option("--seeds", seeds_text, "e.g. 1..30 or 1,5,9")->required();
  bench->add_flag("--oracle", oracle);
  bench->add_flag("--replay", replay, "replay the existence argument on each optimum (implies --oracle)");
  bench->add_flag("--detail", detail, "JSON only: include solutions and traces");
  bench->add_option("--dst-strategy", dst_strategy);
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--edge-budget", edge_budget);
  bench->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help() << "\n" << kSchema;
    return 2;
  }

  try {
    const auto strategy = strategy_of(dst_strategy);
    if (*gen) {
      auto inst = gflags.make(gflags.seed, gflags.pair_seed.value_or(gflags.seed));
      write_out(out, serialize_instance(inst));
      return 0;
    }
    if (*bench) {
      std::vector<std::uint64_t> seeds;
      try {
        seeds = parse_seeds(seeds_text);
      } catch (const InputError& e) {
        throw UsageError(e.what());
      }
      BenchOptions o{.strategy = strategy, .parallelism = parallelism, .oracle = oracle || replay,
                     .replay = replay, .edge_budget = edge_budget, .keep_detail = detail};
      auto rows = run_bench(seeds, [&](std::uint64_t s) { return bflags.make(s, s); }, o);
      write_out(out, format == "csv" ? bench_csv(rows) : report::dump(bench_json(rows)));
      for (const auto& r : rows)
        if (!r.error.empty() || !r.verified || (r.replay_ok && !*r.replay_ok)) return 1;
      return 0;
    }

    const auto inst = parse_instance(read_file(in));
    if (*solve) {
      auto result = solve_dsf(inst, {.strategy = strategy, .parallelism = parallelism});
      write_out(out, report::dump(report::solution(inst, result.solution)));
      if (!trace_path.empty()) write_out(trace_path, report::dump(report::trace(inst, result.trace)));
      auto audit = verify_solution(inst, result.solution);
      std::cerr << "cost " << to_string(result.solution.cost) << ", " << result.trace.iterations.size()
                << " iterations, " << (audit.pass ? "verified" : "FAILED verification") << "\n";
      if (oracle) {
        if (ratio_path.empty() && (out.empty() || out == "-"))
          throw UsageError("--oracle with the solution on stdout needs --ratio PATH");
        auto best = brute_force_dsf(inst, edge_budget);
        write_out(ratio_path, report::dump(report::ratio(ratio_report(inst, result.solution, result.trace, best))));
      }
      return audit.pass ? 0 : 1;
    }
    if (*junction) {
      auto found = find_min_density_junction(inst, {.strategy = strategy, .parallelism = parallelism});
      write_out(out, report::dump(report::junction_search(inst, found)));
      return found.failures.empty() && all_hold(found.ledger) ? 0 : 1;
    }
    if (*orc) {
      report::json doc;
      if (oracle_kind == "dsf") {
        auto best = brute_force_dsf(inst, edge_budget);
        doc = {{"opt_cost", report::rational(best.opt_cost)},
               {"solution", report::solution(inst, best.witness)},
               {"explored", best.explored}};
      } else if (oracle_kind == "density") {
        doc = report::junction(inst, brute_force_min_density_junction(inst, edge_budget));
      } else {
        if (root_name.empty() || terminals.empty()) throw UsageError("--kind dst needs --root and --terminals");
        auto root = vertices_by_name(inst, {root_name}).front();
        auto ts = vertices_by_name(inst, terminals);
        auto tree = exact_dst(inst.graph(), root, ts);
        doc = report::solution(inst, tree);
        doc.erase("certificates");
      }
      write_out(out, report::dump(doc));
      return 0;
    }
    const auto sol = parse_solution(read_file(solution_path), inst);
    if (*ver) {
      auto audit = verify_solution(inst, sol);
      write_out("", report::dump(report::verify(audit)));
      return audit.pass ? 0 : 1;
    }
    if (*rep) {
      auto replay_result = existence_replay(inst, sol);
      auto doc = report::proof_replay(inst, replay_result);
      write_out(out, report::dump(doc));
      return doc["all_pass"].get<bool>() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << kSchema;
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
