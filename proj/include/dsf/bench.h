#pragma once

// Batch runs over seeded instances: solve, audit, and optionally compare with
// the exact oracle and replay the existence argument on its optimum.

#include "dsf/report.h"

#include <functional>

namespace dsf {

struct BenchOptions {
  DstStrategy strategy = DstStrategy::exact_fpt;
  std::size_t parallelism = 1;        // instances in flight
  std::size_t inner_parallelism = 1;  // roots in flight within one junction search
  bool oracle = false;
  bool replay = false;  // needs oracle
  std::size_t edge_budget = 20;
  bool keep_detail = false;  // keep solution and trace JSON per row
};

struct BenchRow {
  std::uint64_t seed = 0;
  std::string error;  // generation or solve failure; other fields are then empty
  std::size_t n = 0, m = 0, k = 0;
  Rational cost;
  std::size_t iterations = 0;
  bool verified = false;
  std::vector<std::string> verify_failures;
  bool trace_ledger = false;     // greedy accounting inequalities
  bool junction_ledger = false;  // every iteration's junction chain
  std::size_t scaled_checks = 0;
  std::vector<std::string> junction_failures;
  std::optional<Rational> opt;
  std::optional<Rational> ratio;
  std::string oracle_error;
  std::optional<bool> replay_ok;
  std::vector<std::string> replay_failures;
  report::json detail;
};

using InstanceMaker = std::function<Instance(std::uint64_t seed)>;

/// Rows come back in seed order whatever the parallelism.
std::vector<BenchRow> run_bench(std::span<const std::uint64_t> seeds, const InstanceMaker& make,
                                const BenchOptions& options);

std::string bench_csv(const std::vector<BenchRow>& rows);
report::json bench_json(const std::vector<BenchRow>& rows);

/// "3", "1..30" or "1,4,9" (ranges allowed between commas). Throws InputError.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

}  // namespace dsf
