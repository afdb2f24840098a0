#include "dsf/bench.h"

#include "dsf/detail/parallel.h"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace dsf {

namespace {

BenchRow run_one(std::uint64_t seed, const InstanceMaker& make, const BenchOptions& o) {
  BenchRow row;
  row.seed = seed;
  Instance inst;
  try {
    inst = make(seed);
  } catch (const std::exception& e) {
    row.error = std::string("generation: ") + e.what();
    return row;
  }
  row.n = inst.graph().num_vertices();
  row.m = inst.graph().num_edges();
  row.k = inst.k();

  SolveResult solved;
  try {
    solved = solve_dsf(inst, {.strategy = o.strategy, .parallelism = o.inner_parallelism});
  } catch (const std::exception& e) {
    row.error = std::string("solve: ") + e.what();
    return row;
  }
  const auto& sol = solved.solution;
  const auto& trace = solved.trace;
  row.cost = sol.cost;
  row.iterations = trace.iterations.size();
  auto audit = verify_solution(inst, sol);
  row.verified = audit.pass;
  row.verify_failures = audit.failures;
  row.trace_ledger = all_hold(trace.ledger) && trace.failures.empty();
  row.junction_ledger = true;
  for (const auto& it : trace.iterations) {
    row.junction_ledger = row.junction_ledger && all_hold(it.junction_ledger);
    row.scaled_checks += it.scaled_checks;
    row.junction_failures.insert(row.junction_failures.end(), it.junction_failures.begin(),
                                 it.junction_failures.end());
  }
  if (o.keep_detail)
    row.detail = {{"solution", report::solution(inst, sol)}, {"trace", report::trace(inst, trace)}};

  if (!o.oracle) return row;
  OracleResult best;
  try {
    best = brute_force_dsf(inst, o.edge_budget);
  } catch (const DomainError& e) {
    row.oracle_error = e.what();
    return row;
  }
  auto rr = ratio_report(inst, sol, trace, best);
  row.opt = rr.opt;
  row.ratio = rr.ratio;
  if (o.keep_detail) row.detail["ratio"] = report::ratio(rr);
  if (!o.replay) return row;
  try {
    auto replay = existence_replay(inst, best.witness);
    row.replay_ok = all_hold(replay.claims) && all_hold(replay.chain);
    for (const auto& c : replay.claims)
      if (!c.holds) row.replay_failures.push_back(c.name + ": " + c.detail);
    for (const auto& q : replay.chain)
      if (!q.holds) row.replay_failures.push_back(q.name);
  } catch (const std::exception& e) {
    row.replay_ok = false;
    row.replay_failures.push_back(e.what());
  }
  return row;
}

std::string approx(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
  return buf;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string joined(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : "; ") + x;
  return s;
}

}  // namespace

std::vector<BenchRow> run_bench(std::span<const std::uint64_t> seeds, const InstanceMaker& make,
                                const BenchOptions& options) {
  if (options.replay && !options.oracle) throw InputError("replay needs the oracle");
  std::vector<BenchRow> rows(seeds.size());
  detail::parallel_for(seeds.size(), options.parallelism,
                       [&](std::size_t i) { rows[i] = run_one(seeds[i], make, options); });
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "seed,n,m,k,cost,opt,ratio,ratio_approx,iterations,verified,trace_ledger,junction_ledger,"
         "scaled_checks,junction_failures,replay,error\n";
  for (const auto& r : rows) {
    out << r.seed << ',';
    if (!r.error.empty()) {
      out << ",,,,,,,,,,,,,," << csv_field(r.error) << '\n';
      continue;
    }
    out << r.n << ',' << r.m << ',' << r.k << ',' << to_string(r.cost) << ',' << (r.opt ? to_string(*r.opt) : "")
        << ',' << (r.ratio ? to_string(*r.ratio) : "") << ',' << (r.ratio ? approx(*r.ratio) : "") << ','
        << r.iterations << ',' << (r.verified ? "pass" : "fail") << ',' << (r.trace_ledger ? "pass" : "fail")
        << ',' << (r.junction_ledger ? "pass" : "fail") << ',' << r.scaled_checks << ','
        << r.junction_failures.size() << ',' << (r.replay_ok ? (*r.replay_ok ? "pass" : "fail") : "") << ','
        << csv_field(r.oracle_error.empty() ? joined(r.verify_failures) : "oracle: " + r.oracle_error) << '\n';
  }
  return out.str();
}

report::json bench_json(const std::vector<BenchRow>& rows) {
  report::json out = report::json::array();
  for (const auto& r : rows) {
    report::json j{{"seed", r.seed}};
    if (!r.error.empty()) {
      j["error"] = r.error;
      out.push_back(std::move(j));
      continue;
    }
    j.update({{"n", r.n},
              {"m", r.m},
              {"k", r.k},
              {"cost", report::rational(r.cost)},
              {"iterations", r.iterations},
              {"verified", r.verified},
              {"verify_failures", r.verify_failures},
              {"trace_ledger", r.trace_ledger},
              {"junction_ledger", r.junction_ledger},
              {"scaled_checks", r.scaled_checks},
              {"junction_failures", r.junction_failures}});
    if (r.opt) j["opt"] = report::rational(*r.opt);
    if (r.ratio) j["ratio"] = report::rational(*r.ratio);
    if (!r.oracle_error.empty()) j["oracle_error"] = r.oracle_error;
    if (r.replay_ok) {
      j["replay"] = *r.replay_ok;
      j["replay_failures"] = r.replay_failures;
    }
    if (!r.detail.is_null()) j["detail"] = r.detail;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw InputError("bad seed '" + std::string(s) + "' in '" + std::string(text) + "'");
    return v;
  };
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    if (auto dots = part.find(".."); dots != std::string_view::npos) {
      auto lo = number(part.substr(0, dots)), hi = number(part.substr(dots + 2));
      if (lo > hi) throw InputError("empty seed range '" + std::string(part) + "'");
      if (hi - lo > 1'000'000) throw InputError("seed range too long");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(number(part));
    }
    start = end + 1;
  }
  return out;
}

}  // namespace dsf
