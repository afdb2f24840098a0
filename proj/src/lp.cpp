#include "dsf/lp.h"

#include "dsf/detail/dual_simplex.h"
#include "dsf/detail/max_flow.h"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <type_traits>

namespace dsf {

std::size_t LinearProgram::add_variable(std::string name, Rational lower_bound, Rational cost) {
  names.push_back(std::move(name));
  lower.push_back(std::move(lower_bound));
  objective.push_back(std::move(cost));
  return names.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Relation relation, Rational rhs) {
  for (const auto& t : terms)
    if (t.var >= names.size()) throw InputError("constraint references undeclared variable");
  constraints.push_back({std::move(terms), relation, std::move(rhs)});
}

std::string dump_lp(const LinearProgram& lp) {
  std::ostringstream out;
  auto term = [&](const Rational& c, std::size_t v, bool first) {
    if (sgn(c) < 0) out << (first ? "-" : " - ");
    else if (!first) out << " + ";
    Rational a = abs(c);
    if (a != 1) out << to_string(a) << " ";
    out << lp.names[v];
  };
  out << "minimize\n  ";
  bool first = true;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (sgn(lp.objective[j]) == 0) continue;
    term(lp.objective[j], j, first);
    first = false;
  }
  if (first) out << "0";
  out << "\nsubject to\n";
  for (const auto& c : lp.constraints) {
    out << "  ";
    first = true;
    for (const auto& t : c.terms) {
      term(t.coef, t.var, first);
      first = false;
    }
    if (first) out << "0";
    out << (c.relation == Relation::equal ? " = " : " >= ") << to_string(c.rhs) << "\n";
  }
  out << "bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    out << "  " << lp.names[j] << " >= " << to_string(lp.lower[j]) << "\n";
  return out.str();
}

namespace {

// Tableau rows satisfy  x_basis[i] + Σ_j T[i][j] x_j = rhs[i].
struct PrimalTableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<std::size_t> basis;
  std::vector<Rational> d;  // reduced costs

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows[r];
    const Rational inv = 1 / prow[c];
    for (auto& v : prow)
      if (sgn(v) != 0) v *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < prow.size(); ++j)
        if (sgn(prow[j]) != 0) rows[i][j] -= f * prow[j];
      rhs[i] -= f * rhs[r];
    }
    if (sgn(d[c]) != 0) {
      const Rational f = d[c];
      for (std::size_t j = 0; j < prow.size(); ++j)
        if (sgn(prow[j]) != 0) d[j] -= f * prow[j];
    }
    basis[r] = c;
  }

  void price(const std::vector<Rational>& cost) {
    d = cost;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (sgn(rows[i][j]) != 0) d[j] -= cb * rows[i][j];
    }
  }

  // Bland's rule over columns [0, limit). Returns false when unbounded.
  bool optimize(std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (sgn(d[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sgn(rows[i][enter]) <= 0) continue;
        Rational ratio = rhs[i] / rows[i][enter];
        if (leave == rows.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  if (lp.lower.size() != n || lp.objective.size() != n) throw InputError("malformed LP");
  std::size_t surplus = 0;
  for (const auto& c : lp.constraints)
    if (c.relation == Relation::greater_equal) ++surplus;
  const std::size_t m = lp.constraints.size();
  const std::size_t structural = n + surplus;
  const std::size_t width = structural + m;  // artificials last

  PrimalTableau tab;
  tab.rows.assign(m, std::vector<Rational>(width));
  tab.rhs.resize(m);
  tab.basis.resize(m);
  std::size_t next_surplus = n;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    auto& row = tab.rows[i];
    Rational b = c.rhs;
    for (const auto& t : c.terms) {
      if (t.var >= n) throw InputError("constraint references undeclared variable");
      row[t.var] += t.coef;
      b -= t.coef * lp.lower[t.var];
    }
    if (c.relation == Relation::greater_equal) row[next_surplus++] = -1;
    if (sgn(b) < 0) {
      for (auto& v : row) v = -v;
      b = -b;
    }
    row[structural + i] = 1;
    tab.rhs[i] = b;
    tab.basis[i] = structural + i;
  }

  std::vector<Rational> phase1(width);
  for (std::size_t i = 0; i < m; ++i) phase1[structural + i] = 1;
  tab.price(phase1);
  tab.optimize(width);
  Rational infeasibility = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] >= structural) infeasibility += tab.rhs[i];
  LpResult result;
  if (sgn(infeasibility) > 0) {
    result.status = LpStatus::infeasible;
    return result;
  }
  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows.size();) {
    if (tab.basis[i] < structural) {
      ++i;
      continue;
    }
    std::size_t col = structural;
    for (std::size_t j = 0; j < structural; ++j)
      if (sgn(tab.rows[i][j]) != 0) {
        col = j;
        break;
      }
    if (col == structural) {
      tab.rows.erase(tab.rows.begin() + static_cast<long>(i));
      tab.rhs.erase(tab.rhs.begin() + static_cast<long>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<long>(i));
      continue;
    }
    tab.pivot(i, col);
    ++i;
  }
  std::vector<Rational> phase2(width);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  tab.price(phase2);
  if (!tab.optimize(structural)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.values = lp.lower;
  for (std::size_t i = 0; i < tab.rows.size(); ++i)
    if (tab.basis[i] < n) result.values[tab.basis[i]] += tab.rhs[i];
  result.objective = 0;
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.objective[j] * result.values[j];
  return result;
}

std::vector<ViolatedCut> separate_cut_constraints(const Digraph& g,
                                                  const std::map<EdgeId, Rational>& x,
                                                  VertexId root,
                                                  std::span<const Demand> demands) {
  std::vector<Rational> caps(g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto it = x.find(g.edges()[i].id);
    if (it == x.end()) continue;
    if (sgn(it->second) < 0) throw InputError("separation requires x ≥ 0");
    caps[i] = it->second;
  }
  std::vector<ViolatedCut> out;
  for (std::size_t d = 0; d < demands.size(); ++d) {
    const auto& dem = demands[d];
    if (dem.terminal == root || sgn(dem.required) <= 0) continue;
    Cut cut = dem.direction == DemandDirection::from_root ? min_cut(g, caps, root, dem.terminal)
                                                          : min_cut(g, caps, dem.terminal, root);
    if (cut.capacity < dem.required) {
      Rational shortfall = dem.required - cut.capacity;
      out.push_back({d, std::move(cut), std::move(shortfall)});
    }
  }
  return out;
}

namespace {

using detail::Arc;
using detail::DualSimplex;
using detail::DualStatus;

struct SparseRow {
  std::vector<std::pair<std::uint32_t, Rational>> terms;
  Rational rhs;

  // Lets vector growth move rather than deep-copy the GMP values.
  SparseRow() = default;
  SparseRow(const SparseRow&) = default;
  SparseRow(SparseRow&&) noexcept = default;
  SparseRow& operator=(const SparseRow&) = default;
  SparseRow& operator=(SparseRow&&) noexcept = default;
};

// Small integer coefficients (the common case) are packed as raw bytes.
void append_key(std::string& key, const Rational& a) {
  if (a.get_den() == 1 && a.get_num().fits_slong_p()) {
    const long v = a.get_num().get_si();
    key.push_back('i');
    key.append(reinterpret_cast<const char*>(&v), sizeof v);
  } else {
    key += 'q' + a.get_str() + ';';
  }
}

std::string row_key(const SparseRow& row) {
  std::string key;
  key.reserve(row.terms.size() * 13 + 9);
  for (const auto& [j, a] : row.terms) {
    key.append(reinterpret_cast<const char*>(&j), sizeof j);
    append_key(key, a);
  }
  key.push_back('|');
  append_key(key, row.rhs);
  return key;
}

std::optional<Rational> rationalize(double v) {
  if (!std::isfinite(v) || std::fabs(v) > 1e12) return std::nullopt;
  if (std::fabs(v) < 1e-11) return Rational(0);
  const double tol = 1e-9 * std::max(1.0, std::fabs(v));
  long double rest = std::fabs(v);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int step = 0; step < 40; ++step) {
    const long double a = std::floor(rest);
    if (a > 1e12L) return std::nullopt;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > 1'000'000'000) return std::nullopt;
    if (std::fabs(std::fabs(v) - static_cast<double>(h2) / static_cast<double>(k2)) <= tol) {
      Rational r(static_cast<long>(v < 0 ? -h2 : h2), static_cast<unsigned long>(k2));
      r.canonicalize();
      return r;
    }
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const long double frac = rest - a;
    if (frac < 1e-18L) return std::nullopt;
    rest = 1 / frac;
  }
  return std::nullopt;
}

struct CutProblem {
  std::vector<Rational> costs;
  std::vector<SparseRow> seeds;
  std::function<std::vector<SparseRow>(std::span<const double>)> separate_float;
  std::function<std::vector<SparseRow>(std::span<const Rational>)> separate_exact;
  std::size_t round_cap = 0;
  bool certify_optimality = true;
  bool allow_exact_fallback = true;
};

struct CutOutcome {
  std::vector<Rational> x;
  std::vector<SparseRow> rows;
};

std::vector<std::pair<std::uint32_t, double>> to_double_terms(const SparseRow& row) {
  std::vector<std::pair<std::uint32_t, double>> t;
  t.reserve(row.terms.size());
  for (const auto& [j, a] : row.terms) t.emplace_back(j, a.get_d());
  return t;
}

bool rows_hold(std::span<const SparseRow> rows, std::span<const Rational> x) {
  for (const auto& v : x)
    if (sgn(v) < 0) return false;
  for (const auto& row : rows) {
    Rational lhs = 0;
    for (const auto& [j, a] : row.terms) lhs += a * x[j];
    if (lhs < row.rhs) return false;
  }
  return true;
}

// Strong duality on the master: x primal feasible (checked by the caller),
// π ≥ 0 dual feasible, equal objectives.
bool master_optimal(const CutProblem& p, std::span<const SparseRow> rows,
                    std::span<const Rational> x, std::span<const Rational> pi) {
  std::vector<Rational> reduced = p.costs;
  Rational dual_obj = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (sgn(pi[i]) < 0) return false;
    if (sgn(pi[i]) == 0) continue;
    dual_obj += pi[i] * rows[i].rhs;
    for (const auto& [j, a] : rows[i].terms) reduced[j] -= pi[i] * a;
  }
  for (const auto& r : reduced)
    if (sgn(r) < 0) return false;
  Rational primal_obj = 0;
  for (std::size_t j = 0; j < x.size(); ++j) primal_obj += p.costs[j] * x[j];
  return primal_obj == dual_obj;
}

std::optional<CutOutcome> run_cut_loop(const CutProblem& p, CutLoopStats* stats) {
  const std::size_t n = p.costs.size();
  std::vector<SparseRow> rows;
  std::set<std::string> known;
  std::vector<double> cost_d(n);
  for (std::size_t j = 0; j < n; ++j) cost_d[j] = p.costs[j].get_d();
  DualSimplex<double> master(cost_d);
  auto add = [&](SparseRow row, auto& lp, auto convert) {
    if (!known.insert(row_key(row)).second) return false;
    auto terms = convert(row);
    if constexpr (std::is_same_v<std::decay_t<decltype(lp)>, DualSimplex<double>>)
      lp.add_row(terms, row.rhs.get_d());
    else
      lp.add_row(terms, row.rhs);
    rows.push_back(std::move(row));
    if (stats) ++stats->cuts;
    return true;
  };
  for (const auto& r : p.seeds) add(r, master, to_double_terms);
  const std::size_t seeded = rows.size();
  if (stats) stats->cuts = 0;

  // Cuts left strictly slack by the current optimum are deleted before new
  // ones go in; the basis stays optimal for what remains. They may return.
  auto drop_loose = [&] {
    std::vector<std::size_t> loose;
    for (auto i : master.loose_rows(1e-7))
      if (i >= seeded) loose.push_back(i);
    if (loose.empty()) return;
    master.drop_rows(loose);
    std::vector<SparseRow> kept;
    kept.reserve(rows.size() - loose.size());
    for (std::size_t i = 0, next = 0; i < rows.size(); ++i) {
      if (next < loose.size() && loose[next] == i) {
        known.erase(row_key(rows[i]));
        ++next;
      } else {
        kept.push_back(std::move(rows[i]));
      }
    }
    rows = std::move(kept);
  };

  std::size_t rounds = 0;
  auto bump = [&] {
    ++rounds;
    if (stats) stats->rounds = rounds;
    if (rounds > p.round_cap)
      throw DomainError("cutting-plane loop exceeded " + std::to_string(p.round_cap) +
                        " master solves (" + std::to_string(rows.size()) + " rows)");
  };

  bool need_exact = false;
  while (true) {
    bump();
    auto status = master.solve(200000);
    if (status == DualStatus::infeasible) throw DomainError("LP relaxation is infeasible");
    if (status != DualStatus::optimal) {
      need_exact = true;
      break;
    }
    auto xd = master.primal();
    bool added = false;
    auto float_cuts = p.separate_float(xd);
    if (!float_cuts.empty()) drop_loose();
    for (auto& cut : float_cuts) added |= add(std::move(cut), master, to_double_terms);
    if (added) continue;

    std::vector<Rational> xr(n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      auto r = rationalize(xd[j]);
      if (!r) ok = false;
      else xr[j] = *r;
    }
    ok = ok && rows_hold(rows, xr);
    if (ok && p.certify_optimality) {
      auto pd = master.duals();
      std::vector<Rational> pi(pd.size());
      for (std::size_t i = 0; i < pd.size() && ok; ++i) {
        auto r = rationalize(pd[i]);
        if (!r) ok = false;
        else pi[i] = *r;
      }
      ok = ok && master_optimal(p, rows, xr, pi);
    }
    if (!ok) {
      need_exact = true;
      break;
    }
    auto exact_cuts = p.separate_exact(xr);
    if (exact_cuts.empty()) return CutOutcome{std::move(xr), std::move(rows)};
    for (auto& cut : exact_cuts) added |= add(std::move(cut), master, to_double_terms);
    if (!added) {
      need_exact = true;
      break;
    }
  }
  if (!need_exact || !p.allow_exact_fallback) return std::nullopt;

  if (stats) stats->exact_fallback = true;
  auto exact_terms = [](const SparseRow& row) { return row.terms; };
  DualSimplex<Rational> exact(p.costs);
  for (const auto& r : rows) exact.add_row(exact_terms(r), r.rhs);
  while (true) {
    bump();
    auto status = exact.solve(static_cast<std::size_t>(-1), /*bland=*/true);
    if (status == DualStatus::infeasible) throw DomainError("LP relaxation is infeasible");
    auto xr = exact.primal();
    auto cuts = p.separate_exact(xr);
    if (cuts.empty()) return CutOutcome{std::move(xr), std::move(rows)};
    bool added = false;
    for (auto& cut : cuts) added |= add(std::move(cut), exact, exact_terms);
    if (!added) throw DomainError("exact separation returned a cut already in the master");
  }
}

// Flow requirement inside the candidate-edge network: `source` must send
// `var` units (or 1 when var < 0) to `sink`.
struct FlowDemand {
  std::uint32_t source;
  std::uint32_t sink;
  int var;
};

struct CutNetwork {
  std::size_t n = 0;
  std::vector<Arc> arcs;  // arc j carries variable j
  std::vector<FlowDemand> demands;

  template <class Num>
  SparseRow cut_row(const std::vector<char>& side, const FlowDemand& dem) const {
    SparseRow row;
    for (std::size_t j = 0; j < arcs.size(); ++j)
      if (side[arcs[j].tail] && !side[arcs[j].head])
        row.terms.emplace_back(static_cast<std::uint32_t>(j), Rational(1));
    if (dem.var >= 0) {
      row.terms.emplace_back(static_cast<std::uint32_t>(dem.var), Rational(-1));
      row.rhs = 0;
    } else {
      row.rhs = 1;
    }
    return row;
  }

  std::vector<SparseRow> separate_float(std::span<const double> x) const {
    std::vector<SparseRow> out;
    std::vector<double> caps(x.begin(), x.begin() + static_cast<long>(arcs.size()));
    for (const auto& dem : demands) {
      const double need = dem.var >= 0 ? x[dem.var] : 1.0;
      if (need <= 1e-9) continue;
      detail::Dinic<double> flow(n, arcs, caps, 1e-12);
      auto r = flow.run(dem.source, dem.sink);
      if (r.value < need - 1e-9) out.push_back(cut_row<double>(r.source_side, dem));
    }
    return out;
  }

  std::vector<SparseRow> separate_exact(std::span<const Rational> x) const {
    std::vector<SparseRow> out;
    std::span<const Rational> caps = x.subspan(0, arcs.size());
    for (const auto& dem : demands) {
      const Rational need = dem.var >= 0 ? x[dem.var] : Rational(1);
      if (sgn(need) <= 0) continue;
      auto r = detail::exact_max_flow(n, arcs, caps, dem.source, dem.sink);
      if (r.value < need) out.push_back(cut_row<Rational>(r.source_side, dem));
    }
    return out;
  }
};

SparseRow degree_row(const Digraph& g, std::span<const std::uint32_t> edge_indices,
                     const std::vector<int>& var_of_edge, int y_var) {
  SparseRow row;
  for (auto e : edge_indices)
    if (var_of_edge[e] >= 0) row.terms.emplace_back(static_cast<std::uint32_t>(var_of_edge[e]), 1);
  std::sort(row.terms.begin(), row.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  (void)g;
  if (y_var >= 0) {
    row.terms.emplace_back(static_cast<std::uint32_t>(y_var), -1);
    row.rhs = 0;
  } else {
    row.rhs = 1;
  }
  return row;
}

std::size_t round_cap(const Digraph& g, std::size_t k) {
  return std::max<std::size_t>(50 * std::max<std::size_t>(g.num_edges(), 1) * std::max<std::size_t>(k, 1), 50);
}

}  // namespace

std::optional<FractionalSolution> solve_den_lp(const Instance& inst, VertexId root,
                                               const DenLpOptions& options,
                                               CutLoopStats* stats) {
  const auto& g = inst.graph();
  const std::size_t r = g.vertex_index(root);
  const auto from_root = reach_mask(g, {&r, 1}, Direction::forward);
  const auto to_root = reach_mask(g, {&r, 1}, Direction::backward);

  std::vector<const TerminalPair*> active;
  std::vector<std::size_t> sinks, sources;
  for (const auto& p : inst.pairs()) {
    const auto s = g.vertex_index(p.s);
    const auto t = g.vertex_index(p.t);
    if (!to_root[s] || !from_root[t]) continue;
    active.push_back(&p);
    if (t != r) sinks.push_back(t);
    if (s != r) sources.push_back(s);
  }
  if (active.empty()) return std::nullopt;

  // Only edges on some root→sink or source→root dipath can carry flow.
  const auto reach_sink = reach_mask(g, sinks, Direction::backward);
  const auto from_source = reach_mask(g, sources, Direction::forward);
  CutNetwork net;
  net.n = g.num_vertices();
  std::vector<int> var_of_edge(g.num_edges(), -1);
  std::vector<std::size_t> edge_of_var;
  CutProblem prob;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto u = g.tail_index(e), v = g.head_index(e);
    if (u == v) continue;
    const bool out_part = from_root[u] && reach_sink[v];
    const bool in_part = from_source[u] && to_root[v];
    if (!out_part && !in_part) continue;
    var_of_edge[e] = static_cast<int>(edge_of_var.size());
    edge_of_var.push_back(e);
    net.arcs.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    prob.costs.push_back(g.edges()[e].cost);
  }
  const std::size_t nx = edge_of_var.size();
  for (std::size_t i = 0; i < active.size(); ++i) prob.costs.push_back(0);

  SparseRow normalise;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const int y = static_cast<int>(nx + i);
    const auto s = static_cast<std::uint32_t>(g.vertex_index(active[i]->s));
    const auto t = static_cast<std::uint32_t>(g.vertex_index(active[i]->t));
    if (t != r) {
      net.demands.push_back({static_cast<std::uint32_t>(r), t, y});
      prob.seeds.push_back(degree_row(g, g.out_edges(r), var_of_edge, y));
      prob.seeds.push_back(degree_row(g, g.in_edges(t), var_of_edge, y));
    }
    if (s != r) {
      net.demands.push_back({s, static_cast<std::uint32_t>(r), y});
      prob.seeds.push_back(degree_row(g, g.out_edges(s), var_of_edge, y));
      prob.seeds.push_back(degree_row(g, g.in_edges(r), var_of_edge, y));
    }
    normalise.terms.emplace_back(static_cast<std::uint32_t>(y), 1);
  }
  normalise.rhs = 1;
  prob.seeds.push_back(normalise);
  prob.separate_float = [&net](std::span<const double> x) { return net.separate_float(x); };
  prob.separate_exact = [&net](std::span<const Rational> x) { return net.separate_exact(x); };
  prob.round_cap = round_cap(g, inst.k());

  auto first = run_cut_loop(prob, stats);
  if (!first) throw DomainError("Den-LP solve failed to certify");
  std::vector<Rational> point = std::move(first->x);
  Rational opt = 0;
  for (std::size_t j = 0; j < nx; ++j) opt += prob.costs[j] * point[j];

  if (options.balance && active.size() > 1) {
    CutProblem bal;
    bal.costs.assign(nx + active.size(), Rational(0));
    bal.costs.push_back(1);
    const auto z = static_cast<std::uint32_t>(nx + active.size());
    bal.seeds = first->rows;
    SparseRow budget;
    for (std::size_t j = 0; j < nx; ++j)
      if (sgn(prob.costs[j]) != 0) budget.terms.emplace_back(static_cast<std::uint32_t>(j), -prob.costs[j]);
    budget.rhs = -opt;
    bal.seeds.push_back(std::move(budget));
    for (std::size_t i = 0; i < active.size(); ++i) {
      SparseRow cap;
      cap.terms = {{static_cast<std::uint32_t>(nx + i), Rational(-1)}, {z, Rational(1)}};
      cap.rhs = 0;
      bal.seeds.push_back(std::move(cap));
    }
    bal.separate_float = prob.separate_float;
    bal.separate_exact = prob.separate_exact;
    bal.round_cap = prob.round_cap;
    bal.certify_optimality = false;
    bal.allow_exact_fallback = false;
    if (auto second = run_cut_loop(bal, nullptr)) {
      second->x.pop_back();
      point = std::move(second->x);
    }
  }

  Rational ysum = 0;
  for (std::size_t i = 0; i < active.size(); ++i) ysum += point[nx + i];
  if (ysum != 1)
    for (auto& v : point) v /= ysum;

  FractionalSolution sol;
  sol.objective = 0;
  for (std::size_t j = 0; j < nx; ++j) {
    if (sgn(point[j]) == 0) continue;
    const auto& e = g.edges()[edge_of_var[j]];
    sol.x.emplace(e.id, point[j]);
    sol.objective += e.cost * point[j];
  }
  for (const auto& p : inst.pairs()) {
    sol.y_s.emplace(p.id, 0);
    sol.y_t.emplace(p.id, 0);
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    sol.y_s[active[i]->id] = point[nx + i];
    sol.y_t[active[i]->id] = point[nx + i];
  }
  return sol;
}

FractionalSolution den_lp_from_junction(const Instance& inst, const JunctionTree& tree) {
  if (tree.covered.empty()) throw InputError("junction tree covers no pair");
  const Rational share(1, static_cast<unsigned long>(tree.covered.size()));
  FractionalSolution sol;
  for (auto e : tree.edges) sol.x.emplace(e, share);
  for (const auto& p : inst.pairs()) {
    sol.y_s.emplace(p.id, 0);
    sol.y_t.emplace(p.id, 0);
  }
  for (auto pid : tree.covered) {
    inst.pair(pid);
    sol.y_s[pid] = share;
    sol.y_t[pid] = share;
  }
  sol.objective = inst.graph().cost_of(tree.edges) * share;
  return sol;
}

std::vector<std::string> den_lp_violations(const Instance& inst, VertexId root,
                                           const FractionalSolution& sol) {
  std::vector<std::string> out;
  const auto& g = inst.graph();
  Rational cost = 0;
  for (const auto& [e, v] : sol.x) {
    if (!g.has_edge(e)) {
      out.push_back("x references unknown edge " + std::to_string(e.value));
      continue;
    }
    if (sgn(v) < 0) out.push_back("x[" + inst.edge_name(e) + "] < 0");
    cost += g.edge(e).cost * v;
  }
  if (cost != sol.objective) out.push_back("objective " + to_string(sol.objective) + " != c·x " + to_string(cost));
  auto value = [](const std::map<PairId, Rational>& m, PairId id) {
    auto it = m.find(id);
    return it == m.end() ? Rational(0) : it->second;
  };
  Rational total = 0;
  std::vector<Demand> demands;
  std::vector<PairId> owner;
  for (const auto& p : inst.pairs()) {
    const Rational ys = value(sol.y_s, p.id), yt = value(sol.y_t, p.id);
    if (sgn(ys) < 0 || sgn(yt) < 0) out.push_back("negative y for pair " + inst.pair_name(p.id));
    if (ys != yt) out.push_back("y_s != y_t for pair " + inst.pair_name(p.id));
    total += yt;
    demands.push_back({p.t, yt, DemandDirection::from_root});
    owner.push_back(p.id);
    demands.push_back({p.s, ys, DemandDirection::to_root});
    owner.push_back(p.id);
  }
  if (total != 1) out.push_back("sum of y_t is " + to_string(total) + ", not 1");
  for (const auto& v : separate_cut_constraints(g, sol.x, root, demands)) {
    const auto& d = demands[v.demand];
    out.push_back(std::string(d.direction == DemandDirection::from_root ? "root->t" : "s->root") +
                  " cut for pair " + inst.pair_name(owner[v.demand]) + " short by " +
                  to_string(v.shortfall));
  }
  return out;
}

Rational solve_dst_lp(const Digraph& g, VertexId root, std::span<const VertexId> terminals,
                      CutLoopStats* stats) {
  const std::size_t r = g.vertex_index(root);
  const auto from_root = reach_mask(g, {&r, 1}, Direction::forward);
  std::vector<std::size_t> sinks;
  for (auto t : terminals) {
    const auto ti = g.vertex_index(t);
    if (!from_root[ti]) throw DomainError("terminal " + g.display_name(t) + " is unreachable from the root");
    if (ti != r) sinks.push_back(ti);
  }
  sinks = sorted_unique(std::move(sinks));
  if (sinks.empty()) return 0;
  const auto reach_sink = reach_mask(g, sinks, Direction::backward);
  CutNetwork net;
  net.n = g.num_vertices();
  std::vector<int> var_of_edge(g.num_edges(), -1);
  CutProblem prob;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto u = g.tail_index(e), v = g.head_index(e);
    if (u == v || !from_root[u] || !reach_sink[v]) continue;
    var_of_edge[e] = static_cast<int>(net.arcs.size());
    net.arcs.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    prob.costs.push_back(g.edges()[e].cost);
  }
  for (auto t : sinks) {
    net.demands.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(t), -1});
    prob.seeds.push_back(degree_row(g, g.in_edges(t), var_of_edge, -1));
  }
  prob.seeds.push_back(degree_row(g, g.out_edges(r), var_of_edge, -1));
  prob.separate_float = [&net](std::span<const double> x) { return net.separate_float(x); };
  prob.separate_exact = [&net](std::span<const Rational> x) { return net.separate_exact(x); };
  prob.round_cap = round_cap(g, sinks.size());
  auto res = run_cut_loop(prob, stats);
  if (!res) throw DomainError("DST-LP solve failed to certify");
  Rational obj = 0;
  for (std::size_t j = 0; j < prob.costs.size(); ++j) obj += prob.costs[j] * res->x[j];
  return obj;
}

}  // namespace dsf
