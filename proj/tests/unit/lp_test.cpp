#include "dsf/lp.h"

#include "fixtures.h"

#include <doctest.h>

using namespace dsf;
using fixtures::eid;
using fixtures::pid;
using fixtures::vid;

TEST_CASE("solve_lp: single lower bound") {
  LinearProgram lp;
  auto x = lp.add_variable("x", 0, 1);
  lp.add_constraint({{x, 1}}, Relation::greater_equal, 3);
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.values[x] == 3);
}

TEST_CASE("solve_lp: covering row") {
  LinearProgram lp;
  auto x = lp.add_variable("x", 0, 1);
  auto y = lp.add_variable("y", 0, 1);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::greater_equal, 1);
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == 1);
}

TEST_CASE("solve_lp: two-variable vertex with a fractional bound") {
  LinearProgram lp;
  auto a = lp.add_variable("a", 0, 2);
  auto b = lp.add_variable("b", 0, 1);
  lp.add_constraint({{a, 1}, {b, 1}}, Relation::greater_equal, 2);
  lp.add_constraint({{a, 1}}, Relation::greater_equal, make_rational(1, 2));
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == make_rational(5, 2));
  CHECK(r.values[a] == make_rational(1, 2));
  CHECK(r.values[b] == make_rational(3, 2));
}

TEST_CASE("solve_lp: infeasible and unbounded are distinct") {
  LinearProgram inf;
  auto x = inf.add_variable("x");
  inf.add_constraint({{x, 1}}, Relation::equal, -1);
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  LinearProgram unb;
  auto y = unb.add_variable("y", 0, -1);
  unb.add_constraint({{y, 1}}, Relation::greater_equal, 0);
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("solve_lp: lower bounds are shifted") {
  LinearProgram lp;
  auto x = lp.add_variable("x", -2, 1);
  auto y = lp.add_variable("y", 1, 3);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::equal, 4);
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.values[x] == 3);
  CHECK(r.values[y] == 1);
  CHECK(r.objective == 6);
}

TEST_CASE("separate_cut_constraints") {
  InstanceBuilder b;
  b.edge("r", "a", 1, "ra");
  b.edge("a", "t", 1, "at");
  b.edge("r", "c", 1, "rc");
  b.edge("c", "t", 1, "ct");
  b.pair("r", "t");
  auto inst = b.build();
  const auto& g = inst.graph();
  auto r = vid(inst, "r"), t = vid(inst, "t");

  std::map<EdgeId, Rational> on_path{{eid(inst, "ra"), 1}, {eid(inst, "at"), 1}};
  std::vector<Demand> one{{t, 1, DemandDirection::from_root}};
  CHECK(separate_cut_constraints(g, on_path, r, one).empty());

  std::vector<Demand> half{{t, make_rational(1, 2), DemandDirection::from_root}};
  auto v = separate_cut_constraints(g, {}, r, half);
  REQUIRE(v.size() == 1);
  CHECK(v[0].shortfall == make_rational(1, 2));

  std::map<EdgeId, Rational> thirds;
  for (auto e : g.edges()) thirds.emplace(e.id, make_rational(1, 3));
  v = separate_cut_constraints(g, thirds, r, one);
  REQUIRE(v.size() == 1);
  CHECK(v[0].cut.capacity == make_rational(2, 3));
  CHECK(v[0].shortfall == make_rational(1, 3));
}

TEST_CASE("solve_den_lp: PATH3 at the middle vertex") {
  auto inst = fixtures::path3();
  auto sol = solve_den_lp(inst, vid(inst, "v"));
  REQUIRE(sol);
  CHECK(sol->objective == 2);
  CHECK(sol->x.at(eid(inst, "sv")) == 1);
  CHECK(sol->x.at(eid(inst, "vt")) == 1);
  CHECK(sol->y_t.at(pid(inst, "st")) == 1);
  CHECK(den_lp_violations(inst, vid(inst, "v"), *sol).empty());
}

TEST_CASE("solve_den_lp: TRIANGLE at r spreads y over both pairs") {
  auto inst = fixtures::triangle();
  auto r = vid(inst, "r");
  auto sol = solve_den_lp(inst, r);
  REQUIRE(sol);
  CHECK(sol->objective == 2);
  CHECK(sol->y_t.at(pid(inst, "ab")) == make_rational(1, 2));
  CHECK(sol->y_t.at(pid(inst, "ac")) == make_rational(1, 2));
  CHECK(sol->x.at(eid(inst, "ar")) == make_rational(1, 2));
  CHECK(sol->x.at(eid(inst, "rb")) == make_rational(1, 2));
  CHECK(sol->x.at(eid(inst, "rc")) == make_rational(1, 2));
  CHECK(den_lp_violations(inst, r, *sol).empty());
}

TEST_CASE("solve_den_lp: root that routes nothing") {
  InstanceBuilder b;
  b.edge("s", "t", 1);
  b.edge("t", "z", 1);
  b.pair("s", "t");
  auto inst = b.build();
  CHECK_FALSE(solve_den_lp(inst, vid(inst, "z")));
  // A pair's own sink is a valid root.
  CHECK(solve_den_lp(inst, vid(inst, "t")));
}

TEST_CASE("den_lp_from_junction") {
  auto inst = fixtures::triangle();
  auto tree = make_junction_tree(inst, vid(inst, "r"),
                                 {eid(inst, "ar"), eid(inst, "rb"), eid(inst, "rc")},
                                 {pid(inst, "ab"), pid(inst, "ac")});
  auto sol = den_lp_from_junction(inst, tree);
  CHECK(sol.objective == 2);
  CHECK(den_lp_violations(inst, tree.root, sol).empty());

  auto p = fixtures::path3();
  auto single = make_junction_tree(p, vid(p, "v"), {eid(p, "sv"), eid(p, "vt")}, {pid(p, "st")});
  auto s1 = den_lp_from_junction(p, single);
  CHECK(s1.objective == 2);
  CHECK(s1.x.at(eid(p, "sv")) == 1);

  // Halving x breaks the cuts.
  for (auto& [e, v] : sol.x) v /= 2;
  sol.objective /= 2;
  CHECK_FALSE(den_lp_violations(inst, tree.root, sol).empty());
}

TEST_CASE("solve_dst_lp") {
  auto inst = fixtures::shared_prefix();
  const auto& g = inst.graph();
  auto r = vid(inst, "r");
  std::vector<VertexId> one{vid(inst, "t1")};
  CHECK(solve_dst_lp(g, r, one) == 6);
  std::vector<VertexId> both{vid(inst, "t1"), vid(inst, "t2")};
  CHECK(solve_dst_lp(g, r, both) == 7);
}
