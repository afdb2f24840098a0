#include "dsf/oracle.h"

#include "fixtures.h"
#include "naive.h"
#include "small.h"

#include <doctest.h>

using namespace dsf;
using fixtures::eid;
using fixtures::pid;
using fixtures::vid;

TEST_CASE("brute_force_dsf: fixtures") {
  auto p = fixtures::path3();
  CHECK(brute_force_dsf(p).opt_cost == 2);

  auto t = fixtures::triangle();
  auto res = brute_force_dsf(t);
  CHECK(res.opt_cost == 4);
  CHECK(*naive::dsf_opt(t) == 4);
  CHECK(res.witness.cost == 4);
  CHECK(res.witness.certificates.size() == 2);
}

TEST_CASE("brute_force_dsf: infeasible and over-budget instances are refused") {
  InstanceBuilder b;
  b.edge("s", "x", 1);
  b.vertex("t");
  b.pair("s", "t");
  CHECK_THROWS_AS(brute_force_dsf(b.build()), DomainError);

  auto big = gen_grid({.rows = 4, .cols = 4, .orientation_seed = 3, .cost_min = 1,
                       .cost_max = 5, .k = 4, .pair_seed = 3});
  CHECK_THROWS_AS(brute_force_dsf(big, 2), DomainError);
}

TEST_CASE("exact_dst: fixtures") {
  auto inst = fixtures::shared_prefix();
  const auto& g = inst.graph();
  auto r = vid(inst, "r");
  std::vector<VertexId> one{vid(inst, "t1")};
  CHECK(exact_dst(g, r, one).cost == 6);

  std::vector<VertexId> both{vid(inst, "t1"), vid(inst, "t2")};
  auto tree = exact_dst(g, r, both);
  CHECK(tree.cost == 7);
  CHECK(tree.edges == std::vector<EdgeId>{eid(inst, "rv"), eid(inst, "vt1"), eid(inst, "vt2")});
  // Same answer from the DSF oracle on pairs (r,t1), (r,t2).
  CHECK(brute_force_dsf(inst).opt_cost == 7);

  InstanceBuilder star;
  star.edge("r", "t1", 1);
  star.edge("r", "t2", 1);
  star.pair("r", "t1");
  auto s = star.build();
  std::vector<VertexId> leaves{vid(s, "t1"), vid(s, "t2")};
  CHECK(exact_dst(s.graph(), vid(s, "r"), leaves).cost == 2);
}

TEST_CASE("exact_dst: unreachable terminal is named") {
  auto inst = fixtures::triangle();
  std::vector<VertexId> t{vid(inst, "a")};
  CHECK_THROWS_WITH_AS(exact_dst(inst.graph(), vid(inst, "r"), t), doctest::Contains("a"),
                       DomainError);
}

TEST_CASE("brute_force_min_density_junction: fixtures") {
  auto p = fixtures::path3();
  auto jp = brute_force_min_density_junction(p);
  CHECK(jp.density == 2);
  CHECK(jp.covered.size() == 1);

  auto t = fixtures::triangle();
  auto jt = brute_force_min_density_junction(t);
  CHECK(jt.density == 2);
  CHECK(jt.root == vid(t, "r"));
  CHECK(jt.covered.size() == 2);  // ties go to the larger covered set
  CHECK(jt.cost == 4);
  CHECK(is_valid_junction_tree(t, jt));
}

TEST_CASE("brute_force_min_density_junction: best junction covers a strict subset") {
  InstanceBuilder b;
  b.edge("s1", "m", 1, "cheap1");
  b.edge("m", "t1", 1, "cheap2");
  b.edge("s2", "x", 10, "dear1");
  b.edge("x", "t2", 10, "dear2");
  b.pair("s1", "t1", "near");
  b.pair("s2", "t2", "far");
  auto inst = b.build();
  auto j = brute_force_min_density_junction(inst);
  CHECK(j.covered == std::vector<PairId>{pid(inst, "near")});
  CHECK(j.density == 2);
  CHECK(*naive::min_density(inst) == 2);
}

TEST_CASE("dst_lp_lower_bound") {
  auto inst = fixtures::shared_prefix();
  const auto& g = inst.graph();
  auto r = vid(inst, "r");
  std::vector<VertexId> both{vid(inst, "t1"), vid(inst, "t2")};
  CHECK(dst_lp_lower_bound(g, r, both) == 7);

  InstanceBuilder b;
  b.edge("r", "a", 2);
  b.edge("a", "t1", 3);
  b.edge("r", "t2", 4);
  b.pair("r", "t1");
  auto d = b.build();
  std::vector<VertexId> ts{vid(d, "t1"), vid(d, "t2")};
  CHECK(dst_lp_lower_bound(d.graph(), vid(d, "r"), ts) == 9);
  std::vector<VertexId> t1{vid(d, "t1")};
  CHECK(dst_lp_lower_bound(d.graph(), vid(d, "r"), t1) == 5);
}


TEST_CASE("oracles agree with plain subset enumeration") {
  auto batch = small::instances();
  REQUIRE(batch.size() >= 15);
  for (const auto& inst : batch) {
    CAPTURE(serialize_instance(inst));
    auto res = brute_force_dsf(inst, 64);
    CHECK(res.opt_cost == *naive::dsf_opt(inst));
    CHECK(res.witness.cost == res.opt_cost);

    auto j = brute_force_min_density_junction(inst, 64);
    CHECK(j.density == *naive::min_density(inst));
    CHECK(is_valid_junction_tree(inst, j));

    const auto& g = inst.graph();
    const auto& p = inst.pairs()[0];
    std::vector<std::size_t> reachable;
    std::vector<VertexId> terms;
    auto down = naive::reach(g, g.vertex_index(p.s), ~std::uint64_t{0});
    for (std::size_t v = 0; v < g.num_vertices() && terms.size() < 3; ++v)
      if (down[v] && v != g.vertex_index(p.s)) {
        reachable.push_back(v);
        terms.push_back(g.vertices()[v]);
      }
    auto tree = exact_dst(g, p.s, terms);
    CHECK(tree.cost == *naive::dst_opt(g, g.vertex_index(p.s), reachable));
    auto lb = dst_lp_lower_bound(g, p.s, terms);
    CHECK(lb <= tree.cost);
    CHECK(sgn(lb) > 0);
  }
}
