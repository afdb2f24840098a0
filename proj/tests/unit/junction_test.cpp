#include "dsf/junction.h"
#include "dsf/oracle.h"

#include "fixtures.h"
#include "naive.h"
#include "small.h"

#include <doctest.h>

#include <random>

using namespace dsf;
using fixtures::pid;
using fixtures::vid;

TEST_CASE("bucket_index: half-open dyadic intervals") {
  CHECK(bucket_index(1) == 0);
  CHECK(bucket_index(Rational(3, 5)) == 0);
  CHECK(bucket_index(Rational(1, 2)) == 1);
  CHECK(bucket_index(Rational(1, 3)) == 1);
  CHECK(bucket_index(Rational(1, 4)) == 2);
  CHECK(bucket_index(Rational(1, 1000)) == 9);
  CHECK_THROWS_AS(bucket_index(0), InputError);
}

TEST_CASE("bucket_theta: examples") {
  std::map<PairId, Rational> two{{PairId{0}, Rational(3, 5)}, {PairId{1}, Rational(2, 5)}};
  auto b = bucket_theta(two, 2);
  CHECK(b.theta == 0);
  CHECK(b.pairs == std::vector<PairId>{PairId{0}});
  CHECK(b.mass == Rational(3, 5));

  std::map<PairId, Rational> four;
  for (std::uint32_t i = 0; i < 4; ++i) four[PairId{i}] = Rational(1, 4);
  b = bucket_theta(four, 4);
  CHECK(b.theta == 2);
  CHECK(b.pairs.size() == 4);
  CHECK(b.mass == 1);

  std::map<PairId, Rational> bad{{PairId{0}, Rational(1, 2)}};
  CHECK_THROWS_AS(bucket_theta(bad, 1), InputError);
}

TEST_CASE("bucket_theta: some bucket always has enough mass") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t k = 1 + rng() % 40;
    std::map<PairId, Rational> y;
    Rational total = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      // Heavy-tailed weights so that tiny buckets are common.
      Rational w(static_cast<long>(1 + rng() % 1000), 1);
      if (rng() % 3 == 0) w /= static_cast<long>(1 + rng() % 5000);
      if (rng() % 7 == 0) w = 0;
      y[PairId{i}] = w;
      total += w;
    }
    if (sgn(total) == 0) y[PairId{0}] = total = 1;
    for (auto& [id, v] : y) v /= total;
    CAPTURE(k);
    BucketChoice b;
    REQUIRE_NOTHROW(b = bucket_theta(y, k));
    const int L = floor_log2(k);
    CHECK(b.theta >= 0);
    CHECK(b.theta <= L);
    CHECK(b.mass >= Rational(1, 2 * L + 2));
    Rational sum = 0;
    for (auto id : b.pairs) {
      CHECK(bucket_index(y[id]) == b.theta);
      sum += y[id];
    }
    CHECK(sum == b.mass);
  }
}

TEST_CASE("find_min_density_junction: fixtures") {
  auto p = fixtures::path3();
  auto r = find_min_density_junction(p);
  CHECK(r.tree.root == vid(p, "s"));
  CHECK(r.tree.density == 2);
  CHECK(r.failures.empty());
  CHECK(all_hold(r.ledger));

  auto t = fixtures::triangle();
  r = find_min_density_junction(t);
  CHECK(r.tree.root == vid(t, "r"));
  CHECK(r.tree.density == 2);
  CHECK(r.tree.covered == std::vector<PairId>{pid(t, "ab"), pid(t, "ac")});
  CHECK(r.state.theta == 1);
  CHECK(r.failures.empty());
  CHECK(all_hold(r.ledger));
}

TEST_CASE("check_scaled_feasibility: shrinking x breaks it, raising theta repairs it") {
  auto t = fixtures::triangle();
  auto c = build_junction_tree(t, vid(t, "r"), DstStrategy::exact_fpt);
  REQUIRE(c);
  auto st = c->state;
  CHECK(check_scaled_feasibility(st, t).pass);
  for (auto& [e, v] : st.fractional.x) v /= 4;
  auto broken = check_scaled_feasibility(st, t);
  CHECK_FALSE(broken.pass);
  CHECK_FALSE(broken.violations.empty());
  st.theta += 2;
  CHECK(check_scaled_feasibility(st, t).pass);
}

TEST_CASE("find_min_density_junction: infeasible instance is refused") {
  InstanceBuilder b;
  b.edge("t", "s", 1);
  b.pair("s", "t");
  CHECK_THROWS_AS(find_min_density_junction(b.build()), DomainError);
}

TEST_CASE("find_min_density_junction: bounds hold against the exact density") {
  auto batch = small::instances();
  REQUIRE(batch.size() >= 15);
  for (const auto& inst : batch) {
    CAPTURE(serialize_instance(inst));
    for (auto s : {DstStrategy::exact_fpt, DstStrategy::shortest_path_union}) {
      auto r = find_min_density_junction(inst, {.strategy = s, .parallelism = 2});
      CHECK(r.failures.empty());
      for (const auto& q : r.ledger) {
        CAPTURE(q.name);
        CHECK(q.holds);
      }
      CHECK(is_valid_junction_tree(inst, r.tree));
      CHECK(r.tree.density >= *naive::min_density(inst));
      CHECK(r.roots_feasible >= 1);
      CHECK(r.scaled_checks == r.roots_feasible);
      const int L = floor_log2(inst.k());
      CHECK(r.tree.density <= 8 * *r.state.forward.alpha * (L + 1) * r.state.fractional.objective);
      // The Den-LP optimum at the winning root lower-bounds every junction there.
      CHECK(r.state.fractional.objective <= r.tree.density);
    }
  }
}

TEST_CASE("find_min_density_junction: parallelism does not change the answer") {
  for (const auto& inst : small::instances()) {
    auto a = find_min_density_junction(inst, {.parallelism = 1});
    auto b = find_min_density_junction(inst, {.parallelism = 3});
    CHECK(a.tree.root == b.tree.root);
    CHECK(a.tree.edges == b.tree.edges);
    CHECK(a.tree.density == b.tree.density);
  }
}
