#include "dsf/graph.h"

#include <doctest.h>

#include <cstdint>

using namespace dsf;

namespace {

VertexId V(std::uint32_t v) { return VertexId{v}; }

Digraph make(std::uint32_t n, std::initializer_list<std::tuple<int, int, long>> edges) {
  std::vector<VertexId> vs;
  for (std::uint32_t i = 0; i < n; ++i) vs.push_back(V(i));
  std::vector<Edge> es;
  std::uint32_t id = 0;
  for (auto [u, v, c] : edges)
    es.push_back({EdgeId{id++}, V(static_cast<std::uint32_t>(u)), V(static_cast<std::uint32_t>(v)), Rational(c)});
  return Digraph(vs, es);
}

struct Lcg {
  std::uint64_t s;
  std::uint64_t next(std::uint64_t m) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return (s >> 33) % m;
  }
};

Digraph random_graph(Lcg& rng, std::uint32_t n, int m) {
  std::vector<VertexId> vs;
  for (std::uint32_t i = 0; i < n; ++i) vs.push_back(V(i));
  std::vector<Edge> es;
  for (int i = 0; i < m; ++i)
    es.push_back({EdgeId{static_cast<std::uint32_t>(i)}, V(static_cast<std::uint32_t>(rng.next(n))),
                  V(static_cast<std::uint32_t>(rng.next(n))), Rational(static_cast<long>(rng.next(5)))});
  return Digraph(vs, es);
}

// Cheapest δ⁺(S) over every S with s ∈ S, t ∉ S.
Rational brute_min_cut(const Digraph& g, const std::vector<Rational>& cap, std::size_t s, std::size_t t) {
  const auto n = g.num_vertices();
  std::optional<Rational> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    Rational c = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if ((mask >> g.tail_index(e) & 1) && !(mask >> g.head_index(e) & 1)) c += cap[e];
    if (!best || c < *best) best = c;
  }
  return *best;
}

}  // namespace

TEST_CASE("reachable_set") {
  auto g = make(2, {{0, 1, 1}});
  std::vector<VertexId> u{V(0)};
  CHECK(reachable_set(g, u, Direction::forward) == std::vector<VertexId>{V(0), V(1)});
  CHECK(reachable_set(g, u, Direction::backward) == std::vector<VertexId>{V(0)});
  auto cyc = make(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  CHECK(reachable_set(cyc, u, Direction::forward).size() == 3);
  std::vector<VertexId> bad{V(9)};
  CHECK_THROWS_AS(reachable_set(g, bad, Direction::forward), InputError);
}

TEST_CASE("reachable_set is monotone in the sources") {
  Lcg rng{7};
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_graph(rng, 6, 8);
    std::vector<VertexId> a{V(static_cast<std::uint32_t>(rng.next(6)))};
    auto b = a;
    b.push_back(V(static_cast<std::uint32_t>(rng.next(6))));
    for (auto d : {Direction::forward, Direction::backward}) {
      auto ra = reachable_set(g, a, d), rb = reachable_set(g, b, d);
      CHECK(std::includes(rb.begin(), rb.end(), ra.begin(), ra.end()));
      CHECK(std::binary_search(ra.begin(), ra.end(), a[0]));
    }
  }
}

TEST_CASE("self-loops are ignored by connectivity") {
  auto g = make(2, {{0, 0, 1}, {1, 1, 1}});
  std::vector<VertexId> u{V(0)};
  CHECK(reachable_set(g, u, Direction::forward) == u);
  CHECK(g.out_edges(0).empty());
  CHECK(weak_components(g).size() == 2);
}

TEST_CASE("min_cut: examples") {
  auto path = make(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(min_cut(path, std::vector<Rational>{1, 1}, V(0), V(2)).capacity == 1);

  auto two = make(4, {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}});
  CHECK(min_cut(two, std::vector<Rational>(4, 1), V(0), V(3)).capacity == 2);

  auto mixed = make(3, {{0, 2, 0}, {0, 1, 0}, {1, 2, 0}});
  std::vector<Rational> cap{3, 1, 2};
  auto cut = min_cut(mixed, cap, V(0), V(2));
  CHECK(cut.capacity == 4);
  CHECK(brute_min_cut(mixed, cap, 0, 2) == 4);

  CHECK_THROWS_AS(min_cut(path, std::vector<Rational>{1, 1}, V(1), V(1)), InputError);
}

TEST_CASE("min_cut agrees with subset enumeration and its own crossing edges") {
  Lcg rng{99};
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next(5));
    auto g = random_graph(rng, n, static_cast<int>(rng.next(12)));
    std::vector<Rational> cap;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      cap.push_back(Rational(static_cast<long>(rng.next(7)), 1 + static_cast<long>(rng.next(3))));
    const auto s = rng.next(n), t = (s + 1 + rng.next(n - 1)) % n;
    auto cut = min_cut(g, cap, V(static_cast<std::uint32_t>(s)), V(static_cast<std::uint32_t>(t)));
    CHECK(cut.capacity == brute_min_cut(g, cap, s, t));

    Rational crossing = 0;
    std::vector<EdgeId> expect;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edges()[e];
      bool in_t = std::binary_search(cut.side.begin(), cut.side.end(), ed.tail);
      bool in_h = std::binary_search(cut.side.begin(), cut.side.end(), ed.head);
      if (in_t && !in_h) {
        expect.push_back(ed.id);
        crossing += cap[e];
      }
    }
    CHECK(cut.crossing_edges == expect);
    CHECK(crossing == cut.capacity);
  }
}

TEST_CASE("contract") {
  auto g = make(2, {{0, 1, 1}});
  std::vector<VertexId> both{V(0), V(1)};
  auto c = contract(g, both, V(5));
  CHECK(c.num_vertices() == 1);
  CHECK(c.num_edges() == 0);

  auto h = make(2, {{0, 1, 4}});
  std::vector<VertexId> just{V(0)};
  c = contract(h, just, V(7));
  REQUIRE(c.num_edges() == 1);
  CHECK(c.edges()[0].tail == V(7));
  CHECK(c.edges()[0].id == EdgeId{0});
  CHECK(c.edges()[0].cost == 4);

  auto par = make(3, {{0, 2, 1}, {1, 2, 1}});
  std::vector<VertexId> ab{V(0), V(1)};
  c = contract(par, ab, V(0));
  CHECK(c.num_edges() == 2);
  CHECK(c.out_edges(c.vertex_index(V(0))).size() == 2);

  CHECK_THROWS_AS(contract(g, std::vector<VertexId>{}, V(5)), InputError);
  CHECK_THROWS_AS(contract(g, just, V(1)), InputError);
}

TEST_CASE("contract keeps total cost minus dropped loops") {
  Lcg rng{3};
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_graph(rng, 6, 9);
    std::vector<VertexId> block;
    for (std::uint32_t v = 0; v < 6; ++v)
      if (rng.next(2)) block.push_back(V(v));
    if (block.empty()) block.push_back(V(0));
    Rational dropped = 0;
    for (const auto& e : g.edges()) {
      bool a = std::binary_search(block.begin(), block.end(), e.tail);
      bool b = std::binary_search(block.begin(), block.end(), e.head);
      if ((a && b) || e.is_loop()) dropped += e.cost;
    }
    auto c = contract(g, block, V(100));
    CHECK(c.total_cost() == g.total_cost() - dropped);
  }
}

TEST_CASE("reverse") {
  auto g = make(2, {{0, 1, 3}});
  auto r = reverse(g);
  CHECK(r.edges()[0].tail == V(1));
  CHECK(r.edges()[0].head == V(0));
  CHECK(r.edges()[0].cost == 3);

  Lcg rng{11};
  auto h = random_graph(rng, 5, 5);
  auto rr = reverse(reverse(h));
  REQUIRE(rr.num_edges() == h.num_edges());
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    CHECK(rr.edges()[i].tail == h.edges()[i].tail);
    CHECK(rr.edges()[i].head == h.edges()[i].head);
    CHECK(rr.edges()[i].cost == h.edges()[i].cost);
  }

  auto cyc = reverse(make(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}));
  std::vector<VertexId> a{V(0)};
  CHECK(reachable_set(cyc, a, Direction::forward).size() == 3);
  CHECK(cyc.edges()[0].tail == V(1));
}

TEST_CASE("weak_components") {
  auto g = make(4, {{0, 1, 1}, {2, 3, 1}});
  CHECK(weak_components(g) == std::vector<std::vector<VertexId>>{{V(0), V(1)}, {V(2), V(3)}});
  CHECK(weak_components(make(3, {})).size() == 3);
  CHECK(weak_components(make(2, {{0, 1, 1}, {1, 0, 1}})).size() == 1);
}

TEST_CASE("shortest_dipath") {
  // s=0, v=1, t=2: s→v→t costs 1,1 against s→t cost 3.
  auto g = make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  CHECK(*shortest_dipath(g, V(0), V(2), PathMetric::cost) == std::vector<EdgeId>{EdgeId{0}, EdgeId{1}});
  CHECK(*shortest_dipath(g, V(0), V(2), PathMetric::hops) == std::vector<EdgeId>{EdgeId{2}});
  CHECK_FALSE(shortest_dipath(g, V(2), V(0), PathMetric::cost).has_value());
  CHECK(shortest_dipath(g, V(1), V(1), PathMetric::cost)->empty());

  // Parallel equal edges: the smaller id wins.
  auto par = make(2, {{0, 1, 2}, {0, 1, 2}});
  CHECK(*shortest_dipath(par, V(0), V(1), PathMetric::cost) == std::vector<EdgeId>{EdgeId{0}});
}

TEST_CASE("subgraphs") {
  auto g = make(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}});
  std::vector<EdgeId> es{EdgeId{1}};
  auto sub = edge_subgraph(g, es);
  CHECK(sub.num_vertices() == 2);
  CHECK(sub.total_cost() == 2);
  std::vector<VertexId> vs{V(0), V(1), V(3)};
  auto ind = induced_subgraph(g, vs);
  CHECK(ind.num_edges() == 1);
  std::vector<char> keep{1, 0, 1};
  CHECK(filter_edges(g, keep).total_cost() == 4);
  CHECK(g.fresh_vertex_id() == V(4));
  CHECK(g.fresh_edge_id() == EdgeId{3});
}

TEST_CASE("Digraph rejects bad input") {
  CHECK_THROWS_AS(make(1, {{0, 1, 1}}), InputError);
  CHECK_THROWS_AS(make(2, {{0, 1, -1}}), InputError);
  std::vector<VertexId> vs{V(0)};
  std::vector<Edge> dup{{EdgeId{0}, V(0), V(0), 1}, {EdgeId{0}, V(0), V(0), 1}};
  CHECK_THROWS_AS(Digraph(vs, dup), InputError);
}
