#include "dsf/proof.h"

#include <algorithm>
#include <deque>
#include <set>

namespace dsf {

namespace {

std::vector<char> mask_of(const Digraph& g, std::span<const VertexId> vs) {
  std::vector<char> m(g.num_vertices(), 0);
  for (auto v : vs) m[g.vertex_index(v)] = 1;
  return m;
}

std::vector<VertexId> members(const Digraph& g, const std::vector<char>& mask) {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < g.num_vertices(); ++i)
    if (mask[i]) out.push_back(g.vertices()[i]);
  return out;
}

std::vector<char> reach_from(const Digraph& g, VertexId v, Direction d,
                             std::span<const char> allowed = {}) {
  std::size_t i = g.vertex_index(v);
  return reach_mask(g, {&i, 1}, d, {allowed, {}});
}

std::string names(const Digraph& g, std::span<const VertexId> vs) {
  std::string s;
  for (auto v : vs) s += (s.empty() ? "" : ",") + g.display_name(v);
  return "{" + s + "}";
}

// Undirected components of g restricted to `allowed`, in order of smallest index.
std::vector<std::vector<std::size_t>> components_within(const Digraph& g,
                                                        const std::vector<char>& allowed) {
  const auto n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!allowed[s] || seen[s]) continue;
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      auto visit = [&](std::size_t w) {
        if (allowed[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      };
      for (auto e : g.out_edges(u)) visit(g.head_index(e));
      for (auto e : g.in_edges(u)) visit(g.tail_index(e));
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

Rational weight_of(const std::map<VertexId, Rational>& w, std::span<const VertexId> vs) {
  Rational sum = 0;
  for (auto v : vs)
    if (auto it = w.find(v); it != w.end()) sum += it->second;
  return sum;
}

Rational ratio(const Rational& a, std::size_t b) { return a / Rational(static_cast<unsigned long>(b)); }

ClaimCheck claim(std::string name, const std::vector<std::string>& problems, std::string ok = {}) {
  ClaimCheck c{std::move(name), problems.empty(), problems.empty() ? std::move(ok) : problems.front()};
  if (problems.size() > 1) c.detail += " (+" + std::to_string(problems.size() - 1) + " more)";
  return c;
}

}  // namespace

bool all_hold(const std::vector<ClaimCheck>& claims) {
  return std::all_of(claims.begin(), claims.end(), [](const ClaimCheck& c) { return c.holds; });
}

// --- layering -------------------------------------------------------------

int Layering::layer_of(VertexId v) const {
  for (std::size_t j = 0; j < layers.size(); ++j)
    if (std::binary_search(layers[j].begin(), layers[j].end(), v)) return static_cast<int>(j);
  return -1;
}

Layering compute_layering(const Digraph& e_star, VertexId v0) {
  if (!e_star.has_vertex(v0)) throw InputError("v0 is not a vertex of E*");
  if (weak_components(e_star).size() != 1)
    throw InputError("E* is not weakly connected; compute a layering for each weak component");
  const auto n = e_star.num_vertices();
  Layering out;
  out.base = v0;
  std::vector<char> assigned(n, 0);
  std::size_t left = n;
  auto take = [&](const std::vector<char>& mark) {
    std::vector<VertexId> layer;
    for (std::size_t i = 0; i < n; ++i)
      if (mark[i] && !assigned[i]) {
        assigned[i] = 1;
        --left;
        layer.push_back(e_star.vertices()[i]);
      }
    out.layers.push_back(std::move(layer));
  };
  take(reach_from(e_star, v0, Direction::forward));
  while (left > 0) {
    const auto j = out.layers.size();
    std::vector<std::size_t> prev;
    for (auto v : out.layers.back()) prev.push_back(e_star.vertex_index(v));
    take(reach_mask(e_star, prev, j % 2 == 1 ? Direction::backward : Direction::forward));
    if (out.layers.back().empty()) throw std::logic_error("layering stalled");
  }

  const auto ell = out.layers.size() - 1;
  const auto count = std::max<std::size_t>(ell, 1);
  const VertexId root = e_star.fresh_vertex_id();
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<VertexId> keep, below;
    for (std::size_t i = 0; i <= std::min(j + 1, ell); ++i) {
      keep.insert(keep.end(), out.layers[i].begin(), out.layers[i].end());
      if (i < j) below.insert(below.end(), out.layers[i].begin(), out.layers[i].end());
    }
    auto sub = induced_subgraph(e_star, keep);
    LayerGraph lg;
    lg.root = root;
    lg.cost = sub.total_cost();
    if (j == 0) {
      std::vector<VertexId> vs(sub.vertices().begin(), sub.vertices().end());
      vs.push_back(root);
      std::vector<Edge> es(sub.edges().begin(), sub.edges().end());
      lg.virtual_edge = e_star.fresh_edge_id();
      es.push_back({*lg.virtual_edge, root, v0, Rational(0)});
      auto labels = sub.labels();
      labels[root] = "r_0";
      lg.graph = Digraph(std::move(vs), std::move(es), std::move(labels));
    } else {
      lg.cost -= induced_subgraph(e_star, below).total_cost();
      auto g = contract(sub, below, root);
      auto labels = g.labels();
      labels[root] = "r_" + std::to_string(j);
      lg.graph = Digraph({g.vertices().begin(), g.vertices().end()},
                         {g.edges().begin(), g.edges().end()}, std::move(labels));
    }
    out.layer_graphs.push_back(std::move(lg));
  }
  return out;
}

LayeringReport verify_layering(const Digraph& e_star, const Layering& layering, const Instance& inst) {
  LayeringReport rep;
  const auto n = e_star.num_vertices();
  const auto& L = layering.layers;

  std::vector<std::string> bad;
  std::vector<int> layer(n, -1);
  for (std::size_t j = 0; j < L.size(); ++j) {
    if (L[j].empty()) bad.push_back("layer " + std::to_string(j) + " is empty");
    for (auto v : L[j]) {
      if (!e_star.has_vertex(v)) {
        bad.push_back("layer vertex " + std::to_string(v.value) + " is not in E*");
        continue;
      }
      auto& slot = layer[e_star.vertex_index(v)];
      if (slot >= 0) bad.push_back(e_star.display_name(v) + " lies in two layers");
      slot = static_cast<int>(j);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (layer[i] < 0) bad.push_back(e_star.display_name(e_star.vertices()[i]) + " is in no layer");
  rep.claims.push_back(claim("layers partition V(E*)", bad));
  if (!bad.empty()) return rep;

  // The alternating definition, recomputed from the layers as given.
  bad.clear();
  {
    auto first = reach_from(e_star, layering.base, Direction::forward);
    if (members(e_star, first) != L[0]) bad.push_back("L_0 is not the forward closure of v0");
    for (std::size_t j = 1; j < L.size(); ++j) {
      std::vector<std::size_t> prev;
      for (auto v : L[j - 1]) prev.push_back(e_star.vertex_index(v));
      auto mark = reach_mask(e_star, prev, j % 2 ? Direction::backward : Direction::forward);
      std::vector<VertexId> expect;
      for (std::size_t i = 0; i < n; ++i)
        if (mark[i] && layer[i] >= static_cast<int>(j)) expect.push_back(e_star.vertices()[i]);
      if (expect != L[j]) bad.push_back("L_" + std::to_string(j) + " differs from its definition");
    }
  }
  rep.claims.push_back(claim("layers follow the alternating definition", bad));

  Rational total = 0;
  for (std::size_t j = 0; j < layering.layer_graphs.size(); ++j) {
    const auto& lg = layering.layer_graphs[j];
    Rational c = 0;
    for (const auto& e : lg.graph.edges()) {
      if (lg.virtual_edge && e.id == *lg.virtual_edge) continue;
      rep.edge_graphs[e.id].push_back(static_cast<int>(j));
      c += e.cost;
    }
    if (c != lg.cost) throw std::logic_error("layer graph cost mismatch");
    total += c;
  }
  bad.clear();
  std::vector<std::string> placement;
  for (const auto& e : e_star.edges()) {
    if (e.is_loop()) continue;
    const auto& in = rep.edge_graphs[e.id];
    if (in.size() > 2)
      bad.push_back("edge " + inst.edge_name(e.id) + " lies in " + std::to_string(in.size()) + " layer graphs");
    const int a = layer[e_star.vertex_index(e.tail)], b = layer[e_star.vertex_index(e.head)];
    const int lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo > 1) {
      placement.push_back("edge " + inst.edge_name(e.id) + " joins non-adjacent layers");
      continue;
    }
    // Inside L_j: only G_{j−1}, G_j. Between L_j and L_{j+1}: only G_j, G_{j+1}.
    const int first = lo == hi ? lo - 1 : lo;
    for (int g : in)
      if (g != first && g != first + 1)
        placement.push_back("edge " + inst.edge_name(e.id) + " appears in G_" + std::to_string(g));
  }
  rep.claims.push_back(claim("each edge of E* lies in at most two layer graphs", bad));
  rep.claims.push_back(claim("edges lie only in the layer graphs of their layers", placement));
  rep.ledger.push_back(check_le("sum_j c(E(G_j)) <= 2 c(E*)", total, 2 * e_star.total_cost()));

  bad.clear();
  const int graphs = static_cast<int>(layering.layer_graphs.size());
  for (const auto& p : inst.pairs()) {
    if (!e_star.has_vertex(p.s) || !e_star.has_vertex(p.t)) continue;
    std::optional<int> found;
    for (int j = 0; j < graphs && !found; ++j) {
      std::vector<char> allowed(n, 0);
      for (std::size_t i = 0; i < n; ++i) allowed[i] = layer[i] == j || layer[i] == j + 1;
      if (reach_from(e_star, p.s, Direction::forward, allowed)[e_star.vertex_index(p.t)]) found = j;
    }
    if (found) rep.witness[p.id] = *found;
    else bad.push_back("pair " + inst.pair_name(p.id) + " has no dipath inside two consecutive layers");
  }
  rep.claims.push_back(claim("every pair has a dipath inside some L_j ∪ L_{j+1}", bad));
  return rep;
}

// --- 2-layered spanning trees ---------------------------------------------

std::vector<VertexId> tree_path(const TwoLayeredTree& tree, VertexId v) {
  std::vector<VertexId> path{v};
  while (v != tree.root) {
    auto it = tree.parent.find(v);
    if (it == tree.parent.end()) throw InputError("vertex is not in the tree");
    v = it->second.parent;
    path.push_back(v);
    if (path.size() > tree.parent.size() + 1) throw InputError("tree has a cycle");
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Dipath> split_dipaths(const TwoLayeredTree& tree, VertexId v) {
  auto path = tree_path(tree, v);
  std::vector<Dipath> out;
  std::optional<bool> run;
  Dipath cur;
  auto flush = [&] {
    if (!run) return;
    if (!*run) {
      std::reverse(cur.vertices.begin(), cur.vertices.end());
      std::reverse(cur.edges.begin(), cur.edges.end());
    }
    out.push_back(std::move(cur));
    cur = {};
  };
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& link = tree.parent.at(path[i]);
    if (!run || *run != link.away) {
      flush();
      run = link.away;
      cur.vertices.push_back(path[i - 1]);
    }
    cur.vertices.push_back(path[i]);
    cur.edges.push_back(link.edge);
  }
  flush();
  return out;
}

bool is_two_layered_tree(const Digraph& g, const TwoLayeredTree& tree, std::string* why) {
  auto fail = [&](std::string m) {
    if (why) *why = std::move(m);
    return false;
  };
  if (!g.has_vertex(tree.root)) return fail("root is not a vertex");
  if (tree.parent.count(tree.root)) return fail("root has a parent");
  if (tree.parent.size() + 1 != g.num_vertices()) return fail("tree does not span");
  for (const auto& [v, link] : tree.parent) {
    if (!g.has_vertex(v) || !g.has_edge(link.edge)) return fail("tree refers to a missing vertex or edge");
    const auto& e = g.edge(link.edge);
    const bool ok = link.away ? (e.tail == link.parent && e.head == v) : (e.tail == v && e.head == link.parent);
    if (!ok) return fail("edge " + std::to_string(link.edge.value) + " does not join " + g.display_name(v) +
                         " to its parent as recorded");
  }
  for (const auto& [v, link] : tree.parent) {
    std::vector<Dipath> parts;
    try {
      parts = split_dipaths(tree, v);
    } catch (const InputError& e) {
      return fail(e.what());
    }
    if (parts.size() > 2) return fail("root path to " + g.display_name(v) + " needs " +
                                      std::to_string(parts.size()) + " dipaths");
  }
  return true;
}

namespace {

std::optional<TwoLayeredTree> grow(const Digraph& g, VertexId root, bool away_first) {
  const auto n = g.num_vertices();
  TwoLayeredTree t{root, {}};
  std::vector<char> in(n, 0);
  std::deque<std::size_t> queue;
  const auto r = g.vertex_index(root);
  in[r] = 1;
  queue.push_back(r);
  std::vector<std::size_t> order;
  auto sweep = [&](bool away) {
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (auto e : away ? g.out_edges(u) : g.in_edges(u)) {
        auto w = away ? g.head_index(e) : g.tail_index(e);
        if (in[w]) continue;
        in[w] = 1;
        t.parent[g.vertices()[w]] = {g.vertices()[u], g.edges()[e].id, away};
        queue.push_back(w);
      }
    }
  };
  sweep(away_first);
  queue.assign(order.begin(), order.end());
  order.clear();
  sweep(!away_first);
  if (t.parent.size() + 1 != n) return std::nullopt;
  return t;
}

}  // namespace

TwoLayeredTree build_two_layered_tree(const Digraph& g, VertexId root) {
  for (bool away_first : {true, false}) {
    auto t = grow(g, root, away_first);
    if (!t) continue;
    std::string why;
    if (!is_two_layered_tree(g, *t, &why)) throw std::logic_error("2-layered tree construction: " + why);
    return *t;
  }
  throw DomainError("graph has no 2-layered spanning tree from " + g.display_name(root) +
                    " of either orientation");
}

// --- separators -----------------------------------------------------------

std::array<VertexId, 3> find_separator(const Digraph& g, const TwoLayeredTree& tree,
                                       const std::map<VertexId, Rational>& weights) {
  const auto n = g.num_vertices();
  std::vector<std::vector<char>> path_mask(n);
  for (std::size_t i = 0; i < n; ++i) path_mask[i] = mask_of(g, tree_path(tree, g.vertices()[i]));
  std::vector<Rational> w(n, Rational(0));
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (auto it = weights.find(g.vertices()[i]); it != weights.end()) {
      w[i] = it->second;
      total += w[i];
    }
  std::vector<char> allowed(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i)
          allowed[i] = !(path_mask[a][i] || path_mask[b][i] || path_mask[c][i]);
        bool ok = true;
        for (const auto& comp : components_within(g, allowed)) {
          Rational cw = 0;
          for (auto i : comp) cw += w[i];
          if (2 * cw > total) {
            ok = false;
            break;
          }
        }
        if (ok) return {g.vertices()[a], g.vertices()[b], g.vertices()[c]};
      }
  throw DomainError("planarity or spanning-tree precondition violated: no separating triple");
}

SeparatorReport separator_recursion(const Digraph& g, const TwoLayeredTree& tree,
                                    std::span<const TerminalPair> pairs) {
  const VertexId root = tree.root;
  std::map<VertexId, Rational> w;
  for (const auto& p : pairs) {
    if (!g.has_vertex(p.s) || !g.has_vertex(p.t) || p.s == root || p.t == root)
      throw InputError("pair terminal outside the graph or at its root");
    w[p.s] = 1;
    w[p.t] = 1;
  }

  struct Item {
    Digraph h;
    TwoLayeredTree t;
    std::vector<VertexId> comp;
  };
  SeparatorReport rep;
  std::vector<std::string> halving, six, trees;
  std::vector<Item> items;
  {
    std::vector<VertexId> all;
    for (auto v : g.vertices())
      if (v != root) all.push_back(v);
    items.push_back({g, tree, std::move(all)});
  }
  for (int level = 0; !items.empty(); ++level) {
    SeparatorLevel lv;
    lv.index = level;
    std::vector<Item> next;
    for (auto& item : items) {
      const auto& h = item.h;
      SeparatorComponent sc;
      sc.vertices = item.comp;
      sc.weight = weight_of(w, item.comp);
      sc.u = find_separator(h, item.t, w);

      std::vector<VertexId> removed;
      std::set<VertexId> distinct(sc.u.begin(), sc.u.end());
      for (auto u : distinct) {
        auto path = tree_path(item.t, u);
        removed.insert(removed.end(), path.begin(), path.end());
        for (auto d : split_dipaths(item.t, u)) {
          if (d.vertices.front() == root) {
            d.vertices.erase(d.vertices.begin());
            d.edges.erase(d.edges.begin());
          } else if (d.vertices.back() == root) {
            d.vertices.pop_back();
            d.edges.pop_back();
          }
          if (!d.vertices.empty()) sc.dipaths.push_back(std::move(d));
        }
      }
      removed = sorted_unique(std::move(removed));
      if (sc.dipaths.size() > 6)
        six.push_back("level " + std::to_string(level) + " uses " + std::to_string(sc.dipaths.size()) + " dipaths");
      for (const auto& d : sc.dipaths)
        for (auto v : d.vertices)
          if (v == root) six.push_back("a separator dipath contains the root");

      const auto inside = mask_of(h, item.comp);
      std::vector<char> on_sep(h.num_vertices(), 0);
      for (const auto& d : sc.dipaths)
        for (auto v : d.vertices) on_sep[h.vertex_index(v)] = 1;
      for (const auto& p : pairs) {
        if (!h.has_vertex(p.s) || !h.has_vertex(p.t)) continue;
        if (!inside[h.vertex_index(p.s)] || !inside[h.vertex_index(p.t)]) continue;
        auto fwd = reach_from(h, p.s, Direction::forward, inside);
        auto bwd = reach_from(h, p.t, Direction::backward, inside);
        for (std::size_t i = 0; i < h.num_vertices(); ++i)
          if (on_sep[i] && fwd[i] && bwd[i]) {
            sc.captured.push_back(p.id);
            break;
          }
      }

      auto allowed = inside;
      for (auto v : removed) allowed[h.vertex_index(v)] = 0;
      for (const auto& comp : components_within(h, allowed)) {
        std::vector<VertexId> cv;
        for (auto i : comp) cv.push_back(h.vertices()[i]);
        Rational cw = weight_of(w, cv);
        if (2 * cw > sc.weight)
          halving.push_back("level " + std::to_string(level) + ": component " + names(h, cv) + " has weight " +
                            to_string(cw) + " of " + to_string(sc.weight));
        if (cw >= 2) {
          std::vector<VertexId> keep = cv;
          keep.insert(keep.end(), removed.begin(), removed.end());
          auto sub = contract(induced_subgraph(h, keep), removed, root);
          TwoLayeredTree child{root, {}};
          for (auto v : cv) {
            auto link = item.t.parent.at(v);
            if (std::binary_search(removed.begin(), removed.end(), link.parent)) link.parent = root;
            child.parent[v] = link;
          }
          std::string why;
          if (!is_two_layered_tree(sub, child, &why)) trees.push_back("level " + std::to_string(level + 1) + ": " + why);
          next.push_back({std::move(sub), std::move(child), cv});
        }
        sc.children.push_back(std::move(cv));
        sc.child_weights.push_back(cw);
      }
      lv.captured.insert(lv.captured.end(), sc.captured.begin(), sc.captured.end());
      lv.components.push_back(std::move(sc));
    }
    lv.captured = sorted_unique(std::move(lv.captured));
    rep.levels.push_back(std::move(lv));
    items = std::move(next);
  }

  const std::size_t k = pairs.size();
  rep.claims.push_back(claim("separator components carry at most half their parent's weight", halving));
  rep.claims.push_back(claim("each separator is at most 6 dipaths avoiding the root", six));
  rep.claims.push_back(claim("recursive instances keep a 2-layered spanning tree", trees));
  std::vector<std::string> lost;
  std::set<PairId> got;
  for (const auto& lv : rep.levels) got.insert(lv.captured.begin(), lv.captured.end());
  for (const auto& p : pairs)
    if (!got.count(p.id)) lost.push_back("pair " + std::to_string(p.id.value) + " is captured at no level");
  rep.claims.push_back(claim("every pair is captured at some level", lost));
  rep.ledger.push_back(check_le("recursion depth <= ceil(log2 k) + 1",
                                Rational(static_cast<long>(rep.levels.size()) - 1),
                                Rational(ceil_log2(k) + 1)));
  const Rational need = ratio(Rational(static_cast<unsigned long>(k)), static_cast<std::size_t>(ceil_log2(k) + 2));
  std::size_t best = 0;
  for (const auto& lv : rep.levels) {
    best = std::max(best, lv.captured.size());
    if (!rep.good_level && Rational(static_cast<unsigned long>(lv.captured.size())) >= need)
      rep.good_level = lv.index;
  }
  rep.ledger.push_back(check_le("k / (ceil(log2 k) + 2) <= max_j |D_j|", need,
                                Rational(static_cast<unsigned long>(best))));
  return rep;
}

// --- one path -------------------------------------------------------------

OnePathReplay one_path_replay(const Digraph& e_star, const Dipath& path,
                              std::span<const TerminalPair> pairs) {
  if (path.vertices.empty() || path.edges.size() + 1 != path.vertices.size())
    throw InputError("path must list one more vertex than edges");
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    if (!e_star.has_edge(path.edges[i])) throw InputError("path edge is not in E*");
    const auto& e = e_star.edge(path.edges[i]);
    if (e.tail != path.vertices[i] || e.head != path.vertices[i + 1])
      throw InputError("path is not a dipath at position " + std::to_string(i));
  }
  const auto n = e_star.num_vertices();
  std::vector<long> pos(n, -1);
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    auto& slot = pos[e_star.vertex_index(path.vertices[i])];
    if (slot >= 0) throw InputError("path repeats a vertex");
    slot = static_cast<long>(i);
  }
  Instance local(e_star, {pairs.begin(), pairs.end()});

  OnePathReplay out;
  auto& sys = out.system;
  sys.path = path;
  std::vector<long> a_at, b_at;
  for (const auto& p : pairs) {
    auto fwd = reach_from(e_star, p.s, Direction::forward);
    auto bwd = reach_from(e_star, p.t, Direction::backward);
    long a = -1, b = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] < 0) continue;
      if (fwd[i] && (a < 0 || pos[i] < a)) a = pos[i];
      if (bwd[i] && pos[i] > b) b = pos[i];
    }
    if (a < 0 || b < 0 || a > b)
      throw InputError("pair " + local.pair_name(p.id) + " (" + e_star.display_name(p.s) + "->" +
                       e_star.display_name(p.t) + ") has no s-t dipath meeting the path");
    a_at.push_back(a);
    b_at.push_back(b);
  }
  std::vector<long> kept;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    kept.push_back(a_at[i]);
    kept.push_back(b_at[i]);
  }
  kept = sorted_unique(std::move(kept));
  for (auto q : kept) sys.compressed.push_back(path.vertices[static_cast<std::size_t>(q)]);
  auto cpos = [&](long q) {
    return static_cast<std::size_t>(std::lower_bound(kept.begin(), kept.end(), q) - kept.begin());
  };

  // Access paths avoid the rest of P when they can.
  auto access = [&](VertexId from, VertexId to, bool& avoided) {
    std::vector<char> allowed(n, 1);
    for (std::size_t i = 0; i < n; ++i)
      if (pos[i] >= 0) allowed[i] = 0;
    allowed[e_star.vertex_index(from)] = 1;
    allowed[e_star.vertex_index(to)] = 1;
    auto edges = shortest_dipath(e_star, from, to, PathMetric::hops, {allowed, {}});
    avoided = edges.has_value();
    if (!edges) edges = shortest_dipath(e_star, from, to, PathMetric::hops);
    Dipath d{{from}, *edges};
    for (auto e : *edges) d.vertices.push_back(e_star.edge(e).head);
    return d;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    IntervalPair ip;
    ip.id = pairs[i].id;
    ip.a = path.vertices[static_cast<std::size_t>(a_at[i])];
    ip.b = path.vertices[static_cast<std::size_t>(b_at[i])];
    ip.a_pos = cpos(a_at[i]);
    ip.b_pos = cpos(b_at[i]);
    bool s_ok = true, t_ok = true;
    ip.to_path = access(pairs[i].s, ip.a, s_ok);
    ip.from_path = access(ip.b, pairs[i].t, t_ok);
    ip.access_avoids_path = s_ok && t_ok;
    sys.pairs.push_back(std::move(ip));
  }

  const std::size_t len = sys.compressed_length();
  const int lg = floor_log2(std::max<std::size_t>(len, 1));
  for (std::size_t v = 0; v <= len; ++v) {
    IntervalGroup grp{0, sys.compressed[v], v, {}};
    for (const auto& ip : sys.pairs)
      if (ip.a_pos == v && ip.b_pos == v) grp.pairs.push_back(ip.id);
    if (!grp.pairs.empty()) sys.groups.push_back(std::move(grp));
  }
  for (int j = 1; len > 0 && j <= floor_log2(len) + 1; ++j) {
    const std::size_t lo = std::size_t{1} << (j - 1), hi = std::size_t{1} << j;
    for (std::size_t at = 0; at <= len; at += lo) {
      IntervalGroup grp{j, sys.compressed[at], at, {}};
      for (const auto& ip : sys.pairs) {
        const auto l = ip.b_pos - ip.a_pos;
        if (l >= lo && l < hi && ip.a_pos <= at && at <= ip.b_pos) grp.pairs.push_back(ip.id);
      }
      if (!grp.pairs.empty()) sys.groups.push_back(std::move(grp));
    }
  }

  std::map<PairId, const IntervalPair*> by_id;
  for (const auto& ip : sys.pairs) by_id[ip.id] = &ip;
  std::vector<std::string> anchor_bad, tree_bad;
  for (const auto& grp : sys.groups) {
    std::size_t lo = len, hi = 0;
    std::vector<EdgeId> edges;
    for (auto id : grp.pairs) {
      const auto& ip = *by_id[id];
      if (!(ip.a_pos <= grp.anchor_pos && grp.anchor_pos <= ip.b_pos))
        anchor_bad.push_back("pair " + local.pair_name(id) + " misses its anchor");
      lo = std::min(lo, ip.a_pos);
      hi = std::max(hi, ip.b_pos);
      edges.insert(edges.end(), ip.to_path.edges.begin(), ip.to_path.edges.end());
      edges.insert(edges.end(), ip.from_path.edges.begin(), ip.from_path.edges.end());
    }
    for (long q = kept[lo]; q < kept[hi]; ++q) edges.push_back(path.edges[static_cast<std::size_t>(q)]);
    auto tree = make_junction_tree(local, grp.anchor, std::move(edges), grp.pairs);
    std::string why;
    if (!is_valid_junction_tree(local, tree, &why)) tree_bad.push_back(why);
    sys.trees.push_back(std::move(tree));
  }

  std::vector<std::string> disjoint;
  for (std::size_t i = 0; i < sys.pairs.size(); ++i)
    for (std::size_t k = i + 1; k < sys.pairs.size(); ++k) {
      const auto& x = sys.pairs[i];
      const auto& y = sys.pairs[k];
      auto meets = [](const Dipath& p, const Dipath& q) {
        for (auto v : p.vertices)
          if (std::find(q.vertices.begin(), q.vertices.end(), v) != q.vertices.end()) return true;
        return false;
      };
      if (meets(x.to_path, y.to_path) && x.a != y.a)
        disjoint.push_back("source access paths of " + local.pair_name(x.id) + " and " + local.pair_name(y.id) +
                           " meet but end at different vertices");
      if (meets(x.from_path, y.from_path) && x.b != y.b)
        disjoint.push_back("sink access paths of " + local.pair_name(x.id) + " and " + local.pair_name(y.id) +
                           " meet but start at different vertices");
    }
  std::vector<std::string> uncovered;
  for (const auto& ip : sys.pairs) {
    bool in = false;
    for (const auto& grp : sys.groups)
      in = in || std::binary_search(grp.pairs.begin(), grp.pairs.end(), ip.id);
    if (!in) uncovered.push_back("pair " + local.pair_name(ip.id) + " is in no group");
  }
  out.claims.push_back(claim("each group's anchor lies in every member interval", anchor_bad));
  out.claims.push_back(claim("each group spans a junction tree rooted at its anchor", tree_bad));
  out.claims.push_back(claim("access paths that meet share their endpoint on the path", disjoint));
  out.claims.push_back(claim("every pair belongs to some group", uncovered));

  std::set<EdgeId> on_path(path.edges.begin(), path.edges.end());
  std::map<EdgeId, long> count;
  out.tree_cost_sum = 0;
  for (const auto& t : sys.trees) {
    out.tree_cost_sum += t.cost;
    for (auto e : t.edges) ++count[e];
  }
  long on_max = 0, off_max = 0;
  for (const auto& [e, c] : count) (on_path.count(e) ? on_max : off_max) = std::max(on_path.count(e) ? on_max : off_max, c);
  std::vector<EdgeId> used;
  for (long q = kept.front(); q < kept.back(); ++q) used.push_back(path.edges[static_cast<std::size_t>(q)]);
  for (const auto& ip : sys.pairs) {
    used.insert(used.end(), ip.to_path.edges.begin(), ip.to_path.edges.end());
    used.insert(used.end(), ip.from_path.edges.begin(), ip.from_path.edges.end());
  }
  out.used_cost = e_star.cost_of(sorted_unique(std::move(used)));

  const auto k = pairs.size();
  const Rational off_bound(10 * lg + 12);
  auto& led = out.ledger;
  led.push_back(check_le("|P| <= 2k after compression", Rational(static_cast<long>(len)),
                         Rational(2 * static_cast<long>(k))));
  led.push_back(check_le("trees per path edge <= 5 floor(log2|P|) + 6", Rational(on_max), Rational(5 * lg + 6)));
  led.push_back(check_le("trees per off-path edge <= 10 floor(log2|P|) + 12", Rational(off_max), off_bound));
  led.push_back(check_le("sum_H c(H) <= (10 floor(log2|P|) + 12) c(E*)", out.tree_cost_sum, off_bound * out.used_cost));

  std::size_t best = 0;
  for (std::size_t i = 1; i < sys.trees.size(); ++i) {
    const auto& t = sys.trees[i];
    const auto& b = sys.trees[best];
    if (t.density < b.density || (t.density == b.density && t.covered.size() > b.covered.size())) best = i;
  }
  out.best = sys.trees[best];
  led.push_back(check_le("best density <= sum_H c(H) / k", out.best.density, ratio(out.tree_cost_sum, k)));
  return out;
}

// --- full chain -----------------------------------------------------------

Rational existence_bound(std::size_t k, const Rational& cost) {
  const long c1 = ceil_log2(k) + 2;
  const long c2 = 10L * floor_log2(2 * k) + 12;
  return Rational(2 * 6 * c1 * c2) * cost / Rational(static_cast<unsigned long>(k));
}

ExistenceReplay existence_replay(const Instance& inst, const Solution& sol) {
  const auto& g = inst.graph();
  for (auto e : sol.edges)
    if (!g.has_edge(e)) throw InputError("solution uses an edge outside the graph");
  const Digraph e_star = edge_subgraph(g, sol.edges);
  for (const auto& p : inst.pairs()) {
    if (!e_star.has_vertex(p.s) || !e_star.has_vertex(p.t) ||
        !reach_from(e_star, p.s, Direction::forward)[e_star.vertex_index(p.t)])
      throw InputError("solution does not connect pair " + inst.pair_name(p.id));
  }
  const auto k = inst.k();
  const Rational opt = e_star.total_cost();
  ExistenceReplay out;

  // Layering per weak component; the best (component, j) by cost per pair.
  struct Pick {
    std::size_t comp;
    int j;
    Rational cost;
    std::vector<PairId> pairs;
  };
  std::optional<Pick> pick;
  Rational layer_total = 0;
  const auto comps = weak_components(e_star);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto sub = induced_subgraph(e_star, comps[c]);
    auto lay = compute_layering(sub, comps[c].front());
    auto rep = verify_layering(sub, lay, inst);
    std::map<int, std::vector<PairId>> by_j;
    for (const auto& [id, j] : rep.witness) by_j[j].push_back(id);
    for (const auto& lg : lay.layer_graphs) layer_total += lg.cost;
    for (auto& [j, ids] : by_j) {
      const auto& cost = lay.layer_graphs[static_cast<std::size_t>(j)].cost;
      if (!pick || ratio(cost, ids.size()) < ratio(pick->cost, pick->pairs.size()))
        pick = Pick{c, j, cost, ids};
    }
    for (auto& cl : rep.claims) out.claims.push_back({"component " + std::to_string(c) + ": " + cl.name, cl.holds, cl.detail});
    out.layerings.push_back(std::move(lay));
    out.layering_reports.push_back(std::move(rep));
  }
  if (!pick) throw std::logic_error("no layer graph holds a pair");
  auto& chain = out.chain;
  chain.push_back(check_le("sum over components and j of c(E(G_j)) <= 2 c(E*)", layer_total, 2 * opt));
  chain.push_back(check_le("c(E(G_j)) / |D_j| <= 2 c(E*) / k", ratio(pick->cost, pick->pairs.size()),
                           ratio(2 * opt, k)));
  out.component = pick->comp;
  out.layer = pick->j;
  out.layer_pairs = pick->pairs;

  const auto& lg = out.layerings[pick->comp].layer_graphs[static_cast<std::size_t>(pick->j)];
  auto tree = build_two_layered_tree(lg.graph, lg.root);
  std::vector<TerminalPair> dj;
  for (auto id : pick->pairs) dj.push_back(inst.pair(id));
  out.separator = separator_recursion(lg.graph, tree, dj);
  for (const auto& cl : out.separator.claims) out.claims.push_back(cl);
  for (const auto& q : out.separator.ledger) chain.push_back(q);
  const auto kj = dj.size();
  if (!out.separator.good_level) throw DomainError("no recursion level captures enough pairs");
  out.level = *out.separator.good_level;
  const auto& level = out.separator.levels[static_cast<std::size_t>(out.level)];
  chain.push_back(check_le("|D_j| / (ceil(log2 |D_j|) + 2) <= |D_j*|",
                           ratio(Rational(static_cast<unsigned long>(kj)), static_cast<std::size_t>(ceil_log2(kj) + 2)),
                           Rational(static_cast<unsigned long>(level.captured.size()))));

  const SeparatorComponent* best = nullptr;
  Rational best_ratio;
  for (const auto& sc : level.components) {
    if (sc.captured.empty()) continue;
    Rational r = ratio(induced_subgraph(lg.graph, sc.vertices).total_cost(), sc.captured.size());
    if (!best || r < best_ratio) {
      best = &sc;
      best_ratio = r;
    }
  }
  chain.push_back(check_le("c(E(C)) / |D_j*^C| <= c(E(G_j)) / |D_j*|", best_ratio,
                           ratio(lg.cost, level.captured.size())));
  out.separator_component = best->vertices;
  out.component_pairs = best->captured;

  const auto ec = induced_subgraph(lg.graph, best->vertices);
  std::vector<PairId> chosen;
  for (const auto& d : best->dipaths) {
    std::vector<PairId> through;
    for (auto id : best->captured) {
      const auto& p = inst.pair(id);
      auto fwd = reach_from(ec, p.s, Direction::forward);
      auto bwd = reach_from(ec, p.t, Direction::backward);
      for (auto v : d.vertices)
        if (fwd[ec.vertex_index(v)] && bwd[ec.vertex_index(v)]) {
          through.push_back(id);
          break;
        }
    }
    if (through.size() > chosen.size()) {
      chosen = std::move(through);
      out.path = d;
    }
  }
  chain.push_back(check_le("|D_j*^C| / 6 <= |D*|", ratio(Rational(static_cast<unsigned long>(best->captured.size())), 6),
                           Rational(static_cast<unsigned long>(chosen.size()))));
  out.path_pairs = chosen;

  std::vector<TerminalPair> dstar;
  for (auto id : chosen) dstar.push_back(inst.pair(id));
  out.one_path = one_path_replay(ec, out.path, dstar);
  for (const auto& cl : out.one_path.claims) out.claims.push_back(cl);
  for (const auto& q : out.one_path.ledger) chain.push_back(q);
  const auto& h = out.one_path.best;
  out.tree = make_junction_tree(inst, h.root, h.edges, h.covered);
  std::string why;
  out.claims.push_back({"replayed junction is valid in the instance", is_valid_junction_tree(inst, out.tree, &why), why});
  const int lgp = floor_log2(std::max<std::size_t>(out.one_path.system.compressed_length(), 1));
  chain.push_back(check_le("density(H) <= (10 floor(log2|P|) + 12) c(E(C)) / |D*|", out.tree.density,
                           Rational(10 * lgp + 12) * ratio(ec.total_cost(), chosen.size())));
  chain.push_back(check_le("density(H) <= 2*6*(ceil(log2 k)+2)*(10 floor(log2 2k)+12) * c(E*) / k",
                           out.tree.density, existence_bound(k, opt)));
  return out;
}

}  // namespace dsf
