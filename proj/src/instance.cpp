#include "dsf/instance.h"

#include <json.hpp>

#include <random>
#include <set>

namespace dsf {

using nlohmann::json;

Instance::Instance(Digraph graph, std::vector<TerminalPair> pairs,
                   std::map<EdgeId, std::string> edge_names,
                   std::map<PairId, std::string> pair_names)
    : graph_(std::move(graph)),
      pairs_(std::move(pairs)),
      edge_names_(std::move(edge_names)),
      pair_names_(std::move(pair_names)) {
  std::sort(pairs_.begin(), pairs_.end(),
            [](const TerminalPair& a, const TerminalPair& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i > 0 && pairs_[i - 1].id == pairs_[i].id) throw InputError("duplicate pair id");
    if (!graph_.has_vertex(pairs_[i].s) || !graph_.has_vertex(pairs_[i].t))
      throw InputError("pair " + pair_name(pairs_[i].id) + " references an unknown vertex");
    if (pairs_[i].s == pairs_[i].t)
      throw InputError("pair " + pair_name(pairs_[i].id) + " has s == t");
  }
}

const TerminalPair& Instance::pair(PairId id) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), id,
                             [](const TerminalPair& p, PairId v) { return p.id < v; });
  if (it == pairs_.end() || it->id != id) throw InputError("unknown pair " + std::to_string(id.value));
  return *it;
}

std::string Instance::edge_name(EdgeId e) const {
  if (auto it = edge_names_.find(e); it != edge_names_.end()) return it->second;
  return "e" + std::to_string(e.value);
}

std::string Instance::pair_name(PairId p) const {
  if (auto it = pair_names_.find(p); it != pair_names_.end()) return it->second;
  return "p" + std::to_string(p.value);
}

std::optional<EdgeId> Instance::find_edge_by_name(std::string_view name) const {
  for (const auto& e : graph_.edges())
    if (edge_name(e.id) == name) return e.id;
  return std::nullopt;
}

std::optional<VertexId> Instance::find_vertex_by_name(std::string_view name) const {
  for (auto v : graph_.vertices())
    if (vertex_name(v) == name) return v;
  return std::nullopt;
}

std::optional<PairId> Instance::find_pair_by_name(std::string_view name) const {
  for (const auto& p : pairs_)
    if (pair_name(p.id) == name) return p.id;
  return std::nullopt;
}

Instance Instance::with_pairs(std::span<const PairId> keep) const {
  std::vector<TerminalPair> kept;
  std::map<PairId, std::string> names;
  for (auto id : keep) {
    kept.push_back(pair(id));
    if (auto it = pair_names_.find(id); it != pair_names_.end()) names.emplace(id, it->second);
  }
  return Instance(graph_, std::move(kept), edge_names_, std::move(names));
}

bool operator==(const Instance& a, const Instance& b) {
  const auto& ga = a.graph_;
  const auto& gb = b.graph_;
  if (!std::equal(ga.vertices().begin(), ga.vertices().end(), gb.vertices().begin(),
                  gb.vertices().end()))
    return false;
  if (ga.num_edges() != gb.num_edges()) return false;
  for (std::size_t i = 0; i < ga.num_edges(); ++i) {
    const auto& x = ga.edges()[i];
    const auto& y = gb.edges()[i];
    if (x.id != y.id || x.tail != y.tail || x.head != y.head || x.cost != y.cost) return false;
  }
  if (ga.labels() != gb.labels()) return false;
  if (!std::equal(a.pairs_.begin(), a.pairs_.end(), b.pairs_.begin(), b.pairs_.end())) return false;
  for (const auto& e : ga.edges())
    if (a.edge_name(e.id) != b.edge_name(e.id)) return false;
  for (const auto& p : a.pairs_)
    if (a.pair_name(p.id) != b.pair_name(p.id)) return false;
  return true;
}

VertexId InstanceBuilder::vertex(const std::string& name) {
  if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
  VertexId id{static_cast<std::uint32_t>(vertices_.size())};
  by_name_.emplace(name, id);
  vertices_.push_back(id);
  labels_.emplace(id, name);
  return id;
}

EdgeId InstanceBuilder::edge(const std::string& tail, const std::string& head,
                             const Rational& cost, std::string name) {
  EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edges_.push_back({id, vertex(tail), vertex(head), cost});
  edge_names_.emplace(id, name.empty() ? tail + "->" + head : std::move(name));
  return id;
}

PairId InstanceBuilder::pair(const std::string& s, const std::string& t, std::string name) {
  PairId id{static_cast<std::uint32_t>(pairs_.size())};
  pairs_.push_back({id, vertex(s), vertex(t)});
  pair_names_.emplace(id, name.empty() ? s + "~" + t : std::move(name));
  return id;
}

Instance InstanceBuilder::build() const {
  return Instance(Digraph(vertices_, edges_, labels_), pairs_, edge_names_, pair_names_);
}

ParseError::ParseError(const std::string& message, std::string field, std::size_t line)
    : DomainError(message + (field.empty() ? "" : " at " + field) +
                  (line ? " (line " + std::to_string(line) + ")" : "")),
      field_(std::move(field)),
      line_(line) {}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "", line_of(text, e.byte));
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path, 0);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'", path, 0);
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError("expected a string", path + "/" + key, 0);
  return v.get<std::string>();
}

Rational parse_cost(const json& v, const std::string& path) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number_integer()) {
    text = v.dump();
  } else {
    throw ParseError("cost must be a decimal string or an integer", path, 0);
  }
  Rational c;
  try {
    c = parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), path, 0);
  }
  if (sgn(c) < 0) throw ParseError("negative cost", path, 0);
  return c;
}

}  // namespace

Instance parse_instance(std::string_view text, std::vector<std::string>* warnings) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance document must be an object", "", 1);

  const auto& jv = require(doc, "vertices", "");
  if (!jv.is_array()) throw ParseError("expected an array", "/vertices", 0);
  std::map<std::string, VertexId> vid;
  std::vector<VertexId> vertices;
  std::map<VertexId, std::string> labels;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const auto path = "/vertices/" + std::to_string(i);
    if (!jv[i].is_string()) throw ParseError("vertex name must be a string", path, 0);
    auto name = jv[i].get<std::string>();
    VertexId id{static_cast<std::uint32_t>(vertices.size())};
    if (!vid.emplace(name, id).second) throw ParseError("duplicate vertex '" + name + "'", path, 0);
    vertices.push_back(id);
    labels.emplace(id, name);
  }
  auto lookup = [&](const std::string& name, const std::string& path) {
    auto it = vid.find(name);
    if (it == vid.end()) throw ParseError("unknown vertex '" + name + "'", path, 0);
    return it->second;
  };

  const auto& je = require(doc, "edges", "");
  if (!je.is_array()) throw ParseError("expected an array", "/edges", 0);
  std::vector<Edge> edges;
  std::map<EdgeId, std::string> edge_names;
  std::set<std::string> seen_edges;
  for (std::size_t i = 0; i < je.size(); ++i) {
    const auto path = "/edges/" + std::to_string(i);
    auto name = require_string(je[i], "id", path);
    if (!seen_edges.insert(name).second) throw ParseError("duplicate edge id '" + name + "'", path + "/id", 0);
    auto tail = lookup(require_string(je[i], "tail", path), path + "/tail");
    auto head = lookup(require_string(je[i], "head", path), path + "/head");
    auto cost = parse_cost(require(je[i], "cost", path), path + "/cost");
    EdgeId id{static_cast<std::uint32_t>(edges.size())};
    edges.push_back({id, tail, head, cost});
    edge_names.emplace(id, name);
  }

  const auto& jp = require(doc, "pairs", "");
  if (!jp.is_array()) throw ParseError("expected an array", "/pairs", 0);
  std::vector<TerminalPair> pairs;
  std::map<PairId, std::string> pair_names;
  std::set<std::string> seen_pairs;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const auto path = "/pairs/" + std::to_string(i);
    auto name = require_string(jp[i], "id", path);
    if (!seen_pairs.insert(name).second) throw ParseError("duplicate pair id '" + name + "'", path + "/id", 0);
    auto s = lookup(require_string(jp[i], "s", path), path + "/s");
    auto t = lookup(require_string(jp[i], "t", path), path + "/t");
    if (s == t) {
      if (warnings) warnings->push_back("pair '" + name + "' has s == t and was dropped");
      continue;
    }
    PairId id{static_cast<std::uint32_t>(i)};
    pairs.push_back({id, s, t});
    pair_names.emplace(id, name);
  }
  if (pairs.empty()) throw ParseError("instance needs at least one pair with s != t", "/pairs", 0);
  return Instance(Digraph(std::move(vertices), std::move(edges), std::move(labels)),
                  std::move(pairs), std::move(edge_names), std::move(pair_names));
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["vertices"] = json::array();
  for (auto v : inst.graph().vertices()) doc["vertices"].push_back(inst.vertex_name(v));
  doc["edges"] = json::array();
  for (const auto& e : inst.graph().edges()) {
    doc["edges"].push_back({{"id", inst.edge_name(e.id)},
                            {"tail", inst.vertex_name(e.tail)},
                            {"head", inst.vertex_name(e.head)},
                            {"cost", to_string(e.cost)}});
  }
  doc["pairs"] = json::array();
  for (const auto& p : inst.pairs())
    doc["pairs"].push_back(
        {{"id", inst.pair_name(p.id)}, {"s", inst.vertex_name(p.s)}, {"t", inst.vertex_name(p.t)}});
  return doc.dump(2) + "\n";
}

Solution parse_solution(std::string_view text, const Instance& inst) {
  json doc = parse_json(text);
  auto edge_by_name = [&](const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError("edge id must be a string", path, 0);
    auto id = inst.find_edge_by_name(v.get<std::string>());
    if (!id) throw ParseError("unknown edge '" + v.get<std::string>() + "'", path, 0);
    return *id;
  };
  Solution sol;
  const auto& je = require(doc, "edges", "");
  if (!je.is_array()) throw ParseError("expected an array", "/edges", 0);
  for (std::size_t i = 0; i < je.size(); ++i)
    sol.edges.push_back(edge_by_name(je[i], "/edges/" + std::to_string(i)));
  sol.edges = sorted_unique(std::move(sol.edges));
  if (doc.contains("cost")) {
    sol.cost = parse_cost(doc["cost"], "/cost");
  } else {
    sol.cost = inst.graph().cost_of(sol.edges);
  }
  if (doc.contains("certificates")) {
    const auto& jc = doc["certificates"];
    if (!jc.is_object()) throw ParseError("expected an object", "/certificates", 0);
    for (auto it = jc.begin(); it != jc.end(); ++it) {
      const auto path = "/certificates/" + it.key();
      auto pid = inst.find_pair_by_name(it.key());
      if (!pid) throw ParseError("unknown pair '" + it.key() + "'", path, 0);
      if (!it->is_array()) throw ParseError("expected an array", path, 0);
      std::vector<EdgeId> walk;
      for (std::size_t i = 0; i < it->size(); ++i)
        walk.push_back(edge_by_name((*it)[i], path + "/" + std::to_string(i)));
      sol.certificates.emplace(*pid, std::move(walk));
    }
  }
  return sol;
}

std::string serialize_solution(const Solution& sol, const Instance& inst) {
  json doc;
  doc["edges"] = json::array();
  for (auto e : sol.edges) doc["edges"].push_back(inst.edge_name(e));
  doc["cost"] = to_string(sol.cost);
  doc["certificates"] = json::object();
  for (const auto& [pid, walk] : sol.certificates) {
    json arr = json::array();
    for (auto e : walk) arr.push_back(inst.edge_name(e));
    doc["certificates"][inst.pair_name(pid)] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

FeasibilityReport validate(const Instance& inst) {
  FeasibilityReport report;
  const auto& g = inst.graph();
  for (const auto& p : inst.pairs()) {
    std::size_t s = g.vertex_index(p.s);
    auto reach = reach_mask(g, {&s, 1}, Direction::forward);
    if (!reach[g.vertex_index(p.t)]) {
      report.feasible = false;
      report.unreachable.push_back(p.id);
    }
  }
  return report;
}

JunctionTree make_junction_tree(const Instance& inst, VertexId root, std::vector<EdgeId> edges,
                                std::vector<PairId> covered) {
  JunctionTree t;
  t.root = root;
  t.edges = sorted_unique(std::move(edges));
  t.covered = sorted_unique(std::move(covered));
  if (t.covered.empty()) throw InputError("junction tree must cover at least one pair");
  t.cost = inst.graph().cost_of(t.edges);
  t.density = t.cost / Rational(static_cast<long>(t.covered.size()));
  return t;
}

bool is_valid_junction_tree(const Instance& inst, const JunctionTree& tree, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const auto& g = inst.graph();
  if (tree.covered.empty()) return fail("covers no pair");
  if (!g.has_vertex(tree.root)) return fail("root is not a vertex");
  std::vector<char> keep(g.num_edges(), 0);
  for (auto e : tree.edges) {
    if (!g.has_edge(e)) return fail("unknown edge " + std::to_string(e.value));
    keep[g.edge_index(e)] = 1;
  }
  TraversalFilter filter{{}, keep};
  std::size_t r = g.vertex_index(tree.root);
  auto down = reach_mask(g, {&r, 1}, Direction::forward, filter);
  auto up = reach_mask(g, {&r, 1}, Direction::backward, filter);
  for (auto pid : tree.covered) {
    const auto& p = inst.pair(pid);
    if (!up[g.vertex_index(p.s)]) return fail("pair " + inst.pair_name(pid) + ": source cannot reach root");
    if (!down[g.vertex_index(p.t)]) return fail("pair " + inst.pair_name(pid) + ": root cannot reach sink");
  }
  if (tree.cost != g.cost_of(tree.edges)) return fail("cost mismatch");
  if (tree.density * static_cast<long>(tree.covered.size()) != tree.cost) return fail("density mismatch");
  return true;
}

Solution make_solution(const Instance& inst, std::vector<EdgeId> edges) {
  const auto& g = inst.graph();
  Solution sol;
  sol.edges = sorted_unique(std::move(edges));
  sol.cost = g.cost_of(sol.edges);
  std::vector<char> keep(g.num_edges(), 0);
  for (auto e : sol.edges) keep[g.edge_index(e)] = 1;
  for (const auto& p : inst.pairs()) {
    auto walk = shortest_dipath(g, p.s, p.t, PathMetric::cost, {{}, keep});
    if (!walk) throw DomainError("pair " + inst.pair_name(p.id) + " is not connected by the edge set");
    sol.certificates.emplace(p.id, std::move(*walk));
  }
  return sol;
}

namespace {

// Raw engine output reduced by modulo: reproducible across standard libraries.
long uniform(std::mt19937_64& rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

std::vector<TerminalPair> sample_pairs(const Digraph& g, int k, std::uint64_t seed) {
  if (k < 1) throw InputError("k must be at least 1");
  const auto n = g.num_vertices();
  std::vector<std::vector<char>> reach(n);
  for (std::size_t v = 0; v < n; ++v) reach[v] = reach_mask(g, {&v, 1}, Direction::forward);
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<TerminalPair> pairs;
  const int budget = 200 * k + 1000;
  for (int attempt = 0; attempt < budget && static_cast<int>(pairs.size()) < k; ++attempt) {
    auto s = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    auto t = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    if (s == t || !reach[s][t] || used.count({s, t})) continue;
    used.emplace(s, t);
    pairs.push_back({PairId{static_cast<std::uint32_t>(pairs.size())}, g.vertices()[s], g.vertices()[t]});
  }
  if (static_cast<int>(pairs.size()) < k)
    throw GenerationError("could not sample " + std::to_string(k) + " reachable pairs");
  return pairs;
}

Instance assemble(std::vector<VertexId> vertices, std::map<VertexId, std::string> labels,
                  std::vector<Edge> edges, int k, std::uint64_t pair_seed) {
  Digraph g(std::move(vertices), std::move(edges), std::move(labels));
  auto pairs = sample_pairs(g, k, pair_seed);
  std::map<PairId, std::string> pair_names;
  for (const auto& p : pairs) pair_names.emplace(p.id, "p" + std::to_string(p.id.value));
  std::map<EdgeId, std::string> edge_names;
  for (const auto& e : g.edges()) edge_names.emplace(e.id, "e" + std::to_string(e.id.value));
  return Instance(std::move(g), std::move(pairs), std::move(edge_names), std::move(pair_names));
}

}  // namespace

Instance gen_grid(const GridParams& p) {
  if (p.rows < 2 || p.cols < 2) throw InputError("grid needs rows, cols >= 2");
  if (p.cost_min < 0 || p.cost_max < p.cost_min) throw InputError("bad cost range");
  if (p.bidirected_one_in < 1) throw InputError("bidirected_one_in must be positive");
  std::vector<VertexId> vertices;
  std::map<VertexId, std::string> labels;
  auto id = [&](int r, int c) { return VertexId{static_cast<std::uint32_t>(r * p.cols + c)}; };
  for (int r = 0; r < p.rows; ++r)
    for (int c = 0; c < p.cols; ++c) {
      vertices.push_back(id(r, c));
      labels.emplace(id(r, c), "r" + std::to_string(r) + "c" + std::to_string(c));
    }
  std::mt19937_64 rng(p.orientation_seed);
  std::vector<Edge> edges;
  auto add = [&](VertexId a, VertexId b) {
    edges.push_back({EdgeId{static_cast<std::uint32_t>(edges.size())}, a, b,
                     Rational(uniform(rng, p.cost_min, p.cost_max))});
  };
  auto place = [&](VertexId a, VertexId b) {
    if (uniform(rng, 0, p.bidirected_one_in - 1) == 0) {
      add(a, b);
      add(b, a);
    } else if (uniform(rng, 0, 1) == 0) {
      add(a, b);
    } else {
      add(b, a);
    }
  };
  for (int r = 0; r < p.rows; ++r)
    for (int c = 0; c < p.cols; ++c) {
      if (c + 1 < p.cols) place(id(r, c), id(r, c + 1));
      if (r + 1 < p.rows) place(id(r, c), id(r + 1, c));
    }
  return assemble(std::move(vertices), std::move(labels), std::move(edges), p.k, p.pair_seed);
}

Instance gen_layered_random(const LayeredParams& p) {
  if (p.width < 1 || p.layers < 1) throw InputError("layered generator needs width, layers >= 1");
  if (p.cost_min < 0 || p.cost_max < p.cost_min) throw InputError("bad cost range");
  const int cols = p.width + 1;
  std::vector<VertexId> vertices;
  std::map<VertexId, std::string> labels;
  auto id = [&](int l, int x) { return VertexId{static_cast<std::uint32_t>(l * cols + x)}; };
  for (int l = 0; l < p.layers; ++l)
    for (int x = 0; x < cols; ++x) {
      vertices.push_back(id(l, x));
      labels.emplace(id(l, x), "l" + std::to_string(l) + "x" + std::to_string(x));
    }
  std::mt19937_64 rng(p.structure_seed);
  std::vector<Edge> edges;
  auto add = [&](VertexId a, VertexId b) {
    edges.push_back({EdgeId{static_cast<std::uint32_t>(edges.size())}, a, b,
                     Rational(uniform(rng, p.cost_min, p.cost_max))});
  };
  for (int l = 0; l < p.layers; ++l) {
    // Layer paths alternate left-to-right and right-to-left.
    for (int x = 0; x + 1 < cols; ++x) {
      if (l % 2 == 0) add(id(l, x), id(l, x + 1));
      else add(id(l, x + 1), id(l, x));
    }
    if (l + 1 == p.layers) continue;
    const int forced = static_cast<int>(uniform(rng, 0, cols - 1));
    for (int x = 0; x < cols; ++x) {
      if (x != forced && uniform(rng, 0, 99) >= p.density_percent) continue;
      // Connector directions alternate along the layer.
      if ((l + x) % 2 == 0) add(id(l, x), id(l + 1, x));
      else add(id(l + 1, x), id(l, x));
    }
  }
  return assemble(std::move(vertices), std::move(labels), std::move(edges), p.k, p.pair_seed);
}

bool satisfies_planar_edge_bound(const Digraph& g) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> support;
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    auto a = std::min(e.tail.value, e.head.value);
    auto b = std::max(e.tail.value, e.head.value);
    support.emplace(a, b);
  }
  const auto n = g.num_vertices();
  if (n < 3) return support.size() <= (n == 2 ? 1u : 0u);
  return support.size() <= 3 * n - 6;
}

}  // namespace dsf
