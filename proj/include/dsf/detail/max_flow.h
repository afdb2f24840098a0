#pragma once

// Dinic's algorithm over an arbitrary ordered field. The LP engine runs it on
// doubles while searching for cuts and on exact rationals when certifying.

#include "dsf/rational.h"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace dsf::detail {

struct Arc {
  std::uint32_t tail;
  std::uint32_t head;
};

template <class Num>
struct MaxFlowResult {
  Num value{};
  std::vector<char> source_side;  // residual reachability from s
};

template <class Num>
class Dinic {
 public:
  /// `eps` is the residual capacity treated as zero (0 for exact types).
  Dinic(std::size_t n, std::span<const Arc> arcs, std::span<const Num> capacity, Num eps)
      : n_(n), eps_(eps), head_(n, -1) {
    to_.reserve(arcs.size() * 2);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (arcs[i].tail == arcs[i].head) continue;
      if (!(capacity[i] > eps_)) continue;
      add(arcs[i].tail, arcs[i].head, capacity[i]);
      add(arcs[i].head, arcs[i].tail, Num(0));
    }
  }

  MaxFlowResult<Num> run(std::size_t s, std::size_t t) {
    MaxFlowResult<Num> out;
    out.value = Num(0);
    while (bfs(s, t)) {
      iter_.assign(head_.begin(), head_.end());
      while (true) {
        Num pushed = dfs(s, t, Num(-1));
        if (!(pushed > eps_)) break;
        out.value += pushed;
      }
    }
    out.source_side.assign(n_, 0);
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(s)};
    out.source_side[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (int a = head_[u]; a != -1; a = next_[a]) {
        if (cap_[a] > eps_ && !out.source_side[to_[a]]) {
          out.source_side[to_[a]] = 1;
          stack.push_back(to_[a]);
        }
      }
    }
    return out;
  }

 private:
  void add(std::uint32_t u, std::uint32_t v, const Num& c) {
    to_.push_back(v);
    cap_.push_back(c);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size() - 1);
  }

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(n_, -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (int a = head_[u]; a != -1; a = next_[a]) {
        if (cap_[a] > eps_ && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[u] + 1;
          q.push(to_[a]);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 encodes "unbounded".
  Num dfs(std::size_t u, std::size_t t, Num limit) {
    if (u == t) return limit;
    for (int& a = iter_[u]; a != -1; a = next_[a]) {
      auto v = to_[a];
      if (!(cap_[a] > eps_) || level_[v] != level_[u] + 1) continue;
      Num room = (limit < Num(0) || cap_[a] < limit) ? cap_[a] : limit;
      Num got = dfs(v, t, room);
      if (got > eps_) {
        cap_[a] -= got;
        cap_[a ^ 1] += got;
        return got;
      }
    }
    return Num(0);
  }

  std::size_t n_;
  Num eps_;
  std::vector<int> head_, next_, iter_, level_;
  std::vector<std::uint32_t> to_;
  std::vector<Num> cap_;
};

/// Exact max flow on rational capacities. Runs on int64 after scaling by the
/// common denominator when that fits, otherwise on GMP rationals.
inline MaxFlowResult<Rational> exact_max_flow(std::size_t n, std::span<const Arc> arcs,
                                              std::span<const Rational> capacity, std::size_t s,
                                              std::size_t t) {
  if (auto scaled = scale_to_integers(capacity)) {
    Dinic<std::int64_t> flow(n, arcs, std::span<const std::int64_t>(scaled->values), 0);
    auto r = flow.run(s, t);
    MaxFlowResult<Rational> out;
    out.value = scaled->unscale(r.value);
    out.source_side = std::move(r.source_side);
    return out;
  }
  Dinic<Rational> flow(n, arcs, capacity, Rational(0));
  return flow.run(s, t);
}

}  // namespace dsf::detail
