#pragma once

// Dense-tableau dual simplex for  min c·x  s.t.  A x ≥ b, x ≥ 0  with c ≥ 0.
// The all-slack basis is dual feasible, so rows can be appended at any time
// (cutting planes) and the method resumes from the current basis.

#include "dsf/rational.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dsf::detail {

template <class Num>
struct SimplexTraits;

template <>
struct SimplexTraits<double> {
  static constexpr double tol = 1e-9;
  static bool negative(double v) { return v < -tol; }
  static double abs(double v) { return std::fabs(v); }
  static void clean(double& v) {
    if (std::fabs(v) < 1e-14) v = 0.0;
  }
};

template <>
struct SimplexTraits<Rational> {
  static bool negative(const Rational& v) { return sgn(v) < 0; }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static void clean(Rational&) {}
};

enum class DualStatus { optimal, infeasible, pivot_limit };

template <class Num>
class DualSimplex {
  using T = SimplexTraits<Num>;

 public:
  explicit DualSimplex(std::vector<Num> costs) : n_(costs.size()), cost_(std::move(costs)) {
    d_ = cost_;
  }

  std::size_t num_vars() const { return n_; }
  std::size_t num_rows() const { return rows_.size(); }

  /// Appends Σ terms ≥ rhs. Its slack enters the basis.
  void add_row(std::span<const std::pair<std::uint32_t, Num>> terms, const Num& rhs) {
    const std::size_t m = rows_.size();
    const std::size_t width = n_ + m + 1;
    for (auto& row : rows_) row.push_back(Num(0));
    d_.push_back(Num(0));
    // s − a·x = −b, then eliminate the basic structurals.
    std::vector<Num> row(width, Num(0));
    Num value = -rhs;
    for (const auto& [j, a] : terms) row[j] -= a;
    for (std::size_t i = 0; i < m; ++i) {
      const auto b = basis_[i];
      if (b >= n_) continue;
      if (row[b] == Num(0)) continue;
      const Num f = row[b];
      const auto& src = rows_[i];
      for (std::size_t c = 0; c < width - 1; ++c)
        if (src[c] != Num(0)) row[c] -= f * src[c];
      value -= f * rhs_[i];
    }
    row[n_ + m] = Num(1);
    rows_.push_back(std::move(row));
    rhs_.push_back(value);
    basis_.push_back(n_ + m);
  }

  /// `bland` forces Bland's rule from the start; otherwise the most
  /// infeasible row leaves until `bland_after` pivots, then Bland takes over.
  DualStatus solve(std::size_t max_pivots, bool bland = false, std::size_t bland_after = 0) {
    if (bland_after == 0) bland_after = 20 * (n_ + rows_.size()) + 100;
    std::size_t pivots = 0;
    while (true) {
      const bool use_bland = bland || pivots >= bland_after;
      std::size_t leave = rows_.size();
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!T::negative(rhs_[i])) continue;
        if (leave == rows_.size()) {
          leave = i;
        } else if (use_bland ? basis_[i] < basis_[leave] : rhs_[i] < rhs_[leave]) {
          leave = i;
        }
      }
      if (leave == rows_.size()) return DualStatus::optimal;
      if (pivots++ >= max_pivots) return DualStatus::pivot_limit;

      const auto& row = rows_[leave];
      std::size_t enter = row.size();
      Num best_ratio{};
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (!T::negative(row[j])) continue;
        Num dj = d_[j];
        if (dj < Num(0)) dj = Num(0);  // drift below zero in floating point
        Num ratio = dj / -row[j];
        if (enter == row.size() || ratio < best_ratio) {
          enter = j;
          best_ratio = ratio;
        } else if (!use_bland && !(best_ratio < ratio) &&
                   T::abs(row[j]) > T::abs(row[enter])) {
          enter = j;  // equal ratio: larger pivot is steadier
        }
      }
      if (enter == row.size()) return DualStatus::infeasible;
      pivot(leave, enter);
    }
  }

  std::vector<Num> primal() const {
    std::vector<Num> x(n_, Num(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
  }

  /// Constraints whose slack is basic at a value above `tol`; in increasing order.
  std::vector<std::size_t> loose_rows(const Num& tol) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < rows_.size(); ++p)
      if (basis_[p] >= n_ && rhs_[p] > tol) out.push_back(basis_[p] - n_);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Deletes constraints whose slack is basic. With the slack column a unit
  /// vector, removing its row and column leaves the tableau of the smaller LP.
  void drop_rows(std::span<const std::size_t> constraints) {
    if (constraints.empty()) return;
    const std::size_t m = rows_.size();
    const std::size_t width = n_ + m;
    std::vector<char> keep_col(width, 1);
    for (auto i : constraints) keep_col[n_ + i] = 0;
    std::vector<std::size_t> new_col(width);
    for (std::size_t j = 0, next = 0; j < width; ++j) {
      new_col[j] = next;
      next += keep_col[j];
    }
    auto compact = [&](std::vector<Num>& v) {
      std::size_t out = 0;
      for (std::size_t j = 0; j < width; ++j)
        if (keep_col[j]) {
          if (out != j) v[out] = std::move(v[j]);
          ++out;
        }
      v.resize(out);
    };
    std::size_t out = 0;
    for (std::size_t p = 0; p < m; ++p) {
      const auto b = basis_[p];
      if (!keep_col[b]) continue;
      compact(rows_[p]);
      if (out != p) {
        rows_[out] = std::move(rows_[p]);
        rhs_[out] = std::move(rhs_[p]);
      }
      basis_[out] = new_col[b];
      ++out;
    }
    if (out != m - constraints.size())
      throw std::logic_error("drop_rows: a dropped constraint had a nonbasic slack");
    rows_.resize(out);
    rhs_.resize(out);
    basis_.resize(out);
    compact(d_);
  }

  /// Row duals: the reduced cost of each row's slack column.
  std::vector<Num> duals() const {
    std::vector<Num> pi(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) pi[i] = d_[n_ + i];
    return pi;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const Num inv = Num(1) / prow[c];
    std::vector<std::size_t> nz;
    nz.reserve(prow.size());
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (prow[j] == Num(0)) continue;
      prow[j] *= inv;
      nz.push_back(j);
    }
    prow[c] = Num(1);
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      auto& row = rows_[i];
      if (row[c] == Num(0)) continue;
      const Num f = row[c];
      for (auto j : nz) {
        row[j] -= f * prow[j];
        T::clean(row[j]);
      }
      row[c] = Num(0);
      rhs_[i] -= f * rhs_[r];
    }
    if (d_[c] != Num(0)) {
      const Num f = d_[c];
      for (auto j : nz) d_[j] -= f * prow[j];
      d_[c] = Num(0);
    }
    basis_[r] = c;
  }

  std::size_t n_;
  std::vector<Num> cost_;
  std::vector<std::vector<Num>> rows_;
  std::vector<Num> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Num> d_;
};

}  // namespace dsf::detail
