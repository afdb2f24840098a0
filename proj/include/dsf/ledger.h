#pragma once

#include "dsf/rational.h"

#include <string>
#include <vector>

namespace dsf {

/// One evaluated inequality lhs ≤ rhs, kept with its operands.
struct Inequality {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

inline Inequality check_le(std::string name, Rational lhs, Rational rhs) {
  const bool ok = lhs <= rhs;
  return {std::move(name), std::move(lhs), std::move(rhs), ok};
}

inline bool all_hold(const std::vector<Inequality>& ledger) {
  for (const auto& q : ledger)
    if (!q.holds) return false;
  return true;
}

}  // namespace dsf
