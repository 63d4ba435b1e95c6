#pragma once

#include <cstdint>
#include <vector>

#include "campana/orbifold.hpp"

namespace campana {

/// Doubly indexed vector t[i][r-1], 1 <= r <= m_i - 1 (also used for v-tilde).
using TVector = std::vector<std::vector<std::int64_t>>;

/// Inclusion-exclusion lattice point: s_i | u_i and t_{i,r} | v_{i,r}.
struct STPair {
  std::vector<std::int64_t> s;
  TVector t;

  static STPair ones(const OrbifoldWeights& w) {
    STPair p;
    p.s.assign(w.size(), 1);
    for (int mi : w.m) p.t.emplace_back(static_cast<std::size_t>(mi - 1), 1);
    return p;
  }

  static TVector ones_t(const OrbifoldWeights& w) { return ones(w).t; }

  bool is_trivial() const {
    for (auto x : s)
      if (x != 1) return false;
    for (const auto& row : t)
      for (auto x : row)
        if (x != 1) return false;
    return true;
  }

  bool operator==(const STPair&) const = default;
  auto operator<=>(const STPair&) const = default;
};

}  // namespace campana
