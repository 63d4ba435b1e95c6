#pragma once

// Exact solution counters for diagonal equations over boxes of m-full or
// power-valued coordinates. Every count is exact; instances that would exceed
// the configured budget fail with BudgetExceeded instead of approximating.

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "campana/orbifold.hpp"
#include "campana/st_pair.hpp"

namespace campana::enumerate {

enum class Method { FullScan, MeetInTheMiddle, HistogramConvolution };

const char* method_name(Method m);

struct Budget {
  std::uint64_t max_ops = 4'000'000'000ULL;         // enumerated tuples / histogram updates
  std::uint64_t max_mem_bytes = 2ULL << 30;         // per table
  std::uint64_t dense_threshold = 1ULL << 27;       // histogram cells before switching to sparse
};

struct SolutionCount {
  std::uint64_t count = 0;
  std::int64_t B = 0;
  Method method = Method::MeetInTheMiddle;
  std::chrono::nanoseconds elapsed{0};
};

/// #{x in Z_{!=0}^{n+1} : gcd(x) = 1, |x| <= B, x_i m_i-full, sum c_i x_i^k = 0}
SolutionCount count_N(const CampanaOrbifold& O, std::int64_t B, Method method = Method::MeetInTheMiddle,
                      const Budget& budget = {});

/// Number of Campana points of height <= B: half of count_N.
std::uint64_t count_campana(const CampanaOrbifold& O, std::int64_t B, const Budget& budget = {});

/// Positive solutions of sum d_i x_i^k = 0 with x_i <= B, x_i m_i-full and
/// s_i | u_i, t_{i,r} | v_{i,r} in the unique m-full representation.
std::uint64_t count_N_d(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                        const STPair& st, Method method = Method::MeetInTheMiddle, const Budget& budget = {});

/// count_N_d with s = t = 1 restricted to primitive tuples.
std::uint64_t count_N_star(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                           Method method = Method::MeetInTheMiddle, const Budget& budget = {});

/// count_N rebuilt from count_N_star via sign patterns (odd k) or the
/// 2^(n+1) symmetry (even k).
std::uint64_t assemble_N(const CampanaOrbifold& O, std::int64_t B, const Budget& budget = {});

/// #{u in N^{n+1} : zeta_i u_i^mt_i <= Bt, sum d_i zeta_i u_i^mt_i = 0}
SolutionCount count_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                      std::span<const int> mtilde, std::int64_t Btilde,
                      Method method = Method::HistogramConvolution, const Budget& budget = {});

/// Index partition minimising the larger of the two box products; returns
/// true for indices placed in the first half. Index 0 is always first.
std::vector<bool> balanced_split(std::span<const std::uint64_t> sizes);

}  // namespace campana::enumerate
