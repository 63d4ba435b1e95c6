#pragma once

// Inclusion-exclusion over divisibility constraints: the weight varpi(s, t)
// that turns constrained counts N_d(B, s, t) into the primitive count N*_d,
// the index sets T_R and V_R(s, t), and the gamma vectors built from them.

#include <cstdint>
#include <span>
#include <vector>

#include "campana/enumerate.hpp"
#include "campana/int_types.hpp"
#include "campana/orbifold.hpp"
#include "campana/st_pair.hpp"

namespace campana::ie {

/// gamma_i = s_i^(k m_i) * prod_r (t_{i,r} vt_{i,r})^(k (m_i + r))
std::vector<BigInt> gamma_of(const STPair& st, const TVector& vtilde, int k, const OrbifoldWeights& w);

/// s_i^(m_i) * prod_r t_{i,r}^(m_i + r) for each coordinate; -1 marks a value above `cap`.
std::vector<std::int64_t> coordinate_weights(const STPair& st, const OrbifoldWeights& w, std::int64_t cap);

/// All (s, t) in T_R, i.e. squarefree entries, t_{i,.} pairwise coprime,
/// jointly supported primes, and every coordinate weight <= R. Sorted by the
/// product of coordinate weights, then lexicographically; (1, 1) comes first.
std::vector<STPair> enumerate_T(std::int64_t R, const OrbifoldWeights& w);

/// All vt with s_i^(m_i) prod (t_{i,r} vt_{i,r})^(m_i+r) <= R, t*vt squarefree
/// and pairwise coprime in r. The degree k enters only through R^k, so the
/// bound is applied in its k-th-root form.
std::vector<TVector> enumerate_V(std::int64_t R, const STPair& st, const OrbifoldWeights& w);

/// Local weight table for one coordinate with weight m, indexed by
/// a + 2 b where a = [p | s_i] and b = r if p | t_{i,r} (0 if none). The value
/// is the Moebius-inverted indicator "p divides this coordinate". Cached per m.
const std::vector<int>& local_coordinate_table(int m);

/// The inclusion-exclusion weight, a product of local values over primes.
int varpi(const STPair& st, const OrbifoldWeights& w);

struct IdentityReport {
  std::uint64_t lhs = 0;   // N*_d(B, 1, 1)
  i128 rhs = 0;            // sum over T_B of varpi * N_d(B, s, t)
  i128 difference = 0;
  std::size_t pairs = 0;   // |T_B|
  std::size_t nonzero_terms = 0;
};

IdentityReport verify_ie_identity(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                                  const enumerate::Budget& budget = {});

}  // namespace campana::ie
