#pragma once

// Exact integer arithmetic: valuations, Moebius, m-full recognition and the
// unique u^m * prod v_r^(m+r) representation of m-full integers.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "campana/int_types.hpp"

namespace campana::arith {

bool is_prime(std::int64_t n);

/// Prime factorisation of |n| (n != 0) by trial division with a 2,3 wheel.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Largest e with p^e | x. Throws DomainError for x == 0 or composite p.
int p_adic_valuation(i128 x, std::int64_t p);

int moebius(std::int64_t n);
bool is_squarefree(std::int64_t n);

/// floor(n^(1/k)) for n >= 0, k >= 1.
std::int64_t iroot(std::int64_t n, int k);

/// True iff p^m | x for every prime p dividing x that is not in `excluded`.
/// m == 1 (and x == +-1) is always true.
bool is_m_full(std::int64_t x, int m, std::span<const std::int64_t> excluded = {});

/// x = sign * u^m * prod_{r=1}^{m-1} v[r-1]^(m+r), v squarefree and pairwise coprime.
struct MFullDecomposition {
  int sign = 1;
  std::int64_t u = 1;
  std::vector<std::int64_t> v;
  int m = 2;

  bool operator==(const MFullDecomposition&) const = default;
};

MFullDecomposition m_full_decompose(std::int64_t x, int m);

/// Inverse of m_full_decompose. Throws DomainError when v violates the
/// squarefree / pairwise-coprime invariants.
std::int64_t m_full_compose(const MFullDecomposition& d);

/// Restricts enumeration to s | u and t[r-1] | v_r.
struct DivisibilityConstraint {
  std::int64_t s = 1;
  std::vector<std::int64_t> t;
};

struct MFullEntry {
  std::int64_t value;
  std::int64_t u;
  std::vector<std::int64_t> v;
};

/// All m-full integers in [1, B] (ascending), built from the (u, v)
/// parametrisation rather than by testing each integer.
std::vector<MFullEntry> enumerate_m_full_entries(int m, std::int64_t B,
                                                 const std::optional<DivisibilityConstraint>& constraint = std::nullopt);

std::vector<std::int64_t> enumerate_m_full(int m, std::int64_t B,
                                           const std::optional<DivisibilityConstraint>& constraint = std::nullopt);

/// Squarefree indicator table for [0, n] (index 0 is false).
std::vector<bool> squarefree_sieve(std::int64_t n);

std::vector<std::int64_t> primes_up_to(std::int64_t n);

}  // namespace campana::arith
