#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "campana/arith.hpp"
#include "oracles.hpp"

using namespace campana;
using arith::MFullDecomposition;

TEST_CASE("valuation") {
  CHECK(arith::p_adic_valuation(12, 2) == 2);
  CHECK(arith::p_adic_valuation(12, 3) == 1);
  CHECK(arith::p_adic_valuation(7, 5) == 0);
  CHECK(arith::p_adic_valuation(-96, 2) == 5);
  CHECK(arith::p_adic_valuation(static_cast<i128>(1) << 100, 2) == 100);
  CHECK_THROWS_AS(arith::p_adic_valuation(0, 2), DomainError);
  CHECK_THROWS_AS(arith::p_adic_valuation(12, 4), DomainError);
}

TEST_CASE("moebius") {
  CHECK(arith::moebius(1) == 1);
  CHECK(arith::moebius(12) == 0);
  CHECK(arith::moebius(6) == 1);
  CHECK(arith::moebius(30) == -1);
  CHECK_THROWS_AS(arith::moebius(0), DomainError);
  for (std::int64_t n = 1; n <= 100000; ++n) {
    REQUIRE(arith::moebius(n) == oracle::moebius(n));
    REQUIRE(arith::is_squarefree(n) == oracle::squarefree(n));
  }
}

TEST_CASE("primes and roots") {
  const auto ps = arith::primes_up_to(1000);
  for (std::int64_t n = 0; n <= 1000; ++n)
    CHECK(std::binary_search(ps.begin(), ps.end(), n) == oracle::is_prime(n));
  for (std::int64_t n : {0LL, 1LL, 7LL, 8LL, 9LL, 1000000LL, 999999LL, 4611686018427387904LL})
    for (int k = 1; k <= 6; ++k) {
      const auto r = arith::iroot(n, k);
      CHECK(oracle::ipow(r, k) <= n);
      CHECK(oracle::ipow(r + 1, k) > n);
    }
  const auto sf = arith::squarefree_sieve(2000);
  CHECK_FALSE(sf[0]);
  for (std::int64_t n = 1; n <= 2000; ++n) CHECK(sf[static_cast<std::size_t>(n)] == oracle::squarefree(n));
}

TEST_CASE("is_m_full") {
  const std::int64_t three[] = {3};
  CHECK(arith::is_m_full(72, 2));
  CHECK_FALSE(arith::is_m_full(12, 2));
  for (int m = 1; m < 8; ++m) CHECK(arith::is_m_full(1, m));
  CHECK(arith::is_m_full(12, 2, three));
  CHECK(arith::is_m_full(-8, 3));
  CHECK(arith::is_m_full(12, 1));
  CHECK_THROWS_AS(arith::is_m_full(0, 2), DomainError);
  for (int m = 2; m <= 4; ++m)
    for (std::int64_t x = 1; x <= 20000; ++x) REQUIRE(arith::is_m_full(x, m) == oracle::is_m_full(x, m));
  const std::int64_t excl[] = {2, 5};
  for (std::int64_t x = 1; x <= 5000; ++x) REQUIRE(arith::is_m_full(x, 2, excl) == oracle::is_m_full(x, 2, {2, 5}));
}

TEST_CASE("decompose examples") {
  CHECK(arith::m_full_decompose(8, 2) == MFullDecomposition{1, 1, {2}, 2});
  CHECK(arith::m_full_decompose(72, 2) == MFullDecomposition{1, 3, {2}, 2});
  CHECK(arith::m_full_decompose(1, 3) == MFullDecomposition{1, 1, {1, 1}, 3});
  CHECK(arith::m_full_decompose(-8, 2) == MFullDecomposition{-1, 1, {2}, 2});
  CHECK(arith::m_full_decompose(1, 5).v == std::vector<std::int64_t>{1, 1, 1, 1});
  const auto d1 = arith::m_full_decompose(-12, 1);
  CHECK(d1.sign == -1);
  CHECK(d1.u == 12);
  CHECK(d1.v.empty());
  CHECK_THROWS_AS(arith::m_full_decompose(0, 2), DomainError);
  try {
    arith::m_full_decompose(12, 2);
    FAIL("accepted a non-squareful input");
  } catch (const NotMFull& e) {
    CHECK(e.witness() == 3);
  }
}

TEST_CASE("compose examples") {
  CHECK(arith::m_full_compose({1, 3, {2}, 2}) == 72);
  CHECK(arith::m_full_compose({1, 1, {1, 1, 1}, 4}) == 1);
  CHECK(arith::m_full_compose({-1, 2, {1}, 2}) == -4);
  CHECK_THROWS_AS(arith::m_full_compose({1, 1, {4}, 2}), DomainError);
  CHECK_THROWS_AS(arith::m_full_compose({1, 1, {2, 6}, 3}), DomainError);
  CHECK_THROWS_AS(arith::m_full_compose({1, 1, {2}, 3}), DomainError);
}

TEST_CASE("decomposition matches a divisor search") {
  for (int m = 2; m <= 4; ++m)
    for (std::int64_t x : oracle::m_full_scan(m, 3000)) {
      const auto reps = oracle::representations(x, m);
      REQUIRE(reps.size() == 1);
      const auto d = arith::m_full_decompose(x, m);
      CHECK(d.u == reps[0].u);
      CHECK(d.v == reps[0].v);
    }
}

TEST_CASE("round trip and invariants on random m-full values") {
  std::mt19937_64 gen(7);
  for (int m = 2; m <= 4; ++m) {
    const auto all = arith::enumerate_m_full(m, 1000000);
    for (int j = 0; j < 2000; ++j) {
      const auto x = all[gen() % all.size()] * (gen() % 2 ? 1 : -1);
      const auto d = arith::m_full_decompose(x, m);
      REQUIRE(arith::m_full_compose(d) == x);
      for (std::size_t r = 0; r < d.v.size(); ++r) {
        CHECK(oracle::squarefree(d.v[r]));
        for (std::size_t q = 0; q < r; ++q) CHECK(std::gcd(d.v[r], d.v[q]) == 1);
      }
    }
  }
}

TEST_CASE("no two representations collide") {
  for (int m = 2; m <= 3; ++m) {
    std::map<std::int64_t, int> seen;
    for (const auto& uv : oracle::all_uv(m, 10000)) ++seen[oracle::compose(uv.u, uv.v, m)];
    for (auto [x, n] : seen) REQUIRE(n == 1);
    CHECK(seen.size() == oracle::m_full_scan(m, 10000).size());
  }
}

TEST_CASE("enumerate_m_full") {
  CHECK(arith::enumerate_m_full(2, 50) == std::vector<std::int64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36, 49});
  CHECK(arith::enumerate_m_full(2, 3) == std::vector<std::int64_t>{1});
  // 32 = 2^2 * 2^3 has u = 2
  arith::DivisibilityConstraint c{2, {1}};
  CHECK(arith::enumerate_m_full(2, 50, c) == std::vector<std::int64_t>{4, 16, 32, 36});
  for (int m = 2; m <= 4; ++m) CHECK(arith::enumerate_m_full(m, 100000) == oracle::m_full_scan(m, 100000));
}

TEST_CASE("constrained enumeration matches filtering") {
  for (int m = 2; m <= 3; ++m)
    for (std::int64_t s = 1; s <= 6; ++s)
      for (std::int64_t t1 = 1; t1 <= 6; ++t1) {
        arith::DivisibilityConstraint c{s, std::vector<std::int64_t>(static_cast<std::size_t>(m - 1), 1)};
        c.t[0] = t1;
        std::vector<std::int64_t> expect;
        for (auto x : oracle::m_full_scan(m, 20000)) {
          const auto uv = oracle::decompose(x, m);
          if (uv.u % s == 0 && uv.v[0] % t1 == 0) expect.push_back(x);
        }
        REQUIRE(arith::enumerate_m_full(m, 20000, c) == expect);
      }
}

TEST_CASE("coprime products stay m-full") {
  const auto sq = arith::enumerate_m_full(2, 3000);
  for (auto x : sq)
    for (auto y : sq)
      if (std::gcd(x, y) == 1 && x * y <= 3000000) REQUIRE(arith::is_m_full(x * y, 2));
}
