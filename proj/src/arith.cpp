#include "campana/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace campana {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(i128 v) {
  if (v >= 0) return to_string(static_cast<u128>(v));
  return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
}

}  // namespace campana

namespace campana::arith {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t f = 5; f <= n / f; f += 6) {
    if (n % f == 0 || n % (f + 2) == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n == 0) throw DomainError("factorize: zero has no factorisation");
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  std::vector<std::pair<std::int64_t, int>> out;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(static_cast<std::int64_t>(p), e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t f = 5; f <= m / f; f += 6) {
    strip(f);
    strip(f + 2);
  }
  if (m > 1) out.emplace_back(static_cast<std::int64_t>(m), 1);
  return out;
}

int p_adic_valuation(i128 x, std::int64_t p) {
  if (x == 0) throw DomainError("p_adic_valuation: valuation of 0 is undefined");
  if (!is_prime(p)) throw DomainError("p_adic_valuation: " + std::to_string(p) + " is not prime");
  int e = 0;
  while (x % p == 0) {
    x /= p;
    ++e;
  }
  return e;
}

int moebius(std::int64_t n) {
  if (n < 1) throw DomainError("moebius: argument must be positive");
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return false;
  }
  return true;
}

std::int64_t iroot(std::int64_t n, int k) {
  if (n < 0 || k < 1) throw DomainError("iroot: need n >= 0 and k >= 1");
  if (k == 1 || n < 2) return n;
  auto r = static_cast<std::int64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  while (r > 0 && pow_capped(r, k, n) < 0) --r;
  while (pow_capped(r + 1, k, n) >= 0) ++r;
  return r;
}

bool is_m_full(std::int64_t x, int m, std::span<const std::int64_t> excluded) {
  if (x == 0) throw DomainError("is_m_full: x must be nonzero");
  if (m < 1) throw DomainError("is_m_full: m must be at least 1");
  for (auto [p, e] : factorize(x)) {
    if (e >= m) continue;
    if (std::find(excluded.begin(), excluded.end(), p) != excluded.end()) continue;
    return false;
  }
  return true;
}

MFullDecomposition m_full_decompose(std::int64_t x, int m) {
  if (x == 0) throw DomainError("m_full_decompose: x must be nonzero");
  if (m < 1) throw DomainError("m_full_decompose: m must be at least 1");
  MFullDecomposition d;
  d.sign = x < 0 ? -1 : 1;
  d.m = m;
  if (m == 1) {
    if (x == INT64_MIN) throw OverflowError("m_full_decompose: |x| exceeds 64 bits");
    d.u = x < 0 ? -x : x;
    return d;
  }
  d.v.assign(static_cast<std::size_t>(m - 1), 1);
  for (auto [p, e] : factorize(x)) {
    if (e < m) throw NotMFull(x, m, p);
    int r = e % m;
    if (r == 0) {
      d.u *= pow_capped(p, e / m, INT64_MAX);
    } else {
      d.v[static_cast<std::size_t>(r - 1)] *= p;
      d.u *= pow_capped(p, (e - m - r) / m, INT64_MAX);
    }
  }
  return d;
}

std::int64_t m_full_compose(const MFullDecomposition& d) {
  if (d.sign != 1 && d.sign != -1) throw DomainError("m_full_compose: sign must be +1 or -1");
  if (d.m < 1) throw DomainError("m_full_compose: m must be at least 1");
  if (d.u < 1) throw DomainError("m_full_compose: u must be positive");
  if (d.v.size() != static_cast<std::size_t>(d.m - 1))
    throw DomainError("m_full_compose: expected m-1 entries in v");
  for (std::size_t r = 0; r < d.v.size(); ++r) {
    if (d.v[r] < 1 || !is_squarefree(d.v[r]))
      throw DomainError("m_full_compose: v_" + std::to_string(r + 1) + " is not squarefree");
    for (std::size_t q = 0; q < r; ++q) {
      if (std::gcd(d.v[r], d.v[q]) != 1)
        throw DomainError("m_full_compose: v entries are not pairwise coprime");
    }
  }
  i128 x = checked_pow(d.u, d.m);
  for (std::size_t r = 0; r < d.v.size(); ++r) {
    x = checked_mul(x, checked_pow(d.v[r], d.m + static_cast<int>(r) + 1));
  }
  return narrow64(d.sign * x);
}

std::vector<bool> squarefree_sieve(std::int64_t n) {
  std::vector<bool> sf(static_cast<std::size_t>(std::max<std::int64_t>(n, 0) + 1), true);
  sf[0] = false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    for (std::int64_t j = p * p; j <= n; j += p * p) sf[static_cast<std::size_t>(j)] = false;
  }
  return sf;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t p = 2; p <= n; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    primes.push_back(p);
    for (std::int64_t j = p * p; j <= n; j += p) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

namespace {

struct MFullWalker {
  int m;
  std::int64_t B;
  std::int64_t s;
  const std::vector<std::int64_t>& t;
  const std::vector<bool>& squarefree;
  std::vector<std::int64_t> v;
  std::vector<MFullEntry>& out;

  void walk(int r, std::int64_t prefix) {
    if (r == m) {
      std::int64_t u_max = iroot(B / prefix, m);
      for (std::int64_t u = s; u <= u_max; u += s) {
        out.push_back({prefix * pow_capped(u, m, B), u, v});
      }
      return;
    }
    const std::int64_t step = t[static_cast<std::size_t>(r - 1)];
    for (std::int64_t vr = step;; vr += step) {
      std::int64_t power = pow_capped(vr, m + r, B / prefix);
      if (power < 0) break;
      if (!squarefree[static_cast<std::size_t>(vr)]) continue;
      bool coprime = true;
      for (int q = 0; q < r - 1 && coprime; ++q) coprime = std::gcd(vr, v[static_cast<std::size_t>(q)]) == 1;
      if (!coprime) continue;
      v[static_cast<std::size_t>(r - 1)] = vr;
      walk(r + 1, prefix * power);
    }
    v[static_cast<std::size_t>(r - 1)] = 1;
  }
};

}  // namespace

std::vector<MFullEntry> enumerate_m_full_entries(int m, std::int64_t B,
                                                 const std::optional<DivisibilityConstraint>& constraint) {
  if (m < 1) throw DomainError("enumerate_m_full: m must be at least 1");
  std::vector<MFullEntry> out;
  if (B < 1) return out;
  std::int64_t s = 1;
  std::vector<std::int64_t> t(static_cast<std::size_t>(m - 1), 1);
  if (constraint) {
    s = constraint->s;
    if (!constraint->t.empty() || m > 1) {
      if (constraint->t.size() != t.size())
        throw DomainError("enumerate_m_full: constraint needs m-1 entries in t");
      t = constraint->t;
    }
    if (s < 1 || std::any_of(t.begin(), t.end(), [](std::int64_t x) { return x < 1; }))
      throw DomainError("enumerate_m_full: constraint entries must be positive");
  }
  const auto squarefree = squarefree_sieve(m > 1 ? iroot(B, m + 1) : 0);
  MFullWalker walker{m, B, s, t, squarefree, std::vector<std::int64_t>(t.size(), 1), out};
  walker.walk(1, 1);
  std::sort(out.begin(), out.end(), [](const MFullEntry& a, const MFullEntry& b) { return a.value < b.value; });
  return out;
}

std::vector<std::int64_t> enumerate_m_full(int m, std::int64_t B,
                                           const std::optional<DivisibilityConstraint>& constraint) {
  auto entries = enumerate_m_full_entries(m, B, constraint);
  std::vector<std::int64_t> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(e.value);
  return values;
}

}  // namespace campana::arith
