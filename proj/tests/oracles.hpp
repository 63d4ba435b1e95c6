#pragma once

// Brute-force reference implementations. Nothing here calls into the library
// except for plain data types; every routine is the slowest obvious method.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "campana/int_types.hpp"
#include "campana/orbifold.hpp"
#include "campana/st_pair.hpp"

namespace oracle {

using campana::i128;

// trial division by every integer
inline std::vector<std::pair<std::int64_t, int>> factor(std::int64_t x) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (x < 0) x = -x;
  for (std::int64_t d = 2; d * d <= x; ++d) {
    int e = 0;
    while (x % d == 0) {
      x /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (x > 1) out.emplace_back(x, 1);
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int valuation(std::int64_t x, std::int64_t p) {
  int e = 0;
  while (x % p == 0) {
    x /= p;
    ++e;
  }
  return e;
}

inline int moebius(std::int64_t n) {
  int mu = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline bool squarefree(std::int64_t n) { return moebius(n) != 0; }

inline bool is_m_full(std::int64_t x, int m, const std::set<std::int64_t>& excluded = {}) {
  for (auto [p, e] : factor(x))
    if (!excluded.count(p) && e < m) return false;
  return true;
}

inline i128 ipow(i128 b, int e) {
  i128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::int64_t compose(std::int64_t u, const std::vector<std::int64_t>& v, int m) {
  i128 x = ipow(u, m);
  for (int r = 1; r < m; ++r) x *= ipow(v[static_cast<std::size_t>(r - 1)], m + r);
  return static_cast<std::int64_t>(x);
}

struct UV {
  std::int64_t u;
  std::vector<std::int64_t> v;
};

// every (u, v) with v squarefree, pairwise coprime and u^m prod v_r^(m+r) <= B
inline std::vector<UV> all_uv(int m, std::int64_t B) {
  std::vector<UV> out;
  std::vector<std::int64_t> v(static_cast<std::size_t>(m - 1), 1);
  std::function<void(int, i128)> rec = [&](int r, i128 acc) {
    if (r == m) {
      for (std::int64_t u = 1; acc * ipow(u, m) <= B; ++u) out.push_back({u, v});
      return;
    }
    for (std::int64_t x = 1; acc * ipow(x, m + r) <= B; ++x) {
      if (!squarefree(x)) continue;
      bool ok = true;
      for (int q = 1; q < r; ++q) ok = ok && std::gcd(x, v[static_cast<std::size_t>(q - 1)]) == 1;
      if (!ok) continue;
      v[static_cast<std::size_t>(r - 1)] = x;
      rec(r + 1, acc * ipow(x, m + r));
    }
    v[static_cast<std::size_t>(r - 1)] = 1;
  };
  rec(1, 1);
  return out;
}

// all representations of x > 0 found by searching divisors
inline std::vector<UV> representations(std::int64_t x, int m) {
  std::vector<UV> out;
  for (const auto& uv : all_uv(m, x))
    if (compose(uv.u, uv.v, m) == x) out.push_back(uv);
  return out;
}

// (u, v) from valuations, used to check divisibility constraints
inline UV decompose(std::int64_t x, int m) {
  UV d{1, std::vector<std::int64_t>(static_cast<std::size_t>(m - 1), 1)};
  for (auto [p, e] : factor(x)) {
    const int r = e % m;
    if (r == 0) {
      d.u *= static_cast<std::int64_t>(ipow(p, e / m));
    } else {
      d.v[static_cast<std::size_t>(r - 1)] *= p;
      d.u *= static_cast<std::int64_t>(ipow(p, (e - m - r) / m));
    }
  }
  return d;
}

inline std::vector<std::int64_t> m_full_scan(int m, std::int64_t B) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = 1; x <= B; ++x)
    if (is_m_full(x, m)) out.push_back(x);
  return out;
}

inline std::int64_t gcd_all(const std::vector<std::int64_t>& x) {
  std::int64_t g = 0;
  for (auto v : x) g = std::gcd(g, v);
  return g;
}

// Visits every tuple with x_i drawn from lists[i].
inline void for_each_tuple(const std::vector<std::vector<std::int64_t>>& lists,
                           const std::function<void(const std::vector<std::int64_t>&)>& f) {
  std::vector<std::int64_t> x(lists.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == lists.size()) {
      f(x);
      return;
    }
    for (auto v : lists[i]) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

inline bool on_form(const std::vector<std::int64_t>& c, int k, const std::vector<std::int64_t>& x) {
  i128 s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += c[i] * ipow(x[i], k);
  return s == 0;
}

// N(B): signed nonzero primitive tuples, |x_i| <= B m_i-full
inline std::uint64_t count_N(const campana::CampanaOrbifold& O, std::int64_t B) {
  std::vector<std::vector<std::int64_t>> lists;
  for (int m : O.weights.m) {
    std::vector<std::int64_t> l;
    for (auto x : m_full_scan(m, B)) {
      l.push_back(x);
      l.push_back(-x);
    }
    lists.push_back(l);
  }
  std::uint64_t n = 0;
  for_each_tuple(lists, [&](const auto& x) {
    if (gcd_all(x) == 1 && on_form(O.form.c, O.form.k, x)) ++n;
  });
  return n;
}

// N_d(B, s, t): positive tuples with s_i | u_i, t_{i,r} | v_{i,r}
inline std::uint64_t count_N_d(const std::vector<std::int64_t>& d, const std::vector<int>& m, int k, std::int64_t B,
                               const campana::STPair& st, bool primitive = false) {
  std::vector<std::vector<std::int64_t>> lists;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::int64_t> l;
    for (auto x : m_full_scan(m[i], B)) {
      const auto uv = decompose(x, m[i]);
      bool ok = uv.u % st.s[i] == 0;
      for (std::size_t r = 0; r < uv.v.size(); ++r) ok = ok && uv.v[r] % st.t[i][r] == 0;
      if (ok) l.push_back(x);
    }
    lists.push_back(l);
  }
  std::uint64_t n = 0;
  for_each_tuple(lists, [&](const auto& x) {
    if ((!primitive || gcd_all(x) == 1) && on_form(d, k, x)) ++n;
  });
  return n;
}

// M(Bt): u_i >= 1 with zeta_i u_i^mt_i <= Bt
inline std::uint64_t count_M(const std::vector<std::int64_t>& d, const std::vector<std::int64_t>& zeta,
                             const std::vector<int>& mt, std::int64_t Bt) {
  std::vector<std::vector<std::int64_t>> lists;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<std::int64_t> l;
    for (std::int64_t u = 1; zeta[i] * ipow(u, mt[i]) <= Bt; ++u) l.push_back(zeta[i] * static_cast<std::int64_t>(ipow(u, mt[i])));
    lists.push_back(l);
  }
  std::uint64_t n = 0;
  for_each_tuple(lists, [&](const auto& y) {
    i128 s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += d[i] * y[i];
    if (s == 0) ++n;
  });
  return n;
}

// varpi by direct Moebius inversion of [gcd = 1] over the poset of
// divisibility constraints (s', t') <= (s, t), t'_{i,.} coprime.
class VarpiInversion {
 public:
  explicit VarpiInversion(std::vector<int> m) : m_(std::move(m)) {}

  int operator()(const campana::STPair& st) {
    for (std::size_t i = 0; i < m_.size(); ++i)
      for (std::size_t r = 0; r < st.t[i].size(); ++r)
        for (std::size_t q = 0; q < r; ++q)
          if (std::gcd(st.t[i][r], st.t[i][q]) != 1) return 0;
    return value(flatten(st));
  }

 private:
  using Key = std::vector<std::int64_t>;

  Key flatten(const campana::STPair& st) const {
    Key k;
    for (std::size_t i = 0; i < m_.size(); ++i) {
      k.push_back(st.s[i]);
      for (auto t : st.t[i]) k.push_back(t);
    }
    return k;
  }

  // [no prime divides every coordinate], coordinate i being s_i prod_r t_{i,r}
  int f(const Key& k) const {
    std::int64_t g = 0;
    std::size_t pos = 0;
    for (int m : m_) {
      std::int64_t c = 1;
      for (int j = 0; j < m; ++j) c *= k[pos++];
      g = std::gcd(g, c);
    }
    return g == 1;
  }

  int value(const Key& k) {
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    // varpi(k) = f(k) - sum over proper divisors k' of varpi(k')
    std::vector<std::vector<std::int64_t>> divs;
    for (auto x : k) {
      std::vector<std::int64_t> dx;
      for (std::int64_t d = 1; d <= x; ++d)
        if (x % d == 0) dx.push_back(d);
      divs.push_back(dx);
    }
    int acc = f(k);
    Key cur(k.size());
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == k.size()) {
        if (cur != k && coprime_t(cur)) acc -= value(cur);
        return;
      }
      for (auto d : divs[j]) {
        cur[j] = d;
        rec(j + 1);
      }
    };
    rec(0);
    memo_[k] = acc;
    return acc;
  }

  bool coprime_t(const Key& k) const {
    std::size_t pos = 0;
    for (int m : m_) {
      ++pos;
      for (int r = 0; r < m - 1; ++r)
        for (int q = 0; q < r; ++q)
          if (std::gcd(k[pos + static_cast<std::size_t>(r)], k[pos + static_cast<std::size_t>(q)]) != 1) return false;
      pos += static_cast<std::size_t>(m - 1);
    }
    return true;
  }

  std::vector<int> m_;
  std::map<Key, int> memo_;
};

// T_R by filtering the whole box of candidate entries
inline std::set<campana::STPair> T_filter(std::int64_t R, const std::vector<int>& m) {
  std::set<campana::STPair> out;
  const std::size_t n = m.size();
  std::vector<std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>>> per;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> opts;
    std::vector<std::int64_t> t(static_cast<std::size_t>(m[i] - 1), 1);
    std::function<void(int, i128)> rec = [&](int r, i128 acc) {
      if (r == m[i]) {
        for (std::int64_t s = 1; acc * ipow(s, m[i]) <= R; ++s) opts.emplace_back(s, t);
        return;
      }
      for (std::int64_t x = 1; acc * ipow(x, m[i] + r) <= R; ++x) {
        t[static_cast<std::size_t>(r - 1)] = x;
        rec(r + 1, acc * ipow(x, m[i] + r));
      }
      t[static_cast<std::size_t>(r - 1)] = 1;
    };
    rec(1, 1);
    per.push_back(opts);
  }
  campana::STPair cur;
  cur.s.resize(n);
  cur.t.resize(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      std::vector<std::int64_t> coord;
      for (std::size_t j = 0; j < n; ++j) {
        if (!squarefree(cur.s[j])) return;
        std::int64_t c = cur.s[j];
        for (std::size_t r = 0; r < cur.t[j].size(); ++r) {
          if (!squarefree(cur.t[j][r])) return;
          for (std::size_t q = 0; q < r; ++q)
            if (std::gcd(cur.t[j][r], cur.t[j][q]) != 1) return;
          c *= cur.t[j][r];
        }
        coord.push_back(c);
      }
      for (std::size_t a = 0; a < n; ++a)
        for (auto [p, e] : factor(coord[a]))
          for (std::size_t b = 0; b < n; ++b)
            if (coord[b] % p != 0) return;
      out.insert(cur);
      return;
    }
    for (const auto& [s, t] : per[i]) {
      cur.s[i] = s;
      cur.t[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// #{u mod p^l : sum c_i u_i^m_i = 0} / p^(l n)
inline double local_density(const std::vector<std::int64_t>& c, const std::vector<int>& m, std::int64_t p, int l) {
  const std::int64_t q = static_cast<std::int64_t>(ipow(p, l));
  std::vector<std::vector<std::int64_t>> lists;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::int64_t> vals;
    for (std::int64_t u = 0; u < q; ++u) {
      i128 v = 1;
      for (int e = 0; e < m[i]; ++e) v = v * u % q;
      vals.push_back(static_cast<std::int64_t>(((c[i] % q + q) % q) * v % q));
    }
    lists.push_back(vals);
  }
  std::uint64_t hits = 0;
  for_each_tuple(lists, [&](const auto& x) {
    std::int64_t s = 0;
    for (auto v : x) s += v;
    if (s % q == 0) ++hits;
  });
  return static_cast<double>(hits) / std::pow(static_cast<double>(q), static_cast<double>(c.size()) - 1.0);
}

inline std::complex<double> e(long double x) {
  const long double f = x - std::floor(x);
  const long double a = 2.0L * 3.14159265358979323846264338327950288L * f;
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

inline std::complex<double> complete_sum(std::int64_t a, std::int64_t q, std::int64_t c, int m) {
  std::complex<double> s = 0;
  for (std::int64_t r = 1; r <= q; ++r) {
    i128 v = ((a % q + q) % q) * ((c % q + q) % q) % q;
    for (int j = 0; j < m; ++j) v = v * r % q;
    s += e(static_cast<long double>(v) / static_cast<long double>(q));
  }
  return s;
}

}  // namespace oracle
