#include "campana/inclusion_exclusion.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>

#include "campana/arith.hpp"

namespace campana::ie {

namespace {

void check_shape(const STPair& st, const OrbifoldWeights& w) {
  if (st.s.size() != w.size() || st.t.size() != w.size()) throw DomainError("(s, t) shape does not match weights");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (st.t[i].size() != static_cast<std::size_t>(w.m[i] - 1))
      throw DomainError("t_" + std::to_string(i) + " must have m_i - 1 entries");
  }
}

// Slot code for one coordinate at one prime: a + 2 b with a = [p | s_i] and
// b = r when p | t_{i,r} (0 when no t entry is divisible).
inline std::size_t slot_code(bool in_s, int r) { return static_cast<std::size_t>(in_s) + 2 * static_cast<std::size_t>(r); }

}  // namespace

std::vector<BigInt> gamma_of(const STPair& st, const TVector& vtilde, int k, const OrbifoldWeights& w) {
  check_shape(st, w);
  if (vtilde.size() != w.size()) throw DomainError("gamma_of: vtilde shape mismatch");
  std::vector<BigInt> gamma;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int m = w.m[i];
    if (vtilde[i].size() != static_cast<std::size_t>(m - 1)) throw DomainError("gamma_of: vtilde shape mismatch");
    BigInt g = boost::multiprecision::pow(BigInt(st.s[i]), static_cast<unsigned>(k * m));
    for (int r = 1; r < m; ++r) {
      const BigInt tv = BigInt(st.t[i][static_cast<std::size_t>(r - 1)]) * vtilde[i][static_cast<std::size_t>(r - 1)];
      g *= boost::multiprecision::pow(tv, static_cast<unsigned>(k * (m + r)));
    }
    gamma.push_back(std::move(g));
  }
  return gamma;
}

std::vector<std::int64_t> coordinate_weights(const STPair& st, const OrbifoldWeights& w, std::int64_t cap) {
  check_shape(st, w);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int m = w.m[i];
    i128 acc = pow_capped(st.s[i], m, cap);
    for (int r = 1; r < m && acc >= 0; ++r) {
      const std::int64_t f = pow_capped(st.t[i][static_cast<std::size_t>(r - 1)], m + r, cap);
      acc = (f < 0 || acc * f > cap) ? -1 : acc * f;
    }
    out.push_back(static_cast<std::int64_t>(acc));
  }
  return out;
}

const std::vector<int>& local_coordinate_table(int m) {
  static std::mutex mutex;
  static std::map<int, std::vector<int>> cache;
  if (m < 1) throw DomainError("local_coordinate_table: m must be positive");
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // Realisable slot sets: {}, {s}, {t_r}, {s, t_r}. Moebius inversion of the
  // indicator [slot set nonempty] over the subset lattice of each set.
  std::vector<int> table(2 * static_cast<std::size_t>(m), 0);
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b < m; ++b) {
      const unsigned full = static_cast<unsigned>(a) | (b > 0 ? 2u : 0u);
      int value = 0;
      for (unsigned sub = 0; sub < 4; ++sub) {
        if ((sub & ~full) != 0 || sub == 0) continue;
        const int diff = std::popcount(full) - std::popcount(sub);
        value += diff % 2 == 0 ? 1 : -1;
      }
      table[slot_code(a != 0, b)] = value;
    }
  }
  return cache.emplace(m, std::move(table)).first->second;
}

int varpi(const STPair& st, const OrbifoldWeights& w) {
  check_shape(st, w);
  std::vector<std::int64_t> primes;
  auto collect = [&](std::int64_t x) {
    if (x < 1) throw DomainError("varpi: entries must be positive");
    for (auto [p, e] : arith::factorize(x)) {
      if (e > 1) return false;
      primes.push_back(p);
    }
    return true;
  };
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!collect(st.s[i])) return 0;
    for (std::size_t r = 0; r < st.t[i].size(); ++r) {
      if (!collect(st.t[i][r])) return 0;
      for (std::size_t q = 0; q < r; ++q)
        if (std::gcd(st.t[i][r], st.t[i][q]) != 1) return 0;  // not realisable by coprime v
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  int result = 1;
  for (auto p : primes) {
    int product = 1;
    for (std::size_t i = 0; i < w.size() && product != 0; ++i) {
      int r = 0;
      for (std::size_t q = 0; q < st.t[i].size(); ++q)
        if (st.t[i][q] % p == 0) r = static_cast<int>(q) + 1;
      product *= local_coordinate_table(w.m[i])[slot_code(st.s[i] % p == 0, r)];
    }
    // The empty slot pattern never occurs for a prime in the support.
    result *= -product;
    if (result == 0) break;
  }
  return result;
}

namespace {

struct LocalOption {
  std::vector<std::size_t> codes;     // per coordinate slot code
  std::vector<std::int64_t> factor;   // per coordinate weight factor
};

void expand_local(const OrbifoldWeights& w, std::int64_t p, std::int64_t R, std::size_t i, LocalOption& cur,
                  std::vector<LocalOption>& out) {
  if (i == w.size()) {
    out.push_back(cur);
    return;
  }
  const int m = w.m[i];
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a == 0 && b == 0) continue;
      const int exponent = a * m + (b > 0 ? m + b : 0);
      const std::int64_t f = pow_capped(p, exponent, R);
      if (f < 0) continue;
      cur.codes[i] = slot_code(a != 0, b);
      cur.factor[i] = f;
      expand_local(w, p, R, i + 1, cur, out);
    }
  }
}

struct TWalker {
  const OrbifoldWeights& w;
  std::int64_t R;
  const std::vector<std::int64_t>& primes;
  std::vector<std::vector<LocalOption>> options;  // per prime
  std::vector<STPair>& out;

  void walk(std::size_t j, STPair& cur, std::vector<std::int64_t>& weight) {
    out.push_back(cur);
    for (std::size_t q = j; q < primes.size(); ++q) {
      const std::int64_t p = primes[q];
      for (const auto& opt : options[q]) {
        bool fits = true;
        for (std::size_t i = 0; i < w.size() && fits; ++i) fits = weight[i] <= R / opt.factor[i];
        if (!fits) continue;
        STPair next = cur;
        auto next_weight = weight;
        for (std::size_t i = 0; i < w.size(); ++i) {
          next_weight[i] *= opt.factor[i];
          const std::size_t code = opt.codes[i];
          if (code & 1) next.s[i] *= p;
          if (code >= 2) next.t[i][code / 2 - 1] *= p;
        }
        walk(q + 1, next, next_weight);
      }
    }
  }
};

BigInt weight_product(const std::vector<std::int64_t>& weights) {
  BigInt prod = 1;
  for (auto x : weights) prod *= x;
  return prod;
}

}  // namespace

std::vector<STPair> enumerate_T(std::int64_t R, const OrbifoldWeights& w) {
  w.validate();
  std::vector<STPair> out;
  if (R < 1) return out;
  const int max_m = *std::max_element(w.m.begin(), w.m.end());
  const auto primes = arith::primes_up_to(arith::iroot(R, max_m));
  TWalker walker{w, R, primes, {}, out};
  for (auto p : primes) {
    std::vector<LocalOption> opts;
    LocalOption cur{std::vector<std::size_t>(w.size()), std::vector<std::int64_t>(w.size())};
    expand_local(w, p, R, 0, cur, opts);
    walker.options.push_back(std::move(opts));
  }
  STPair start = STPair::ones(w);
  std::vector<std::int64_t> weight(w.size(), 1);
  walker.walk(0, start, weight);

  std::vector<std::pair<BigInt, std::size_t>> keys;
  for (std::size_t j = 0; j < out.size(); ++j) keys.emplace_back(weight_product(coordinate_weights(out[j], w, R)), j);
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return out[a.second] < out[b.second];
  });
  std::vector<STPair> sorted;
  sorted.reserve(out.size());
  for (const auto& [key, j] : keys) sorted.push_back(std::move(out[j]));
  return sorted;
}

namespace {

// vt choices for one coordinate: squarefree t_r vt_r, pairwise coprime in r.
void expand_v(int m, const std::vector<std::int64_t>& t, std::int64_t budget, int r, std::vector<std::int64_t>& cur,
              std::vector<std::int64_t>& weight_out, std::int64_t weight, std::vector<std::vector<std::int64_t>>& out) {
  if (r == m) {
    out.push_back(cur);
    weight_out.push_back(weight);
    return;
  }
  const std::int64_t tr = t[static_cast<std::size_t>(r - 1)];
  for (std::int64_t v = 1;; ++v) {
    const std::int64_t f = pow_capped(v, m + r, budget);
    if (f < 0) break;
    const std::int64_t full = tr * v;
    if (!arith::is_squarefree(full)) continue;
    bool coprime = true;
    for (int q = 1; q < r && coprime; ++q)
      coprime = std::gcd(full, t[static_cast<std::size_t>(q - 1)] * cur[static_cast<std::size_t>(q - 1)]) == 1;
    for (int q = r + 1; q < m && coprime; ++q) coprime = std::gcd(full, t[static_cast<std::size_t>(q - 1)]) == 1;
    if (!coprime) continue;
    cur[static_cast<std::size_t>(r - 1)] = v;
    expand_v(m, t, budget / f, r + 1, cur, weight_out, weight * f, out);
  }
  cur[static_cast<std::size_t>(r - 1)] = 1;
}

}  // namespace

std::vector<TVector> enumerate_V(std::int64_t R, const STPair& st, const OrbifoldWeights& w) {
  check_shape(st, w);
  std::vector<TVector> result;
  if (R < 1) return result;
  const auto base = coordinate_weights(st, w, R);
  std::vector<std::vector<std::vector<std::int64_t>>> per_coord(w.size());
  std::vector<std::vector<std::int64_t>> per_weight(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (base[i] < 0) return result;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(w.m[i] - 1), 1);
    expand_v(w.m[i], st.t[i], R / base[i], 1, cur, per_weight[i], base[i], per_coord[i]);
    if (per_coord[i].empty()) return result;
  }
  std::vector<std::pair<BigInt, TVector>> keyed;
  std::vector<std::size_t> idx(w.size(), 0);
  while (true) {
    TVector v;
    BigInt key = 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      v.push_back(per_coord[i][idx[i]]);
      key *= per_weight[i][idx[i]];
    }
    keyed.emplace_back(std::move(key), std::move(v));
    std::size_t i = 0;
    while (i < w.size() && ++idx[i] == per_coord[i].size()) idx[i++] = 0;
    if (i == w.size()) break;
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [key, v] : keyed) result.push_back(std::move(v));
  return result;
}

IdentityReport verify_ie_identity(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                                  const enumerate::Budget& budget) {
  IdentityReport rep;
  rep.lhs = enumerate::count_N_star(d, w, k, B, enumerate::Method::MeetInTheMiddle, budget);
  const auto pairs = enumerate_T(B, w);
  rep.pairs = pairs.size();
  for (const auto& st : pairs) {
    const int weight = varpi(st, w);
    if (weight == 0) continue;
    const auto n = enumerate::count_N_d(d, w, k, B, st, enumerate::Method::MeetInTheMiddle, budget);
    if (n == 0) continue;
    ++rep.nonzero_terms;
    rep.rhs = checked_add(rep.rhs, checked_mul(weight, static_cast<i128>(n)));
  }
  rep.difference = static_cast<i128>(rep.lhs) - rep.rhs;
  return rep;
}

}  // namespace campana::ie
