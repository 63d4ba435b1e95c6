#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "campana/arith.hpp"
#include "campana/circle.hpp"
#include "campana/parallel.hpp"

namespace campana::circle {

namespace {

std::int64_t mod_norm(i128 x, std::int64_t q) {
  i128 r = x % q;
  return static_cast<std::int64_t>(r < 0 ? r + q : r);
}

std::int64_t mod_pow(std::int64_t base, int exp, std::int64_t q) {
  i128 r = 1 % q, b = mod_norm(base, q);
  for (int e = exp; e > 0; e >>= 1) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
  }
  return static_cast<std::int64_t>(r);
}

Rational sum_inverse(std::span<const int> m) {
  Rational s = 0;
  for (int x : m) s += Rational(1, x);
  return s;
}

void check_series_input(std::span<const std::int64_t> d, std::size_t zeta_size, std::span<const int> mtilde) {
  if (d.size() != zeta_size || d.size() != mtilde.size()) throw DomainError("singular series: length mismatch");
  for (auto x : d)
    if (x == 0) throw DomainError("singular series: coefficients must be nonzero");
  for (int m : mtilde)
    if (m < 1) throw DomainError("singular series: exponents must be positive");
}

// Refusal and warnings shared by both modes.
void classify(SeriesResult& out, std::span<const int> mtilde) {
  const Rational s = sum_inverse(mtilde);
  out.gamma_tilde = s - 1;
  if (mtilde.size() < 2)
    throw DomainError("singular series: need at least two variables (Gamma = " + to_string(out.gamma_tilde) +
                      ", no convergence)");
  if (s <= 2)
    throw DomainError("singular series: sum 1/m = " + to_string(s) + " <= 2, Gamma = " + to_string(out.gamma_tilde) +
                      " <= 1 and the series does not converge");
  if (s <= 3) {
    out.outside_theorem = true;
    out.warnings.push_back("sum 1/m = " + to_string(s) + " <= 3: outside the convergence regime of the main term");
  }
}

// A(q) with coefficient residues supplied by `coeff_at(q, i)`.
template <class CoeffFn>
cplx term(std::int64_t q, std::span<const int> mtilde, CoeffFn&& coeff_at,
          const std::vector<const std::vector<cplx>*>& rows) {
  const std::size_t n1 = mtilde.size();
  std::vector<std::int64_t> c(n1);
  for (std::size_t i = 0; i < n1; ++i) c[i] = coeff_at(q, i);
  cplx sum = 0;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    cplx prod = 1;
    for (std::size_t i = 0; i < n1; ++i)
      prod *= (*rows[i])[static_cast<std::size_t>(mod_norm(static_cast<i128>(a) * c[i], q))];
    sum += prod;
  }
  return sum / std::pow(static_cast<double>(q), static_cast<double>(n1));
}

// Sum of A(q) over q <= q_max in q order, plus the tail heuristic.
template <class CoeffFn>
void qsum(SeriesResult& out, std::span<const int> mtilde, const CompleteSumTables& tables, CoeffFn&& coeff_at) {
  const std::int64_t Q = tables.q_max();
  for (int m : mtilde)
    if (!tables.has(m)) throw DomainError("singular series: exponent missing from complete-sum tables");
  const auto terms = parallel::map_chunks<cplx>(static_cast<std::size_t>(Q), [&](std::size_t c) {
    const auto q = static_cast<std::int64_t>(c) + 1;
    std::vector<const std::vector<cplx>*> rows;
    for (int m : mtilde) rows.push_back(&tables.row(q, m));
    return term(q, mtilde, coeff_at, rows);
  });
  cplx total = 0;
  for (const auto& t : terms) total += t;
  out.value = total.real();
  out.imag_residual = std::abs(total.imag());

  // |A(q)| <= C q^(1 - Gamma) fitted on (Q/2, Q], summed from Q to infinity.
  const double g = out.gamma_tilde.convert_to<double>();
  const bool steep = g > 2.0;
  const double expo = steep ? g - 1.0 : g;
  double C = 0;
  for (std::int64_t q = Q / 2 + 1; q <= Q; ++q)
    C = std::max(C, std::abs(terms[static_cast<std::size_t>(q - 1)]) * std::pow(static_cast<double>(q), expo));
  out.tail_estimate = C * std::pow(static_cast<double>(Q), 1.0 - expo) / (expo - 1.0);
  if (!steep)
    out.warnings.push_back("tail model q^(1-Gamma) diverges; tail estimated from q^(-Gamma) instead");
}

}  // namespace

cplx series_term(std::int64_t q, std::span<const std::int64_t> coeff_mod_q, std::span<const int> mtilde,
                 const CompleteSumTables& tables) {
  if (coeff_mod_q.size() != mtilde.size()) throw DomainError("series_term: length mismatch");
  std::vector<const std::vector<cplx>*> rows;
  for (int m : mtilde) rows.push_back(&tables.row(q, m));
  return term(q, mtilde, [&](std::int64_t qq, std::size_t i) { return mod_norm(coeff_mod_q[i], qq); }, rows);
}

SeriesResult singular_series(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                             std::span<const int> mtilde, const SeriesOptions& options) {
  check_series_input(d, zeta.size(), mtilde);
  SeriesResult out;
  out.options = options;
  classify(out, mtilde);
  if (options.mode == SeriesMode::QSum) {
    if (options.q_max < 1) throw DomainError("singular series: Q_max must be at least 1");
    const CompleteSumTables tables(options.q_max, mtilde);
    qsum(out, mtilde, tables, [&](std::int64_t q, std::size_t i) {
      return mod_norm(static_cast<i128>(mod_norm(d[i], q)) * mod_norm(zeta[i], q), q);
    });
    return out;
  }
  if (options.prime_cap < 2) throw DomainError("singular series: prime cap must be at least 2");
  if (options.level < 1) throw DomainError("singular series: level must be at least 1");
  const auto primes = arith::primes_up_to(options.prime_cap);
  std::vector<double> factors(primes.size());
  for (std::size_t j = 0; j < primes.size(); ++j)
    factors[j] = local_density_fft(d, zeta, mtilde, primes[j], options.level);
  double value = 1.0;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    value *= factors[j];
    out.local_factors.emplace_back(primes[j], factors[j]);
  }
  out.value = value;
  return out;
}

SeriesResult singular_series_qsum(std::span<const std::int64_t> d, std::span<const BigInt> zeta,
                                  std::span<const int> mtilde, const CompleteSumTables& tables) {
  check_series_input(d, zeta.size(), mtilde);
  SeriesResult out;
  out.options.mode = SeriesMode::QSum;
  out.options.q_max = tables.q_max();
  classify(out, mtilde);
  qsum(out, mtilde, tables, [&](std::int64_t q, std::size_t i) {
    BigInt r = zeta[i] % q;
    if (r < 0) r += q;
    return mod_norm(static_cast<i128>(mod_norm(d[i], q)) * r.convert_to<std::int64_t>(), q);
  });
  return out;
}

namespace {

std::int64_t prime_power(std::int64_t p, int level) {
  if (!arith::is_prime(p)) throw DomainError("local density: p must be prime");
  if (level < 0) throw DomainError("local density: level must be nonnegative");
  std::int64_t N = 1;
  for (int j = 0; j < level; ++j) N = checked_mul64(N, p);
  return N;
}

// histogram of d zeta u^m mod N over u mod N
std::vector<std::uint64_t> residue_histogram(std::int64_t coeff, int m, std::int64_t N) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(N), 0);
  const std::int64_t c = mod_norm(coeff, N);
  for (std::int64_t u = 0; u < N; ++u) ++h[static_cast<std::size_t>(mod_norm(static_cast<i128>(c) * mod_pow(u, m, N), N))];
  return h;
}

std::vector<u128> convolve(const std::vector<u128>& acc, const std::vector<std::uint64_t>& h, std::int64_t N) {
  std::vector<std::pair<std::int64_t, std::uint64_t>> support;
  for (std::int64_t x = 0; x < N; ++x)
    if (h[static_cast<std::size_t>(x)] != 0) support.emplace_back(x, h[static_cast<std::size_t>(x)]);
  std::vector<u128> out(static_cast<std::size_t>(N), 0);
  constexpr std::int64_t kChunk = 1024;
  parallel::for_chunks(static_cast<std::size_t>((N + kChunk - 1) / kChunk), [&](std::size_t c) {
    const std::int64_t lo = static_cast<std::int64_t>(c) * kChunk, hi = std::min(N, lo + kChunk);
    for (std::int64_t z = lo; z < hi; ++z) {
      u128 s = 0;
      for (const auto& [x, cnt] : support) {
        std::int64_t y = z - x;
        if (y < 0) y += N;
        s += acc[static_cast<std::size_t>(y)] * cnt;
      }
      out[static_cast<std::size_t>(z)] = s;
    }
  });
  return out;
}

BigInt from_u128(u128 v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

std::mutex fftw_mutex;

}  // namespace

Rational local_density(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                       std::span<const int> mtilde, std::int64_t p, int level, const enumerate::Budget& budget) {
  check_series_input(d, zeta.size(), mtilde);
  const std::int64_t N = prime_power(p, level);
  if (level == 0) return Rational(1);
  const std::size_t n1 = d.size();
  // every count is at most N^(n+1), which must fit in 128 bits
  if (static_cast<double>(n1) * std::log2(static_cast<double>(N)) >= 127.0)
    throw BudgetExceeded("local density: p^l = " + std::to_string(N) + " overflows exact 128-bit counts");
  const double ops = static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(n1);
  if (ops > static_cast<double>(budget.max_ops))
    throw BudgetExceeded("local density: about " + std::to_string(static_cast<std::uint64_t>(ops)) +
                         " operations exceed the budget");
  if (static_cast<double>(N) * 3 * sizeof(u128) > static_cast<double>(budget.max_mem_bytes))
    throw BudgetExceeded("local density: residue tables exceed the memory budget");

  const std::size_t left = (n1 + 1) / 2;
  auto build = [&](std::size_t lo, std::size_t hi) {
    std::vector<u128> acc(static_cast<std::size_t>(N), 0);
    acc[0] = 1;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto h = residue_histogram(static_cast<std::int64_t>(mod_norm(static_cast<i128>(d[i]) * zeta[i], N)),
                                       mtilde[i], N);
      acc = convolve(acc, h, N);
    }
    return acc;
  };
  const auto L = build(0, left);
  const auto R = build(left, n1);
  u128 count = 0;
  for (std::int64_t x = 0; x < N; ++x) {
    const u128 a = L[static_cast<std::size_t>(x)];
    const u128 b = R[static_cast<std::size_t>(x == 0 ? 0 : N - x)];
    if (a != 0 && b > (~static_cast<u128>(0) - count) / a) throw OverflowError("local density: count overflow");
    count += a * b;
  }
  BigInt denom = 1;
  for (std::size_t i = 0; i + 1 < n1; ++i) denom *= N;
  return Rational(from_u128(count), denom);
}

double local_density_fft(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                         std::span<const int> mtilde, std::int64_t p, int level) {
  check_series_input(d, zeta.size(), mtilde);
  const std::int64_t N = prime_power(p, level);
  if (level == 0) return 1.0;
  if (N > (std::int64_t{1} << 27)) throw BudgetExceeded("local density: p^l too large for the FFT path");
  const auto n = static_cast<int>(N);
  std::map<std::pair<std::int64_t, int>, std::vector<cplx>> spectra;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::int64_t c = mod_norm(static_cast<i128>(d[i]) * zeta[i], N);
    const auto key = std::make_pair(c, mtilde[i]);
    if (spectra.count(key)) continue;
    const auto h = residue_histogram(c, mtilde[i], N);
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(N));
    fftw_plan plan;
    {
      std::lock_guard lock(fftw_mutex);
      plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::int64_t x = 0; x < N; ++x) {
      buf[x][0] = static_cast<double>(h[static_cast<std::size_t>(x)]) / static_cast<double>(N);
      buf[x][1] = 0.0;
    }
    fftw_execute(plan);
    std::vector<cplx> spec(static_cast<std::size_t>(N));
    for (std::int64_t b = 0; b < N; ++b) spec[static_cast<std::size_t>(b)] = {buf[b][0], buf[b][1]};
    {
      std::lock_guard lock(fftw_mutex);
      fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    spectra.emplace(key, std::move(spec));
  }
  std::vector<const std::vector<cplx>*> rows;
  for (std::size_t i = 0; i < d.size(); ++i)
    rows.push_back(&spectra.at({mod_norm(static_cast<i128>(d[i]) * zeta[i], N), mtilde[i]}));
  double total = 0;
  for (std::int64_t b = 0; b < N; ++b) {
    cplx prod = 1;
    for (const auto* r : rows) prod *= (*r)[static_cast<std::size_t>(b)];
    total += prod.real();
  }
  return total;
}

cplx local_factor_from_sums(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                            std::span<const int> mtilde, std::int64_t p, int level) {
  check_series_input(d, zeta.size(), mtilde);
  prime_power(p, level);
  cplx total = 1;
  std::int64_t q = 1;
  for (int j = 1; j <= level; ++j) {
    q *= p;
    std::map<int, std::vector<cplx>> by_m;
    for (int m : mtilde)
      if (!by_m.count(m)) by_m.emplace(m, complete_sum_row(q, m, true));
    std::vector<const std::vector<cplx>*> rows;
    for (int m : mtilde) rows.push_back(&by_m.at(m));
    total += term(q, mtilde,
                  [&](std::int64_t qq, std::size_t i) {
                    return mod_norm(static_cast<i128>(mod_norm(d[i], qq)) * mod_norm(zeta[i], qq), qq);
                  },
                  rows);
  }
  return total;
}

}  // namespace campana::circle
