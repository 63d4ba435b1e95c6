#include <algorithm>
#include <cmath>
#include <numeric>

#include "campana/arith.hpp"
#include "campana/circle.hpp"
#include "campana/kernels.hpp"
#include "campana/parallel.hpp"

namespace campana::circle {

namespace {

std::int64_t mod_pow(std::int64_t base, int exp, std::int64_t q) {
  i128 r = 1 % q, b = ((base % q) + q) % q;
  for (int e = exp; e > 0; e >>= 1) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t mod_norm(i128 x, std::int64_t q) {
  i128 r = x % q;
  return static_cast<std::int64_t>(r < 0 ? r + q : r);
}

// frac(alpha * n), with alpha = M / 2^E split off exactly.
double frac_mul(double alpha, i128 n) {
  if (alpha == 0.0 || n == 0) return 0.0;
  int ex = 0;
  const double mant = std::frexp(alpha, &ex);
  const auto M = static_cast<std::int64_t>(std::ldexp(mant, 53));
  const int E = 53 - ex;
  i128 prod;
  if (E <= 0) return 0.0;
  if (E > 120 || __builtin_mul_overflow(static_cast<i128>(M), n, &prod)) {
    const long double x = static_cast<long double>(alpha) * static_cast<long double>(n);
    return static_cast<double>(x - std::floor(x));
  }
  const u128 mask = (static_cast<u128>(1) << E) - 1;
  const u128 r = static_cast<u128>(prod) & mask;
  return std::ldexp(static_cast<double>(r), -E);
}

}  // namespace

std::int64_t weyl_length(std::int64_t zeta, int m, double Btilde) {
  if (zeta < 1 || m < 1) throw DomainError("weyl_length: zeta and m must be positive");
  if (!(Btilde >= 1.0)) return 0;
  if (Btilde > 9.0e18) throw OverflowError("weyl_length: Bt exceeds 64-bit range");
  const auto Bf = static_cast<std::int64_t>(std::floor(Btilde));
  return arith::iroot(Bf / zeta, m);
}

cplx weyl_sum(double alpha, std::int64_t d, std::int64_t zeta, int m, double Btilde) {
  const std::int64_t L = weyl_length(zeta, m, Btilde);
  if (L == 0) return {0.0, 0.0};
  std::vector<double> phase(static_cast<std::size_t>(L));
  const double a = alpha - std::floor(alpha);
  for (std::int64_t u = 1; u <= L; ++u) {
    const i128 n = static_cast<i128>(d) * zeta * checked_pow(u, m);
    phase[static_cast<std::size_t>(u - 1)] = frac_mul(a, n);
  }
  return kernels::active().phase_sum(phase.data(), nullptr, phase.size());
}

cplx weyl_sum_rational(std::int64_t a, std::int64_t q, std::int64_t d, std::int64_t zeta, int m, double Btilde) {
  if (q < 1) throw DomainError("weyl_sum_rational: q must be positive");
  const std::int64_t L = weyl_length(zeta, m, Btilde);
  if (L == 0) return {0.0, 0.0};
  const std::int64_t c = mod_norm(static_cast<i128>(mod_norm(a, q)) * mod_norm(d, q) % q * mod_norm(zeta, q), q);
  std::vector<double> phase(static_cast<std::size_t>(L));
  for (std::int64_t u = 1; u <= L; ++u)
    phase[static_cast<std::size_t>(u - 1)] =
        static_cast<double>(mod_norm(static_cast<i128>(c) * mod_pow(u, m, q), q)) / static_cast<double>(q);
  return kernels::active().phase_sum(phase.data(), nullptr, phase.size());
}

cplx complete_sum(std::int64_t a, std::int64_t q, std::int64_t coeff, int m) {
  if (q < 1) throw DomainError("complete_sum: q must be positive");
  if (m < 1) throw DomainError("complete_sum: m must be positive");
  const std::int64_t b = mod_norm(static_cast<i128>(mod_norm(a, q)) * mod_norm(coeff, q), q);
  std::vector<double> phase(static_cast<std::size_t>(q));
  for (std::int64_t r = 1; r <= q; ++r)
    phase[static_cast<std::size_t>(r - 1)] =
        static_cast<double>(mod_norm(static_cast<i128>(b) * mod_pow(r, m, q), q)) / static_cast<double>(q);
  return kernels::active().phase_sum(phase.data(), nullptr, phase.size());
}

std::vector<cplx> complete_sum_row(std::int64_t q, int m, bool parallel_rows) {
  if (q < 1) throw DomainError("complete_sum_row: q must be positive");
  std::vector<double> hist(static_cast<std::size_t>(q), 0.0);
  for (std::int64_t r = 1; r <= q; ++r) hist[static_cast<std::size_t>(mod_pow(r, m, q))] += 1.0;
  std::vector<std::int64_t> support;
  std::vector<double> weight;
  for (std::int64_t x = 0; x < q; ++x)
    if (hist[static_cast<std::size_t>(x)] != 0.0) {
      support.push_back(x);
      weight.push_back(hist[static_cast<std::size_t>(x)]);
    }
  std::vector<cplx> row(static_cast<std::size_t>(q));
  auto fill = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> phase(support.size());
    for (std::int64_t b = lo; b < hi; ++b) {
      for (std::size_t j = 0; j < support.size(); ++j)
        phase[j] = static_cast<double>(static_cast<i128>(b) * support[j] % q) / static_cast<double>(q);
      row[static_cast<std::size_t>(b)] = kernels::active().phase_sum(phase.data(), weight.data(), phase.size());
    }
  };
  if (!parallel_rows) {
    fill(0, q);
  } else {
    constexpr std::int64_t kChunk = 64;
    parallel::for_chunks(static_cast<std::size_t>((q + kChunk - 1) / kChunk), [&](std::size_t c) {
      const auto lo = static_cast<std::int64_t>(c) * kChunk;
      fill(lo, std::min(q, lo + kChunk));
    });
  }
  return row;
}

CompleteSumTables::CompleteSumTables(std::int64_t q_max, std::span<const int> exponents) : q_max_(q_max) {
  if (q_max < 1) throw DomainError("complete sum tables: q_max must be positive");
  exponents_.assign(exponents.begin(), exponents.end());
  std::sort(exponents_.begin(), exponents_.end());
  exponents_.erase(std::unique(exponents_.begin(), exponents_.end()), exponents_.end());
  tables_.resize(exponents_.size());
  for (std::size_t e = 0; e < exponents_.size(); ++e) {
    const int m = exponents_[e];
    if (m < 1) throw DomainError("complete sum tables: exponents must be positive");
    auto& per_q = tables_[e];
    per_q.resize(static_cast<std::size_t>(q_max) + 1);
    parallel::for_chunks(static_cast<std::size_t>(q_max), [&](std::size_t c) {
      const auto q = static_cast<std::int64_t>(c) + 1;
      per_q[static_cast<std::size_t>(q)] = complete_sum_row(q, m);
    });
  }
}

bool CompleteSumTables::has(int m) const {
  return std::binary_search(exponents_.begin(), exponents_.end(), m);
}

cplx CompleteSumTables::value(std::int64_t q, int m, std::int64_t b) const {
  return row(q, m)[static_cast<std::size_t>(mod_norm(b, q))];
}

const std::vector<cplx>& CompleteSumTables::row(std::int64_t q, int m) const {
  if (q < 1 || q > q_max_) throw DomainError("complete sum tables: q out of range");
  const auto it = std::lower_bound(exponents_.begin(), exponents_.end(), m);
  if (it == exponents_.end() || *it != m) throw DomainError("complete sum tables: exponent not tabulated");
  return tables_[static_cast<std::size_t>(it - exponents_.begin())][static_cast<std::size_t>(q)];
}

bool ArcDissection::on_major(double alpha) const {
  auto it = std::upper_bound(merged.begin(), merged.end(), alpha,
                             [](double x, const std::pair<double, double>& iv) { return x < iv.first; });
  if (it == merged.begin()) return false;
  --it;
  return alpha < it->second || (alpha == it->second && it->second == 1.0);
}

ArcDissection minor_arcs(double Btilde, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("minor_arcs: delta must lie in (0, 1)");
  if (!(Btilde > 0.0)) throw DomainError("minor_arcs: Bt must be positive");
  ArcDissection D;
  D.Btilde = Btilde;
  D.delta = delta;
  D.Q = std::pow(Btilde, delta);
  D.radius = std::pow(Btilde, delta - 1.0);
  const auto qmax = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(D.Q)));
  for (std::int64_t q = 1; q <= qmax; ++q) {
    D.measure_bound += static_cast<double>(q + 1) * 2.0 * D.radius;
    for (std::int64_t a = 0; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double c = static_cast<double>(a) / static_cast<double>(q);
      D.arcs.push_back({a, q, std::max(0.0, c - D.radius), std::min(1.0, c + D.radius)});
    }
  }
  std::vector<std::pair<double, double>> iv;
  for (const auto& arc : D.arcs) iv.emplace_back(arc.lo, arc.hi);
  std::sort(iv.begin(), iv.end());
  for (const auto& [lo, hi] : iv) {
    if (!D.merged.empty() && lo <= D.merged.back().second)
      D.merged.back().second = std::max(D.merged.back().second, hi);
    else
      D.merged.emplace_back(lo, hi);
  }
  for (const auto& [lo, hi] : D.merged) D.major_measure += hi - lo;
  D.minor_measure = 1.0 - D.major_measure;
  return D;
}

std::vector<MinorArcRow> minor_arc_scan(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                                        std::span<const int> mtilde, double Btilde, double delta,
                                        std::size_t samples) {
  if (d.size() != zeta.size() || d.size() != mtilde.size()) throw DomainError("minor_arc_scan: length mismatch");
  if (samples == 0) throw DomainError("minor_arc_scan: samples must be positive");
  const ArcDissection D = minor_arcs(Btilde, delta);
  std::vector<MinorArcRow> rows;
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  for (std::size_t i = 0; i < d.size(); ++i) {
    MinorArcRow row;
    row.index = i;
    row.d = d[i];
    row.zeta = zeta[i];
    row.m = mtilde[i];
    row.length = weyl_length(zeta[i], mtilde[i], Btilde);
    struct Best {
      double sup = -1, alpha = 0;
      std::size_t hits = 0;
    };
    const auto best = parallel::map_chunks<Best>(chunks, [&](std::size_t c) {
      Best b;
      for (std::size_t j = c * kChunk; j < std::min(samples, (c + 1) * kChunk); ++j) {
        const double alpha = (static_cast<double>(j) + 0.5) / static_cast<double>(samples);
        if (D.on_major(alpha)) continue;
        ++b.hits;
        const double v = std::abs(weyl_sum(alpha, d[i], zeta[i], mtilde[i], Btilde));
        if (v > b.sup) {
          b.sup = v;
          b.alpha = alpha;
        }
      }
      return b;
    });
    for (const auto& b : best) {
      row.samples_on_minor += b.hits;
      if (b.sup > row.sup) {
        row.sup = b.sup;
        row.alpha_at_sup = b.alpha;
      }
    }
    const double sigma = orbifold::sigma(mtilde[i]).convert_to<double>();
    row.bound = std::pow(Btilde, 1.0 / mtilde[i] - delta * sigma);
    row.ratio = row.bound > 0 ? row.sup / row.bound : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace campana::circle
