#include <algorithm>
#include <cmath>
#include <map>

#include "campana/circle.hpp"
#include "campana/inclusion_exclusion.hpp"

namespace campana::circle {

namespace {

Rational sum_inverse(std::span<const int> m) {
  Rational s = 0;
  for (int x : m) s += Rational(1, x);
  return s;
}

Rational theta_of(std::span<const int> m) {
  Rational s = -1;
  for (int x : m) s += Rational(1, 2 * orbifold::s0(x));
  return s;
}

bool definite(std::span<const std::int64_t> d) {
  return std::all_of(d.begin(), d.end(), [](auto x) { return x > 0; }) ||
         std::all_of(d.begin(), d.end(), [](auto x) { return x < 0; });
}

double relative(double err, double value) { return value != 0.0 ? err / std::abs(value) : 0.0; }

}  // namespace

double main_term_of(const Prediction& p) {
  return p.series_value * p.integral_value * p.zeta_factor *
         std::pow(p.Btilde, p.gamma_tilde.convert_to<double>());
}

Prediction predict_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                     std::span<const int> mtilde, double Btilde, const Truncation& truncation) {
  if (d.size() != zeta.size() || d.size() != mtilde.size()) throw DomainError("predict: length mismatch");
  if (!(Btilde > 0.0)) throw DomainError("predict: Bt must be positive");
  for (auto z : zeta)
    if (z < 1) throw DomainError("predict: zeta must be positive");
  Prediction p;
  p.truncation = truncation;
  p.Btilde = Btilde;
  p.gamma_tilde = sum_inverse(mtilde) - 1;
  p.theta_tilde = theta_of(mtilde);
  p.outside_theorem = p.theta_tilde <= 0 || sum_inverse(mtilde) <= 3;
  const auto S = singular_series(d, zeta, mtilde, truncation.series);
  const auto J = singular_integral(d, mtilde, truncation.integral);
  p.series_value = S.value;
  p.series_tail = S.tail_estimate;
  p.integral_value = J.value;
  p.integral_error = J.std_error;
  for (std::size_t i = 0; i < zeta.size(); ++i)
    p.zeta_factor *= std::pow(static_cast<double>(zeta[i]), -1.0 / mtilde[i]);
  p.main_term = main_term_of(p);
  p.uncertainty = std::abs(p.main_term) * std::hypot(relative(p.series_tail, p.series_value),
                                                     relative(p.integral_error, p.integral_value));
  return p;
}

LeadingConstant leading_constant(std::span<const std::int64_t> d, const CampanaOrbifold& O,
                                 const Truncation& truncation) {
  O.validate();
  if (d.size() != O.size()) throw DomainError("leading constant: coefficient vector has the wrong length");
  if (truncation.R_cap < 1) throw DomainError("leading constant: R cap must be positive");
  const int k = O.form.k;
  const auto& w = O.weights;
  std::vector<int> mt;
  for (int m : w.m) mt.push_back(k * m);

  LeadingConstant out;
  const auto report = orbifold::check_admissible(O);
  out.admissible = report.admissible();
  if (!out.admissible) out.warnings.push_back("orbifold is not admissible; the constant is reported anyway");
  if (!report.convergence_condition) out.warnings.push_back("sum 1/(k m_i) <= 3: outside the convergence regime");

  std::vector<std::int64_t> caps = truncation.caps;
  if (caps.empty())
    for (std::int64_t c = 1; c < truncation.R_cap; c *= 2) caps.push_back(c);
  caps.push_back(truncation.R_cap);
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
  caps.erase(std::remove_if(caps.begin(), caps.end(), [&](auto c) { return c < 1 || c > truncation.R_cap; }),
             caps.end());

  const auto J = singular_integral(d, mt, truncation.integral);
  out.integral_value = J.value;
  out.integral_error = J.std_error;

  const CompleteSumTables tables(truncation.series.q_max, mt);
  std::vector<std::vector<std::size_t>> classes;
  {
    std::map<std::pair<std::int64_t, int>, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < d.size(); ++i) by_key[{d[i], mt[i]}].push_back(i);
    for (auto& [key, idx] : by_key) classes.push_back(std::move(idx));
  }
  std::map<std::vector<BigInt>, std::pair<double, double>> cache;
  std::vector<double> at_cap(caps.size(), 0.0);
  std::vector<std::size_t> terms_at_cap(caps.size(), 0);
  double tails = 0;
  const auto pairs = ie::enumerate_T(truncation.R_cap, w);
  out.pairs = pairs.size();
  for (const auto& st : pairs) {
    const int varpi = ie::varpi(st, w);
    if (varpi == 0) continue;
    ++out.pairs_nonzero;
    for (const auto& vt : ie::enumerate_V(truncation.R_cap, st, w)) {
      ++out.triples;
      STPair full = st;
      double inv_root = 1.0;  // prod gamma_i^(-1/(k m_i))
      for (std::size_t i = 0; i < w.size(); ++i) {
        inv_root /= static_cast<double>(st.s[i]);
        for (std::size_t r = 0; r < vt[i].size(); ++r) {
          full.t[i][r] *= vt[i][r];
          inv_root *= std::pow(static_cast<double>(full.t[i][r]),
                               -static_cast<double>(w.m[i] + static_cast<int>(r) + 1) / w.m[i]);
        }
      }
      const auto weights = ie::coordinate_weights(full, w, truncation.R_cap);
      const std::int64_t level = *std::max_element(weights.begin(), weights.end());
      auto gamma = ie::gamma_of(st, vt, k, w);
      // The series is symmetric under permutations of coordinates sharing (d_i, mt_i).
      for (const auto& cls : classes) {
        std::vector<BigInt> g;
        for (auto i : cls) g.push_back(gamma[i]);
        std::sort(g.begin(), g.end());
        for (std::size_t j = 0; j < cls.size(); ++j) gamma[cls[j]] = g[j];
      }
      auto it = cache.find(gamma);
      if (it == cache.end()) {
        const auto S = singular_series_qsum(d, gamma, mt, tables);
        it = cache.emplace(gamma, std::make_pair(S.value, S.tail_estimate)).first;
      }
      const double term = varpi * it->second.first * inv_root;
      tails += it->second.second * inv_root;
      for (std::size_t c = 0; c < caps.size(); ++c)
        if (level <= caps[c]) {
          at_cap[c] += term;
          ++terms_at_cap[c];
        }
    }
  }
  for (std::size_t c = 0; c < caps.size(); ++c) {
    PartialSum ps;
    ps.cap = caps[c];
    ps.value = J.value * at_cap[c];
    ps.delta = c == 0 ? ps.value : ps.value - out.partial_sums.back().value;
    ps.terms = terms_at_cap[c];
    out.partial_sums.push_back(ps);
  }
  out.series_sum = at_cap.empty() ? 0.0 : at_cap.back();
  out.value = J.value * out.series_sum;
  const double last_delta = out.partial_sums.size() > 1 ? out.partial_sums.back().delta : 0.0;
  out.uncertainty = std::sqrt(std::pow(J.std_error * out.series_sum, 2) + std::pow(last_delta, 2) +
                              std::pow(J.value * tails, 2));
  return out;
}

FullLeadingConstant leading_constant_full(const CampanaOrbifold& O, const Truncation& truncation) {
  O.validate();
  FullLeadingConstant out;
  out.k = O.form.k;
  const std::size_t n1 = O.size();
  const auto& c = O.form.c;
  if (out.k % 2 == 0) {
    auto C = leading_constant(c, O, truncation);
    const double scale = std::ldexp(1.0, static_cast<int>(n1) - 1);
    out.value = scale * C.value;
    out.uncertainty = scale * C.uncertainty;
    out.parts.emplace_back(c, std::move(C));
    return out;
  }
  if (n1 > 20) throw BudgetExceeded("leading constant: too many sign patterns");
  double var = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n1); ++mask) {
    std::vector<std::int64_t> ec(c);
    for (std::size_t i = 0; i < n1; ++i)
      if (mask >> i & 1) ec[i] = -ec[i];
    LeadingConstant C;
    if (definite(ec)) {
      C.warnings.push_back("definite form: the singular integral vanishes");
    } else {
      C = leading_constant(ec, O, truncation);
    }
    out.value += 0.5 * C.value;
    var += 0.25 * C.uncertainty * C.uncertainty;
    out.parts.emplace_back(std::move(ec), std::move(C));
  }
  out.uncertainty = std::sqrt(var);
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (x[i] > 0 && y[i] > 0) pts.emplace_back(std::log(x[i]), std::log(y[i]));
  if (pts.size() < 2) return std::nan("");
  double mx = 0, my = 0;
  for (auto [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxy / sxx;
}

namespace {

template <class Counter>
void fill_rows(Comparison& cmp, std::span<const std::int64_t> grid, double exponent, Counter&& counter) {
  std::vector<double> xs, ys;
  for (auto B : grid) {
    ComparisonRow row;
    row.B = B;
    row.predicted = cmp.constant * std::pow(static_cast<double>(B), exponent);
    try {
      row.count = counter(B);
      row.ratio = row.predicted != 0.0 ? static_cast<double>(*row.count) / row.predicted : 0.0;
      if (*row.count > 0) {
        xs.push_back(static_cast<double>(B));
        ys.push_back(static_cast<double>(*row.count));
      }
    } catch (const BudgetExceeded& e) {
      row.status = std::string("budget: ") + e.what();
    }
    cmp.rows.push_back(std::move(row));
  }
  cmp.fit_points = xs.size();
  cmp.fitted_exponent = loglog_slope(xs, ys);
  cmp.expected_exponent = exponent;
}

}  // namespace

Comparison compare_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                     std::span<const int> mtilde, std::span<const std::int64_t> grid, const Truncation& truncation,
                     const enumerate::Budget& budget) {
  if (grid.empty()) throw DomainError("compare: empty grid");
  const auto P = predict_M(d, zeta, mtilde, 1.0, truncation);
  Comparison cmp;
  cmp.constant = P.main_term;
  cmp.constant_uncertainty = P.uncertainty;
  fill_rows(cmp, grid, P.gamma_tilde.convert_to<double>(), [&](std::int64_t B) {
    return enumerate::count_M(d, zeta, mtilde, B, enumerate::Method::HistogramConvolution, budget).count;
  });
  return cmp;
}

Comparison compare_orbifold(const CampanaOrbifold& O, std::span<const std::int64_t> grid,
                            const Truncation& truncation, const enumerate::Budget& budget) {
  if (grid.empty()) throw DomainError("compare: empty grid");
  const auto C = leading_constant_full(O, truncation);
  Comparison cmp;
  cmp.constant = C.value;
  cmp.constant_uncertainty = C.uncertainty;
  fill_rows(cmp, grid, orbifold::fujita_exponent(O).convert_to<double>(),
            [&](std::int64_t B) { return enumerate::count_campana(O, B, budget); });
  return cmp;
}

}  // namespace campana::circle
