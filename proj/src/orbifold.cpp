#include "campana/orbifold.hpp"

#include <algorithm>
#include <numeric>

#include "campana/arith.hpp"

namespace campana {

void DiagonalForm::validate() const {
  if (k < 1) throw DomainError("diagonal form: degree k must be at least 1");
  if (c.size() < 2) throw DomainError("diagonal form: need at least two coefficients");
  std::int64_t g = 0;
  for (auto ci : c) {
    if (ci == 0) throw DomainError("diagonal form: coefficients must be nonzero");
    g = std::gcd(g, ci);
  }
  if (g != 1) throw DomainError("diagonal form: coefficients must be coprime");
}

int OrbifoldWeights::lambda() const {
  int total = 0;
  for (int mi : m) total += mi - 1;
  return total;
}

Rational OrbifoldWeights::epsilon(std::size_t i) const { return Rational(1) - Rational(1, m.at(i)); }

void OrbifoldWeights::validate() const {
  for (int mi : m) {
    if (mi < 2) throw DomainError("orbifold weights: every m_i must be at least 2");
  }
}

void CampanaOrbifold::validate() const {
  form.validate();
  weights.validate();
  if (form.size() != weights.size())
    throw DomainError("orbifold: coefficient and weight vectors differ in length");
}

namespace orbifold {

std::vector<std::int64_t> bad_primes(const DiagonalForm& form) {
  std::vector<std::int64_t> primes;
  auto add = [&](std::int64_t v) {
    for (auto [p, e] : arith::factorize(v)) primes.push_back(p);
  };
  add(form.k);
  for (auto ci : form.c) add(ci);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

int intersection_multiplicity(const ProjPoint& P, std::size_t i, std::int64_t p) {
  if (i >= P.x.size()) throw DomainError("intersection_multiplicity: coordinate index out of range");
  return arith::p_adic_valuation(P.x[i], p);
}

bool is_campana_point(const ProjPoint& P, const CampanaOrbifold& O, std::span<const std::int64_t> excluded) {
  if (P.x.size() != O.size()) return false;
  i128 total = 0;
  for (std::size_t i = 0; i < P.x.size(); ++i) {
    total = checked_add(total, checked_mul(O.form.c[i], checked_pow(P.x[i], O.form.k)));
  }
  if (total != 0) return false;
  for (std::size_t i = 0; i < P.x.size(); ++i) {
    if (!arith::is_m_full(P.x[i], O.weights.m[i], excluded)) return false;
  }
  return true;
}

std::int64_t height(const ProjPoint& P) {
  std::int64_t h = 0;
  for (auto xi : P.x) h = std::max(h, xi < 0 ? -xi : xi);
  return h;
}

Rational fujita_exponent(const CampanaOrbifold& O) {
  Rational total = -O.form.k;
  for (int mi : O.weights.m) total += Rational(1, mi);
  return total;
}

std::int64_t s0(int m) {
  if (m < 2) throw DomainError("s0: m must be at least 2");
  std::int64_t root = arith::iroot(2 * static_cast<std::int64_t>(m) + 2, 2);
  std::int64_t quadratic = static_cast<std::int64_t>(m) * (m - 1) / 2 + root;
  if (m - 1 >= 62) return quadratic;
  return std::min<std::int64_t>(std::int64_t{1} << (m - 1), quadratic);
}

Rational sigma(int m) { return Rational(1, 2 * s0(m)); }

AdmissibilityReport check_admissible(const CampanaOrbifold& O) {
  AdmissibilityReport rep;
  const int k = O.form.k;
  rep.sorted_m = O.weights.m;
  std::sort(rep.sorted_m.begin(), rep.sorted_m.end());
  rep.degree_ok = k >= 2;
  rep.weights_sorted = !rep.sorted_m.empty() && rep.sorted_m.front() >= 2;
  Rational theta = -1, sum_inv = 0, inv_m = 0;
  for (int mi : rep.sorted_m) {
    if (mi < 1) throw DomainError("check_admissible: weights must be positive");
    sum_inv += Rational(1, static_cast<std::int64_t>(k) * mi);
    inv_m += Rational(1, mi);
    if (k * mi >= 2) theta += Rational(1, 2 * s0(k * mi));
  }
  rep.theta = theta;
  rep.sum_inv_km = sum_inv;
  rep.gamma = sum_inv - 1;
  rep.k_gamma = inv_m - k;
  rep.mean_value_condition = theta > 0;
  rep.convergence_condition = sum_inv > 3;
  return rep;
}

}  // namespace orbifold
}  // namespace campana
