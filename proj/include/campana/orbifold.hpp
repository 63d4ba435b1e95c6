#pragma once

// Orbifold data for a diagonal hypersurface sum c_i x_i^k = 0 with boundary
// weights m_i on the coordinate hyperplanes, plus the Campana-membership and
// admissibility predicates built on it.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "campana/int_types.hpp"

namespace campana {

struct DiagonalForm {
  int k = 2;
  std::vector<std::int64_t> c;

  std::size_t size() const { return c.size(); }
  /// Throws DomainError unless k >= 1, n >= 1, all c_i != 0 and gcd(c) = 1.
  void validate() const;
};

struct OrbifoldWeights {
  std::vector<int> m;

  std::size_t size() const { return m.size(); }
  /// Sum of (m_i - 1): the length of a t-vector.
  int lambda() const;
  /// 1 - 1/m_i
  Rational epsilon(std::size_t i) const;
  void validate() const;
};

struct CampanaOrbifold {
  DiagonalForm form;
  OrbifoldWeights weights;

  std::size_t size() const { return form.size(); }
  void validate() const;
};

/// A primitive integer representative with all coordinates nonzero.
struct ProjPoint {
  std::vector<std::int64_t> x;
};

namespace orbifold {

/// Primes dividing k * prod c_i, ascending.
std::vector<std::int64_t> bad_primes(const DiagonalForm& form);

/// val_p(x_i) for the point P and boundary component {x_i = 0}.
int intersection_multiplicity(const ProjPoint& P, std::size_t i, std::int64_t p);

/// On the hypersurface and every x_i is m_i-full outside `excluded`.
/// An empty set gives the proper model over Z; bad_primes gives the smooth model.
bool is_campana_point(const ProjPoint& P, const CampanaOrbifold& O,
                      std::span<const std::int64_t> excluded = {});

std::int64_t height(const ProjPoint& P);

/// k * Gamma = sum 1/m_i - k
Rational fujita_exponent(const CampanaOrbifold& O);

/// min{2^(m-1), m(m-1)/2 + floor(sqrt(2m+2))}
std::int64_t s0(int m);

/// 1 / (2 s0(m))
Rational sigma(int m);

struct AdmissibilityReport {
  Rational theta;          // sum 1/(2 s0(k m_i)) - 1
  Rational gamma;          // sum 1/(k m_i) - 1
  Rational k_gamma;        // sum 1/m_i - k
  Rational sum_inv_km;     // sum 1/(k m_i)
  bool mean_value_condition = false;   // theta > 0
  bool convergence_condition = false;  // sum 1/(k m_i) > 3
  bool weights_sorted = false;         // 2 <= m_0 <= ... <= m_n after sorting
  bool degree_ok = false;              // k >= 2
  std::vector<int> sorted_m;

  bool admissible() const { return mean_value_condition && weights_sorted && degree_ok; }
};

AdmissibilityReport check_admissible(const CampanaOrbifold& O);

}  // namespace orbifold
}  // namespace campana
