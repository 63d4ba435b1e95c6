#pragma once

// Analytic side of the circle method: Weyl and complete exponential sums,
// the major/minor arc dissection, singular series and singular integral,
// the main-term prediction for the counting function M_{d,zeta}, the
// orbifold leading constants, and empirical-vs-predicted comparison.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "campana/enumerate.hpp"
#include "campana/int_types.hpp"
#include "campana/orbifold.hpp"

namespace campana::circle {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Exponential sums

/// sum_{1 <= u <= (Bt/zeta)^(1/m)} e(alpha d zeta u^m). The product alpha * n
/// is reduced mod 1 exactly from the binary expansion of alpha.
cplx weyl_sum(double alpha, std::int64_t d, std::int64_t zeta, int m, double Btilde);

/// Same sum at a rational point a/q, reduced exactly mod q.
cplx weyl_sum_rational(std::int64_t a, std::int64_t q, std::int64_t d, std::int64_t zeta, int m, double Btilde);

/// floor((Bt/zeta)^(1/m)), computed exactly.
std::int64_t weyl_length(std::int64_t zeta, int m, double Btilde);

/// sum_{r=1}^q e(a coeff r^m / q)
cplx complete_sum(std::int64_t a, std::int64_t q, std::int64_t coeff, int m);

/// T_{q,m}(b) for b = 0 .. q-1.
std::vector<cplx> complete_sum_row(std::int64_t q, int m, bool parallel_rows = false);

/// Complete sums T_{q,m}(b) = sum_{r=1}^q e(b r^m / q) for every residue b,
/// for all q <= q_max and each requested exponent.
class CompleteSumTables {
 public:
  CompleteSumTables(std::int64_t q_max, std::span<const int> exponents);
  std::int64_t q_max() const { return q_max_; }
  /// T_{q,m}(b mod q)
  cplx value(std::int64_t q, int m, std::int64_t b) const;
  /// The whole row b = 0 .. q-1.
  const std::vector<cplx>& row(std::int64_t q, int m) const;
  bool has(int m) const;

 private:
  std::int64_t q_max_;
  std::vector<int> exponents_;
  // tables_[e][q] has q entries
  std::vector<std::vector<std::vector<cplx>>> tables_;
};

// ---------------------------------------------------------------------------
// Arc dissection

struct MajorArc {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double lo = 0;
  double hi = 0;
};

struct ArcDissection {
  double Btilde = 0;
  double delta = 0;
  double Q = 0;
  double radius = 0;  // Bt^(delta - 1)
  std::vector<MajorArc> arcs;
  std::vector<std::pair<double, double>> merged;  // disjoint, ascending, within [0, 1]
  double major_measure = 0;
  double minor_measure = 0;
  double measure_bound = 0;  // sum_{q <= Q} (q + 1) * 2 radius
  bool on_major(double alpha) const;
};

ArcDissection minor_arcs(double Btilde, double delta);

struct MinorArcRow {
  std::size_t index = 0;
  std::int64_t d = 0;
  std::int64_t zeta = 1;
  int m = 2;
  std::int64_t length = 0;   // floor(Bt_i)
  double sup = 0;            // sampled sup of |S_i| over minor arcs
  double alpha_at_sup = 0;
  double bound = 0;          // Bt^(1/m - delta sigma(m))
  double ratio = 0;          // sup / bound
  std::size_t samples_on_minor = 0;
};

std::vector<MinorArcRow> minor_arc_scan(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                                        std::span<const int> mtilde, double Btilde, double delta,
                                        std::size_t samples);

// ---------------------------------------------------------------------------
// Singular series

enum class SeriesMode { QSum, Euler };

struct SeriesOptions {
  SeriesMode mode = SeriesMode::QSum;
  std::int64_t q_max = 500;
  std::int64_t prime_cap = 101;
  int level = 3;
};

struct SeriesResult {
  SeriesOptions options;
  double value = 0;
  double imag_residual = 0;   // |imaginary part| of the truncated sum, a rounding diagnostic
  double tail_estimate = 0;   // heuristic size of the omitted tail (q-sum mode)
  Rational gamma_tilde;
  bool outside_theorem = false;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::int64_t, double>> local_factors;  // Euler mode
};

/// A(q) = q^-(n+1) sum_{a mod q, (a,q)=1} prod_i T_{q,m_i}(a coeff_i); coeff_i = d_i zeta_i mod q.
cplx series_term(std::int64_t q, std::span<const std::int64_t> coeff_mod_q, std::span<const int> mtilde,
                 const CompleteSumTables& tables);

/// Throws DomainError when fewer than two variables are given or
/// sum 1/mt_i <= 2, where the series does not converge absolutely.
SeriesResult singular_series(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                             std::span<const int> mtilde, const SeriesOptions& options = {});

/// Same with big zeta (reduced modulo each q as needed), reusing prebuilt tables.
SeriesResult singular_series_qsum(std::span<const std::int64_t> d, std::span<const BigInt> zeta,
                                  std::span<const int> mtilde, const CompleteSumTables& tables);

/// #{u mod p^l : sum d_i zeta_i u_i^m_i = 0 mod p^l} / p^(l n), exact.
Rational local_density(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                       std::span<const int> mtilde, std::int64_t p, int level,
                       const enumerate::Budget& budget = {});

/// The same density in floating point via FFT over Z/p^l.
double local_density_fft(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                         std::span<const int> mtilde, std::int64_t p, int level);

/// 1 + sum_{j=1}^{level} A(p^j), built from complete sums.
cplx local_factor_from_sums(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                            std::span<const int> mtilde, std::int64_t p, int level);

// ---------------------------------------------------------------------------
// Singular integral

enum class IntegralMethod { Slab, Oscillatory };

struct IntegralOptions {
  IntegralMethod method = IntegralMethod::Slab;
  // slab
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  double eps_scale = 1.0;
  int eps_first = 4;   // ladder eps_scale * 2^-first ... 2^-last
  int eps_last = 10;
  // oscillatory
  double lambda_cutoff = 1000.0;
  double initial_step = 0.5;
  double rel_tol = 1e-3;
  int max_refinements = 8;
};

struct IntegralResult {
  IntegralOptions options;
  double value = 0;
  double std_error = 0;
  std::vector<std::pair<double, double>> ladder;  // (eps, slab volume / 2 eps), slab only
  double slope = 0;                               // fitted d/d eps, slab only
  double tail_correction = 0;                     // oscillatory only
  double last_step = 0;                           // oscillatory only
  int refinements = 0;
  bool definite = false;
};

/// int_0^1 e(mu xi^m) d xi
cplx oscillatory_inner(double mu, int m);

IntegralResult singular_integral(std::span<const std::int64_t> d, std::span<const int> mtilde,
                                 const IntegralOptions& options = {});

struct CrossCheck {
  IntegralResult slab;
  IntegralResult oscillatory;
  double difference = 0;
  double combined_error = 0;  // sqrt(se_slab^2 + se_osc^2)
  bool agree = false;         // |difference| <= sigmas * combined_error
};

CrossCheck cross_check_integral(std::span<const std::int64_t> d, std::span<const int> mtilde,
                                const IntegralOptions& options = {}, double sigmas = 3.0);

// ---------------------------------------------------------------------------
// Predictions

struct Truncation {
  SeriesOptions series;
  IntegralOptions integral;
  std::int64_t R_cap = 64;            // leading constants: T and V enumerated up to this cap
  std::vector<std::int64_t> caps;     // partial sums reported at these caps (ascending, <= R_cap)
};

struct Prediction {
  Rational gamma_tilde;
  Rational theta_tilde;
  double series_value = 0;
  double series_tail = 0;
  double integral_value = 0;
  double integral_error = 0;
  double zeta_factor = 1;   // prod zeta_i^(-1/mt_i)
  double Btilde = 0;
  double main_term = 0;
  double uncertainty = 0;
  bool outside_theorem = false;
  Truncation truncation;
};

Prediction predict_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                     std::span<const int> mtilde, double Btilde, const Truncation& truncation = {});

/// Recomputes the main term from the stored fields.
double main_term_of(const Prediction& p);

struct PartialSum {
  std::int64_t cap = 0;
  double value = 0;
  double delta = 0;  // change from the previous cap
  std::size_t terms = 0;
};

struct LeadingConstant {
  double value = 0;
  double uncertainty = 0;
  double integral_value = 0;
  double integral_error = 0;
  double series_sum = 0;  // the (s, t, vt) double sum before the integral factor
  std::vector<PartialSum> partial_sums;
  std::size_t pairs = 0;          // |T_cap|
  std::size_t pairs_nonzero = 0;  // with varpi != 0
  std::size_t triples = 0;
  bool admissible = false;
  std::vector<std::string> warnings;
};

/// C_d: the integral times the truncated sum of varpi(s,t) S_{d,gamma} prod gamma_i^(-1/(k m_i)).
LeadingConstant leading_constant(std::span<const std::int64_t> d, const CampanaOrbifold& O,
                                 const Truncation& truncation = {});

struct FullLeadingConstant {
  double value = 0;
  double uncertainty = 0;
  int k = 0;
  std::vector<std::pair<std::vector<std::int64_t>, LeadingConstant>> parts;  // (epsilon c, C_{epsilon c})
};

/// C = 2^n C_c for even k, and 1/2 sum_epsilon C_{epsilon c} for odd k.
FullLeadingConstant leading_constant_full(const CampanaOrbifold& O, const Truncation& truncation = {});

struct ComparisonRow {
  std::int64_t B = 0;
  std::optional<std::uint64_t> count;  // empty when the budget was exceeded
  double predicted = 0;
  double ratio = 0;
  std::string status = "ok";
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double fitted_exponent = 0;
  double expected_exponent = 0;
  std::size_t fit_points = 0;
  double constant = 0;  // the predicted leading coefficient
  double constant_uncertainty = 0;
};

/// Exact count_M against predict_M over a grid of Bt.
Comparison compare_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                     std::span<const int> mtilde, std::span<const std::int64_t> grid,
                     const Truncation& truncation = {}, const enumerate::Budget& budget = {});

/// Exact Campana-point counts against C B^(k Gamma) over a grid of B.
Comparison compare_orbifold(const CampanaOrbifold& O, std::span<const std::int64_t> grid,
                            const Truncation& truncation = {}, const enumerate::Budget& budget = {});

/// Least-squares slope of log y on log x over points with y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace campana::circle
