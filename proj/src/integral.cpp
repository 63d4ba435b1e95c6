#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "campana/circle.hpp"
#include "campana/kernels.hpp"
#include "campana/parallel.hpp"
#include "campana/rng.hpp"

namespace campana::circle {

namespace {

using boost::math::quadrature::gauss;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kContourThreshold = 40.0;
constexpr std::size_t kSlabChunk = 1 << 16;

void check_integral_input(std::span<const std::int64_t> d, std::span<const int> mtilde) {
  if (d.size() != mtilde.size() || d.empty()) throw DomainError("singular integral: length mismatch");
  for (auto x : d)
    if (x == 0) throw DomainError("singular integral: coefficients must be nonzero");
  for (int m : mtilde)
    if (m < 1) throw DomainError("singular integral: exponents must be positive");
}

bool is_definite(std::span<const std::int64_t> d) {
  return std::all_of(d.begin(), d.end(), [](auto x) { return x > 0; }) ||
         std::all_of(d.begin(), d.end(), [](auto x) { return x < 0; });
}

// First row of (X^T X)^-1 X^T for the design X_jt = basis_t(x_j): the weights
// that map observations to the fitted coefficient of basis_0.
std::vector<double> intercept_weights(const std::vector<double>& x,
                                      const std::vector<std::function<double(double)>>& basis) {
  const std::size_t T = basis.size(), K = x.size();
  if (K < T) throw DomainError("slab integral: eps ladder shorter than the fit basis");
  std::vector<std::vector<double>> X(K, std::vector<double>(T));
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t t = 0; t < T; ++t) X[j][t] = basis[t](x[j]);
  // Solve (X^T X) z = e_0, then w = X z.
  std::vector<std::vector<double>> A(T, std::vector<double>(T + 1, 0.0));
  for (std::size_t a = 0; a < T; ++a) {
    for (std::size_t b = 0; b < T; ++b)
      for (std::size_t j = 0; j < K; ++j) A[a][b] += X[j][a] * X[j][b];
    A[a][T] = a == 0 ? 1.0 : 0.0;
  }
  for (std::size_t c = 0; c < T; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < T; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    if (A[c][c] == 0.0) throw NumericalDisagreement("slab integral: singular fit design");
    for (std::size_t r = 0; r < T; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= T; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<double> w(K, 0.0);
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t t = 0; t < T; ++t) w[j] += X[j][t] * A[t][T] / A[t][t];
  return w;
}

IntegralResult slab(std::span<const std::int64_t> d, std::span<const int> mtilde, const IntegralOptions& opt) {
  if (opt.samples < 2) throw DomainError("slab integral: need at least two samples");
  if (!(opt.eps_scale > 0.0)) throw DomainError("slab integral: eps scale must be positive");
  if (opt.eps_first < 0 || opt.eps_last <= opt.eps_first)
    throw DomainError("slab integral: eps ladder needs at least two rungs");
  const std::size_t K = static_cast<std::size_t>(opt.eps_last - opt.eps_first + 1);
  std::vector<double> eps(K);
  for (std::size_t j = 0; j < K; ++j) eps[j] = opt.eps_scale * std::ldexp(1.0, -(opt.eps_first + static_cast<int>(j)));

  const std::size_t dims = d.size();
  std::vector<double> coeff(d.begin(), d.end());
  const std::vector<int> expo(mtilde.begin(), mtilde.end());
  const CounterRng rng(opt.seed);
  const std::size_t chunks = (opt.samples + kSlabChunk - 1) / kSlabChunk;
  const auto& kernel = kernels::active();
  const auto per_chunk = parallel::map_chunks<std::vector<std::uint64_t>>(chunks, [&](std::size_t c) {
    const std::size_t lo = c * kSlabChunk;
    const std::size_t count = std::min<std::size_t>(kSlabChunk, opt.samples - lo);
    std::vector<std::vector<double>> coords(dims, std::vector<double>(count));
    for (std::size_t j = 0; j < count; ++j)
      for (std::size_t i = 0; i < dims; ++i) coords[i][j] = rng.uniform(c, j * dims + i);
    std::vector<const double*> ptrs(dims);
    for (std::size_t i = 0; i < dims; ++i) ptrs[i] = coords[i].data();
    const kernels::SlabBatch batch{ptrs.data(), dims, count, coeff.data(), expo.data(), eps.data(), K};
    std::vector<std::uint64_t> counts(K, 0);
    kernel.slab_count(batch, counts.data());
    return counts;
  });
  std::vector<std::uint64_t> hits(K, 0);
  for (const auto& v : per_chunk)
    for (std::size_t j = 0; j < K; ++j) hits[j] += v[j];

  const auto N = static_cast<double>(opt.samples);
  IntegralResult out;
  out.options = opt;
  out.definite = is_definite(d);
  // Least-squares fit of the ladder in the basis {1, eps} plus eps^(kappa - 1)
  // when 0 < kappa - 1 < 1, kappa = sum 1/m_i; that power is the scaling of the
  // slab near the origin and dominates the linear term there.
  double kappa = 0;
  for (int m : mtilde) kappa += 1.0 / m;
  std::vector<std::function<double(double)>> basis{[](double) { return 1.0; }, [](double e) { return e; }};
  if (kappa - 1.0 > 0.0 && kappa - 1.0 < 1.0)
    basis.push_back([p = kappa - 1.0](double e) { return std::pow(e, p); });
  const std::vector<double> w = intercept_weights(eps, basis);
  const auto slope_w = [&] {
    std::vector<std::function<double(double)>> b2{basis[1], basis[0]};
    for (std::size_t t = 2; t < basis.size(); ++t) b2.push_back(basis[t]);
    return intercept_weights(eps, b2);
  }();
  double intercept = 0, slope = 0;
  for (std::size_t j = 0; j < K; ++j) {
    const double y = static_cast<double>(hits[j]) / (N * 2.0 * eps[j]);
    out.ladder.emplace_back(eps[j], y);
    intercept += w[j] * y;
    slope += slope_w[j] * y;
  }
  // The intercept is the sample mean of g(level), level = number of rungs containing the sample.
  std::vector<double> g(K + 1, 0.0);
  for (std::size_t L = 1; L <= K; ++L) g[L] = g[L - 1] + w[L - 1] / (2.0 * eps[L - 1]);
  double var = 0;
  for (std::size_t L = 0; L <= K; ++L) {
    const std::uint64_t above = L == 0 ? opt.samples : hits[L - 1];
    const std::uint64_t at = above - (L == K ? 0 : hits[L]);
    var += static_cast<double>(at) * (g[L] - intercept) * (g[L] - intercept);
  }
  var /= (N - 1.0);
  out.value = std::max(0.0, intercept);
  out.std_error = std::sqrt(var / N);
  out.slope = slope;
  return out;
}

// int_0^inf (1 + i t / a)^(1/m - 1) e^(-t) dt
cplx laplace_remainder(double a, int m) {
  const double p = 1.0 / m - 1.0;
  auto f = [&](double t) { return std::pow(cplx(1.0, t / a), p) * std::exp(-t); };
  return gauss<double, 20>::integrate(f, 0.0, 5.0) + gauss<double, 20>::integrate(f, 5.0, 15.0) +
         gauss<double, 20>::integrate(f, 15.0, 50.0);
}

}  // namespace

cplx oscillatory_inner(double mu, int m) {
  if (m < 1) throw DomainError("oscillatory_inner: m must be positive");
  if (mu == 0.0) return 1.0;
  if (mu < 0.0) return std::conj(oscillatory_inner(-mu, m));
  const double a = kTwoPi * mu;
  if (a <= kContourThreshold || m == 1) {
    if (m == 1) return (std::exp(cplx(0.0, a)) - 1.0) / cplx(0.0, a);
    const int panels = static_cast<int>(std::ceil(a * m / 2.0)) + 4;
    cplx sum = 0;
    for (int k = 0; k < panels; ++k) {
      const double lo = static_cast<double>(k) / panels, hi = static_cast<double>(k + 1) / panels;
      sum += gauss<double, 20>::integrate([&](double x) { return std::exp(cplx(0.0, a * std::pow(x, m))); }, lo, hi);
    }
    return sum;
  }
  const double inv = 1.0 / m;
  const cplx stationary = std::tgamma(1.0 + inv) * std::polar(1.0, std::numbers::pi * inv / 2.0) * std::pow(a, -inv);
  const cplx endpoint = inv * std::exp(cplx(0.0, a)) * cplx(0.0, 1.0) * laplace_remainder(a, m) / a;
  return stationary - endpoint;
}

namespace {

IntegralResult oscillatory(std::span<const std::int64_t> d, std::span<const int> mtilde, const IntegralOptions& opt) {
  if (!(opt.lambda_cutoff > 0.0) || !(opt.initial_step > 0.0) || !(opt.rel_tol > 0.0) || opt.max_refinements < 1)
    throw DomainError("oscillatory integral: invalid cutoff, step or tolerance");
  double kappa = 0;
  for (int m : mtilde) kappa += 1.0 / m;
  if (kappa <= 1.0) throw DomainError("oscillatory integral: sum 1/m <= 1, the lambda integral diverges");

  const double Lambda = opt.lambda_cutoff;
  auto F = [&](double lambda) {
    cplx prod = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) prod *= oscillatory_inner(lambda * static_cast<double>(d[i]), mtilde[i]);
    return prod;
  };
  auto integrate = [&](double h) {
    const auto panels = static_cast<std::size_t>(std::ceil(Lambda / h));
    const double width = Lambda / static_cast<double>(panels);
    const auto parts = parallel::map_chunks<double>(panels, [&](std::size_t k) {
      const double lo = width * static_cast<double>(k);
      return gauss<double, 8>::integrate([&](double x) { return F(x).real(); }, lo, lo + width);
    });
    double s = 0;
    for (double v : parts) s += v;
    return 2.0 * s;
  };

  IntegralResult out;
  out.options = opt;
  out.definite = is_definite(d);
  double h = opt.initial_step;
  double prev = integrate(h);
  double cur = prev;
  int r = 0;
  for (; r < opt.max_refinements; ++r) {
    h /= 2.0;
    cur = integrate(h);
    if (std::abs(cur - prev) <= opt.rel_tol * std::max(std::abs(cur), 1e-12)) break;
    prev = cur;
  }
  // Leading stationary-phase term of the integrand, integrated over |lambda| > Lambda.
  cplx P = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double inv = 1.0 / mtilde[i];
    const double sgn = d[i] > 0 ? 1.0 : -1.0;
    P *= std::tgamma(1.0 + inv) * std::polar(1.0, sgn * std::numbers::pi * inv / 2.0) *
         std::pow(kTwoPi * std::abs(static_cast<double>(d[i])), -inv);
  }
  out.tail_correction = 2.0 * P.real() * std::pow(Lambda, 1.0 - kappa) / (kappa - 1.0);
  out.value = cur + out.tail_correction;
  out.std_error = std::abs(cur - prev) + 0.5 * std::abs(out.tail_correction) * std::pow(Lambda, -0.5);
  out.last_step = h;
  out.refinements = r + 1;
  return out;
}

}  // namespace

IntegralResult singular_integral(std::span<const std::int64_t> d, std::span<const int> mtilde,
                                 const IntegralOptions& options) {
  check_integral_input(d, mtilde);
  return options.method == IntegralMethod::Slab ? slab(d, mtilde, options) : oscillatory(d, mtilde, options);
}

CrossCheck cross_check_integral(std::span<const std::int64_t> d, std::span<const int> mtilde,
                                const IntegralOptions& options, double sigmas) {
  CrossCheck cc;
  IntegralOptions o = options;
  o.method = IntegralMethod::Slab;
  cc.slab = singular_integral(d, mtilde, o);
  o.method = IntegralMethod::Oscillatory;
  cc.oscillatory = singular_integral(d, mtilde, o);
  cc.difference = cc.slab.value - cc.oscillatory.value;
  cc.combined_error = std::hypot(cc.slab.std_error, cc.oscillatory.std_error);
  cc.agree = std::abs(cc.difference) <= sigmas * cc.combined_error;
  return cc;
}

}  // namespace campana::circle
