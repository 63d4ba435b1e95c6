#include <cmath>
#include <numbers>

#include "campana/kernels.hpp"

namespace campana::kernels {

namespace {

void add_u64(std::uint64_t* out, const std::uint64_t* in, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] += in[j];
}

std::complex<double> phase_sum(const double* phase, const double* weight, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = phase[j] - std::nearbyint(phase[j]);
    const double angle = 2.0 * std::numbers::pi * r;
    const double w = weight ? weight[j] : 1.0;
    re += w * std::cos(angle);
    im += w * std::sin(angle);
  }
  return {re, im};
}

}  // namespace

// Shared with the AVX2 tail loop so both paths round identically.
double slab_form_value(const SlabBatch& b, std::size_t j) {
  double v = 0.0;
  for (std::size_t i = 0; i < b.dims; ++i) {
    const double x = b.coords[i][j];
    double p = x;
    for (int e = 1; e < b.exponent[i]; ++e) p = p * x;
    v = v + b.coeff[i] * p;
  }
  return std::fabs(v);
}

namespace {

void slab_count(const SlabBatch& b, std::uint64_t* counts) {
  for (std::size_t j = 0; j < b.samples; ++j) {
    const double a = slab_form_value(b, j);
    for (std::size_t e = 0; e < b.n_eps && a <= b.eps[e]; ++e) ++counts[e];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{add_u64, phase_sum, slab_count};
  return t;
}

}  // namespace campana::kernels
