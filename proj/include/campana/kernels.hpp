#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant; the variant is picked once at runtime from CPU
// features and can be pinned with CAMPANA_SIMD=scalar|avx2.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace campana::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Overrides the runtime choice; throws std::invalid_argument when unavailable.
void force_isa(Isa isa);

/// Structure-of-arrays batch of sample points for the slab estimator.
struct SlabBatch {
  const double* const* coords;  // coords[i][j]: coordinate i of sample j
  std::size_t dims;
  std::size_t samples;
  const double* coeff;          // d_i
  const int* exponent;          // m_i >= 1
  const double* eps;            // thresholds, strictly descending
  std::size_t n_eps;
};

struct KernelTable {
  /// out[j] += in[j]
  void (*add_u64)(std::uint64_t* out, const std::uint64_t* in, std::size_t n);
  /// sum_j w_j * e(phase_j), e(x) = exp(2 pi i x); weight may be null (all ones).
  std::complex<double> (*phase_sum)(const double* phase, const double* weight, std::size_t n);
  /// counts[e] += #{j : |sum_i coeff_i * coords[i][j]^exponent_i| <= eps[e]}
  void (*slab_count)(const SlabBatch& batch, std::uint64_t* counts);
};

const KernelTable& table(Isa isa);
inline const KernelTable& active() { return table(active_isa()); }

}  // namespace campana::kernels
