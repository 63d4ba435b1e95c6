#include <immintrin.h>

#include <numbers>

#include "campana/kernels.hpp"

namespace campana::kernels {

double slab_form_value(const SlabBatch& b, std::size_t j);

namespace {

void add_u64(std::uint64_t* out, const std::uint64_t* in, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    auto* o = reinterpret_cast<__m256i*>(out + j);
    const auto* i = reinterpret_cast<const __m256i*>(in + j);
    _mm256_storeu_si256(o, _mm256_add_epi64(_mm256_loadu_si256(o), _mm256_loadu_si256(i)));
  }
  for (; j < n; ++j) out[j] += in[j];
}

inline __m256d horner(__m256d x2, const double* c, int n) {
  __m256d acc = _mm256_set1_pd(c[n - 1]);
  for (int i = n - 2; i >= 0; --i) acc = _mm256_add_pd(_mm256_mul_pd(acc, x2), _mm256_set1_pd(c[i]));
  return acc;
}

// cos/sin of 2*pi*phase: reduce to an octant |theta| <= pi/4, Taylor series
// to degree 16, then rotate by the quadrant.
inline void sincos_turns(__m256d phase, __m256d& cos_out, __m256d& sin_out) {
  static constexpr double kSin[8] = {1.0,
                                     -1.0 / 6.0,
                                     1.0 / 120.0,
                                     -1.0 / 5040.0,
                                     1.0 / 362880.0,
                                     -1.0 / 39916800.0,
                                     1.0 / 6227020800.0,
                                     -1.0 / 1307674368000.0};
  static constexpr double kCos[9] = {1.0,
                                     -1.0 / 2.0,
                                     1.0 / 24.0,
                                     -1.0 / 720.0,
                                     1.0 / 40320.0,
                                     -1.0 / 3628800.0,
                                     1.0 / 479001600.0,
                                     -1.0 / 87178291200.0,
                                     1.0 / 20922789888000.0};
  constexpr int kRound = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  const __m256d r = _mm256_sub_pd(phase, _mm256_round_pd(phase, kRound));
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(r, _mm256_set1_pd(4.0)), kRound);
  const __m256d f = _mm256_sub_pd(r, _mm256_mul_pd(q, _mm256_set1_pd(0.25)));
  const __m256d theta = _mm256_mul_pd(f, _mm256_set1_pd(2.0 * std::numbers::pi));
  const __m256d t2 = _mm256_mul_pd(theta, theta);
  const __m256d s = _mm256_mul_pd(theta, horner(t2, kSin, 8));
  const __m256d c = horner(t2, kCos, 9);

  // quadrant in {0,1,2,3}
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d qm = _mm256_sub_pd(q, _mm256_mul_pd(four, _mm256_floor_pd(_mm256_div_pd(q, four))));
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  const __m256d swap = _mm256_or_pd(_mm256_cmp_pd(qm, one, _CMP_EQ_OQ), _mm256_cmp_pd(qm, three, _CMP_EQ_OQ));
  const __m256d neg_c = _mm256_or_pd(_mm256_cmp_pd(qm, one, _CMP_EQ_OQ), _mm256_cmp_pd(qm, two, _CMP_EQ_OQ));
  const __m256d neg_s = _mm256_cmp_pd(qm, two, _CMP_GE_OQ);
  const __m256d sign = _mm256_set1_pd(-0.0);
  cos_out = _mm256_xor_pd(_mm256_blendv_pd(c, s, swap), _mm256_and_pd(neg_c, sign));
  sin_out = _mm256_xor_pd(_mm256_blendv_pd(s, c, swap), _mm256_and_pd(neg_s, sign));
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

std::complex<double> phase_sum(const double* phase, const double* weight, std::size_t n) {
  __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d c, s;
    sincos_turns(_mm256_loadu_pd(phase + j), c, s);
    if (weight) {
      const __m256d w = _mm256_loadu_pd(weight + j);
      c = _mm256_mul_pd(c, w);
      s = _mm256_mul_pd(s, w);
    }
    re = _mm256_add_pd(re, c);
    im = _mm256_add_pd(im, s);
  }
  if (j < n) {
    alignas(32) double ph[4] = {0, 0, 0, 0}, w[4] = {0, 0, 0, 0};
    for (std::size_t l = 0; j + l < n; ++l) {
      ph[l] = phase[j + l];
      w[l] = weight ? weight[j + l] : 1.0;
    }
    __m256d c, s;
    sincos_turns(_mm256_load_pd(ph), c, s);
    const __m256d wv = _mm256_load_pd(w);
    re = _mm256_add_pd(re, _mm256_mul_pd(c, wv));
    im = _mm256_add_pd(im, _mm256_mul_pd(s, wv));
  }
  return {hsum(re), hsum(im)};
}

void slab_count(const SlabBatch& b, std::uint64_t* counts) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t j = 0;
  for (; j + 4 <= b.samples; j += 4) {
    __m256d v = _mm256_setzero_pd();
    for (std::size_t i = 0; i < b.dims; ++i) {
      const __m256d x = _mm256_loadu_pd(b.coords[i] + j);
      __m256d p = x;
      for (int e = 1; e < b.exponent[i]; ++e) p = _mm256_mul_pd(p, x);
      v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_set1_pd(b.coeff[i]), p));
    }
    const __m256d a = _mm256_and_pd(v, abs_mask);
    for (std::size_t e = 0; e < b.n_eps; ++e) {
      const int mask = _mm256_movemask_pd(_mm256_cmp_pd(a, _mm256_set1_pd(b.eps[e]), _CMP_LE_OQ));
      if (mask == 0) break;
      counts[e] += static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
  }
  for (; j < b.samples; ++j) {
    const double a = slab_form_value(b, j);
    for (std::size_t e = 0; e < b.n_eps && a <= b.eps[e]; ++e) ++counts[e];
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{add_u64, phase_sum, slab_count};
  return t;
}

}  // namespace campana::kernels
