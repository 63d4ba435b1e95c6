#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "campana/kernels.hpp"

namespace campana::kernels {

const KernelTable& scalar_table();
#ifdef CAMPANA_HAVE_AVX2_TU
const KernelTable& avx2_table();
#endif

namespace {

Isa detect() {
  if (const char* env = std::getenv("CAMPANA_SIMD")) {
    std::string_view want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int> g_forced{-1};

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#ifdef CAMPANA_HAVE_AVX2_TU
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  int forced = g_forced.load();
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument(std::string("ISA not available: ") + isa_name(isa));
  g_forced = static_cast<int>(isa);
}

const KernelTable& table(Isa isa) {
#ifdef CAMPANA_HAVE_AVX2_TU
  if (isa == Isa::Avx2) return avx2_table();
#endif
  (void)isa;
  return scalar_table();
}

}  // namespace campana::kernels
