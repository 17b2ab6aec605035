#include <atomic>
#include <cstdlib>
#include <string>

#include "kinwave/simd.hpp"

namespace kinwave::simd {
namespace {

std::atomic<const Kernels*> g_override{nullptr};

const Kernels* pick() {
  const char* env = std::getenv("KINWAVE_SIMD");
  const std::string mode = env ? env : "auto";
  if (mode == "scalar") return &scalar_kernels;
#if KINWAVE_HAVE_AVX2
  if (mode == "avx2") {
    if (!avx2_supported()) return &scalar_kernels;
    return &avx2_kernels;
  }
  if (avx2_supported()) return &avx2_kernels;
#endif
  return &scalar_kernels;
}

}  // namespace

bool avx2_supported() {
#if KINWAVE_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
#else
  return false;
#endif
}

const Kernels& active() {
  const Kernels* o = g_override.load(std::memory_order_acquire);
  if (o) return *o;
  static const Kernels* chosen = pick();
  return *chosen;
}

void set_active_for_testing(const Kernels* k) {
  g_override.store(k, std::memory_order_release);
}

std::string describe() { return active().name; }

}  // namespace kinwave::simd
