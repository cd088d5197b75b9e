#include <atomic>
#include <string>

#include "kernels_internal.hpp"
#include "qts/errors.hpp"

namespace qts::simd {

bool avx2_supported() {
#ifdef QTS_BUILD_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelSet& select_kernels(const std::string& name) {
  if (name == "scalar") return detail::scalar_kernels;
#ifdef QTS_BUILD_AVX2
  if (name == "avx2") {
    if (!avx2_supported()) throw ConfigError("avx2 kernels requested but CPU lacks AVX2/FMA");
    return detail::avx2_kernels;
  }
  if (name == "auto") return avx2_supported() ? detail::avx2_kernels : detail::scalar_kernels;
#else
  if (name == "avx2") throw ConfigError("avx2 kernels not compiled in");
  if (name == "auto") return detail::scalar_kernels;
#endif
  throw ConfigError("unknown kernel set: " + name);
}

namespace {
std::atomic<const KernelSet*> g_active{nullptr};
}

const KernelSet& active_kernels() {
  const KernelSet* k = g_active.load(std::memory_order_acquire);
  if (!k) {
    k = &select_kernels("auto");
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

void set_active_kernels(const std::string& name) {
  g_active.store(&select_kernels(name), std::memory_order_release);
}

}  // namespace qts::simd
