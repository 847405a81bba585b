#include <atomic>
#include <cstdlib>
#include <cstring>

#include "fredev/simd.hpp"

namespace fredev::simd {

namespace {

const KernelTable kScalarTable{Backend::Scalar, &scalar::axpy, &scalar::dotu};
#if defined(FREDEV_HAS_AVX2_TU)
const KernelTable kAvx2Table{Backend::Avx2, &avx2::axpy, &avx2::dotu};
#endif

const KernelTable* initial_table() {
  const char* env = std::getenv("FREDEV_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalarTable;
  return &kernels_for(avx2_available() ? Backend::Avx2 : Backend::Scalar);
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool avx2_available() {
#if defined(FREDEV_HAS_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const KernelTable& kernels_for(Backend backend) {
#if defined(FREDEV_HAS_AVX2_TU)
  if (backend == Backend::Avx2 && avx2_available()) return kAvx2Table;
#endif
  (void)backend;
  return kScalarTable;
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

Backend set_backend(Backend backend) {
  const KernelTable* previous = active().exchange(&kernels_for(backend));
  return previous->backend;
}

std::string backend_name(Backend backend) { return backend == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace fredev::simd
