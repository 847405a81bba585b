#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace fredev::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

// Kernel signatures. All pointers address interleaved (re, im) complex doubles.
using AxpyFn = void (*)(std::size_t n, cplx a, const cplx* x, cplx* y);  // y += a x
using DotuFn = cplx (*)(std::size_t n, const cplx* x, const cplx* y);    // sum x_i y_i

struct KernelTable {
  Backend backend;
  AxpyFn axpy;
  DotuFn dotu;
};

namespace scalar {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
}  // namespace scalar

#if defined(FREDEV_HAS_AVX2_TU)
namespace avx2 {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
}  // namespace avx2
#endif

/// True when the AVX2 translation unit was compiled in and the running CPU
/// reports both AVX2 and FMA.
bool avx2_available();

/// The active table. Chosen once on first use: AVX2 when available unless the
/// environment variable FREDEV_SIMD=scalar is set.
const KernelTable& kernels();

/// Table for a specific backend; falls back to scalar if unavailable.
const KernelTable& kernels_for(Backend backend);

/// Overrides the active table (tests and benchmarks). Returns the previous backend.
Backend set_backend(Backend backend);

std::string backend_name(Backend backend);

inline void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) { kernels().axpy(n, a, x, y); }
inline cplx dotu(std::size_t n, const cplx* x, const cplx* y) { return kernels().dotu(n, x, y); }

}  // namespace fredev::simd
