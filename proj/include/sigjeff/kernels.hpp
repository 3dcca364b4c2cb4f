#pragma once

#include <cstddef>

#include "sigjeff/types.hpp"

// Data-parallel reduction kernels used by every statistics stage. A scalar
// reference implementation is always available; on x86-64 an AVX2+FMA variant
// and on aarch64 a NEON variant are selected at runtime. The active backend can
// be forced through force_backend() or the SIGJEFF_KERNELS environment variable
// (values: scalar, avx2, neon), which is how the equivalence tests exercise
// both paths on one machine.
//
// For a fixed input length each backend performs a fixed sequence of floating
// point operations, so results are bit-reproducible run to run and independent
// of thread scheduling. Scalar and SIMD backends may differ by rounding
// (different accumulation orders); they are equivalence-tested to tight
// relative tolerance, not bit equality.

namespace sigjeff::kernels {

enum class Backend { scalar, avx2, neon };

struct Kernels {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    // dst[k] = src[k] - c  (column centering)
    void (*shift)(double*, const double*, std::size_t, double);
    Backend backend;
    const char* name;
};

// Kernels for the currently selected backend. First call resolves the backend:
// SIGJEFF_KERNELS if set, otherwise the best the CPU supports.
const Kernels& active();

bool supported(Backend b);
void force_backend(Backend b);  // throws invalid_input if unsupported here
const char* backend_name();     // name of the active backend

// Scalar reference path, always available (used directly by equivalence tests).
double sum_scalar(const double* x, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
void shift_scalar(double* dst, const double* src, std::size_t n, double c);

}  // namespace sigjeff::kernels
