#include "sigjeff/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "sigjeff/types.hpp"

namespace sigjeff::kernels {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void shift_scalar(double* dst, const double* src, std::size_t n, double c) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] - c;
}

#if defined(__x86_64__) || defined(_M_X64)
double sum_avx2(const double* x, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
void shift_avx2(double* dst, const double* src, std::size_t n, double c);
#endif
#if defined(__aarch64__)
double sum_neon(const double* x, std::size_t n);
double dot_neon(const double* a, const double* b, std::size_t n);
void shift_neon(double* dst, const double* src, std::size_t n, double c);
#endif

namespace {

const Kernels kScalar{sum_scalar, dot_scalar, shift_scalar, Backend::scalar, "scalar"};
#if defined(__x86_64__) || defined(_M_X64)
const Kernels kAvx2{sum_avx2, dot_avx2, shift_avx2, Backend::avx2, "avx2"};
#endif
#if defined(__aarch64__)
const Kernels kNeon{sum_neon, dot_neon, shift_neon, Backend::neon, "neon"};
#endif

const Kernels* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalar;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return &kAvx2;
#else
            return nullptr;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Backend detect() {
    if (const char* env = std::getenv("SIGJEFF_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && supported(Backend::avx2)) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && supported(Backend::neon)) return Backend::neon;
        // Unknown or unsupported request: fall through to autodetection.
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::avx2;
#elif defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

std::atomic<const Kernels*> g_active{nullptr};
std::once_flag g_init;

}  // namespace

bool supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_acquire);
    if (!k) {
        std::call_once(g_init, [] {
            g_active.store(table_for(detect()), std::memory_order_release);
        });
        k = g_active.load(std::memory_order_acquire);
    }
    return *k;
}

void force_backend(Backend b) {
    if (!supported(b)) throw invalid_input("kernel backend not supported on this CPU");
    std::call_once(g_init, [] {});  // claim initialization
    g_active.store(table_for(b), std::memory_order_release);
}

const char* backend_name() { return active().name; }

}  // namespace sigjeff::kernels
