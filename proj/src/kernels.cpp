#include "pinner/kernels.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>

namespace pinner::kernels {

namespace {

Backend g_backend = Backend::scalar;
std::once_flag g_init;

Backend detect() {
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (const char* env = std::getenv("PINNER_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2") {
            if (!avx2::supported())
                throw std::runtime_error("PINNER_KERNELS=avx2 but the CPU lacks AVX2/FMA");
            return Backend::avx2;
        }
    }
    if (avx2::supported()) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend current() {
    std::call_once(g_init, [] { g_backend = detect(); });
    return g_backend;
}

}  // namespace

Backend active() { return current(); }

const char* backend_name() { return current() == Backend::avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
    current();  // ensure detection ran so we never race the once_flag
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (b == Backend::avx2 && !avx2::supported())
        throw std::invalid_argument("set_backend: AVX2 not supported on this CPU");
#else
    if (b == Backend::avx2) throw std::invalid_argument("set_backend: AVX2 not built");
#endif
    g_backend = b;
}

#if defined(PINNER_HAVE_AVX2_BUILD)
#define PINNER_DISPATCH(call) \
    return current() == Backend::avx2 ? avx2::call : scalar::call
#else
#define PINNER_DISPATCH(call) return scalar::call
#endif

double abs_pow_sum(const Cplx* a, std::size_t n, double p) {
    PINNER_DISPATCH(abs_pow_sum(a, n, p));
}

void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out) {
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (current() == Backend::avx2) return avx2::signed_power_map(a, n, s, out);
#endif
    return scalar::signed_power_map(a, n, s, out);
}

void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out) {
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (current() == Backend::avx2) return avx2::abs_pow_map(a, n, e, floor, out);
#endif
    return scalar::abs_pow_map(a, n, e, floor, out);
}

Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n) {
    PINNER_DISPATCH(bilinear_dot(a, b, n));
}

void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y) {
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (current() == Backend::avx2) return avx2::caxpy(alpha, x, n, y);
#endif
    return scalar::caxpy(alpha, x, n, y);
}

void raxpy(double alpha, const double* x, std::size_t n, double* y) {
#if defined(PINNER_HAVE_AVX2_BUILD)
    if (current() == Backend::avx2) return avx2::raxpy(alpha, x, n, y);
#endif
    return scalar::raxpy(alpha, x, n, y);
}

#undef PINNER_DISPATCH

}  // namespace pinner::kernels
