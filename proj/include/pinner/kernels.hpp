#pragma once

#include <cstddef>
#include <string>

#include "pinner/complex_ops.hpp"

// Array kernels behind the coefficient-sequence operations. Every kernel has a
// scalar reference implementation and (on x86-64) an AVX2 variant; the
// top-level entry points dispatch once at first use. The variants are
// equivalence-tested against each other, and all reductions use compensated
// (Neumaier) accumulation with a fixed order per backend, so results are
// deterministic for a given build and backend.
namespace pinner::kernels {

enum class Backend { scalar, avx2 };

/// Backend selected at first use: AVX2 when the CPU supports AVX2+FMA and the
/// environment variable PINNER_KERNELS is not set to "scalar".
Backend active();
const char* backend_name();

/// Force a backend (tests). Throws std::invalid_argument if unsupported here.
void set_backend(Backend b);

/// sum_k |a_k|^p  (p > 0; p = 2 takes a pow-free path).
double abs_pow_sum(const Cplx* a, std::size_t n, double p);

/// out_k = a_k^<s> elementwise (signed power; 0 maps to 0).
void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out);

/// out_k = max(|a_k|, floor)^e elementwise, real output (preconditioner maps).
void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out);

/// sum_k a_k b_k with no conjugation (the bilinear pairing's inner loop).
Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n);

/// y_k += alpha * x_k (complex axpy; convolution / correlation building block).
void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y);

/// y_k += alpha * x_k (real axpy for preconditioner accumulation).
void raxpy(double alpha, const double* x, std::size_t n, double* y);

// Direct access to the two implementations, used by the equivalence tests and
// by set_backend. Same contracts as the dispatching functions above.
namespace scalar {
double abs_pow_sum(const Cplx* a, std::size_t n, double p);
void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out);
void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out);
Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n);
void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y);
void raxpy(double alpha, const double* x, std::size_t n, double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PINNER_HAVE_AVX2_BUILD 1
namespace avx2 {
bool supported();  // runtime CPU check (AVX2 + FMA)
double abs_pow_sum(const Cplx* a, std::size_t n, double p);
void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out);
void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out);
Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n);
void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y);
void raxpy(double alpha, const double* x, std::size_t n, double* y);
}  // namespace avx2
#endif

}  // namespace pinner::kernels
