#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace pinner {

using Cplx = std::complex<double>;

/// Exponent pair (p, p') with 1/p + 1/p' = 1. Only p in (1, inf) is meaningful
/// for the duality identities used throughout, so the constructor enforces it.
struct Params {
    double p;
    double p_conj;

    explicit Params(double p_value) : p(p_value), p_conj(p_value / (p_value - 1.0)) {
        if (!std::isfinite(p_value) || p_value <= 1.0)
            throw std::invalid_argument("Params: p must be finite and > 1");
    }
};

/// Signed power z^<s>: maps r e^{i t} to r^s e^{-i t}, with 0^<s> = 0.
///
/// Identities relied on elsewhere (and property-tested):
///   (zw)^<s> = z^<s> w^<s>,  |z|^p = z^<p-1> z,  (z^<s>)^n = (z^n)^<s>,
///   and the involution (z^<p-1>)^<p'-1> = z.
inline Cplx signed_power(Cplx z, double s) {
    const double r = std::abs(z);
    if (r == 0.0) return Cplx(0.0, 0.0);
    if (s == 1.0) return std::conj(z);
    // r^s e^{-it} = r^{s-1} * conj(z); the reduced exponent keeps intermediate
    // magnitudes representable for tiny |z| and s < 1.
    return std::pow(r, s - 1.0) * std::conj(z);
}

inline bool is_finite(Cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace pinner
