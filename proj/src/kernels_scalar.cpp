#include "pinner/kernels.hpp"

#include <cmath>

namespace pinner::kernels::scalar {

namespace {

// Neumaier running sum: like Kahan but also correct when the incoming term
// dominates the accumulator.
struct CompSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

}  // namespace

double abs_pow_sum(const Cplx* a, std::size_t n, double p) {
    CompSum acc;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double re = a[i].real(), im = a[i].imag();
            acc.add(re * re + im * im);
        }
        return acc.value();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::abs(a[i]);
        if (r != 0.0) acc.add(std::pow(r, p));
    }
    return acc.value();
}

void signed_power_map(const Cplx* a, std::size_t n, double s, Cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = signed_power(a[i], s);
}

void abs_pow_map(const Cplx* a, std::size_t n, double e, double floor, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::max(std::abs(a[i]), floor);
        out[i] = std::pow(r, e);
    }
}

Cplx bilinear_dot(const Cplx* a, const Cplx* b, std::size_t n) {
    CompSum re, im;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re.add(ar * br - ai * bi);
        im.add(ar * bi + ai * br);
    }
    return Cplx(re.value(), im.value());
}

void caxpy(Cplx alpha, const Cplx* x, std::size_t n, Cplx* y) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += Cplx(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

void raxpy(double alpha, const double* x, std::size_t n, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace pinner::kernels::scalar
