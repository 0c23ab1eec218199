#include "pinner/coefseq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pinner/kernels.hpp"

namespace pinner {

CoefSeq::CoefSeq(std::vector<Cplx> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) throw std::invalid_argument("CoefSeq: empty coefficient list");
}

CoefSeq CoefSeq::zeros(int degree) {
    if (degree < 0) throw std::invalid_argument("CoefSeq::zeros: negative degree");
    return CoefSeq(std::vector<Cplx>(static_cast<std::size_t>(degree) + 1, Cplx(0.0)));
}

void CoefSeq::validate() const {
    for (const Cplx& z : c)
        if (!is_finite(z)) throw std::invalid_argument("CoefSeq: non-finite coefficient");
}

double p_norm_pow(const CoefSeq& a, const Params& pr) {
    return kernels::abs_pow_sum(a.c.data(), a.c.size(), pr.p);
}

double p_norm(const CoefSeq& a, const Params& pr) {
    return std::pow(p_norm_pow(a, pr), 1.0 / pr.p);
}

CoefSeq seq_signed_power(const CoefSeq& a, double s) {
    std::vector<Cplx> out(a.size());
    kernels::signed_power_map(a.c.data(), a.size(), s, out.data());
    return CoefSeq(std::move(out));
}

Cplx bilinear_pairing(const CoefSeq& a, const CoefSeq& b) {
    return kernels::bilinear_dot(a.c.data(), b.c.data(), std::min(a.size(), b.size()));
}

Cplx bj_residual(const CoefSeq& a, const CoefSeq& b, const Params& pr) {
    return bilinear_pairing(seq_signed_power(a, pr.p - 1.0), b);
}

CoefSeq difference_quotient(const CoefSeq& a, Cplx w) {
    const int d = a.degree();
    if (d == 0) return CoefSeq();
    std::vector<Cplx> g(static_cast<std::size_t>(d));
    // g_n = a_{n+1} + w g_{n+1} evaluated backward: each g_n is the exact
    // Horner value of its finite tail sum.
    Cplx acc(0.0);
    for (int n = d - 1; n >= 0; --n) {
        acc = a.c[static_cast<std::size_t>(n) + 1] + w * acc;
        g[static_cast<std::size_t>(n)] = acc;
    }
    return CoefSeq(std::move(g));
}

Cplx eval(const CoefSeq& a, Cplx z, int m) {
    if (m < 0) throw std::invalid_argument("eval: negative derivative order");
    const int d = a.degree();
    if (m > d) return Cplx(0.0);
    // Horner on the m-th derivative's coefficients b_j = (j+m)!/j! * a_{j+m},
    // with the falling factorial tracked incrementally.
    Cplx acc(0.0);
    for (int j = d - m; j >= 0; --j) {
        double fall = 1.0;
        for (int t = 0; t < m; ++t) fall *= static_cast<double>(j + m - t);
        acc = acc * z + fall * a.c[static_cast<std::size_t>(j + m)];
    }
    return acc;
}

CoefSeq shift(const CoefSeq& a, int n) {
    if (n < 0) throw std::invalid_argument("shift: negative shift");
    std::vector<Cplx> out(a.size() + static_cast<std::size_t>(n), Cplx(0.0));
    std::copy(a.c.begin(), a.c.end(), out.begin() + n);
    return CoefSeq(std::move(out));
}

CoefSeq conv(const CoefSeq& a, const CoefSeq& b) {
    const CoefSeq& s = (a.size() <= b.size()) ? a : b;
    const CoefSeq& l = (a.size() <= b.size()) ? b : a;
    std::vector<Cplx> out(s.size() + l.size() - 1, Cplx(0.0));
    for (std::size_t t = 0; t < s.size(); ++t)
        if (s.c[t] != Cplx(0.0))
            kernels::caxpy(s.c[t], l.c.data(), l.size(), out.data() + t);
    return CoefSeq(std::move(out));
}

CoefSeq add_scaled(const CoefSeq& a, Cplx alpha, const CoefSeq& b) {
    std::vector<Cplx> out(std::max(a.size(), b.size()), Cplx(0.0));
    std::copy(a.c.begin(), a.c.end(), out.begin());
    kernels::caxpy(alpha, b.c.data(), b.size(), out.data());
    return CoefSeq(std::move(out));
}

CoefSeq trim(const CoefSeq& a, double tol) {
    std::size_t n = a.size();
    while (n > 1 && std::abs(a.c[n - 1]) <= tol) --n;
    return CoefSeq(std::vector<Cplx>(a.c.begin(), a.c.begin() + n));
}

CoefSeq resize(const CoefSeq& a, int degree) {
    if (degree < 0) throw std::invalid_argument("resize: negative degree");
    std::vector<Cplx> out(static_cast<std::size_t>(degree) + 1, Cplx(0.0));
    const std::size_t m = std::min(out.size(), a.size());
    std::copy(a.c.begin(), a.c.begin() + m, out.begin());
    return CoefSeq(std::move(out));
}

}  // namespace pinner
