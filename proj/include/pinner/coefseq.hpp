#pragma once

#include <vector>

#include "pinner/complex_ops.hpp"

namespace pinner {

/// Finite Taylor-coefficient sequence a_0..a_D identified with the polynomial
/// (or truncated power series) sum a_k z^k. Always holds at least one entry.
/// Operations treat values as immutable and return new sequences.
struct CoefSeq {
    std::vector<Cplx> c;

    CoefSeq() : c(1, Cplx(0.0)) {}
    explicit CoefSeq(std::vector<Cplx> coeffs);
    static CoefSeq zeros(int degree);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    std::size_t size() const { return c.size(); }
    const Cplx& operator[](std::size_t k) const { return c[k]; }

    /// Throws std::invalid_argument if any entry is non-finite (IO boundary).
    void validate() const;
};

/// (sum_k |a_k|^p)^{1/p}.
double p_norm(const CoefSeq& a, const Params& pr);

/// sum_k |a_k|^p (avoids the root when the p-th power is wanted directly).
double p_norm_pow(const CoefSeq& a, const Params& pr);

/// Elementwise signed power a_k -> a_k^<s>.
CoefSeq seq_signed_power(const CoefSeq& a, double s);

/// Bilinear pairing (a, b) = sum_k a_k b_k, no conjugation; shorter sequence
/// is implicitly zero-padded.
Cplx bilinear_pairing(const CoefSeq& a, const CoefSeq& b);

/// Birkhoff-James orthogonality residual (a^<p-1>, b); a is p-orthogonal to b
/// exactly when this vanishes.
Cplx bj_residual(const CoefSeq& a, const CoefSeq& b, const Params& pr);

/// Backward-difference quotient at w: g with g_n = sum_k a_{k+n+1} w^k,
/// n = 0..D-1 (for degree-0 input the result is the zero sequence).
/// Satisfies ||g||_p <= ||a||_p / (1 - |w|) for |w| < 1.
CoefSeq difference_quotient(const CoefSeq& a, Cplx w);

/// m-th derivative evaluated at z: sum_{k>=m} k!/(k-m)! a_k z^{k-m}.
/// Finite sum, so any z is accepted.
Cplx eval(const CoefSeq& a, Cplx z, int m = 0);

/// z^n * a (shift coefficients up by n).
CoefSeq shift(const CoefSeq& a, int n);

/// Dense product (polynomial convolution).
CoefSeq conv(const CoefSeq& a, const CoefSeq& b);

/// a + alpha * b.
CoefSeq add_scaled(const CoefSeq& a, Cplx alpha, const CoefSeq& b);

/// Drop trailing coefficients with |a_k| <= tol (keeps at least a_0).
CoefSeq trim(const CoefSeq& a, double tol = 0.0);

/// Truncate or zero-pad to the given degree.
CoefSeq resize(const CoefSeq& a, int degree);

}  // namespace pinner
