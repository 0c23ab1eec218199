#pragma once

#include <cstdint>
#include <map>

#include "pinner/complex_ops.hpp"

namespace pinner {

/// Polynomial with huge, scattered exponents, stored as an ordered
/// exponent -> coefficient map (uint64 exponents; the gap constructions reach
/// 2^62). Ordered storage keeps every reduction and serialization
/// deterministic. Zero coefficients are not stored.
class SparsePoly {
  public:
    using Map = std::map<std::uint64_t, Cplx>;

    SparsePoly() = default;

    /// Adds c * z^e, collecting like terms; erases the term if it cancels.
    void add_term(std::uint64_t e, Cplx c);

    const Map& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    std::uint64_t max_exponent() const;  // 0 for the empty polynomial

    static SparsePoly one();

  private:
    Map terms_;
};

/// Product with like-term collection. Throws std::overflow_error (naming the
/// offending exponents) if an exponent sum exceeds uint64.
SparsePoly sparse_multiply(const SparsePoly& a, const SparsePoly& b);

/// Product that requires all exponent sums to be distinct, as the gap
/// constructions guarantee; a collision indicates corrupted structure and
/// throws std::logic_error naming the exponent.
SparsePoly sparse_multiply_distinct(const SparsePoly& a, const SparsePoly& b);

/// (sum |c_e|^p)^{1/p} over stored terms.
double sparse_p_norm(const SparsePoly& a, const Params& pr);
double sparse_p_norm_pow(const SparsePoly& a, const Params& pr);

/// Direct evaluation sum c_e z^e. Fine for moderate exponents; for huge
/// exponents with |z| < 1 the terms underflow to 0 harmlessly. Not suitable
/// when the angle e*arg(z) needs more than double precision; see
/// eval_sparse_at_rational_angle.
Cplx eval_sparse(const SparsePoly& a, Cplx z);

/// Evaluation at z = modulus * exp(2 pi i num/den), carrying the angle
/// exactly: e * num is reduced mod den in 128-bit arithmetic, so exponents up
/// to 2^62 lose nothing. This is how targeted roots of the gap constructions
/// are checked.
Cplx eval_sparse_at_rational_angle(const SparsePoly& a, double modulus, std::uint64_t num,
                                   std::uint64_t den);

/// Same evaluation with the modulus passed as its log. The deep gap levels
/// sit within 1e-16 of the unit circle, where the modulus itself rounds to
/// 1.0 and loses the root; its log keeps the full gap.
Cplx eval_sparse_at_rational_angle_log(const SparsePoly& a, double log_modulus, std::uint64_t num,
                                       std::uint64_t den);

}  // namespace pinner
