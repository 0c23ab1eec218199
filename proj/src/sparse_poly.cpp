#include "pinner/sparse_poly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinner/kernels.hpp"

namespace pinner {

void SparsePoly::add_term(std::uint64_t e, Cplx c) {
    if (c == Cplx(0.0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Cplx(0.0)) terms_.erase(it);
    }
}

std::uint64_t SparsePoly::max_exponent() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first;
}

SparsePoly SparsePoly::one() {
    SparsePoly p;
    p.add_term(0, Cplx(1.0));
    return p;
}

namespace {

std::uint64_t checked_exp_sum(std::uint64_t ea, std::uint64_t eb) {
    std::uint64_t s;
    if (__builtin_add_overflow(ea, eb, &s))
        throw std::overflow_error("sparse_multiply: exponent overflow: " + std::to_string(ea) +
                                  " + " + std::to_string(eb));
    return s;
}

}  // namespace

SparsePoly sparse_multiply(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) out.add_term(checked_exp_sum(ea, eb), ca * cb);
    return out;
}

SparsePoly sparse_multiply_distinct(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    const std::size_t expected = a.term_count() * b.term_count();
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) out.add_term(checked_exp_sum(ea, eb), ca * cb);
    if (out.term_count() != expected)
        throw std::logic_error(
            "sparse_multiply_distinct: exponent collision; expected " + std::to_string(expected) +
            " distinct terms, got " + std::to_string(out.term_count()));
    return out;
}

double sparse_p_norm_pow(const SparsePoly& a, const Params& pr) {
    std::vector<Cplx> vals;
    vals.reserve(a.term_count());
    for (const auto& [e, c] : a.terms()) vals.push_back(c);
    return kernels::abs_pow_sum(vals.data(), vals.size(), pr.p);
}

double sparse_p_norm(const SparsePoly& a, const Params& pr) {
    return std::pow(sparse_p_norm_pow(a, pr), 1.0 / pr.p);
}

Cplx eval_sparse(const SparsePoly& a, Cplx z) {
    Cplx acc(0.0);
    for (const auto& [e, c] : a.terms()) {
        if (e == 0) {
            acc += c;
            continue;
        }
        acc += c * std::pow(z, static_cast<double>(e));
    }
    return acc;
}

namespace {

Cplx eval_at_log_modulus(const SparsePoly& a, bool zero_modulus, double log_modulus,
                         std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("eval_sparse_at_rational_angle: zero denominator");
    constexpr double two_pi = 6.283185307179586476925286766559;
    Cplx acc(0.0);
    for (const auto& [e, c] : a.terms()) {
        // modulus^e via exp(e log modulus); underflows cleanly for huge e.
        double mag;
        if (e == 0)
            mag = 1.0;
        else if (zero_modulus)
            mag = 0.0;
        else
            mag = std::exp(static_cast<double>(e) * log_modulus);
        if (mag == 0.0) continue;
        const std::uint64_t rem = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(e % den) * (num % den)) % den);
        const double ang = two_pi * (static_cast<double>(rem) / static_cast<double>(den));
        acc += c * Cplx(mag * std::cos(ang), mag * std::sin(ang));
    }
    return acc;
}

}  // namespace

Cplx eval_sparse_at_rational_angle(const SparsePoly& a, double modulus, std::uint64_t num,
                                   std::uint64_t den) {
    if (modulus < 0.0) throw std::invalid_argument("eval_sparse_at_rational_angle: negative modulus");
    return eval_at_log_modulus(a, modulus == 0.0, modulus == 0.0 ? 0.0 : std::log(modulus), num,
                               den);
}

Cplx eval_sparse_at_rational_angle_log(const SparsePoly& a, double log_modulus, std::uint64_t num,
                                       std::uint64_t den) {
    return eval_at_log_modulus(a, false, log_modulus, num, den);
}

}  // namespace pinner
