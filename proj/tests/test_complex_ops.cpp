#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "pinner/complex_ops.hpp"

using namespace pinner;

namespace {

std::mt19937_64 rng(20240811);

Cplx random_cplx(double mod_lo, double mod_hi) {
    std::uniform_real_distribution<double> um(mod_lo, mod_hi), ua(0.0, 6.283185307179586);
    return std::polar(um(rng), ua(rng));
}

}  // namespace

TEST_CASE("Params validates the exponent") {
    CHECK(Params(1.5).p_conj == doctest::Approx(3.0));
    CHECK(Params(2.0).p_conj == doctest::Approx(2.0));
    CHECK(Params(4.0).p_conj == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(Params(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Params(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(Params(std::nan("")), std::invalid_argument);
}

TEST_CASE("signed power basics") {
    CHECK(signed_power(Cplx(0.0, 0.0), 2.7) == Cplx(0.0, 0.0));
    // s = 1 is plain conjugation
    CHECK(signed_power(Cplx(3.0, -4.0), 1.0) == Cplx(3.0, 4.0));
    // positive reals map to plain powers
    CHECK(signed_power(Cplx(2.0, 0.0), 3.0).real() == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(signed_power(Cplx(2.0, 0.0), 3.0).imag() == 0.0);
    // the argument flips sign, the modulus is powered
    const Cplx z = std::polar(0.5, 1.1);
    const Cplx zs = signed_power(z, 2.5);
    CHECK(std::abs(zs) == doctest::Approx(std::pow(0.5, 2.5)).epsilon(1e-15));
    CHECK(std::arg(zs) == doctest::Approx(-1.1).epsilon(1e-15));
}

TEST_CASE("involution z -> z^<p-1> -> z^<p'-1> returns z") {
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        const Params pr(p);
        for (int t = 0; t < 200; ++t) {
            const Cplx z = random_cplx(1e-3, 3.0);
            const Cplx back = signed_power(signed_power(z, pr.p - 1.0), pr.p_conj - 1.0);
            CHECK(std::abs(back - z) <= 1e-12 * std::max(1.0, std::abs(z)));
        }
    }
}

TEST_CASE("signed power is multiplicative and recovers |z|^p") {
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        for (int t = 0; t < 200; ++t) {
            const Cplx z = random_cplx(1e-2, 3.0), w = random_cplx(1e-2, 3.0);
            const double s = p - 1.0;
            const Cplx lhs = signed_power(z * w, s);
            const Cplx rhs = signed_power(z, s) * signed_power(w, s);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
            const Cplx prod = signed_power(z, s) * z;  // real and equal to |z|^p
            CHECK(std::abs(prod.imag()) <= 1e-12 * std::max(1.0, std::abs(prod)));
            CHECK(prod.real() ==
                  doctest::Approx(std::pow(std::abs(z), p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("signed power commutes with integer powers") {
    for (int t = 0; t < 100; ++t) {
        const Cplx z = random_cplx(0.1, 1.5);
        const double s = 0.3 + 0.01 * (t % 300);
        Cplx zn = z * z * z;
        const Cplx a = signed_power(zn, s);
        const Cplx zs = signed_power(z, s);
        const Cplx b = zs * zs * zs;
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("is_finite flags bad components") {
    CHECK(is_finite(Cplx(1.0, -2.0)));
    CHECK_FALSE(is_finite(Cplx(std::nan(""), 0.0)));
    CHECK_FALSE(is_finite(Cplx(0.0, std::numeric_limits<double>::infinity())));
}
