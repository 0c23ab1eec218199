#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pinner/coefseq.hpp"
#include "pinner/complex_ops.hpp"
#include "pinner/zero_spec.hpp"

using namespace pinner;

TEST_CASE("near-coincident zeros merge into one entry of summed multiplicity") {
    ZeroSetSpec spec;
    spec.add(Cplx(0.5, 0.0), 2);
    spec.add(Cplx(0.5 + 1e-10, 0.0), 1);
    CHECK(spec.distinct_count() == 1);
    CHECK(spec.total_multiplicity() == 3);
    CHECK(spec.entries()[0].mult == 3);
    CHECK(!spec.warnings().empty());

    // Separated zeros stay separate, in insertion order.
    spec.add(Cplx(-0.3, 0.4));
    spec.add(Cplx(0.1, -0.2), 4);
    CHECK(spec.distinct_count() == 3);
    CHECK(spec.total_multiplicity() == 8);
    CHECK(spec.entries()[1].w == Cplx(-0.3, 0.4));
    CHECK(spec.entries()[2].mult == 4);
}

TEST_CASE("close-but-unmerged neighbours produce a warning only") {
    ZeroSetSpec spec;
    spec.add(Cplx(0.5, 0.0));
    spec.add(Cplx(0.5 + 5e-7, 0.0));  // beyond merge_tol, inside the warn radius
    CHECK(spec.distinct_count() == 2);
    CHECK(!spec.warnings().empty());

    ZeroSetSpec clean;
    clean.add(Cplx(0.5, 0.0));
    clean.add(Cplx(-0.5, 0.0));
    CHECK(clean.warnings().empty());
}

TEST_CASE("spec_from_prefix aggregates the leading run of a zero sequence") {
    ZeroSeq seq = {Cplx(0.5), Cplx(-0.6), Cplx(0.0, 0.7),
                   Cplx(0.5), Cplx(-0.6), Cplx(0.0, 0.7),
                   Cplx(0.5), Cplx(-0.6)};

    ZeroSetSpec first3 = spec_from_prefix(seq, 3);
    CHECK(first3.distinct_count() == 3);
    CHECK(first3.total_multiplicity() == 3);

    // Prefix 8 wraps around the base zeros: multiplicities 3, 3, 2.
    ZeroSetSpec first8 = spec_from_prefix(seq, 8);
    CHECK(first8.distinct_count() == 3);
    CHECK(first8.total_multiplicity() == 8);
    CHECK(first8.entries()[0].mult == 3);
    CHECK(first8.entries()[1].mult == 3);
    CHECK(first8.entries()[2].mult == 2);

    CHECK(spec_from_prefix(seq, 0).empty());
    CHECK_THROWS_AS(spec_from_prefix(seq, 9), std::invalid_argument);
}

TEST_CASE("vanishing_polynomial expands the product of linear factors") {
    // (1 - z/0.5) = 1 - 2z
    ZeroSetSpec single;
    single.add(Cplx(0.5));
    CoefSeq v1 = vanishing_polynomial(single);
    REQUIRE(v1.size() == 2);
    CHECK(std::abs(v1[0] - Cplx(1.0)) <= 1e-15);
    CHECK(std::abs(v1[1] - Cplx(-2.0)) <= 1e-15);

    // (1 - 2z)^2 = 1 - 4z + 4z^2
    ZeroSetSpec dbl;
    dbl.add(Cplx(0.5), 2);
    CoefSeq v2 = vanishing_polynomial(dbl);
    REQUIRE(v2.size() == 3);
    CHECK(std::abs(v2[1] - Cplx(-4.0)) <= 1e-14);
    CHECK(std::abs(v2[2] - Cplx(4.0)) <= 1e-14);

    // (1 - 2z)(1 + z/0.4) = 1 + 0.5z - 5z^2, with w2 = -0.4.
    ZeroSetSpec pair;
    pair.add(Cplx(0.5));
    pair.add(Cplx(-0.4));
    CoefSeq v3 = vanishing_polynomial(pair);
    REQUIRE(v3.size() == 3);
    CHECK(std::abs(v3[1] - Cplx(0.5)) <= 1e-14);
    CHECK(std::abs(v3[2] - Cplx(-5.0)) <= 1e-14);

    // The expansion vanishes at each prescribed zero, to derivative order.
    ZeroSetSpec mixed;
    mixed.add(Cplx(0.3, 0.4), 2);
    mixed.add(Cplx(-0.7, 0.1));
    CoefSeq v4 = vanishing_polynomial(mixed);
    CHECK(std::abs(eval(v4, Cplx(0.3, 0.4))) <= 1e-12);
    CHECK(std::abs(eval(v4, Cplx(0.3, 0.4), 1)) <= 1e-12);
    CHECK(std::abs(eval(v4, Cplx(-0.7, 0.1))) <= 1e-12);
    CHECK(std::abs(v4[0] - Cplx(1.0)) <= 1e-15);
}

TEST_CASE("validate_in_disk rejects zeros on or outside the circle") {
    ZeroSetSpec ok;
    ok.add(Cplx(0.5));
    ok.add(Cplx(0.0, -0.99));
    CHECK_NOTHROW(validate_in_disk(ok, true));

    ZeroSetSpec boundary;
    boundary.add(Cplx(1.0));
    CHECK_THROWS_AS(validate_in_disk(boundary, false), std::invalid_argument);

    ZeroSetSpec outside;
    outside.add(Cplx(0.9, 0.9));
    CHECK_THROWS_AS(validate_in_disk(outside, false), std::invalid_argument);

    ZeroSetSpec origin;
    origin.add(Cplx(0.0));
    CHECK_THROWS_AS(validate_in_disk(origin, true), std::invalid_argument);
    CHECK_NOTHROW(validate_in_disk(origin, false));
}

TEST_CASE("long zero lists stay consistent") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> mod(0.05, 0.9);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    ZeroSetSpec spec;
    std::size_t total = 0;
    for (int i = 0; i < 2000; ++i) {
        unsigned m = 1 + unsigned(rng() % 3);
        spec.add(std::polar(mod(rng), ang(rng)), m);
        total += m;
    }
    CHECK(spec.total_multiplicity() == total);
    CHECK(spec.distinct_count() <= 2000);
    CHECK_NOTHROW(validate_in_disk(spec, true));

    // Re-adding the very first zero merges with it, not with a later one.
    Cplx first = spec.entries()[0].w;
    std::size_t before = spec.distinct_count();
    unsigned mult_before = spec.entries()[0].mult;
    spec.add(first + Cplx(1e-12, 0.0));
    CHECK(spec.distinct_count() == before);
    CHECK(spec.entries()[0].mult == mult_before + 1);
}
