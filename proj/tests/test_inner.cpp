#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pinner/coefseq.hpp"
#include "pinner/complex_ops.hpp"
#include "pinner/inner.hpp"
#include "pinner/solver.hpp"
#include "pinner/zero_spec.hpp"

using namespace pinner;

namespace {

double maxdiff(const CoefSeq& a, const CoefSeq& b, std::size_t upto) {
    double m = 0.0;
    for (std::size_t k = 0; k < upto; ++k) {
        Cplx av = k < a.size() ? a[k] : Cplx(0.0);
        Cplx bv = k < b.size() ? b[k] : Cplx(0.0);
        m = std::max(m, std::abs(av - bv));
    }
    return m;
}

// (1 - z/w) / (1 - conj(w) z) expanded to the given degree; the p = 2 inner
// element for several zeros is the product of these.
CoefSeq blaschke_like(Cplx w, int degree) {
    std::vector<Cplx> geo(std::size_t(degree) + 1);
    Cplx cw = std::conj(w), acc(1.0);
    for (auto& g : geo) {
        g = acc;
        acc *= cw;
    }
    CoefSeq num({Cplx(1.0), -1.0 / w});
    return resize(conv(num, CoefSeq(geo)), degree);
}

}  // namespace

TEST_CASE("single-zero closed form: frozen values at p = 2, w = 0.5") {
    Params pr(2.0);
    InnerResult res = linear_inner_closed_form(Cplx(0.5), pr, 200);
    CHECK(res.J[0] == Cplx(1.0));
    CHECK(std::abs(res.J[1] - Cplx(-1.5)) <= 1e-15);
    CHECK(std::abs(res.J[2] - Cplx(-0.75)) <= 1e-15);
    CHECK(std::abs(res.J[3] - Cplx(-0.375)) <= 1e-15);
    CHECK(res.norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.method == InnerResult::Method::closed_form);
    for (double r : res.orth_residuals) CHECK(r <= 1e-12);
    CHECK(std::abs(eval(res.J, Cplx(0.5))) <= 1e-13);
}

TEST_CASE("single-zero closed form rejects bad input") {
    Params pr(2.0);
    CHECK_THROWS_AS(linear_inner_closed_form(Cplx(0.0), pr, 50), std::invalid_argument);
    CHECK_THROWS_AS(linear_inner_closed_form(Cplx(1.0), pr, 50), std::invalid_argument);
    CHECK_THROWS_AS(linear_inner_closed_form(Cplx(0.8, 0.8), pr, 50), std::invalid_argument);
    CHECK_THROWS_AS(linear_inner_closed_form(Cplx(0.5), pr, 0), std::invalid_argument);
}

TEST_CASE("closed form is p-inner for generic p and complex zeros") {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        Params pr(p);
        for (Cplx w : {Cplx(0.3), Cplx(-0.35, 0.45), Cplx(0.0, 0.6), std::polar(0.9, 0.7)}) {
            int degree = int(std::ceil(std::log(1e-16) / (( pr.p_conj - 1.0) * std::log(std::abs(w))))) + 32;
            InnerResult res = linear_inner_closed_form(w, pr, degree);
            auto resid = verify_p_inner(res.J, pr, 12);
            for (double r : resid) CHECK(r <= 1e-7);
            CHECK(std::abs(eval(res.J, w)) <= 1e-10);
        }
    }
}

TEST_CASE("b_factor_norm: frozen value and its t = r specialization") {
    // w = 0.5, r = t = 2: squared norm is exactly 4.
    double n = b_factor_norm(Cplx(0.5), 2.0, 2.0);
    CHECK(n * n == doctest::Approx(4.0).epsilon(1e-15));

    // t = r collapses the general expression to 1 + (1-|w|^r')^{r-1} / |w|^r.
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> mod(0.1, 0.9), rr(1.3, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        double w = mod(rng), r = rr(rng);
        double rp = r / (r - 1.0);
        double expect = 1.0 + std::pow(1.0 - std::pow(w, rp), r - 1.0) / std::pow(w, r);
        CHECK(std::pow(b_factor_norm(Cplx(w), r, r), r) == doctest::Approx(expect).epsilon(1e-13));
    }

    CHECK_THROWS_AS(b_factor_norm(Cplx(0.0), 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(b_factor_norm(Cplx(1.0), 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(b_factor_norm(Cplx(0.5), 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(b_factor_norm(Cplx(0.5), 2.0, 0.9), std::invalid_argument);
}

TEST_CASE("b_factor_norm agrees with direct coefficient sums") {
    // The factor built for exponent r has coefficients 1 and
    // -((1-|w|^r')/w) u^{k-1} with u = w^<r'-1>; sum |.|^t directly.
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> mod(0.1, 0.8), ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> rs(1.3, 3.0), ts(1.5, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        Cplx w = std::polar(mod(rng), ang(rng));
        double r = rs(rng), t = ts(rng);
        double rp = r / (r - 1.0);
        Cplx u = signed_power(w, rp - 1.0);
        double lead = std::abs((1.0 - std::pow(std::abs(w), rp)) / w);
        double au = std::abs(u);
        double acc = 1.0;
        double term = std::pow(lead, t);
        for (int k = 0; k < 500; ++k) {
            acc += term;
            term *= std::pow(au, t);
        }
        CHECK(b_factor_norm(w, r, t) == doctest::Approx(std::pow(acc, 1.0 / t)).epsilon(1e-10));
    }
}

TEST_CASE("Newton route matches the closed form on a p x w grid") {
    for (double p : {1.5, 2.0, 3.0}) {
        Params pr(p);
        for (Cplx w : {Cplx(0.3), Cplx(-0.6), std::polar(0.6, M_PI / 4)}) {
            ZeroSetSpec spec;
            spec.add(w);
            InnerResult nres = solve_inner_newton(spec, pr);
            InnerResult cres = linear_inner_closed_form(w, pr, std::max(nres.J.degree(), 64));
            CHECK(maxdiff(nres.J, cres.J, 32) <= 1e-8);
            CHECK(nres.norm == doctest::Approx(cres.norm).epsilon(1e-9));
            CHECK(nres.method == InnerResult::Method::newton);
            for (double r : nres.orth_residuals) CHECK(r <= 1e-7);
        }
    }
}

TEST_CASE("Newton interpolation constant obeys its closed form for one zero") {
    // Single simple zero: J_k = (C w^k)^<p'-1>, and matching against the
    // closed form forces C^<p'-1> * (what the ansatz stores) to reproduce
    // C^<q> = -(1 - X)/X with X = |w|^{p'}, q = p' - 1.
    for (double p : {2.0, 3.0}) {
        Params pr(p);
        for (Cplx w : {Cplx(0.5), Cplx(-0.3, 0.4)}) {
            ZeroSetSpec spec;
            spec.add(w);
            NewtonState state;
            solve_inner_newton(spec, pr, SolverOptions{}, &state);
            REQUIRE(state.constants.size() == 1);
            REQUIRE(state.constants[0].size() == 1);
            Cplx C = state.constants[0][0];
            double X = std::pow(std::abs(w), pr.p_conj);
            Cplx expect = Cplx(-(1.0 - X) / X);
            CHECK(std::abs(signed_power(C, pr.p_conj - 1.0) - expect) <= 1e-8 * std::abs(expect));
            CHECK(state.series_cap > 0);
        }
    }
}

TEST_CASE("p = 2 multi-zero element is the Blaschke-style product") {
    Params pr(2.0);
    ZeroSetSpec spec;
    spec.add(Cplx(0.5));
    spec.add(Cplx(-0.3, 0.4));
    InnerResult res = solve_inner_newton(spec, pr);

    int deg = 220;
    CoefSeq expect = conv(blaschke_like(Cplx(0.5), deg), blaschke_like(Cplx(-0.3, 0.4), deg));
    CHECK(maxdiff(res.J, expect, 48) <= 1e-8);
    // Norm = prod 1/|w_k| at p = 2.
    CHECK(res.norm == doctest::Approx(1.0 / (0.5 * 0.5)).epsilon(1e-8));
}

TEST_CASE("multiplicities are honored and agree with the projection route") {
    for (double p : {1.5, 3.0}) {
        Params pr(p);
        ZeroSetSpec spec;
        spec.add(Cplx(0.5), 2);
        InnerResult res = solve_inner_newton(spec, pr);
        CHECK(std::abs(eval(res.J, Cplx(0.5))) <= 1e-8);
        CHECK(std::abs(eval(res.J, Cplx(0.5), 1)) <= 1e-7);

        SolverOptions opts;
        if (p < 2.0) opts.grad_tol = 3e-6;
        ProjectionResult proj = project_shift_span(vanishing_polynomial(spec), pr, opts);
        CHECK(res.norm == doctest::Approx(proj.norm).epsilon(1e-5));
        CHECK(maxdiff(res.J, proj.co_projection, 24) <= 1e-4);
    }
}

TEST_CASE("verify_p_inner flags non-inner sequences and bad input") {
    Params pr(2.0);
    CoefSeq not_inner({Cplx(1.0), Cplx(1.0)});
    auto resid = verify_p_inner(not_inner, pr, 4);
    CHECK(resid.size() == 4);
    CHECK(resid[0] == doctest::Approx(1.0));  // (J^<1>, zJ) = conj(1)*1

    CHECK_THROWS_AS(verify_p_inner(not_inner, pr, 0), std::invalid_argument);
    CHECK_THROWS_AS(verify_p_inner(CoefSeq::zeros(3), pr, 2), std::invalid_argument);
}

TEST_CASE("extremal companion: frozen p = 2 values and the exact roundtrip") {
    Params pr(2.0);
    InnerResult J = linear_inner_closed_form(Cplx(0.5), pr, 400);
    PhiResult phi = phi_from_inner(J, pr);
    CHECK(phi.g0 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(phi.phi_norm * phi.phi_norm == doctest::Approx(0.75).epsilon(1e-12));
    // Phi = 1 - g0 J equals 1 at the zero of J and 1 - g0 at the origin.
    CHECK(std::abs(eval(phi.phi, Cplx(0.5)) - Cplx(1.0)) <= 1e-12);
    CHECK(std::abs(phi.phi[0] - Cplx(0.75)) <= 1e-15);

    CHECK(inner_norm_from_phi(phi.phi_norm, pr) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(inner_norm_from_phi(0.0, pr) == doctest::Approx(1.0));
}

TEST_CASE("phi roundtrip across exponents and zeros") {
    std::mt19937_64 rng(1618);
    std::uniform_real_distribution<double> mod(0.15, 0.85), ang(0.0, 2.0 * M_PI);
    for (double p : {1.5, 2.0, 2.5, 4.0}) {
        Params pr(p);
        for (int trial = 0; trial < 8; ++trial) {
            Cplx w = std::polar(mod(rng), ang(rng));
            int degree = int(std::ceil(std::log(1e-16) /
                                       ((pr.p_conj - 1.0) * std::log(std::abs(w))))) + 32;
            InnerResult J = linear_inner_closed_form(w, pr, degree);
            PhiResult phi = phi_from_inner(J, pr);
            CHECK(phi.g0 > 0.0);
            CHECK(phi.g0 < 1.0);
            CHECK(phi.phi_norm < 1.0);
            double back = inner_norm_from_phi(phi.phi_norm, pr);
            CHECK(back == doctest::Approx(std::pow(J.norm, p)).epsilon(1e-8));
        }
    }
}

TEST_CASE("phi domain errors") {
    Params pr(2.0);
    InnerResult fake;
    fake.J = CoefSeq({Cplx(1.0)});
    fake.norm = 1.0;  // not > 1
    CHECK_THROWS_AS(phi_from_inner(fake, pr), std::invalid_argument);

    fake.J = CoefSeq({Cplx(2.0), Cplx(0.1)});
    fake.norm = 2.0;  // J(0) != 1
    CHECK_THROWS_AS(phi_from_inner(fake, pr), std::invalid_argument);

    CHECK_THROWS_AS(inner_norm_from_phi(1.0, pr), std::invalid_argument);
    CHECK_THROWS_AS(inner_norm_from_phi(-0.1, pr), std::invalid_argument);
}

TEST_CASE("method names are stable identifiers") {
    CHECK(std::string(method_name(InnerResult::Method::closed_form)) == "closed_form");
    CHECK(std::string(method_name(InnerResult::Method::newton)) == "newton");
    CHECK(std::string(method_name(InnerResult::Method::co_projection)) == "co_projection");
}
