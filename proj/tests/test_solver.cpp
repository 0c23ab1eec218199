#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pinner/coefseq.hpp"
#include "pinner/complex_ops.hpp"
#include "pinner/solver.hpp"
#include "pinner/zero_spec.hpp"

using namespace pinner;

namespace {

CoefSeq factor_poly(const std::vector<Cplx>& zeros) {
    ZeroSetSpec spec;
    for (Cplx w : zeros) spec.add(w);
    return vanishing_polynomial(spec);
}

std::vector<Cplx> random_zeros(std::mt19937_64& rng, int n, double rmax) {
    std::uniform_real_distribution<double> mod(0.1, rmax);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::vector<Cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(std::polar(mod(rng), ang(rng)));
    return out;
}

}  // namespace

TEST_CASE("SolverOptions::validate rejects nonsense") {
    SolverOptions opts;
    CHECK_NOTHROW(opts.validate());

    SolverOptions bad = opts;
    bad.grad_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = opts;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = opts;
    bad.truncation_degree = -3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = opts;
    bad.step_rule = SolverOptions::StepRule::fixed;
    bad.fixed_step = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("p = 2 shift-span projection reproduces the product of 1/|w_k|") {
    // At p = 2 the squared distance from f to the shifted span is known in
    // closed form through the outer-inner factorization: prod 1/|w_k|.
    Params pr(2.0);
    SolverOptions opts;

    struct Case {
        std::vector<Cplx> zeros;
    };
    std::vector<Case> cases = {
        {{Cplx(0.5)}},
        {{Cplx(0.5), Cplx(-0.6)}},
        {{Cplx(0.5), Cplx(-0.6), Cplx(0.0, 0.7)}},
        {{Cplx(0.3, 0.2), Cplx(-0.4, 0.5), Cplx(0.6, -0.1), Cplx(0.0, -0.8)}},
    };
    for (const auto& c : cases) {
        CoefSeq f = factor_poly(c.zeros);
        ProjectionResult res = project_shift_span(f, pr, opts);
        double expect = 1.0;
        for (Cplx w : c.zeros) expect /= std::abs(w);
        CHECK(res.norm == doctest::Approx(expect).epsilon(1e-9));
        CHECK(res.grad_norm <= 1e-8);
    }
}

TEST_CASE("single-zero projection matches the closed-form coefficients") {
    // J_k = -((1 - |w|^{p'}) / w) u^{k-1} for k >= 1, u = w^{<p'-1>}, J_0 = 1.
    for (double p : {1.5, 2.0, 3.0}) {
        Params pr(p);
        for (Cplx w : {Cplx(0.5), Cplx(-0.35, 0.45), Cplx(0.0, 0.6)}) {
            CoefSeq f = factor_poly({w});
            SolverOptions opts;
            if (p < 2.0) opts.grad_tol = 3e-6;
            ProjectionResult res = project_shift_span(f, pr, opts);

            Cplx u = signed_power(w, pr.p_conj - 1.0);
            Cplx lead = -(1.0 - std::pow(std::abs(w), pr.p_conj)) / w;
            CHECK(std::abs(res.co_projection[0] - Cplx(1.0)) <= 1e-6);
            Cplx uk(1.0);
            for (std::size_t k = 1; k < std::min<std::size_t>(res.co_projection.size(), 12); ++k) {
                CHECK(std::abs(res.co_projection[k] - lead * uk) <= 1e-6);
                uk *= u;
            }
        }
    }
}

TEST_CASE("the minimizer beats every polynomial competitor") {
    std::mt19937_64 rng(2024);
    Params pr(2.5);
    SolverOptions opts;
    CoefSeq f = factor_poly({Cplx(0.5, 0.1), Cplx(-0.3, -0.4)});
    ProjectionResult res = project_shift_span(f, pr, opts);

    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        // Random admissible competitor q with q(0) = 0, same degree budget.
        CoefSeq q = CoefSeq::zeros(res.truncation_degree);
        for (std::size_t k = 1; k < q.size(); ++k) q.c[k] = Cplx(coef(rng), coef(rng));
        CoefSeq candidate = add_scaled(f, Cplx(-1.0), conv(f, q));
        CHECK(p_norm(candidate, pr) >= res.norm - 1e-9);
    }

    // Midpoint convexity: moving halfway toward any competitor cannot win.
    CoefSeq q = res.multiplier_poly;
    for (std::size_t k = 1; k < q.size(); ++k) q.c[k] += Cplx(0.05, -0.02);
    CoefSeq avg = add_scaled(res.multiplier_poly, Cplx(1.0), q);
    for (auto& z : avg.c) z *= 0.5;
    CoefSeq mid = add_scaled(f, Cplx(-1.0), conv(f, avg));
    CHECK(p_norm(mid, pr) >= res.norm - 1e-9);
}

TEST_CASE("the co-projection inherits every prescribed zero") {
    std::mt19937_64 rng(77);
    for (double p : {2.0, 3.0}) {
        Params pr(p);
        SolverOptions opts;
        auto zeros = random_zeros(rng, 3, 0.7);
        CoefSeq f = factor_poly(zeros);
        ProjectionResult res = project_shift_span(f, pr, opts);
        for (Cplx w : zeros) CHECK(std::abs(eval(res.co_projection, w)) <= 1e-6);
        // And keeps the normalization at the origin.
        CHECK(std::abs(res.co_projection[0] - Cplx(1.0)) <= 1e-8);
    }
}

TEST_CASE("double zeros are inherited to second order") {
    Params pr(2.0);
    SolverOptions opts;
    ZeroSetSpec spec;
    spec.add(Cplx(0.5), 2);
    spec.add(Cplx(-0.4, 0.3));
    CoefSeq f = vanishing_polynomial(spec);
    ProjectionResult res = project_shift_span(f, pr, opts);
    CHECK(std::abs(eval(res.co_projection, Cplx(0.5))) <= 1e-6);
    CHECK(std::abs(eval(res.co_projection, Cplx(0.5), 1)) <= 1e-5);
    CHECK(std::abs(eval(res.co_projection, Cplx(-0.4, 0.3))) <= 1e-6);
    // p = 2, zeros {0.5 double, |w|=0.5}: norm = (1/0.5)^2 * (1/0.5) = 8.
    CHECK(res.norm == doctest::Approx(8.0).epsilon(1e-8));
}

TEST_CASE("iteration starvation raises solver_error with the partial iterate") {
    Params pr(3.0);
    SolverOptions opts;
    opts.max_iters = 1;
    CoefSeq f = factor_poly({Cplx(0.5), Cplx(-0.6, 0.2)});
    try {
        project_shift_span(f, pr, opts);
        FAIL("expected solver_error");
    } catch (const solver_error& e) {
        CHECK(e.partial().iterations >= 1);
        CHECK(e.partial().co_projection.size() > 0);
        CHECK(e.partial().grad_norm > 0.0);
    }
}

TEST_CASE("extremal companion matches its closed-form norm") {
    // With X = ||J||_p^p - 1 and q = p' - 1, the extremal function satisfies
    // ||Phi||_p^{p'} = X^q / (1 + X^q), and Phi vanishes on W.
    std::mt19937_64 rng(4242);
    for (double p : {1.5, 2.0, 3.0}) {
        Params pr(p);
        for (int trial = 0; trial < 3; ++trial) {
            auto zeros = random_zeros(rng, 2, 0.6);
            ZeroSetSpec spec;
            for (Cplx w : zeros) spec.add(w);

            SolverOptions opts;
            if (p < 2.0) opts.grad_tol = 3e-6;
            ProjectionResult jres = project_shift_span(vanishing_polynomial(spec), pr, opts);
            ProjectionResult phires = extremal_phi_direct(spec, pr, opts);

            double X = std::pow(jres.norm, p) - 1.0;
            double q = pr.p_conj - 1.0;
            double expect = std::pow(std::pow(X, q) / (1.0 + std::pow(X, q)), 1.0 / pr.p_conj);
            CHECK(phires.norm == doctest::Approx(expect).epsilon(1e-5));
            // Phi = 1 + f_W * h pins the value 1 at every prescribed zero.
            for (Cplx w : zeros)
                CHECK(std::abs(eval(phires.co_projection, w) - Cplx(1.0)) <= 1e-6);
            CHECK(phires.norm < 1.0);
        }
    }
}

TEST_CASE("nested projections have nondecreasing distances") {
    Params pr(2.5);
    SolverOptions opts;
    CoefSeq x({Cplx(1.0)});

    ZeroSeq seq = {Cplx(0.5), Cplx(-0.6), Cplx(0.0, 0.7), Cplx(0.5), Cplx(-0.6)};
    std::vector<ZeroSetSpec> chain;
    for (std::size_t n = 1; n <= seq.size(); ++n) chain.push_back(spec_from_prefix(seq, n));

    auto projections = nested_projection_sequence(x, chain, pr, opts);
    REQUIRE(projections.size() == chain.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < projections.size(); ++i) {
        CoefSeq diff = add_scaled(x, Cplx(-1.0), projections[i]);
        double dist = p_norm(diff, pr);
        CHECK(dist >= prev - 1e-9);
        prev = dist;
        // Each projection lives in the constraint space: it vanishes on the prefix.
        for (const auto& entry : chain[i].entries())
            CHECK(std::abs(eval(projections[i], entry.w)) <= 2e-5);
    }
}

TEST_CASE("chain prefixes must nest") {
    Params pr(2.0);
    SolverOptions opts;
    CoefSeq x({Cplx(1.0)});
    ZeroSetSpec a, b;
    a.add(Cplx(0.5));
    b.add(Cplx(-0.6));  // does not extend a
    CHECK_THROWS_AS(nested_projection_sequence(x, {a, b}, pr, opts), std::invalid_argument);
}
