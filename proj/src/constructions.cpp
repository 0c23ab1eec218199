#include "pinner/constructions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pinner/zero_spec.hpp"

namespace pinner {

namespace {

constexpr double kFactorTailCut = 1e-18;
constexpr std::size_t kMaxFactorTerms = std::size_t(1) << 20;
constexpr std::size_t kMaxProductTerms = std::size_t(4) << 20;
constexpr std::size_t kMaxMaterializedRoots = 1'000'000;

// B_{w,r}(z^m) as a power series: the two-term rational closed form expands
// into 1 minus a geometric tail, cut once the coefficients fall below
// kFactorTailCut.
SparsePoly truncated_b_factor(double w, double r, std::uint64_t m) {
    const double rc = r / (r - 1.0);
    const double u = std::pow(w, rc - 1.0);
    SparsePoly f;
    f.add_term(0, Cplx(1.0));
    double mag = (1.0 - std::pow(w, rc)) / w;
    for (std::uint64_t i = 1; mag >= kFactorTailCut; ++i, mag *= u) {
        if (f.term_count() >= kMaxFactorTerms) {
            std::ostringstream os;
            os << "geometric_family: truncating the factor at modulus " << w << ", exponent " << r
               << " needs more than " << kMaxFactorTerms << " terms";
            throw std::overflow_error(os.str());
        }
        f.add_term(m * i, Cplx(-mag));
    }
    return f;
}

// r_k of the doubling-gap family for k >= 2, as a log so callers keep full
// precision near 1. N_k^2 = 2^{2^k - 2} overflows binary64 past k = 10 and
// the log then underflows to -0, which the bracket code treats as modulus 1.
double slow_log_modulus(int k, double a, const Params& pr) {
    const double lg = std::log10(static_cast<double>(k));
    const double num = std::log(static_cast<double>(k)) + a * std::log(lg) -
                       (k - 1) * (pr.p - 1.0) * std::numbers::ln2;
    if (!(num < 0.0)) {
        std::ostringstream os;
        os << "modulus formula leaves the disk at level " << k << ": needs k (log10 k)^a < 2^{(k-1)(p-1)}";
        throw std::invalid_argument(os.str());
    }
    const double n2 = std::pow(2.0, std::pow(2.0, static_cast<double>(k)) - 2.0);
    return num / (n2 * pr.p);
}

}  // namespace

std::vector<Cplx> materialize_roots(const RootCircle& circle) {
    if (circle.count == 0 || circle.count > kMaxMaterializedRoots)
        throw std::invalid_argument("materialize_roots: count outside [1, 1e6]");
    std::vector<Cplx> out;
    out.reserve(circle.count);
    for (std::uint64_t l = 0; l < circle.count; ++l) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(l) /
                           static_cast<double>(circle.count);
        out.push_back(circle.modulus * Cplx(std::cos(ang), std::sin(ang)));
    }
    return out;
}

FamilyOutput geometric_family(const std::vector<double>& w_moduli, const RSequence& r, bool rotate,
                              const Params& pr, int n) {
    if (n < 1) throw std::invalid_argument("geometric_family: n must be positive");
    if (static_cast<std::size_t>(n) > w_moduli.size() || static_cast<std::size_t>(n) > r.r.size())
        throw std::invalid_argument("geometric_family: n exceeds the modulus or exponent lists");
    for (int k = 0; k < n; ++k)
        if (!(w_moduli[static_cast<std::size_t>(k)] > 0.0) || w_moduli[static_cast<std::size_t>(k)] >= 1.0)
            throw std::invalid_argument("geometric_family: moduli must lie in (0,1)");

    FamilyOutput out;
    out.product = SparsePoly::one();
    ZeroSetSpec W;
    double bsum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double w = w_moduli[static_cast<std::size_t>(k - 1)];
        const double rk = r.r[static_cast<std::size_t>(k - 1)];
        const std::uint64_t m = rotate ? static_cast<std::uint64_t>(k) : 1;
        SparsePoly f = truncated_b_factor(w, rk, m);
        out.product = sparse_multiply(out.product, f);
        if (out.product.term_count() > kMaxProductTerms)
            throw std::overflow_error("geometric_family: expanded product exceeds the term budget");
        const double modulus = rotate ? std::pow(w, 1.0 / k) : w;
        out.targeted_roots.push_back({modulus, m,
                                      2.0 * std::numbers::pi / static_cast<double>(m),
                                      std::log(w) / static_cast<double>(m)});
        out.r_values.push_back(modulus);
        bsum += static_cast<double>(m) * (1.0 - modulus);
        out.blaschke_partials.push_back(bsum);
        out.factors.push_back(std::move(f));
        W.add(Cplx(w, 0.0));
    }
    out.exact_norm = sparse_p_norm(out.product, pr);
    out.bound_product = young_product_bound(W, r, pr, n);
    return out;
}

FamilyOutput slow_family(int k_max, double a, const Params& pr, double r1_override) {
    if (k_max < 1 || k_max > 6)
        throw std::invalid_argument("slow_family: k_max must be in [1,6] (level 7 exponents pass 2^64)");
    if (!(a > 1.0)) throw std::invalid_argument("slow_family: a must exceed 1");
    if (!(r1_override > 0.0) || r1_override >= 1.0)
        throw std::invalid_argument("slow_family: r1_override must lie in (0,1)");

    FamilyOutput out;
    out.product = SparsePoly::one();
    out.bound_product = 1.0;
    double bsum = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const std::uint64_t nk = std::uint64_t(1) << ((std::uint64_t(1) << (k - 1)) - 1);
        double lnr;
        try {
            lnr = (k == 1) ? std::log(r1_override) : slow_log_modulus(k, a, pr);
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(std::string("slow_family: ") + err.what());
        }
        const double rk = std::exp(lnr);
        SparsePoly f;
        f.add_term(0, Cplx(1.0));
        const double scale = std::ldexp(1.0, -(k - 1));
        for (std::uint64_t i = 0; i < (std::uint64_t(1) << (k - 1)); ++i) {
            const std::uint64_t e = nk << i;
            f.add_term(e, Cplx(-scale * std::exp(-static_cast<double>(e) * lnr)));
        }
        out.product = sparse_multiply_distinct(out.product, f);
        out.bound_product *= (k == 1)
                                 ? 1.0 + std::pow(r1_override, -pr.p)
                                 : 1.0 + 1.0 / (k * std::pow(std::log10(static_cast<double>(k)), a));
        out.targeted_roots.push_back(
            {rk, nk, 2.0 * std::numbers::pi / static_cast<double>(nk), lnr});
        out.r_values.push_back(rk);
        bsum += static_cast<double>(nk) * (-std::expm1(lnr));
        out.blaschke_partials.push_back(bsum);
        out.factors.push_back(std::move(f));
    }
    out.exact_norm = sparse_p_norm(out.product, pr);
    return out;
}

std::pair<double, double> rho_bounds(int n, double a, const Params& pr) {
    if (n < 2) throw std::invalid_argument("rho_bounds: n must be at least 2");
    if (!(a > 1.0)) throw std::invalid_argument("rho_bounds: a must exceed 1");
    const double level = std::log2(1.0 + std::log2(static_cast<double>(n)));
    const int k = std::max(2, static_cast<int>(std::ceil(level)));
    const double lower = std::exp(slow_log_modulus(k, a, pr));
    const double upper = std::exp(slow_log_modulus(k + 1, a, pr));
    if (!(lower <= upper)) throw std::logic_error("rho_bounds: bracket inverted");
    return {lower, upper};
}

FamilyOutput nonblaschke_family(const Params& pr, double alpha, int k_max) {
    if (!(pr.p > 2.0)) throw std::invalid_argument("nonblaschke_family: requires p > 2");
    if (!(alpha > 0.0) || !(alpha < pr.p - 2.0))
        throw std::invalid_argument("nonblaschke_family: alpha must lie in (0, p-2)");
    if (k_max < 1 || k_max > 8)
        throw std::invalid_argument(
            "nonblaschke_family: k_max must be in [1,8] (level 9 expands to 3.6M terms)");

    const double s = pr.p - 2.0 - alpha;
    FamilyOutput out;
    out.product = SparsePoly::one();
    out.bound_product = 1.0;
    double bsum = 0.0;
    std::uint64_t fact = 1;
    for (int j = 1; j <= k_max; ++j) {
        fact *= static_cast<std::uint64_t>(j);
        const double lnr =
            -s * std::log(static_cast<double>(j)) / (j * pr.p * static_cast<double>(fact));
        const double rj = std::exp(lnr);
        SparsePoly f;
        f.add_term(0, Cplx(1.0));
        for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(j); ++i) {
            const std::uint64_t e = i * fact;
            f.add_term(e, Cplx(-(1.0 / j) * std::exp(-static_cast<double>(e) * lnr)));
        }
        out.product = sparse_multiply_distinct(out.product, f);
        out.bound_product *= 1.0 + std::pow(static_cast<double>(j), -(1.0 + alpha));
        out.targeted_roots.push_back(
            {rj, fact, 2.0 * std::numbers::pi / static_cast<double>(fact), lnr});
        out.r_values.push_back(rj);
        bsum += static_cast<double>(fact) * (-std::expm1(lnr));
        out.blaschke_partials.push_back(bsum);
        out.factors.push_back(std::move(f));
    }
    out.exact_norm = sparse_p_norm(out.product, pr);
    return out;
}

double blaschke_lower_bound(int k, const Params& pr, double alpha) {
    if (k < 1) throw std::invalid_argument("blaschke_lower_bound: k must be positive");
    if (!(pr.p > 2.0) || !(alpha > 0.0) || !(alpha < pr.p - 2.0))
        throw std::invalid_argument("blaschke_lower_bound: requires p > 2 and alpha in (0, p-2)");
    const double s = pr.p - 2.0 - alpha;
    double first = 0.0;
    double second = 0.0;
    double fact = 1.0;  // runs to +inf past j = 170, zeroing the correction terms
    for (int j = 1; j <= k; ++j) {
        fact *= j;
        const double lj = std::log(static_cast<double>(j));
        first += s * lj / (j * pr.p);
        second += s * s * lj * lj / (2.0 * (j * pr.p) * (j * pr.p) * fact);
    }
    return first - second;
}

double converged_product(double s) {
    if (!(s > 1.0)) throw std::invalid_argument("converged_product: requires s > 1");
    const int cut = 1'000'000;
    double sum = 0.0;
    double comp = 0.0;
    for (int j = 1; j <= cut; ++j) {
        const double term = std::log1p(std::pow(static_cast<double>(j), -s));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // log(1 + x) = x - x^2/2 + O(x^3) under the midpoint integral tail; the
    // third-order piece is ~1e-21 of mass at this cut.
    const double m = cut + 0.5;
    const double tail =
        std::pow(m, 1.0 - s) / (s - 1.0) - std::pow(m, 1.0 - 2.0 * s) / (2.0 * (2.0 * s - 1.0));
    return std::exp(sum + tail);
}

}  // namespace pinner
