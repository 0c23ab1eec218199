#include "pinner/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pinner {

const char* verdict_name(CertificateSequence::Verdict v) {
    switch (v) {
        case CertificateSequence::Verdict::bounded_evidence: return "bounded_evidence";
        case CertificateSequence::Verdict::growth_evidence: return "growth_evidence";
        case CertificateSequence::Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

// The zero sequence with multiplicities written out, for the diagnostics
// that pair one exponent r_k with one zero.
std::vector<Cplx> expanded_sequence(const ZeroSetSpec& W) {
    std::vector<Cplx> seq;
    for (const ZeroEntry& e : W.entries())
        for (unsigned i = 0; i < e.mult; ++i) seq.push_back(e.w);
    return seq;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t lo,
                std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = m * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
}

// Windowed verdict. The boundedness criterion is a sup over all n, which
// no finite prefix can decide; this only grades the visible trend.
CertificateSequence::Verdict classify(const std::vector<double>& norms) {
    const std::size_t n = norms.size();
    if (n >= 5) {
        double lo = norms[n - 5], hi = norms[n - 5];
        for (std::size_t i = n - 5; i < n; ++i) {
            lo = std::min(lo, norms[i]);
            hi = std::max(hi, norms[i]);
        }
        if (hi - lo <= 1e-6 * hi) return CertificateSequence::Verdict::bounded_evidence;
    }
    if (n >= 6) {
        // Superlinear growth of log-norm against log n over the last half:
        // the fitted slope of the late quarter exceeds the earlier one.
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = std::log(static_cast<double>(i + 1));
            ys[i] = std::log(norms[i]);
        }
        const std::size_t half = n / 2;
        const std::size_t mid = half + (n - half) / 2;
        const double early = ls_slope(xs, ys, half, mid + 1);
        const double late = ls_slope(xs, ys, mid, n);
        if (late > 0.0 && late > 1.1 * std::max(early, 0.0))
            return CertificateSequence::Verdict::growth_evidence;
    }
    return CertificateSequence::Verdict::inconclusive;
}

}  // namespace

CertificateSequence j_norm_sequence(const ZeroSetSpec& W, const Params& pr, int n_max,
                                    const SolverOptions& opts, int threads) {
    const int n_entries = static_cast<int>(W.entries().size());
    if (n_max < 1 || n_max > n_entries)
        throw std::invalid_argument("j_norm_sequence: n_max must lie in [1, number of zero entries]");

    std::vector<double> norms(static_cast<std::size_t>(n_max), 0.0);
    std::vector<double> phis(static_cast<std::size_t>(n_max), 0.0);
    std::vector<std::string> errs(static_cast<std::size_t>(n_max));

    auto solve_prefix = [&](int n) {
        try {
            std::vector<ZeroEntry> head(W.entries().begin(), W.entries().begin() + n);
            ZeroSetSpec prefix(std::move(head));
            const InnerResult jr = solve_inner_newton(prefix, pr, opts);
            norms[static_cast<std::size_t>(n - 1)] = jr.norm;
            phis[static_cast<std::size_t>(n - 1)] = phi_from_inner(jr, pr).phi_norm;
        } catch (const std::exception& e) {
            errs[static_cast<std::size_t>(n - 1)] = e.what();
        }
    };

    if (threads > 1) {
        std::vector<std::thread> pool;
        const int nt = std::min(threads, n_max);
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (int n = t + 1; n <= n_max; n += nt) solve_prefix(n);
            });
        for (std::thread& th : pool) th.join();
    } else {
        for (int n = 1; n <= n_max; ++n) solve_prefix(n);
    }

    CertificateSequence cert;
    for (int n = 1; n <= n_max; ++n) {
        if (!errs[static_cast<std::size_t>(n - 1)].empty()) {
            std::ostringstream note;
            note << "prefix " << n << ": " << errs[static_cast<std::size_t>(n - 1)]
                 << " (sequence truncated here)";
            cert.notes.push_back(note.str());
            break;
        }
        cert.prefix_norms.push_back(norms[static_cast<std::size_t>(n - 1)]);
        cert.phi_norms.push_back(phis[static_cast<std::size_t>(n - 1)]);
    }
    cert.verdict = classify(cert.prefix_norms);
    return cert;
}

RSequence make_r_sequence(const Params& pr, int n, double epsilon) {
    if (n < 1) throw std::invalid_argument("make_r_sequence: need at least one exponent");
    if (epsilon <= 0.0) epsilon = 0.1 / pr.p_conj;
    const double limit = 1.0 / pr.p_conj;
    if (epsilon >= limit) throw std::invalid_argument("make_r_sequence: epsilon must stay below 1/p'");
    RSequence out;
    out.epsilon = epsilon;
    out.budget = limit - epsilon;
    // Geometric shares of the budget assigned to 1 - 1/r_k, so the total
    // is met exactly and r_k -> 1.
    const double scale = 1.0 - std::pow(2.0, -n);
    out.r.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double share = out.budget * std::pow(2.0, -k) / scale;
        out.r.push_back(1.0 / (1.0 - share));
    }
    return out;
}

PkSequence pk_sequence(const Params& pr, const RSequence& r) {
    if (r.r.empty()) throw std::invalid_argument("pk_sequence: empty exponent sequence");
    double used = 0.0;
    for (double rk : r.r) {
        if (!(rk > 1.0)) throw std::invalid_argument("pk_sequence: every r_k must exceed 1");
        used += 1.0 - 1.0 / rk;
    }
    const double limit = 1.0 / pr.p_conj;
    if (used >= limit)
        throw std::invalid_argument("pk_sequence: exponent budget reaches 1/p', ladder would collapse");
    PkSequence out;
    double inv = 1.0 / pr.p;
    out.p_values.reserve(r.r.size());
    for (double rk : r.r) {
        inv += 1.0 - 1.0 / rk;
        out.p_values.push_back(1.0 / inv);
    }
    out.p_star = 1.0 / (1.0 / pr.p + used);
    return out;
}

double blaschke_sum(const ZeroSetSpec& W, int n) {
    if (n < 1 || n > static_cast<int>(W.entries().size()))
        throw std::invalid_argument("blaschke_sum: n must lie in [1, number of zero entries]");
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const ZeroEntry& e = W.entries()[static_cast<std::size_t>(k)];
        s += e.mult * (1.0 - std::abs(e.w));
    }
    return s;
}

double newman_rate_check(const ZeroSetSpec& W) {
    const auto& es = W.entries();
    if (es.size() < 2) throw std::invalid_argument("newman_rate_check: need at least two zeros");
    double sup = 0.0;
    for (std::size_t k = 0; k + 1 < es.size(); ++k) {
        const double a = std::abs(es[k].w);
        const double b = std::abs(es[k + 1].w);
        if (b < a - 1e-15)
            throw std::invalid_argument("newman_rate_check: zeros must be sorted by nondecreasing modulus");
        sup = std::max(sup, (1.0 - b) / (1.0 - a));
    }
    return sup;
}

double vinogradov_sums(const ZeroSetSpec& W, double eps, int n) {
    if (eps < 0.0) throw std::invalid_argument("vinogradov_sums: eps must be nonnegative");
    const int count = std::min<int>(n, static_cast<int>(W.entries().size()));
    double s = 0.0;
    for (int k = 0; k < count; ++k) {
        const ZeroEntry& e = W.entries()[static_cast<std::size_t>(k)];
        s += e.mult * std::pow(1.0 - std::abs(e.w), 1.0 + eps);
    }
    return s;
}

double young_product_bound(const ZeroSetSpec& W, const RSequence& r, const Params& pr, int n) {
    const std::vector<Cplx> seq = expanded_sequence(W);
    if (n < 1 || n > static_cast<int>(std::min(seq.size(), r.r.size())))
        throw std::invalid_argument("young_product_bound: n must fit both the zero and exponent sequences");
    const PkSequence lad = pk_sequence(pr, r);

    double bound = 1.0;
    for (int k = 0; k + 1 < n; ++k) bound *= b_factor_norm(seq[static_cast<std::size_t>(k)], r.r[static_cast<std::size_t>(k)], r.r[static_cast<std::size_t>(k)]);

    const Cplx wn = seq[static_cast<std::size_t>(n - 1)];
    const double rn = r.r[static_cast<std::size_t>(n - 1)];
    double last = b_factor_norm(wn, rn, lad.p_star);
    // The classical estimate caps this factor at 2 once the two-step
    // inequality chain holds; apply it only when both steps verify here.
    const double aw = std::abs(wn);
    const double rc = rn / (rn - 1.0);
    const bool step1 = (1.0 - std::pow(aw, (rc - 1.0) * lad.p_star)) >=
                       std::pow(1.0 - std::pow(aw, rc), lad.p_star);
    const bool step2 = 1.0 + std::pow(aw, -lad.p_star) <= std::pow(2.0, lad.p_star);
    if (step1 && step2) last = std::min(last, 2.0);
    return bound * last;
}

BlaslikeReport blaslike_sufficient(const ZeroSetSpec& W, const RSequence& r, const Params& pr,
                                   int n) {
    const std::vector<Cplx> seq = expanded_sequence(W);
    const int count = std::min<int>(n, static_cast<int>(std::min(seq.size(), r.r.size())));
    if (count < 1) throw std::invalid_argument("blaslike_sufficient: need at least one (zero, exponent) pair");

    BlaslikeReport rep;
    rep.budget_limit = 1.0 / pr.p_conj;
    for (double rk : r.r) rep.budget += 1.0 - 1.0 / rk;
    rep.budget_ok = rep.budget < rep.budget_limit;

    double s = 0.0;
    for (int k = 0; k < count; ++k) {
        const double aw = std::abs(seq[static_cast<std::size_t>(k)]);
        const double rk = r.r[static_cast<std::size_t>(k)];
        const double rc = rk / (rk - 1.0);
        s += std::pow(1.0 - std::pow(aw, rc), rk - 1.0);
        rep.tail_partial.push_back(s);
    }
    const int window = std::max(1, count / 4);
    rep.tail_cauchy = count >= 2;
    for (int k = count - window; k < count && rep.tail_cauchy; ++k) {
        const double prev = (k >= 1) ? rep.tail_partial[static_cast<std::size_t>(k - 1)] : 0.0;
        if (rep.tail_partial[static_cast<std::size_t>(k)] - prev >= 1e-8) rep.tail_cauchy = false;
    }
    rep.prefix_pass = rep.budget_ok && rep.tail_cauchy;

    std::ostringstream msg;
    if (rep.prefix_pass) {
        msg << "hypotheses verified on prefix (n = " << count << "): exponent budget " << rep.budget
            << " < " << rep.budget_limit << ", tail increments below 1e-8";
    } else if (!rep.budget_ok) {
        msg << "exponent budget " << rep.budget << " reaches 1/p' = " << rep.budget_limit
            << ", hypothesis failed";
    } else {
        msg << "tail partial sums still moving at prefix n = " << count
            << " (last increment >= 1e-8), convergence not evidenced";
    }
    rep.summary = msg.str();
    return rep;
}

}  // namespace pinner
