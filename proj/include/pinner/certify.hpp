#pragma once

#include <string>
#include <vector>

#include "pinner/inner.hpp"
#include "pinner/zero_spec.hpp"

namespace pinner {

/// Norm evidence gathered along the prefixes W_1 c W_2 c ... of a zero
/// sequence: a sequence is certified (as far as a finite prefix can) by
/// the prefix inner elements J_n staying bounded in norm. The verdict is
/// a heuristic over the computed window, never a claim about the tail:
///   bounded_evidence  last five norms agree to 1e-6 relative,
///   growth_evidence   log-norms grow superlinearly in log n over the
///                     second half of the window,
///   inconclusive      anything else.
struct CertificateSequence {
    enum class Verdict { bounded_evidence, growth_evidence, inconclusive };

    std::vector<double> prefix_norms;  // ||J_n||_p for n = 1..n_max
    std::vector<double> phi_norms;     // ||Phi_n||_p, each in [0, 1)
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> notes;    // per-prefix solver annotations
};

const char* verdict_name(CertificateSequence::Verdict v);

/// Exponents r_k > 1 with sum(1 - 1/r_k) equal to a budget below 1/p'.
/// The slack epsilon is what keeps the limiting exponent p* above 1.
struct RSequence {
    std::vector<double> r;
    double budget = 0.0;   // sum of (1 - 1/r_k), equals 1/p' - epsilon
    double epsilon = 0.0;
};

/// Default r-sequence of length n for exponent pr.p: the budget
/// 1/p' - epsilon is split as 1 - 1/r_k = budget * 2^-k / (sum_j 2^-j),
/// so the geometric shares add up to the budget exactly and r_k -> 1.
/// epsilon <= 0 selects the default slack 0.1/p'. Throws
/// std::invalid_argument if n < 1 or epsilon >= 1/p'.
RSequence make_r_sequence(const Params& pr, int n, double epsilon = 0.0);

/// Exponent ladder 1/p_k = 1/p_{k-1} + (1 - 1/r_k) starting at p_0 = p,
/// decreasing toward p_star = 1 / (1/p + budget) > 1.
struct PkSequence {
    std::vector<double> p_values;
    double p_star = 0.0;
};

/// Runs the ladder recursion for the given r-sequence. Throws
/// std::invalid_argument if the budget reaches 1/p' (the ladder would
/// collapse to exponent 1 or below).
PkSequence pk_sequence(const Params& pr, const RSequence& r);

/// Prefix-hypothesis report for the sufficient zero-set condition: the
/// exponent budget must stay under 1/p', and the series
/// sum_k (1 - |w_k|^{r'_k})^{r_k - 1} must converge (checked here only as
/// a Cauchy trend on the given finite prefix). Claims are prefix-only.
struct BlaslikeReport {
    bool budget_ok = false;
    double budget = 0.0;
    double budget_limit = 0.0;         // 1/p'
    std::vector<double> tail_partial;  // partial sums of the series above
    bool tail_cauchy = false;          // last increments below 1e-8
    bool prefix_pass = false;          // both checks hold on the prefix
    std::string summary;
};

/// Norms of the prefix inner elements J_1..J_n_max for W taken in the
/// given order, each solved by the Newton interpolation route, together
/// with the extremal companion norms and the windowed verdict. A solver
/// failure at prefix n truncates the sequence there and leaves a note.
/// threads > 1 solves prefixes concurrently (they are independent);
/// the default runs them in order. Requires 1 <= n_max <= |W| entries.
CertificateSequence j_norm_sequence(const ZeroSetSpec& W, const Params& pr, int n_max,
                                    const SolverOptions& opts = SolverOptions{}, int threads = 1);

/// Partial Blaschke sum over the first n entries: sum mult_k (1 - |w_k|).
/// Requires 1 <= n <= |W| entries.
double blaschke_sum(const ZeroSetSpec& W, int n);

/// sup_k (1 - |w_{k+1}|) / (1 - |w_k|) over consecutive entries. Values
/// below 1 evidence an exponential approach to the circle; at or above 1
/// the moduli approach too slowly (or not at all). Requires at least two
/// entries sorted by nondecreasing modulus.
double newman_rate_check(const ZeroSetSpec& W);

/// Partial sum sum_{k<=n} mult_k (1 - |w_k|)^{1+eps}; at eps = 0 this is
/// the Blaschke sum. n is clamped to the number of entries.
double vinogradov_sums(const ZeroSetSpec& W, double eps, int n);

/// Product bound for ||J_n||_p from repeated convolution estimates:
/// prod_{k<n} ||B_{w_k, r_k}||_{r_k} * ||B_{w_n, r_n}||_{p*}. When the
/// classical two-step inequality chain for the last factor verifies
/// numerically the factor is additionally capped at 2. Requires
/// n <= min(|W|, |r|) entries and a valid ladder (see pk_sequence).
double young_product_bound(const ZeroSetSpec& W, const RSequence& r, const Params& pr, int n);

/// Evaluates both sufficient-condition hypotheses on the first n entries.
BlaslikeReport blaslike_sufficient(const ZeroSetSpec& W, const RSequence& r, const Params& pr,
                                   int n);

}  // namespace pinner
