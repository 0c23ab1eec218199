#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pinner/certify.hpp"
#include "pinner/complex_ops.hpp"
#include "pinner/sparse_poly.hpp"

namespace pinner {

/// One level of targeted roots: `count` points modulus * e^{2 pi i l / count},
/// l = 0..count-1. Levels with huge counts (a level-k factorial factor owns k!
/// roots) stay as summaries; materialize_roots expands the small ones.
/// log_modulus carries the modulus exactly where it matters: the deepest gap
/// levels sit so close to the unit circle that modulus itself rounds to 1.0.
struct RootCircle {
    double modulus = 0.0;
    std::uint64_t count = 0;
    double angular_spacing = 0.0;  // radians between neighbours, 2 pi / count
    double log_modulus = 0.0;
};

std::vector<Cplx> materialize_roots(const RootCircle& circle);

/// A finite product of sparse factors with prescribed root circles.
///
/// bound_product is the factorized estimate each family carries: for the
/// geometric family it bounds exact_norm itself (product of factor norms at
/// stepped exponents), for the gap families it bounds exact_norm^p (their
/// expansion estimates). r_values repeats the root-circle moduli; they lie in
/// (0,1] (the first factorial level sits exactly on the boundary).
/// blaschke_partials accumulates count * (1 - modulus) per level.
struct FamilyOutput {
    std::vector<SparsePoly> factors;
    SparsePoly product;
    double exact_norm = 0.0;
    double bound_product = 0.0;
    std::vector<RootCircle> targeted_roots;
    std::vector<double> r_values;
    std::vector<double> blaschke_partials;
};

/// Product of the first n single-root factors B_{w_k, r_k}, each expanded as
/// a power series and truncated once its geometric coefficient tail drops
/// below 1e-18. With rotate set, factor k is composed with z^k, so level k
/// contributes the k complex k-th roots of w_k while keeping the factor norm
/// unchanged (the coefficient multiset does not move). bound_product chains
/// the factor norms through the stepped exponents of r.
///
/// Throws std::invalid_argument for moduli outside (0,1) or n beyond the
/// lists, std::overflow_error when truncation cannot fit the term budget.
FamilyOutput geometric_family(const std::vector<double>& w_moduli, const RSequence& r, bool rotate,
                              const Params& pr, int n);

/// The doubling-gap family: level k multiplies in
///   1 - 2^{-(k-1)} sum_{i<2^{k-1}} (z / r_k)^{N_k 2^i},  N_k = 2^{2^{k-1}-1},
/// whose roots are the N_k-th roots of unity scaled by r_k. The modulus
/// formula r_k = (k (log10 k)^a / 2^{(k-1)(p-1)})^{1 / (N_k^2 p)} starts at
/// k = 2 (it degenerates at k = 1, where r1_override is used instead), and
/// makes the level-k norm bound collapse to 1 + 1/(k (log10 k)^a).
/// Exponents across levels never collide, so the expansion has exactly
/// prod_k (1 + 2^{k-1}) terms.
///
/// k_max is capped at 6: level 7 exponents would pass 2^64.
FamilyOutput slow_family(int k_max, double a, const Params& pr, double r1_override = 0.5);

/// Bracket for the modulus of the n-th root of slow_family (roots ordered by
/// level, n >= 2): the level holding root n is pinned by
/// L = log2(1 + log2 n) to {ceil L, ceil L + 1}, and the level moduli
/// increase, so [r_K, r_{K+1}] with K = max(2, ceil L) contains it. The gap
/// 1 - lower(n) shrinks sub-geometrically in n, which is the point of the
/// family.
std::pair<double, double> rho_bounds(int n, double a, const Params& pr);

/// The factorial-gap family for p > 2: level j multiplies in
///   1 - (1/j) sum_{i=1..j} (z / r_j)^{i j!},
/// with r_j = j^{-(p-2-alpha) / (j p j!)} (so r_1 = 1 exactly). Roots are the
/// j!-th roots of unity scaled by r_j. Exponent sums stay distinct and the
/// top exponent of level k's expansion is (k+1)! - 1, giving exactly (k+1)!
/// terms. The level bound collapses to 1 + j^{-(1+alpha)}, so exact_norm^p
/// stays below a convergent product while blaschke_partials = sum j!(1 - r_j)
/// grows without bound.
///
/// k_max is capped at 8: level 9 would expand to 3.6M terms.
FamilyOutput nonblaschke_family(const Params& pr, double alpha, int k_max);

/// Lower bound for nonblaschke_family's blaschke_partials[k-1]: each term
/// j!(1 - r_j) = j!(1 - e^{-x_j}) with x_j = (p-2-alpha) log j / (j p j!) is
/// at least j!(x_j - x_j^2/2), valid for all x >= 0, which sums to
///   sum_{j<=k} (p-2-a) log j / (j p)
///     - sum_{j<=k} (p-2-a)^2 (log j)^2 / (2 (j p)^2 j!).
/// The first sum grows like (log k)^2, so the partial sums this minorizes
/// cannot converge.
double blaschke_lower_bound(int k, const Params& pr, double alpha);

/// prod_{j>=1} (1 + j^{-s}) for s > 1, summed directly to j = 10^6 with a
/// midpoint integral tail; the dropped mass stays below 1e-12.
double converged_product(double s);

}  // namespace pinner
