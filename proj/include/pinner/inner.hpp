#pragma once

#include <string>
#include <vector>

#include "pinner/coefseq.hpp"
#include "pinner/solver.hpp"
#include "pinner/zero_spec.hpp"

namespace pinner {

/// A p-inner element J with J(0) = 1: J is orthogonal (in the
/// Birkhoff-James sense for the exponent in effect) to every forward
/// shift of itself. The struct stores a truncation of J together with
/// the evidence gathered while building it.
struct InnerResult {
    enum class Method { closed_form, newton, co_projection };

    CoefSeq J;
    double norm = 1.0;                   // p-norm of the stored truncation
    std::vector<double> orth_residuals;  // |(J^<p-1>, z^n J)| for n = 1..N
    Method method = Method::closed_form;
    int iterations = 0;                  // Newton iterations, if that route ran
    std::vector<std::string> warnings;   // conditioning notes, if any
};

const char* method_name(InnerResult::Method m);

/// Constants behind the series ansatz used by the Newton route:
///   J(z) = 1 + sum_{k>=1} (sum_m sum_j C[m][j] k^j s_m^k)^<p'-1> z^k,
/// one block per distinct root s_m, one constant per derivative order
/// j < mult(s_m). series_cap is the truncation point K at which the
/// geometric tail of the inner sum has decayed below 1e-14 in the
/// coefficient magnitudes.
struct NewtonState {
    std::vector<std::vector<Cplx>> constants;
    int series_cap = 0;
};

/// Extremal companion of an inner element: Phi = 1 - g0 * J with the
/// scalar g0 chosen so that Phi has the smallest p-norm among all
/// functions 1 - (multiple of J). Phi takes the value 1 wherever J
/// vanishes, and phi_norm < 1 is in exact algebraic correspondence with
/// the norm of J (see inner_norm_from_phi).
struct PhiResult {
    CoefSeq phi;
    double phi_norm = 0.0;
    double g0 = 0.0;  // strictly between 0 and 1
};

/// Degree-`degree` truncation of the inner element for a single simple
/// zero at w:
///   J(z) = (1 - z/w) / (1 - u z),  u = w^<p'-1>,
/// so J_0 = 1 and J_k = -((1 - |w|^p') / w) u^{k-1} for k >= 1. The norm
/// and orthogonality residuals are computed from the truncation; pick the
/// degree large enough that |u|^degree is negligible for the use at hand.
/// Throws std::invalid_argument unless 0 < |w| < 1 and degree >= 1.
InnerResult linear_inner_closed_form(Cplx w, const Params& pr, int degree);

/// t-norm of the single-zero inner element B built for exponent r:
///   ||B||_t^t = 1 + (1 - |w|^r')^t / (|w|^t (1 - |w|^{(r'-1) t})),
/// which at t = r simplifies to 1 + (1 - |w|^r')^{r-1} / |w|^r. Returns
/// the norm itself (the t-th root). Requires 0 < |w| < 1, r > 1, t > 1.
double b_factor_norm(Cplx w, double r, double t);

/// Inner element vanishing to the prescribed orders on a finite zero set,
/// found by Newton iteration on the interpolation constants C[m][j] of the
/// series ansatz (see NewtonState). Starts from the exactly solvable p = 2
/// linear system and walks the exponent to pr.p in short homotopy steps.
/// opts.grad_tol is the residual target for the interpolation conditions
/// and opts.max_iters caps the total Newton iterations. Conditioning
/// warnings from merged or near-coincident roots are forwarded into the
/// result. Throws std::runtime_error if Newton fails to converge (the
/// message carries the final residual norm); std::invalid_argument for
/// roots at the origin or outside the open disk. If state_out is non-null
/// the converged constants and series cap are copied there.
InnerResult solve_inner_newton(const ZeroSetSpec& W, const Params& pr,
                               const SolverOptions& opts = SolverOptions{},
                               NewtonState* state_out = nullptr);

/// Orthogonality residuals |(J^<p-1>, z^n J)| for n = 1..n_max. All of
/// them vanish exactly when J is p-inner; for a truncated series they
/// decay with the dropped tail. Throws std::invalid_argument if J is
/// identically zero or n_max < 1.
std::vector<double> verify_p_inner(const CoefSeq& J, const Params& pr, int n_max);

/// Extremal companion Phi = 1 - g0 * J of an inner element with
/// ||J||_p > 1, where with X = ||J||_p^p - 1:
///   g0 = 1 / (1 + X^{p'-1}),   ||Phi||_p^{p'} = X^{p'-1} / (1 + X^{p'-1}).
/// Throws std::invalid_argument unless J(0) = 1 and ||J||_p > 1.
PhiResult phi_from_inner(const InnerResult& J, const Params& pr);

/// Inverts the Phi-norm correspondence: given v = ||Phi||_p in [0, 1),
/// returns ||J||_p^p of the inner element it came from, via
///   ||J||_p^p = 1 + v^p / (1 - v^p')^{p-1}.
/// (The exponents make this the exact right inverse of phi_from_inner;
/// composing the two reproduces ||J||_p^p to round-off.) v = 0 maps to 1.
/// Throws std::invalid_argument if v >= 1 or v < 0.
double inner_norm_from_phi(double phi_norm, const Params& pr);

}  // namespace pinner
