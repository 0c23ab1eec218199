#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pinner/coefseq.hpp"
#include "pinner/complex_ops.hpp"
#include "pinner/zero_spec.hpp"

namespace pinner {

struct SolverOptions {
    enum class StepRule { backtracking, fixed };

    // Degree cap for the multiplier polynomial. 0 selects a degree from the
    // decay rate of the expected solution and verifies it by re-solving at
    // twice the degree.
    int truncation_degree = 0;
    double grad_tol = 1e-10;
    // Damped Newton iterations; typical solves take well under a hundred.
    long max_iters = 2000;
    // backtracking: adaptively damped Newton steps (the default).
    // fixed: always take the raw Newton step scaled by fixed_step.
    StepRule step_rule = StepRule::backtracking;
    double fixed_step = 0.0;

    void validate() const;
};

struct ProjectionResult {
    CoefSeq co_projection;    // x - f*q at the minimizer
    CoefSeq multiplier_poly;  // the polynomial q
    double norm = 0.0;        // p-norm of co_projection
    double grad_norm = 0.0;
    long iterations = 0;
    int truncation_degree = 0;
};

// Iteration budget exhausted before the gradient criterion was met. Carries
// the best iterate reached so far.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& msg, ProjectionResult partial);
    const ProjectionResult& partial() const { return partial_; }

private:
    ProjectionResult partial_;
};

// Minimizes ||x - f*q||_p^p over polynomials q supported on degrees
// [min_degree .. max_degree]. All projection entry points reduce to this.
ProjectionResult min_poly_multiple(const CoefSeq& x, const CoefSeq& f, int min_degree,
                                   int max_degree, const Params& params, const SolverOptions& opts,
                                   const CoefSeq* warm_start = nullptr);

// Metric projection of f onto the closed span of {z^k f : k >= 1}. Returns
// the co-projection J = f - Qf (with Q(0) = 0), the nearest point being Qf.
// f is rescaled internally so f(0) = 1 and the scale restored on output,
// hence J(0) = f(0). A zero of known order m at the origin is declared via
// origin_mult and split off as a common monomial factor before solving.
// largest_zero_modulus in (0,1) drives the automatic truncation degree;
// pass 0 when unknown (degree is then grown until the norm settles).
ProjectionResult project_shift_span(const CoefSeq& f, const Params& params, SolverOptions opts,
                                    unsigned origin_mult = 0, double largest_zero_modulus = 0.0);

// Solves inf ||1 + g||_p over g vanishing on W (equivalently g = f_W * h
// with h a free polynomial). co_projection holds the minimizer
// Phi = 1 + f_W * multiplier_poly, whose norm lies in (0,1).
ProjectionResult extremal_phi_direct(const ZeroSetSpec& W, const Params& params,
                                     SolverOptions opts);

// Metric projections P_n x of x onto the nested subspaces of functions
// vanishing on each chain prefix; chain[i] must extend chain[i-1]. The
// distances ||x - P_n x||_p are nondecreasing in n.
std::vector<CoefSeq> nested_projection_sequence(const CoefSeq& x,
                                                const std::vector<ZeroSetSpec>& chain,
                                                const Params& params, SolverOptions opts);

}  // namespace pinner
