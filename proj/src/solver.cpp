#include "pinner/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "pinner/kernels.hpp"

namespace pinner {

void SolverOptions::validate() const {
    if (!(grad_tol > 0.0)) throw std::invalid_argument("SolverOptions: grad_tol must be positive");
    if (max_iters <= 0) throw std::invalid_argument("SolverOptions: max_iters must be positive");
    if (truncation_degree < 0)
        throw std::invalid_argument("SolverOptions: negative truncation_degree");
    if (step_rule == StepRule::fixed && !(fixed_step > 0.0))
        throw std::invalid_argument("SolverOptions: fixed step rule needs fixed_step > 0");
}

solver_error::solver_error(const std::string& msg, ProjectionResult partial)
    : std::runtime_error(msg), partial_(std::move(partial)) {}

namespace {

constexpr double kDegreeTailEps = 1e-12;
constexpr double kDegreeSettleTol = 1e-9;

// Relative floor applied to |h_j| inside the Hessian weights, low enough
// that every coordinate above the coefficient accuracy targets keeps its
// true curvature (the Newton system is Jacobi-equilibrated, so the wide
// curvature spread this admits does not hurt the factorization).
constexpr double kHessFloorRel = 1e-13;

// Symmetric positive definite band matrix, lower-band row storage: entry
// (i, j) with 0 <= i-j <= kd lives at a[i*(kd+1) + (i-j)].
class BandedLLT {
public:
    BandedLLT(int n, int kd)
        : n_(n), kd_(kd), a_(static_cast<std::size_t>(n) * (kd + 1), 0.0) {}

    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (kd_ + 1) + (i - j)]; }
    double at(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * (kd_ + 1) + (i - j)];
    }
    void clear() { std::fill(a_.begin(), a_.end(), 0.0); }
    void copy_from(const BandedLLT& o) { a_ = o.a_; }

    // In-place Cholesky; false when a pivot fails to be positive.
    bool factorize() {
        for (int i = 0; i < n_; ++i) {
            const int lo = std::max(0, i - kd_);
            double s = at(i, i);
            for (int k = lo; k < i; ++k) s -= at(i, k) * at(i, k);
            if (!(s > 0.0)) return false;
            const double di = std::sqrt(s);
            at(i, i) = di;
            const int rhi = std::min(n_ - 1, i + kd_);
            for (int r = i + 1; r <= rhi; ++r) {
                const int klo = std::max(lo, r - kd_);
                double t = at(r, i);
                for (int k = klo; k < i; ++k) t -= at(r, k) * at(i, k);
                at(r, i) = t / di;
            }
        }
        return true;
    }

    void solve(std::vector<double>& b) const {
        for (int i = 0; i < n_; ++i) {
            double s = b[i];
            for (int k = std::max(0, i - kd_); k < i; ++k) s -= at(i, k) * b[k];
            b[i] = s / at(i, i);
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = b[i];
            const int rhi = std::min(n_ - 1, i + kd_);
            for (int r = i + 1; r <= rhi; ++r) s -= at(r, i) * b[r];
            b[i] = s / at(i, i);
        }
    }

private:
    int n_, kd_;
    std::vector<double> a_;
};

// Largest modulus among roots strictly inside the unit disk, or 0 when the
// polynomial has none. Companion-matrix eigenvalues; fine for the modest
// degrees the projection entry points see.
double largest_disk_root_modulus(const CoefSeq& f) {
    const CoefSeq g = trim(f);
    const int d = g.degree();
    if (d < 1) return 0.0;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) C(i + 1, i) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -g[i] / g[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
    double R = 0.0;
    for (int i = 0; i < d; ++i) {
        const double r = std::abs(es.eigenvalues()[i]);
        if (r < 1.0 - 1e-9) R = std::max(R, r);
    }
    return R;
}

// Multiplier degree from the decay rate of the expected co-projection: its
// Taylor coefficients fall off like R^{(p'-1)k}, so a degree-(deg f + tail)
// cap keeps the dropped tail below kDegreeTailEps per coefficient.
int auto_degree(int deg_f, const Params& pr, double R) {
    if (R > 0.0 && R < 1.0) {
        const double tail = std::log(kDegreeTailEps) / ((pr.p_conj - 1.0) * std::log(R));
        return deg_f + std::max(8, static_cast<int>(std::ceil(tail)));
    }
    return deg_f + 32;
}

ProjectionResult solve_with_degree_policy(const CoefSeq& x, const CoefSeq& f, int min_degree,
                                          const Params& params, const SolverOptions& opts,
                                          double R) {
    if (opts.truncation_degree > 0) {
        if (opts.truncation_degree < f.degree())
            throw std::invalid_argument("truncation_degree is below the degree of f");
        return min_poly_multiple(x, f, min_degree, opts.truncation_degree, params, opts);
    }
    int D = auto_degree(trim(f).degree(), params, R);
    ProjectionResult res = min_poly_multiple(x, f, min_degree, D, params, opts);
    for (int round = 0; round < 6; ++round) {
        D *= 2;
        ProjectionResult wide =
            min_poly_multiple(x, f, min_degree, D, params, opts, &res.multiplier_poly);
        const bool settled = std::abs(wide.norm - res.norm) < kDegreeSettleTol;
        res = std::move(wide);
        if (settled) return res;
    }
    throw solver_error("truncation degree did not settle after repeated doubling", std::move(res));
}

}  // namespace

ProjectionResult min_poly_multiple(const CoefSeq& x, const CoefSeq& f, int min_degree,
                                   int max_degree, const Params& params, const SolverOptions& opts,
                                   const CoefSeq* warm_start) {
    opts.validate();
    if (min_degree < 0 || max_degree < min_degree)
        throw std::invalid_argument("min_poly_multiple: bad multiplier degree range");

    const double p = params.p;
    const int nf = static_cast<int>(f.size());
    const int nq = max_degree - min_degree + 1;
    const int L = std::max(static_cast<int>(x.size()), nf + max_degree);
    const int n2 = 2 * nq;
    const int kd = std::min(2 * nf - 1, n2 - 1);

    std::vector<double> wf(nf);
    bool f_nonzero = false;
    for (int t = 0; t < nf; ++t) {
        wf[t] = std::norm(f[t]);
        f_nonzero = f_nonzero || wf[t] != 0.0;
    }
    if (!f_nonzero) throw std::invalid_argument("min_poly_multiple: f is identically zero");

    std::vector<Cplx> q(nq, Cplx(0.0));
    if (warm_start) {
        for (int l = 0; l < nq; ++l) {
            const std::size_t k = static_cast<std::size_t>(min_degree + l);
            if (k < warm_start->size()) q[l] = (*warm_start)[k];
        }
    }
    std::vector<Cplx> trial(nq), T(nq), G(nq), h(L), dual(L);
    std::vector<double> habs(L), g_r(n2), dg(n2), step(n2);
    BandedLLT H0(n2, kd), Hw(n2, kd);

    // h = x - f*q over the multiplier support; returns sum |h_j|^pw.
    auto residual_at = [&](const std::vector<Cplx>& qq, double pw) {
        std::fill(h.begin(), h.end(), Cplx(0.0));
        std::copy(x.c.begin(), x.c.end(), h.begin());
        for (int l = 0; l < nq; ++l)
            if (qq[l] != Cplx(0.0))
                kernels::caxpy(-qq[l], f.c.data(), nf, h.data() + min_degree + l);
        return kernels::abs_pow_sum(h.data(), L, pw);
    };

    // Gradient of sum |h_j|^pw with respect to the real and imaginary parts
    // of each q_l, packed as G_l = dF/dRe + i dF/dIm: with the dual sequence
    // h^<pw-1>, G_l = -pw * conj(sum_t f_t h_{l+t}^<pw-1>). Returns the
    // Euclidean norm over all real components.
    auto gradient_at = [&](double pw) {
        kernels::signed_power_map(h.data(), L, pw - 1.0, dual.data());
        double gn2 = 0.0;
        for (int l = 0; l < nq; ++l) {
            T[l] = kernels::bilinear_dot(f.c.data(), dual.data() + min_degree + l, nf);
            G[l] = -pw * std::conj(T[l]);
            g_r[2 * l] = G[l].real();
            g_r[2 * l + 1] = G[l].imag();
            gn2 += std::norm(G[l]);
        }
        return std::sqrt(gn2);
    };

    // Hessian of sum |h_j|^pw in the real parametrization: per coordinate j
    // the 2x2 block pw*|h|^{pw-2} (I + (pw-2) u u^T), u the phase direction
    // of h_j, pulled back through the convolution with f. |h_j| is floored
    // to keep the p < 2 weights finite at (near-)zero coordinates.
    auto assemble = [&](double pw) {
        H0.clear();
        double maxh = 0.0;
        for (int j = 0; j < L; ++j) {
            habs[j] = std::abs(h[j]);
            maxh = std::max(maxh, habs[j]);
        }
        const double floor_v = kHessFloorRel * maxh;
        for (int j = 0; j < L; ++j) {
            const int tmin = std::max(0, j - min_degree - (nq - 1));
            const int tmax = std::min(nf - 1, j - min_degree);
            if (tmin > tmax) continue;
            double m11, m12, m22;
            if (habs[j] >= floor_v && habs[j] > 0.0) {
                const double base = pw * std::pow(habs[j], pw - 2.0);
                const double u1 = h[j].real() / habs[j];
                const double u2 = h[j].imag() / habs[j];
                m11 = base * (1.0 + (pw - 2.0) * u1 * u1);
                m22 = base * (1.0 + (pw - 2.0) * u2 * u2);
                m12 = base * (pw - 2.0) * u1 * u2;
            } else {
                m11 = m22 = pw * (pw - 1.0) * std::pow(floor_v, pw - 2.0);
                m12 = 0.0;
            }
            for (int t1 = tmin; t1 <= tmax; ++t1) {
                if (wf[t1] == 0.0) continue;
                const double br = f[t1].real(), bi = f[t1].imag();
                const int l1 = j - min_degree - t1;
                for (int t2 = t1; t2 <= tmax; ++t2) {
                    if (wf[t2] == 0.0) continue;
                    const double ar = f[t2].real(), ai = f[t2].imag();
                    const int l2 = j - min_degree - t2;  // l2 <= l1
                    // K = B1^T M B2 with B = -[[Re c, -Im c], [Im c, Re c]].
                    const double c1r = m11 * ar + m12 * ai, c1i = m12 * ar + m22 * ai;
                    const double c2r = m11 * ai - m12 * ar, c2i = m12 * ai - m22 * ar;
                    const double K11 = br * c1r + bi * c1i;
                    const double K12 = -(br * c2r + bi * c2i);
                    const double K21 = -bi * c1r + br * c1i;
                    const double K22 = bi * c2r - br * c2i;
                    const int r0 = 2 * l1, c0 = 2 * l2;
                    if (l1 == l2) {
                        H0.at(r0, c0) += K11;
                        H0.at(r0 + 1, c0) += K21;
                        H0.at(r0 + 1, c0 + 1) += K22;
                    } else {
                        H0.at(r0, c0) += K11;
                        H0.at(r0, c0 + 1) += K12;
                        H0.at(r0 + 1, c0) += K21;
                        H0.at(r0 + 1, c0 + 1) += K22;
                    }
                }
            }
        }
        for (int i = 0; i < n2; ++i) dg[i] = H0.at(i, i);
    };

    // Solves (H + lambda diag H) s = -g via a Jacobi-equilibrated banded
    // Cholesky; the equilibration keeps the factorization accurate across
    // the orders-of-magnitude curvature spread of the p != 2 geometry.
    std::vector<double> sc(n2);
    auto newton_step = [&](double lambda) {
        Hw.copy_from(H0);
        for (int i = 0; i < n2; ++i) sc[i] = dg[i] > 0.0 ? 1.0 / std::sqrt(dg[i]) : 1.0;
        for (int i = 0; i < n2; ++i)
            for (int j = std::max(0, i - kd); j < i; ++j) Hw.at(i, j) *= sc[i] * sc[j];
        for (int i = 0; i < n2; ++i) Hw.at(i, i) = 1.0 + lambda;
        if (!Hw.factorize()) return false;
        for (int i = 0; i < n2; ++i) step[i] = -g_r[i] * sc[i];
        Hw.solve(step);
        for (int i = 0; i < n2; ++i) step[i] *= sc[i];
        return true;
    };

    auto result_at = [&](const std::vector<Cplx>& point, double F_val, double gn, long iters) {
        residual_at(point, p);
        ProjectionResult r;
        r.co_projection = CoefSeq(h);
        std::vector<Cplx> qc(static_cast<std::size_t>(max_degree) + 1, Cplx(0.0));
        for (int l = 0; l < nq; ++l) qc[static_cast<std::size_t>(min_degree + l)] = point[l];
        r.multiplier_poly = CoefSeq(std::move(qc));
        r.norm = std::pow(F_val, 1.0 / p);
        r.grad_norm = gn;
        r.iterations = iters;
        r.truncation_degree = max_degree;
        return r;
    };

    // Exponent continuation: start from the exactly solvable p = 2 problem
    // (one Newton step on a quadratic) and walk 1/p toward the requested
    // exponent, warm-starting each stage. A caller-supplied warm start is
    // assumed to be near the optimum already and skips the continuation.
    std::vector<double> stages;
    if (!warm_start && p != 2.0 && opts.step_rule == SolverOptions::StepRule::backtracking) {
        stages.push_back(2.0);
        const double s_target = 1.0 / p;
        double s = 0.5;
        while (std::abs(s_target - s) > 1e-12) {
            s += std::clamp(s_target - s, -0.125, 0.125);
            stages.push_back(1.0 / s);
        }
        stages.back() = p;
    } else {
        stages.push_back(p);
    }

    long iter = 0;
    double F_q = residual_at(q, p);
    if (F_q == 0.0) return result_at(q, 0.0, 0.0, 0);
    double gn = gradient_at(p);

    for (std::size_t si = 0; si < stages.size(); ++si) {
        const double pw = stages[si];
        // The working tolerance is deliberately deeper than the requested
        // certificate: iterating to the numerical floor costs a handful of
        // Newton steps and buys coefficient accuracy that a loose gradient
        // test would leave on the table. grad_tol only decides success.
        const double tol = si + 1 == stages.size() ? std::min(opts.grad_tol, 1e-14) : 1e-9;
        F_q = residual_at(q, pw);
        gn = gradient_at(pw);
        double lambda = 0.0;
        double gn_ref = gn;
        long ref_iter = iter;

        while (gn > tol && iter < opts.max_iters) {
            // Stagnation break: when a stretch of accepted steps no longer
            // moves the gradient norm, leave the rest to local refinement.
            if (gn < 0.95 * gn_ref) {
                gn_ref = gn;
                ref_iter = iter;
            } else if (iter - ref_iter >= 25) {
                break;
            }
            ++iter;
            assemble(pw);

            if (opts.step_rule == SolverOptions::StepRule::fixed) {
                // Raw Newton step scaled by fixed_step, no acceptance test;
                // an experimentation knob, not the default path.
                if (!newton_step(1e-12))
                    throw solver_error("Hessian factorization failed",
                                       result_at(q, residual_at(q, p), gn, iter));
                for (int l = 0; l < nq; ++l)
                    q[l] += opts.fixed_step * Cplx(step[2 * l], step[2 * l + 1]);
                F_q = residual_at(q, pw);
                gn = gradient_at(pw);
                continue;
            }

            bool accepted = false;
            for (int attempt = 0; attempt < 60 && lambda < 1e18; ++attempt) {
                if (!newton_step(lambda)) {
                    lambda = lambda == 0.0 ? 1e-8 : lambda * 8.0;
                    continue;
                }
                for (int l = 0; l < nq; ++l)
                    trial[l] = q[l] + Cplx(step[2 * l], step[2 * l + 1]);
                const double F_new = residual_at(trial, pw);
                bool take = F_new < F_q;
                double gn_new = -1.0;
                if (!take && F_new <= F_q * (1.0 + 1e-14)) {
                    // The objective is flat at machine resolution; accept on
                    // measurable gradient progress instead.
                    gn_new = gradient_at(pw);
                    take = gn_new < gn * 0.999;
                }
                if (take) {
                    std::swap(q, trial);
                    F_q = F_new;
                    gn = gn_new >= 0.0 ? gn_new : gradient_at(pw);
                    lambda = lambda > 1e-14 ? lambda / 3.0 : 0.0;
                    accepted = true;
                    break;
                }
                lambda = lambda == 0.0 ? 1e-8 : lambda * 8.0;
                if (gn_new >= 0.0) {
                    // The gradient buffers describe the rejected point;
                    // restore the current iterate before the next attempt.
                    residual_at(q, pw);
                    gn = gradient_at(pw);
                }
            }
            // A plateau here is not final: the local refinement below can
            // still make progress that neither acceptance test resolves.
            if (!accepted) break;
        }
    }

    if (opts.step_rule == SolverOptions::StepRule::fixed) {
        F_q = residual_at(q, p);
        gn = gradient_at(p);
        if (gn <= opts.grad_tol) return result_at(q, F_q, gn, iter);
        throw solver_error("projection solver hit the iteration budget",
                           result_at(q, F_q, gn, iter));
    }

    // Local refinement: undamped Newton steps under only a coarse safety
    // test. Near the optimum both the objective and the aggregate gradient
    // norm lose resolution long before the coefficients stop improving (the
    // p > 2 geometry is polynomially flat in tail coordinates and contracts
    // only geometrically there, the p < 2 geometry amplifies last-bit tail
    // noise), so steps are not gated on visible progress.
    F_q = residual_at(q, p);
    gn = gradient_at(p);
    std::vector<Cplx> best_q = q;
    double best_gn = gn, best_F = F_q;
    for (int extra = 0; extra < 60 && gn > 0.0; ++extra) {
        assemble(p);
        if (!newton_step(0.0)) break;
        double smax = 0.0, qmax = 0.0;
        for (int i = 0; i < n2; ++i) smax = std::max(smax, std::abs(step[i]));
        for (int l = 0; l < nq; ++l) qmax = std::max(qmax, std::abs(q[l]));
        if (smax <= 4e-16 * (1.0 + qmax)) break;
        for (int l = 0; l < nq; ++l) trial[l] = q[l] + Cplx(step[2 * l], step[2 * l + 1]);
        const double F_new = residual_at(trial, p);
        if (F_new > F_q * (1.0 + 1e-9)) {
            residual_at(q, p);
            break;
        }
        std::swap(q, trial);
        F_q = F_new;
        gn = gradient_at(p);
        ++iter;
        if (gn < best_gn) {
            best_gn = gn;
            best_q = q;
            best_F = F_q;
        }
    }

    // Prefer the most refined iterate as long as its certificate is not
    // materially worse than the best one seen.
    if (gn > std::max(3.0 * best_gn, opts.grad_tol)) {
        q = best_q;
        F_q = best_F;
        gn = best_gn;
    }

    if (gn <= opts.grad_tol) return result_at(q, F_q, gn, iter);
    std::ostringstream msg;
    if (iter >= opts.max_iters) {
        msg << "projection solver hit the iteration budget at gradient norm " << gn;
    } else {
        msg << "projection solver stalled at gradient norm " << gn
            << ", above the requested tolerance " << opts.grad_tol;
        if (p < 2.0)
            msg << " (for p < 2 the attainable stationarity in double precision is limited "
                   "by the stiff tail geometry)";
    }
    throw solver_error(msg.str(), result_at(q, F_q, gn, iter));
}

ProjectionResult project_shift_span(const CoefSeq& f, const Params& params, SolverOptions opts,
                                    unsigned origin_mult, double largest_zero_modulus) {
    if (origin_mult >= f.size())
        throw std::invalid_argument("project_shift_span: origin multiplicity exceeds degree");
    for (unsigned k = 0; k < origin_mult; ++k)
        if (f[k] != Cplx(0.0))
            throw std::invalid_argument(
                "project_shift_span: declared origin multiplicity, but low coefficients are "
                "nonzero");

    CoefSeq g(std::vector<Cplx>(f.c.begin() + origin_mult, f.c.end()));
    const Cplx scale = g[0];
    if (scale == Cplx(0.0))
        throw std::invalid_argument(
            "project_shift_span: f vanishes at the origin; declare the multiplicity via "
            "origin_mult");
    std::vector<Cplx> gh_c = g.c;
    for (auto& c : gh_c) c /= scale;
    const CoefSeq gh(std::move(gh_c));

    double R = (largest_zero_modulus > 0.0 && largest_zero_modulus < 1.0) ? largest_zero_modulus
                                                                          : 0.0;
    if (R == 0.0 && opts.truncation_degree == 0) R = largest_disk_root_modulus(gh);

    ProjectionResult res = solve_with_degree_policy(gh, gh, 1, params, opts, R);

    // Restore the caller's scale and the origin factor z^origin_mult. The
    // multiplier Q is invariant under both.
    std::vector<Cplx> J(origin_mult, Cplx(0.0));
    J.reserve(origin_mult + res.co_projection.size());
    for (const Cplx& c : res.co_projection.c) J.push_back(scale * c);
    res.co_projection = CoefSeq(std::move(J));
    res.norm *= std::abs(scale);
    return res;
}

ProjectionResult extremal_phi_direct(const ZeroSetSpec& W, const Params& params,
                                     SolverOptions opts) {
    if (W.empty()) throw std::invalid_argument("extremal_phi_direct: empty zero set");
    const CoefSeq fW = vanishing_polynomial(W);
    double R = 0.0;
    for (const auto& e : W.entries()) R = std::max(R, std::abs(e.w));

    ProjectionResult res =
        solve_with_degree_policy(CoefSeq{{Cplx(1.0)}}, fW, 0, params, opts, R);

    // Report the multiplier h with Phi = 1 + f_W * h (the solver minimized
    // over q with Phi = 1 - f_W * q).
    std::vector<Cplx> hneg = res.multiplier_poly.c;
    for (auto& c : hneg) c = -c;
    res.multiplier_poly = CoefSeq(std::move(hneg));
    return res;
}

std::vector<CoefSeq> nested_projection_sequence(const CoefSeq& x,
                                                const std::vector<ZeroSetSpec>& chain,
                                                const Params& params, SolverOptions opts) {
    for (std::size_t i = 1; i < chain.size(); ++i) {
        for (const auto& prev : chain[i - 1].entries()) {
            bool found = false;
            for (const auto& cur : chain[i].entries())
                if (std::abs(cur.w - prev.w) <= ZeroSetSpec::merge_tol && cur.mult >= prev.mult) {
                    found = true;
                    break;
                }
            if (!found)
                throw std::invalid_argument(
                    "nested_projection_sequence: chain entry " + std::to_string(i) +
                    " does not extend its predecessor");
        }
    }

    std::vector<CoefSeq> projections;
    projections.reserve(chain.size());
    for (const auto& spec : chain) {
        const CoefSeq fW = vanishing_polynomial(spec);
        double R = 0.0;
        for (const auto& e : spec.entries()) R = std::max(R, std::abs(e.w));
        ProjectionResult res = solve_with_degree_policy(x, fW, 0, params, opts, R);
        projections.push_back(add_scaled(x, Cplx(-1.0), res.co_projection));
    }
    return projections;
}

}  // namespace pinner
