#include "pinner/inner.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace pinner {

const char* method_name(InnerResult::Method m) {
    switch (m) {
        case InnerResult::Method::closed_form: return "closed_form";
        case InnerResult::Method::newton: return "newton";
        case InnerResult::Method::co_projection: return "co_projection";
    }
    return "unknown";
}

namespace {

// Contributions with |g_k| below this are dropped outright: they sit far
// below the series truncation error and their signed-power derivative
// blows up as g -> 0 when the dual exponent is below one.
constexpr double kTinyInnerTerm = 1e-250;

int series_cap_for(double q, double root_radius) {
    if (root_radius <= 0.0) return 16;
    const double denom = q * std::log(root_radius);
    // root_radius < 1 so denom < 0; the cap is where R^(qK) drops under 1e-14.
    int cap = static_cast<int>(std::ceil(std::log(1e-14) / denom));
    if (cap < 16) cap = 16;
    return cap;
}

// Truncation point for the exponent pw. The series tail rule R^(qK) < 1e-14
// controls the dropped coefficients; below pw = 2 the dual sequence
// |c_k|^{pw-1} decays slower than c_k itself (the exponents (pw'-1)(pw-1)
// multiply to one, so the dual tail is R^K exactly), and the orthogonality
// residuals are only as small as that tail. Extending the cap keeps both
// below the same threshold; the coefficient rule still holds a fortiori.
int series_cap_for_exponent(double pw, double root_radius) {
    const double q = pw / (pw - 1.0) - 1.0;
    int cap = series_cap_for(q, root_radius);
    if (pw < 2.0) cap = std::max(cap, series_cap_for(1.0, root_radius));
    return cap;
}

// The interpolation system behind the Newton route, at one fixed exponent.
// Unknowns are the complex constants C[m][j] flattened to a real vector
// (re, im alternating); residuals are the N complex derivative conditions
// J^(mu)(s_m) = 0 flattened the same way.
class InterpolationSystem {
public:
    InterpolationSystem(std::vector<Cplx> roots, std::vector<int> mults, double q, int cap)
        : s_(std::move(roots)), mult_(std::move(mults)), q_(q), cap_(cap) {
        for (int m : mult_) n_ += m;
        // s_m^{-mu} for mu < mult_m, used to turn s^k into s^{k-mu}.
        sinv_.resize(s_.size());
        for (std::size_t m = 0; m < s_.size(); ++m) {
            sinv_[m].assign(static_cast<std::size_t>(mult_[m]), Cplx(1.0));
            for (int mu = 1; mu < mult_[m]; ++mu) sinv_[m][mu] = sinv_[m][mu - 1] / s_[m];
        }
    }

    int unknowns() const { return n_; }
    int cap() const { return cap_; }

    // g_k for k = 1..cap given the flattened constants. cap defaults to
    // the system cap; the final assembly extends the same formula further.
    // gabs, when requested, collects the absolute-value sums of the same
    // series, which bound the cancellation in each g_k.
    void inner_sums(const Eigen::VectorXd& x, std::vector<Cplx>& g, int cap = 0,
                    std::vector<double>* gabs = nullptr) const {
        if (cap <= 0) cap = cap_;
        g.assign(static_cast<std::size_t>(cap) + 1, Cplx(0.0));
        if (gabs) gabs->assign(static_cast<std::size_t>(cap) + 1, 0.0);
        std::vector<Cplx> spow(s_.size(), Cplx(1.0));
        for (int k = 1; k <= cap; ++k) {
            Cplx gk(0.0);
            double ga = 0.0;
            int col = 0;
            for (std::size_t m = 0; m < s_.size(); ++m) {
                spow[m] *= s_[m];
                double kj = 1.0;
                for (int j = 0; j < mult_[m]; ++j) {
                    const Cplx cjm(x[2 * col], x[2 * col + 1]);
                    gk += cjm * kj * spow[m];
                    if (gabs) ga += std::abs(cjm) * kj * std::abs(spow[m]);
                    kj *= static_cast<double>(k);
                    ++col;
                }
            }
            g[static_cast<std::size_t>(k)] = gk;
            if (gabs) (*gabs)[static_cast<std::size_t>(k)] = ga;
        }
    }

    // Residual of the derivative conditions. noise_floor, when requested,
    // carries a first-order rounding estimate of this very evaluation:
    // each term's uncertainty is its own magnitude plus the cancellation
    // amplification coming through g_k -> g_k^<q> (slope |q| |g|^{q-1}
    // times the absolute-value sum behind g_k), all scaled by machine
    // epsilon. Residual norms at this floor cannot be improved by any
    // step in double precision, so the iteration treats them as zero.
    Eigen::VectorXd residual(const Eigen::VectorXd& x, double* noise_floor = nullptr) const {
        std::vector<Cplx> g;
        std::vector<double> gabs;
        inner_sums(x, g, 0, noise_floor ? &gabs : nullptr);
        std::vector<Cplx> r(static_cast<std::size_t>(n_), Cplx(0.0));
        std::vector<double> rowabs(static_cast<std::size_t>(n_), 0.0);
        {
            int row = 0;
            for (std::size_t m = 0; m < s_.size(); ++m)
                for (int mu = 0; mu < mult_[m]; ++mu) {
                    r[static_cast<std::size_t>(row)] = (mu == 0) ? Cplx(1.0) : Cplx(0.0);
                    rowabs[static_cast<std::size_t>(row)] = (mu == 0) ? 1.0 : 0.0;
                    ++row;
                }
        }
        std::vector<Cplx> spow(s_.size(), Cplx(1.0));
        for (int k = 1; k <= cap_; ++k) {
            const Cplx gk = g[static_cast<std::size_t>(k)];
            const double ag = std::abs(gk);
            if (ag < kTinyInnerTerm) {
                for (std::size_t m = 0; m < s_.size(); ++m) spow[m] *= s_[m];
                continue;
            }
            const Cplx ck = signed_power(gk, q_);
            double uk = 0.0;
            if (noise_floor)
                uk = std::abs(ck) +
                     std::abs(q_) * std::pow(ag, q_ - 1.0) * gabs[static_cast<std::size_t>(k)];
            int row = 0;
            for (std::size_t m = 0; m < s_.size(); ++m) {
                spow[m] *= s_[m];
                double ff = 1.0;  // falling factorial k (k-1) ... (k-mu+1)
                for (int mu = 0; mu < mult_[m]; ++mu) {
                    if (mu > 0) ff *= static_cast<double>(k - mu + 1);
                    if (k >= mu) {
                        const Cplx weight = ff * spow[m] * sinv_[m][static_cast<std::size_t>(mu)];
                        r[static_cast<std::size_t>(row)] += ck * weight;
                        if (noise_floor) rowabs[static_cast<std::size_t>(row)] += uk * std::abs(weight);
                    }
                    ++row;
                }
            }
        }
        Eigen::VectorXd out(2 * n_);
        for (int i = 0; i < n_; ++i) {
            out[2 * i] = r[static_cast<std::size_t>(i)].real();
            out[2 * i + 1] = r[static_cast<std::size_t>(i)].imag();
        }
        if (noise_floor) {
            double acc = 0.0;
            for (double v : rowabs) acc += v * v;
            *noise_floor = 2.22e-16 * std::sqrt(acc);
        }
        return out;
    }

    // Analytic Jacobian of the real residual map. Each coefficient map
    // g -> g^<q> has the two Wirtinger derivatives
    //   d(g^<q>) = (q-1)/2 |g|^{q-1} (conj g / |g|)^2 dg + (q+1)/2 |g|^{q-1} d(conj g),
    // and g_k is holomorphic in the constants, so the chain rule gives
    // one holomorphic and one antiholomorphic complex slope per (row, col).
    // The k-sums are assembled as two matrix products over the series
    // index, which is where all the arithmetic lives when the cap is big.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        std::vector<Cplx> g;
        inner_sums(x, g);
        Eigen::MatrixXcd wmat(cap_, n_);  // condition weights per series index
        Eigen::MatrixXcd vmat(cap_, n_);  // unknown weights per series index
        Eigen::VectorXcd avec(cap_);
        Eigen::VectorXd bvec(cap_);
        std::vector<Cplx> spow(s_.size(), Cplx(1.0));
        for (int k = 1; k <= cap_; ++k) {
            const int kr = k - 1;
            for (std::size_t m = 0; m < s_.size(); ++m) spow[m] *= s_[m];
            const Cplx gk = g[static_cast<std::size_t>(k)];
            const double ag = std::abs(gk);
            if (ag < kTinyInnerTerm) {
                avec[kr] = Cplx(0.0);
                bvec[kr] = 0.0;
                wmat.row(kr).setZero();
                vmat.row(kr).setZero();
                continue;
            }
            const Cplx phase = std::conj(gk) / ag;
            const double mag = std::pow(ag, q_ - 1.0);
            avec[kr] = 0.5 * (q_ - 1.0) * mag * phase * phase;
            bvec[kr] = 0.5 * (q_ + 1.0) * mag;
            int idx = 0;
            for (std::size_t m = 0; m < s_.size(); ++m) {
                double ff = 1.0;
                double kj = 1.0;
                for (int j = 0; j < mult_[m]; ++j) {
                    if (j > 0) ff *= static_cast<double>(k - j + 1);
                    wmat(kr, idx) = (k >= j) ? ff * spow[m] * sinv_[m][static_cast<std::size_t>(j)] : Cplx(0.0);
                    vmat(kr, idx) = kj * spow[m];
                    kj *= static_cast<double>(k);
                    ++idx;
                }
            }
        }
        const Eigen::MatrixXcd alpha = wmat.transpose() * avec.asDiagonal() * vmat;
        const Eigen::MatrixXcd beta = wmat.transpose() * bvec.asDiagonal() * vmat.conjugate();
        Eigen::MatrixXd jac(2 * n_, 2 * n_);
        for (int row = 0; row < n_; ++row) {
            for (int col = 0; col < n_; ++col) {
                const Cplx splus = alpha(row, col) + beta(row, col);
                const Cplx sminus = alpha(row, col) - beta(row, col);
                jac(2 * row, 2 * col) = splus.real();
                jac(2 * row, 2 * col + 1) = -sminus.imag();
                jac(2 * row + 1, 2 * col) = splus.imag();
                jac(2 * row + 1, 2 * col + 1) = sminus.real();
            }
        }
        return jac;
    }

    Eigen::MatrixXd jacobian_fd(const Eigen::VectorXd& x) const {
        const int dim = 2 * n_;
        Eigen::MatrixXd jac(dim, dim);
        for (int i = 0; i < dim; ++i) {
            const double h = 1e-7 * (1.0 + std::abs(x[i]));
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            jac.col(i) = (residual(xp) - residual(xm)) / (2.0 * h);
        }
        return jac;
    }

    // Exact solve at p = 2, where the coefficient map is plain conjugation
    // and the conjugated conditions are linear in the constants.
    Eigen::VectorXd linear_init() const {
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n_, n_);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_);
        {
            int row = 0;
            for (std::size_t m = 0; m < s_.size(); ++m)
                for (int mu = 0; mu < mult_[m]; ++mu) rhs[row++] = (mu == 0) ? Cplx(-1.0) : Cplx(0.0);
        }
        std::vector<Cplx> spow(s_.size(), Cplx(1.0));
        std::vector<Cplx> wrow(static_cast<std::size_t>(n_));
        std::vector<Cplx> vcol(static_cast<std::size_t>(n_));
        for (int k = 1; k <= cap_; ++k) {
            for (std::size_t m = 0; m < s_.size(); ++m) spow[m] *= s_[m];
            int idx = 0;
            for (std::size_t m = 0; m < s_.size(); ++m) {
                double ff = 1.0;
                double kj = 1.0;
                for (int j = 0; j < mult_[m]; ++j) {
                    if (j > 0) ff *= static_cast<double>(k - j + 1);
                    wrow[static_cast<std::size_t>(idx)] =
                        (k >= j) ? ff * std::conj(spow[m] * sinv_[m][static_cast<std::size_t>(j)]) : Cplx(0.0);
                    vcol[static_cast<std::size_t>(idx)] = kj * spow[m];
                    kj *= static_cast<double>(k);
                    ++idx;
                }
            }
            for (int row = 0; row < n_; ++row) {
                if (wrow[static_cast<std::size_t>(row)] == Cplx(0.0)) continue;
                for (int col = 0; col < n_; ++col)
                    mat(row, col) += wrow[static_cast<std::size_t>(row)] * vcol[static_cast<std::size_t>(col)];
            }
        }
        const Eigen::VectorXcd c = mat.fullPivLu().solve(rhs);
        Eigen::VectorXd x(2 * n_);
        for (int i = 0; i < n_; ++i) {
            x[2 * i] = c[i].real();
            x[2 * i + 1] = c[i].imag();
        }
        return x;
    }

private:
    std::vector<Cplx> s_;
    std::vector<int> mult_;
    std::vector<std::vector<Cplx>> sinv_;
    double q_;
    int cap_;
    int n_ = 0;
};

// One damped Newton descent at a fixed exponent. Returns the iterations
// consumed; throws when neither the analytic nor the finite-difference
// Jacobian produces a descent direction.
int newton_descend(const InterpolationSystem& sys, Eigen::VectorXd& x, double tol, int iter_budget) {
    double noise = 0.0;
    Eigen::VectorXd r = sys.residual(x, &noise);
    double rn = r.norm();
    int used = 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu;
    bool have_lu = false;  // a factorization is available
    bool fresh = false;    // ... and was built at the current iterate
    bool fd_lu = false;    // ... from finite differences
    bool tried_fd = false;
    while (rn > tol && rn > 8.0 * noise) {
        if (used >= iter_budget) {
            std::ostringstream msg;
            msg << "inner interpolation Newton hit the iteration budget at residual norm " << rn;
            throw std::runtime_error(msg.str());
        }
        ++used;
        if (!have_lu) {
            lu.compute(sys.jacobian(x));
            have_lu = true;
            fresh = true;
            fd_lu = false;
        }
        bool stepped = false;
        if (lu.isInvertible()) {
            const Eigen::VectorXd dx = lu.solve(-r);
            double t = 1.0;
            for (int half = 0; half < 40; ++half) {
                const Eigen::VectorXd trial = x + t * dx;
                double trial_noise = 0.0;
                const Eigen::VectorXd rt = sys.residual(trial, &trial_noise);
                const double rtn = rt.norm();
                if (rtn < rn * (1.0 - 1e-4 * t)) {
                    // Keep the factorization across iterations while full
                    // steps contract strongly; rebuild otherwise.
                    const bool reuse = (t == 1.0) && rtn <= 0.5 * rn && !fd_lu;
                    x = trial;
                    r = rt;
                    rn = rtn;
                    noise = trial_noise;
                    stepped = true;
                    tried_fd = false;
                    fresh = false;
                    have_lu = reuse;
                    break;
                }
                t *= 0.5;
            }
        }
        if (stepped) continue;
        if (have_lu && !fresh) {
            have_lu = false;  // the reused factorization ran out, rebuild here
            continue;
        }
        if (!tried_fd) {
            tried_fd = true;  // retry the same point with a finite-difference Jacobian
            lu.compute(sys.jacobian_fd(x));
            have_lu = true;
            fresh = true;
            fd_lu = true;
            continue;
        }
        std::ostringstream msg;
        msg << "inner interpolation Newton stalled at residual norm " << rn
            << " (rounding floor estimate " << noise << ")";
        throw std::runtime_error(msg.str());
    }
    return used;
}

InnerResult assemble_result(const InterpolationSystem& sys, const Eigen::VectorXd& x, double q,
                            const Params& pr, InnerResult::Method method, int out_cap) {
    out_cap = std::max(out_cap, sys.cap());
    std::vector<Cplx> g;
    sys.inner_sums(x, g, out_cap);
    std::vector<Cplx> coef(static_cast<std::size_t>(out_cap) + 1, Cplx(0.0));
    coef[0] = Cplx(1.0);
    for (int k = 1; k <= out_cap; ++k) coef[static_cast<std::size_t>(k)] = signed_power(g[static_cast<std::size_t>(k)], q);
    InnerResult out;
    out.J = CoefSeq(std::move(coef));
    out.norm = p_norm(out.J, pr);
    out.orth_residuals = verify_p_inner(out.J, pr, 20);
    out.method = method;
    return out;
}

}  // namespace

InnerResult linear_inner_closed_form(Cplx w, const Params& pr, int degree) {
    const double aw = std::abs(w);
    if (!(aw > 0.0) || aw >= 1.0) throw std::invalid_argument("linear_inner_closed_form: zero must satisfy 0 < |w| < 1");
    if (degree < 1) throw std::invalid_argument("linear_inner_closed_form: degree must be at least 1");
    const Cplx u = signed_power(w, pr.p_conj - 1.0);
    const Cplx lead = -(1.0 - std::pow(aw, pr.p_conj)) / w;
    std::vector<Cplx> coef(static_cast<std::size_t>(degree) + 1);
    coef[0] = Cplx(1.0);
    Cplx upow(1.0);
    for (int k = 1; k <= degree; ++k) {
        coef[static_cast<std::size_t>(k)] = lead * upow;
        upow *= u;
    }
    InnerResult out;
    out.J = CoefSeq(std::move(coef));
    out.norm = p_norm(out.J, pr);
    out.orth_residuals = verify_p_inner(out.J, pr, 20);
    out.method = InnerResult::Method::closed_form;
    return out;
}

double b_factor_norm(Cplx w, double r, double t) {
    const double aw = std::abs(w);
    if (!(aw > 0.0) || aw >= 1.0) throw std::invalid_argument("b_factor_norm: zero must satisfy 0 < |w| < 1");
    if (!(r > 1.0) || !(t > 1.0)) throw std::invalid_argument("b_factor_norm: exponents must exceed 1");
    const double rc = r / (r - 1.0);
    const double gap = 1.0 - std::pow(aw, rc);
    const double num = std::pow(gap, t);
    const double den = std::pow(aw, t) * (1.0 - std::pow(aw, (rc - 1.0) * t));
    return std::pow(1.0 + num / den, 1.0 / t);
}

InnerResult solve_inner_newton(const ZeroSetSpec& W, const Params& pr, const SolverOptions& opts,
                               NewtonState* state_out) {
    opts.validate();
    if (W.empty()) throw std::invalid_argument("solve_inner_newton: zero set is empty");
    validate_in_disk(W, /*require_nonzero=*/true);

    std::vector<Cplx> roots;
    std::vector<int> mults;
    double radius = 0.0;
    for (const ZeroEntry& e : W.entries()) {
        roots.push_back(e.w);
        mults.push_back(static_cast<int>(e.mult));
        radius = std::max(radius, std::abs(e.w));
    }

    // Walk the reciprocal exponent from the exactly solvable p = 2 toward
    // the target; each stage reuses the previous constants as the start.
    std::vector<double> stages;
    const double target_inv = 1.0 / pr.p;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(target_inv - 0.5) / 0.125)));
    for (int i = 1; i <= nsteps; ++i) stages.push_back(1.0 / (0.5 + (target_inv - 0.5) * i / nsteps));
    stages.back() = pr.p;

    const double q_target = pr.p_conj - 1.0;
    Eigen::VectorXd x;
    {
        InterpolationSystem init_sys(roots, mults, 1.0, series_cap_for(1.0, radius));
        x = init_sys.linear_init();
    }

    // Each stage solves at the cap its own coefficient tail requires; the
    // returned series is extended afterwards so the dual-power tail below
    // p = 2 is just as negligible (the extension is a plain evaluation of
    // the converged constants, no extra solving).
    int iterations = 0;
    InterpolationSystem sys(roots, mults, q_target, series_cap_for(q_target, radius));
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const double pw = stages[i];
        const double q = pw / (pw - 1.0) - 1.0;
        const bool final_stage = (i + 1 == stages.size());
        const double tol = final_stage ? opts.grad_tol : std::max(opts.grad_tol, 1e-10);
        InterpolationSystem stage_sys(roots, mults, q, series_cap_for(q, radius));
        iterations += newton_descend(stage_sys, x, tol, opts.max_iters - iterations);
        if (final_stage) sys = std::move(stage_sys);
    }

    const int out_cap = series_cap_for_exponent(pr.p, radius);
    InnerResult out = assemble_result(sys, x, q_target, pr, InnerResult::Method::newton, out_cap);
    out.iterations = iterations;
    out.warnings = W.warnings();
    if (state_out) {
        state_out->constants.clear();
        int idx = 0;
        for (int m : mults) {
            std::vector<Cplx> block;
            for (int j = 0; j < m; ++j, ++idx) block.emplace_back(x[2 * idx], x[2 * idx + 1]);
            state_out->constants.push_back(std::move(block));
        }
        state_out->series_cap = out_cap;
    }
    return out;
}

std::vector<double> verify_p_inner(const CoefSeq& J, const Params& pr, int n_max) {
    if (n_max < 1) throw std::invalid_argument("verify_p_inner: n_max must be at least 1");
    bool nonzero = false;
    for (const Cplx& c : J.c)
        if (c != Cplx(0.0)) nonzero = true;
    if (!nonzero) throw std::invalid_argument("verify_p_inner: sequence is identically zero");
    const CoefSeq dual = seq_signed_power(J, pr.p - 1.0);
    std::vector<double> res(static_cast<std::size_t>(n_max), 0.0);
    const int d = J.degree();
    for (int n = 1; n <= n_max; ++n) {
        Cplx acc(0.0);
        for (int k = 0; k + n <= d; ++k) acc += dual[static_cast<std::size_t>(k + n)] * J[static_cast<std::size_t>(k)];
        res[static_cast<std::size_t>(n - 1)] = std::abs(acc);
    }
    return res;
}

PhiResult phi_from_inner(const InnerResult& J, const Params& pr) {
    if (std::abs(J.J[0] - Cplx(1.0)) > 1e-8) throw std::invalid_argument("phi_from_inner: J(0) must equal 1");
    if (!(J.norm > 1.0)) throw std::invalid_argument("phi_from_inner: ||J|| must exceed 1");
    const double q = pr.p_conj - 1.0;
    const double excess = std::pow(J.norm, pr.p) - 1.0;
    const double xq = std::pow(excess, q);
    PhiResult out;
    out.g0 = 1.0 / (1.0 + xq);
    out.phi = add_scaled(CoefSeq(std::vector<Cplx>{Cplx(1.0)}), Cplx(-out.g0), J.J);
    out.phi_norm = std::pow(xq / (1.0 + xq), 1.0 / pr.p_conj);
    return out;
}

double inner_norm_from_phi(double phi_norm, const Params& pr) {
    if (!(phi_norm >= 0.0) || phi_norm >= 1.0) throw std::invalid_argument("inner_norm_from_phi: requires 0 <= phi_norm < 1");
    if (phi_norm == 0.0) return 1.0;
    const double vp = std::pow(phi_norm, pr.p);
    const double gap = 1.0 - std::pow(phi_norm, pr.p_conj);
    return 1.0 + vp / std::pow(gap, pr.p - 1.0);
}

}  // namespace pinner
