#pragma once

#include <optional>

#include "linalg.hpp"
#include "tolerances.hpp"

namespace qcvx {

/// Conic standard form:
///   minimize    sum_bl <C_bl, X_bl> + q^T u
///   subject to  sum_bl <F_i_bl, X_bl> + g_i^T u = rhs_i   (i = 1..p)
///               X_bl hermitian PSD, u free.
/// All constraint/objective matrices must be hermitian.
struct SdpProblem {
    std::vector<std::size_t> block_sizes;
    std::size_t num_free = 0;
    std::vector<Mat> C;            ///< per block; empty entries mean zero
    std::vector<double> q;
    struct Constraint {
        std::vector<Mat> F;        ///< per block, same order as block_sizes
        std::vector<double> g;
        double rhs = 0.0;
    };
    std::vector<Constraint> cons;

    static Mat zero_or(const Mat& m, std::size_t n) {
        return m.rows == n ? m : Mat(n, n);
    }
};

struct SdpSolution {
    enum class Status { Optimal, Infeasible, Unbounded, NumericalTrouble };
    Status status = Status::NumericalTrouble;
    std::vector<Mat> X;
    std::vector<double> u;
    std::vector<double> y;  ///< equality multipliers (dual variables)
    std::vector<Mat> S;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double gap = 0.0;
    int iterations = 0;
};

namespace detail {

/// Spectral power M^e of a positive definite hermitian matrix.
inline Mat herm_power(const EigDecomposition& eg, double e) {
    const std::size_t n = eg.values.size();
    Mat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = std::pow(std::max(eg.values[k], 1e-300), e);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += w * eg.vectors(i, k) * conj(eg.vectors(j, k));
    }
    return r;
}

/// Largest alpha with X + alpha*D >= 0 (X > 0), capped at `cap`.
inline double max_psd_step(const Mat& x_inv_half, const Mat& d, double cap) {
    const Mat g = hermitian_part(x_inv_half * d * x_inv_half);
    const double lmin = hermitian_eig(g).values.front();
    if (lmin >= 0.0) return cap;
    return std::min(cap, -1.0 / lmin);
}

} // namespace detail

/// Primal-dual interior point on the homogeneous self-dual embedding with
/// Nesterov-Todd scaling. Deterministic; never returns a silent wrong
/// answer (iteration limit maps to NumericalTrouble).
inline SdpSolution sdp_solve(const SdpProblem& prob, const ToleranceConfig& tol = {}) {
    const std::size_t nb = prob.block_sizes.size();
    const std::size_t p = prob.cons.size();
    const std::size_t f = prob.num_free;
    double nu = 1.0; // barrier parameter: total block dimension + 1 for tau
    for (std::size_t s : prob.block_sizes) nu += static_cast<double>(s);

    std::vector<Mat> C(nb);
    for (std::size_t bl = 0; bl < nb; ++bl)
        C[bl] = SdpProblem::zero_or(bl < prob.C.size() ? prob.C[bl] : Mat(),
                                    prob.block_sizes[bl]);

    auto Fmat = [&](std::size_t i, std::size_t bl) -> Mat {
        return SdpProblem::zero_or(bl < prob.cons[i].F.size() ? prob.cons[i].F[bl] : Mat(),
                                   prob.block_sizes[bl]);
    };
    auto gvec = [&](std::size_t i, std::size_t j) -> double {
        return j < prob.cons[i].g.size() ? prob.cons[i].g[j] : 0.0;
    };

    // iterates
    std::vector<Mat> X(nb), S(nb);
    for (std::size_t bl = 0; bl < nb; ++bl) {
        X[bl] = Mat::identity(prob.block_sizes[bl]);
        S[bl] = Mat::identity(prob.block_sizes[bl]);
    }
    std::vector<double> y(p, 0.0), u(f, 0.0);
    double tau = 1.0, kappa = 1.0;

    double bnorm = 0.0, cnorm = 0.0, qnorm = 0.0;
    for (std::size_t i = 0; i < p; ++i) bnorm += prob.cons[i].rhs * prob.cons[i].rhs;
    bnorm = std::sqrt(bnorm);
    for (std::size_t bl = 0; bl < nb; ++bl) cnorm += frob_norm(C[bl]) * frob_norm(C[bl]);
    cnorm = std::sqrt(cnorm);
    for (std::size_t j = 0; j < f; ++j)
        qnorm += (j < prob.q.size() ? prob.q[j] * prob.q[j] : 0.0);
    qnorm = std::sqrt(qnorm);

    SdpSolution out;

    auto aop = [&](const std::vector<Mat>& xx, const std::vector<double>& uu,
                   std::vector<double>& r) {
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0.0;
            for (std::size_t bl = 0; bl < nb; ++bl)
                if (bl < prob.cons[i].F.size() && prob.cons[i].F[bl].rows)
                    s += inner(prob.cons[i].F[bl], xx[bl]);
            for (std::size_t j = 0; j < f; ++j) s += gvec(i, j) * uu[j];
            r[i] = s;
        }
    };

    for (int it = 0; it < tol.sdp_iter_cap; ++it) {
        out.iterations = it;

        // residuals
        std::vector<double> ax(p);
        aop(X, u, ax);
        std::vector<double> Rp(p);
        for (std::size_t i = 0; i < p; ++i) Rp[i] = ax[i] - prob.cons[i].rhs * tau;

        std::vector<Mat> Rd(nb);
        for (std::size_t bl = 0; bl < nb; ++bl) {
            Mat r = S[bl] - Cx(tau) * C[bl];
            for (std::size_t i = 0; i < p; ++i) {
                const Mat& fm = (bl < prob.cons[i].F.size()) ? prob.cons[i].F[bl] : Mat();
                if (fm.rows) r = r + Cx(y[i]) * fm;
            }
            Rd[bl] = r;
        }
        std::vector<double> Rf(f);
        for (std::size_t j = 0; j < f; ++j) {
            double s = -(j < prob.q.size() ? prob.q[j] : 0.0) * tau;
            for (std::size_t i = 0; i < p; ++i) s += gvec(i, j) * y[i];
            Rf[j] = s;
        }
        double cx = 0.0;
        for (std::size_t bl = 0; bl < nb; ++bl) cx += inner(C[bl], X[bl]);
        double qu = 0.0, by = 0.0;
        for (std::size_t j = 0; j < f; ++j) qu += (j < prob.q.size() ? prob.q[j] : 0.0) * u[j];
        for (std::size_t i = 0; i < p; ++i) by += prob.cons[i].rhs * y[i];
        const double Rg = by - cx - qu - kappa;

        double xs = tau * kappa;
        for (std::size_t bl = 0; bl < nb; ++bl) xs += inner(X[bl], S[bl]);
        const double mu = xs / nu;

        // convergence checks (all quantities de-homogenized by tau)
        double rpn = 0.0;
        for (double v : Rp) rpn += v * v;
        rpn = std::sqrt(rpn);
        double rdn = 0.0;
        for (std::size_t bl = 0; bl < nb; ++bl) rdn += frob_norm(Rd[bl]) * frob_norm(Rd[bl]);
        rdn = std::sqrt(rdn);
        double rfn = 0.0;
        for (double v : Rf) rfn += v * v;
        rfn = std::sqrt(rfn);

        const double pres = rpn / (tau * (1.0 + bnorm));
        const double dres = std::sqrt(rdn * rdn + rfn * rfn) / (tau * (1.0 + cnorm + qnorm));
        const double pobj = (cx + qu) / tau;
        const double dobj = by / tau;
        const double relgap = std::fabs(pobj - dobj) / (1.0 + std::fabs(pobj) + std::fabs(dobj));

        if (pres < tol.feas_tol && dres < tol.feas_tol && relgap < tol.gap_tol) {
            out.status = SdpSolution::Status::Optimal;
            out.X.resize(nb);
            out.S.resize(nb);
            for (std::size_t bl = 0; bl < nb; ++bl) {
                out.X[bl] = Cx(1.0 / tau) * X[bl];
                out.S[bl] = Cx(1.0 / tau) * S[bl];
            }
            out.u.assign(u.begin(), u.end());
            out.y.assign(y.begin(), y.end());
            for (double& v : out.u) v /= tau;
            for (double& v : out.y) v /= tau;
            out.primal_obj = pobj;
            out.dual_obj = dobj;
            out.gap = pobj - dobj;
            return out;
        }

        // infeasibility via the self-dual ray: tau -> 0, kappa stays positive
        if (tau < 1e-10 * std::max(1.0, kappa) && mu < 1e-10) {
            if (by > 1e-12) out.status = SdpSolution::Status::Infeasible;
            else if (cx + qu < -1e-12) out.status = SdpSolution::Status::Unbounded;
            else out.status = SdpSolution::Status::NumericalTrouble;
            out.y.assign(y.begin(), y.end());
            out.X = X;
            out.u = u;
            return out;
        }

        // Nesterov-Todd scaling W per block: W S W = X
        std::vector<Mat> W(nb), Sinv(nb);
        for (std::size_t bl = 0; bl < nb; ++bl) {
            EigDecomposition es = hermitian_eig(S[bl]);
            const Mat sh = detail::herm_power(es, 0.5);
            const Mat sih = detail::herm_power(es, -0.5);
            Sinv[bl] = detail::herm_power(es, -1.0);
            EigDecomposition et = hermitian_eig(hermitian_part(sh * X[bl] * sh));
            W[bl] = hermitian_part(sih * detail::herm_power(et, 0.5) * sih);
        }

        // Schur system in (dy, du, dtau), size p + f + 1.
        const std::size_t dim = p + f + 1;
        std::vector<std::vector<double>> msys(dim, std::vector<double>(dim, 0.0));

        // precompute W F_i W per block
        std::vector<std::vector<Mat>> wfw(p, std::vector<Mat>(nb));
        std::vector<Mat> wcw(nb);
        for (std::size_t bl = 0; bl < nb; ++bl) {
            wcw[bl] = hermitian_part(W[bl] * C[bl] * W[bl]);
            for (std::size_t i = 0; i < p; ++i) {
                const Mat fm = Fmat(i, bl);
                wfw[i][bl] = hermitian_part(W[bl] * fm * W[bl]);
            }
        }

        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = i; k < p; ++k) {
                double s = 0.0;
                for (std::size_t bl = 0; bl < nb; ++bl) s += inner(Fmat(i, bl), wfw[k][bl]);
                msys[i][k] = s;
                msys[k][i] = s;
            }
            for (std::size_t j = 0; j < f; ++j) {
                msys[i][p + j] = gvec(i, j);
                msys[p + j][i] = gvec(i, j);
            }
        }
        std::vector<double> acw(p), ab(p);
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0.0;
            for (std::size_t bl = 0; bl < nb; ++bl) s += inner(Fmat(i, bl), wcw[bl]);
            acw[i] = s;
            ab[i] = prob.cons[i].rhs;
        }
        double cwc = 0.0;
        for (std::size_t bl = 0; bl < nb; ++bl) cwc += inner(C[bl], wcw[bl]);

        for (std::size_t i = 0; i < p; ++i) {
            msys[i][p + f] = -(ab[i] + acw[i]);
            msys[p + f][i] = ab[i] - acw[i];
        }
        for (std::size_t j = 0; j < f; ++j) {
            const double qj = (j < prob.q.size() ? prob.q[j] : 0.0);
            msys[p + j][p + f] = -qj;
            msys[p + f][p + j] = -qj;
        }
        msys[p + f][p + f] = cwc + kappa / tau;

        // two solves: affine (sigma = 0) then combined with Mehrotra sigma
        auto newton = [&](double sigma, std::vector<double>& dy, std::vector<double>& du,
                          double& dtau, std::vector<Mat>& dX, std::vector<Mat>& dS,
                          double& dkappa) -> bool {
            // complementarity targets: dX + W dS W = sigma*mu*S^{-1} - X =: Rc
            std::vector<Mat> Rc(nb);
            for (std::size_t bl = 0; bl < nb; ++bl)
                Rc[bl] = Cx(sigma * mu) * Sinv[bl] - X[bl];

            std::vector<double> rhs(dim, 0.0);
            for (std::size_t i = 0; i < p; ++i) {
                double s = -Rp[i];
                for (std::size_t bl = 0; bl < nb; ++bl) {
                    s -= inner(Fmat(i, bl), Rc[bl]);
                    s -= inner(Fmat(i, bl), hermitian_part(W[bl] * Rd[bl] * W[bl]));
                }
                rhs[i] = s;
            }
            for (std::size_t j = 0; j < f; ++j) rhs[p + j] = -Rf[j];
            {
                double s = -Rg + (sigma * mu - tau * kappa) / tau;
                for (std::size_t bl = 0; bl < nb; ++bl) {
                    s += inner(C[bl], Rc[bl]);
                    s += inner(C[bl], hermitian_part(W[bl] * Rd[bl] * W[bl]));
                }
                rhs[p + f] = s;
            }

            std::vector<double> sol;
            try {
                sol = solve_real_dense(msys, rhs);
            } catch (const std::runtime_error&) {
                return false;
            }
            dy.assign(sol.begin(), sol.begin() + p);
            du.assign(sol.begin() + p, sol.begin() + p + f);
            dtau = sol[p + f];

            dS.resize(nb);
            dX.resize(nb);
            for (std::size_t bl = 0; bl < nb; ++bl) {
                Mat ds = Cx(dtau) * C[bl] - Rd[bl];
                for (std::size_t i = 0; i < p; ++i) {
                    const Mat fm = Fmat(i, bl);
                    if (fm.rows) ds = ds - Cx(dy[i]) * fm;
                }
                dS[bl] = hermitian_part(ds);
                dX[bl] = hermitian_part(Rc[bl] - W[bl] * dS[bl] * W[bl]);
            }
            dkappa = (sigma * mu - tau * kappa - kappa * dtau) / tau;
            return true;
        };

        auto step_bound = [&](const std::vector<Mat>& dX, const std::vector<Mat>& dS,
                              double dtau, double dkappa) -> double {
            double a = 1.0;
            for (std::size_t bl = 0; bl < nb; ++bl) {
                EigDecomposition ex = hermitian_eig(X[bl]);
                EigDecomposition es = hermitian_eig(S[bl]);
                a = detail::max_psd_step(detail::herm_power(ex, -0.5), dX[bl], a);
                a = detail::max_psd_step(detail::herm_power(es, -0.5), dS[bl], a);
            }
            if (dtau < 0.0) a = std::min(a, -tau / dtau);
            if (dkappa < 0.0) a = std::min(a, -kappa / dkappa);
            return a;
        };

        std::vector<double> dy, du;
        std::vector<Mat> dX, dS;
        double dtau = 0.0, dkappa = 0.0;
        if (!newton(0.0, dy, du, dtau, dX, dS, dkappa)) {
            out.status = SdpSolution::Status::NumericalTrouble;
            return out;
        }
        const double a_aff = step_bound(dX, dS, dtau, dkappa);
        double mu_aff = (tau + a_aff * dtau) * (kappa + a_aff * dkappa);
        for (std::size_t bl = 0; bl < nb; ++bl)
            mu_aff += inner(X[bl] + Cx(a_aff) * dX[bl], S[bl] + Cx(a_aff) * dS[bl]);
        mu_aff /= nu;
        double sigma = std::pow(std::max(0.0, std::min(1.0, mu_aff / mu)), 3.0);

        if (!newton(sigma, dy, du, dtau, dX, dS, dkappa)) {
            out.status = SdpSolution::Status::NumericalTrouble;
            return out;
        }
        double alpha = 0.99 * step_bound(dX, dS, dtau, dkappa);
        alpha = std::min(alpha, 1.0);

        for (std::size_t bl = 0; bl < nb; ++bl) {
            X[bl] = hermitian_part(X[bl] + Cx(alpha) * dX[bl]);
            S[bl] = hermitian_part(S[bl] + Cx(alpha) * dS[bl]);
        }
        for (std::size_t i = 0; i < p; ++i) y[i] += alpha * dy[i];
        for (std::size_t j = 0; j < f; ++j) u[j] += alpha * du[j];
        tau += alpha * dtau;
        kappa += alpha * dkappa;
    }

    out.status = SdpSolution::Status::NumericalTrouble;
    return out;
}

/// Witness search for a strictly feasible point of the LMI
///   H0 + sum_k c_k H_k  >  margin * I,   |c| <= 1,
/// by maximizing the minimum eigenvalue (auxiliary scalar lambda). Returns
/// the maximizing c when the optimum exceeds the margin.
struct StrictFeasibility {
    std::vector<double> c;
    double lambda = 0.0;
};

inline std::optional<StrictFeasibility> strict_feasibility(
    const Mat& h0, const std::vector<Mat>& h, double margin,
    const ToleranceConfig& tol = {}) {
    const std::size_t n = h0.rows;
    const std::size_t m = h.size();
    const bool complex_entries = [&] {
        for (const Cx& e : h0.a)
            if (e.im != 0.0) return true;
        for (const Mat& hk : h)
            for (const Cx& e : hk.a)
                if (e.im != 0.0) return true;
        return false;
    }();

    // blocks: slack T = H0 + c.H - lambda*I  (n x n),  ball B = [[I, c],[c^T, 1]]
    SdpProblem prob;
    prob.block_sizes = {n, m + 1};
    prob.num_free = m + 1; // c_1..c_m, lambda
    prob.q.assign(m + 1, 0.0);
    prob.q[m] = -1.0; // maximize lambda

    auto add_entry_constraints = [&](std::size_t bl, std::size_t bn,
                                     auto&& fill) {
        // equality constraints for every independent real component of the block
        for (std::size_t i = 0; i < bn; ++i)
            for (std::size_t j = i; j < bn; ++j) {
                {
                    SdpProblem::Constraint con;
                    con.F.resize(2);
                    con.F[bl] = Mat(bn, bn);
                    con.F[bl](i, j) = con.F[bl](i, j) + Cx(0.5);
                    con.F[bl](j, i) = con.F[bl](j, i) + Cx(0.5);
                    if (i == j) con.F[bl](i, i) = 1.0;
                    con.g.assign(m + 1, 0.0);
                    fill(con, i, j, false);
                    prob.cons.push_back(std::move(con));
                }
                if (complex_entries && i != j) {
                    SdpProblem::Constraint con;
                    con.F.resize(2);
                    con.F[bl] = Mat(bn, bn);
                    con.F[bl](i, j) = Cx(0.0, 0.5);   // inner(F, X) = -Im X_ij
                    con.F[bl](j, i) = Cx(0.0, -0.5);
                    con.g.assign(m + 1, 0.0);
                    fill(con, i, j, true);
                    prob.cons.push_back(std::move(con));
                }
            }
    };

    // slack block: T_ij - sum_k c_k (H_k)_ij + lambda*delta_ij = (H0)_ij
    add_entry_constraints(0, n, [&](SdpProblem::Constraint& con, std::size_t i,
                                    std::size_t j, bool imag) {
        for (std::size_t k = 0; k < m; ++k)
            con.g[k] = imag ? h[k](i, j).im : -h[k](i, j).re;
        if (i == j && !imag) con.g[m] = 1.0;
        con.rhs = imag ? -h0(i, j).im : h0(i, j).re;
    });

    // ball block: B_ii = 1 on the diagonal, B_{i,m} - c_i = 0, off-diagonals 0
    add_entry_constraints(1, m + 1, [&](SdpProblem::Constraint& con, std::size_t i,
                                        std::size_t j, bool imag) {
        if (imag) { con.rhs = 0.0; return; }
        if (i == j) { con.rhs = 1.0; return; }
        if (j == m) con.g[i] = -1.0;
        con.rhs = 0.0;
    });

    SdpSolution sol = sdp_solve(prob, tol);
    if (sol.status != SdpSolution::Status::Optimal) return std::nullopt;
    StrictFeasibility r;
    r.c.assign(sol.u.begin(), sol.u.begin() + m);
    r.lambda = sol.u[m];
    if (r.lambda <= margin) return std::nullopt;
    return r;
}

} // namespace qcvx
