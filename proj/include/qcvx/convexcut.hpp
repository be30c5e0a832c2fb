#pragma once

#include "cminus.hpp"
#include "nonconvexity.hpp"
#include "rng.hpp"

namespace qcvx {

struct TrivialBError : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotDefiniteError : std::domain_error {
    using std::domain_error::domain_error;
};
struct NoCMinusFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionUnsupported : std::domain_error {
    using std::domain_error::domain_error;
};

/// z(c) = v^*v with v = Q^{-1}(c.b); the squared distance bound behind the
/// convex cut. Meaningful only on C-, where the kernel defect vanishes.
inline double z_of_c(const QuadraticMap& f, const std::vector<double>& c_plus,
                     const std::vector<double>& c, double kernel_tol = 1e-7) {
    const CMinusState s = make_cminus_state(f, c_plus, c, kernel_tol);
    if (s.kernel_dim != 1)
        throw std::domain_error("z_of_c: kernel dimension is not one at this direction");
    return s.z;
}

inline std::vector<double> gradient_z(const QuadraticMap& f,
                                      const std::vector<double>& c_plus,
                                      const std::vector<double>& c,
                                      double kernel_tol = 1e-7) {
    const CMinusState s = make_cminus_state(f, c_plus, c, kernel_tol);
    if (s.kernel_dim != 1)
        throw std::domain_error("gradient_z: kernel dimension is not one at this direction");
    return s.grad_z;
}

/// Gradient of z projected onto the tangent space of C- at the state's point:
/// orthogonal to c, c+, and the flat-edge normals. Degenerate (near-parallel)
/// normals are dropped by the Gram-Schmidt pass instead of blowing up.
inline std::vector<double> project_gradient(const CMinusState& s,
                                            const std::vector<double>& c_plus) {
    std::vector<std::vector<double>> span = {s.c, c_plus};
    std::vector<double> re_n(s.n.size()), im_n(s.n.size());
    bool has_im = false;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        re_n[i] = s.n[i].re;
        im_n[i] = s.n[i].im;
        if (im_n[i] != 0.0) has_im = true;
    }
    span.push_back(std::move(re_n));
    if (has_im) span.push_back(std::move(im_n));
    return project_tangent(s.grad_z, span);
}

/// Real-field retraction back onto C- after a tangent step: bisection of
/// m(lambda) = Re x0^*(c.b) along the line c' + lambda * n (n the unit
/// flat-edge normal), with the kernel vector sign pinned to the previous
/// point for continuity of m.
inline std::optional<std::vector<double>> retract_real(
    const QuadraticMap& f, const std::vector<double>& c_plus,
    const std::vector<double>& c_prime, const std::vector<double>& n_unit,
    double lam0, const Vec& x0_prev, const ToleranceConfig& tol = {}) {
    const std::size_t m = f.m;
    auto m_of = [&](double lam) -> std::optional<double> {
        std::vector<double> ct(m);
        for (std::size_t i = 0; i < m; ++i) ct[i] = c_prime[i] + lam * n_unit[i];
        CMinusState s = make_cminus_state(f, c_plus, ct, tol.kernel_tol);
        if (s.kernel_dim != 1) return std::nullopt;
        double sgn = dot(s.x0, x0_prev).re < 0.0 ? -1.0 : 1.0;
        return sgn * s.w.re;
    };
    auto finish = [&](double lam) -> std::vector<double> {
        std::vector<double> ct(m);
        for (std::size_t i = 0; i < m; ++i) ct[i] = c_prime[i] + lam * n_unit[i];
        gauge_normalize(ct, c_plus);
        return ct;
    };

    const double mtol = 1e-10;
    double a = -lam0, b = lam0;
    auto ma = m_of(a), mb = m_of(b);
    if (!ma || !mb) return std::nullopt;
    if (*ma * *mb > 0.0) {
        // no sign change across the bracket; accept c' itself only if it is
        // already on the zero set
        auto m0 = m_of(0.0);
        if (m0 && std::fabs(*m0) < mtol) return finish(0.0);
        return std::nullopt;
    }
    for (int it = 0; it < tol.bisect_iters; ++it) {
        const double mid = 0.5 * (a + b);
        auto mm = m_of(mid);
        if (!mm) return std::nullopt;
        if (std::fabs(*mm) < mtol) return finish(mid);
        if (*ma * *mm <= 0.0) {
            b = mid;
            mb = mm;
        } else {
            a = mid;
            ma = mm;
        }
    }
    // a sign change that never shrank the residual is a jump of m across a
    // kernel branch switch, not a zero; refuse to return a fake root
    const double mid = 0.5 * (a + b);
    auto mm = m_of(mid);
    if (mm && std::fabs(*mm) < 1e-8) return finish(mid);
    return std::nullopt;
}

/// Complex-field retraction onto the defect zero set, driving
/// rho(c) = |w(c)|^2 below the pinned target. The Gauss-Newton polish
/// converges quadratically near the zero set; a plain projected descent on
/// rho backs it up when the Newton step fails.
inline std::optional<std::vector<double>> retract_complex(
    const QuadraticMap& f, const std::vector<double>& c_plus,
    std::vector<double> c, const ToleranceConfig& tol = {}) {
    const std::size_t m = f.m;
    const double wtol = std::sqrt(tol.rho_tol);
    if (auto gn = refine_to_cminus(f, c_plus, c, tol.kernel_tol, wtol, 60)) return gn;
    gauge_normalize(c, c_plus);
    double nc = 0.0;
    for (double v : c) nc += v * v;
    if (nc < 1e-12) return std::nullopt;

    CMinusState s = make_cminus_state(f, c_plus, c, tol.kernel_tol);
    if (s.kernel_dim != 1) return std::nullopt;
    double beta = 0.1;
    for (int it = 0; it < 400; ++it) {
        if (abs(s.w) < wtol) return c;
        std::vector<double> g = project_tangent(s.grad_rho, {c, c_plus});
        double ng = 0.0;
        for (double v : g) ng += v * v;
        ng = std::sqrt(ng);
        if (ng < 1e-14) return std::nullopt;
        bool moved = false;
        while (beta > 1e-12) {
            std::vector<double> c1(m);
            for (std::size_t i = 0; i < m; ++i) c1[i] = c[i] - beta * g[i];
            gauge_normalize(c1, c_plus);
            CMinusState s1 = make_cminus_state(f, c_plus, c1, tol.kernel_tol);
            if (s1.kernel_dim == 1 && norm2(s1.w) < norm2(s.w)) {
                c = std::move(c1);
                s = std::move(s1);
                moved = true;
                beta = std::min(beta * 2.0, 1.0);
                break;
            }
            beta *= 0.5;
        }
        if (!moved) return std::nullopt;
    }
    return abs(s.w) < wtol ? std::optional<std::vector<double>>(c) : std::nullopt;
}

enum class DescentStop {
    GradientCollinearWithNormal, ///< projected gradient vanished: stationary point
    KernelDimExceeded,
    StepUnderflow,
    IterCap,
};

struct DescentTrace {
    double z = 0.0;              ///< best z seen along the path
    std::vector<double> c;       ///< direction achieving it
    DescentStop stop = DescentStop::IterCap;
    int iterations = 0;
    std::vector<double> z_history;
};

/// Projected gradient descent of z over C-: tangent step against the
/// projected gradient, then retraction back onto the defect zero set.
/// The step halves on failure and doubles after three straight successes,
/// capped at the initial step.
inline DescentTrace descend(const QuadraticMap& f, const std::vector<double>& c_plus,
                            const std::vector<double>& c0, const ToleranceConfig& tol = {},
                            int max_iters = 500) {
    const std::size_t m = f.m;
    double bnorm = 0.0;
    for (const Vec& bk : f.b)
        for (std::size_t i = 0; i < f.n; ++i) bnorm += norm2(bk[i]);
    bnorm = std::sqrt(bnorm);
    const double w_accept = tol.orth_tol * (1.0 + bnorm);
    DescentTrace out;
    CMinusState s = make_cminus_state(f, c_plus, c0, tol.kernel_tol);
    out.z = s.kernel_dim == 1 ? s.z : std::numeric_limits<double>::infinity();
    out.c = c0;
    double beta = tol.beta0;
    int streak = 0;

    for (int it = 0; it < max_iters; ++it) {
        out.iterations = it;
        if (s.kernel_dim != 1) {
            out.stop = DescentStop::KernelDimExceeded;
            return out;
        }
        out.z_history.push_back(s.z);
        const std::vector<double> pg = project_gradient(s, c_plus);
        double npg = 0.0, ng = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            npg += pg[i] * pg[i];
            ng += s.grad_z[i] * s.grad_z[i];
        }
        npg = std::sqrt(npg);
        ng = std::sqrt(ng);
        if (npg < tol.grad_stop * (1.0 + ng)) {
            out.stop = DescentStop::GradientCollinearWithNormal;
            return out;
        }

        bool moved = false;
        while (beta > tol.beta_underflow) {
            std::vector<double> c_prime(m);
            for (std::size_t i = 0; i < m; ++i) c_prime[i] = s.c[i] - beta * pg[i];
            std::optional<std::vector<double>> c_new;
            if (f.field == FieldTag::Real) {
                std::vector<double> nvec(m);
                double nn = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    nvec[i] = s.n[i].re;
                    nn += nvec[i] * nvec[i];
                }
                nn = std::sqrt(nn);
                if (nn > 1e-14) {
                    for (double& v : nvec) v /= nn;
                    c_new = retract_real(f, c_plus, c_prime, nvec, beta * npg, s.x0, tol);
                }
            } else {
                c_new = retract_complex(f, c_plus, c_prime, tol);
            }
            if (c_new) {
                CMinusState s_new = make_cminus_state(f, c_plus, *c_new, tol.kernel_tol);
                // re-verify C- membership: a retraction that silently drifted
                // off the defect zero set must not be accepted
                if (s_new.kernel_dim == 1 && abs(s_new.w) < w_accept &&
                    s_new.z <= s.z + 1e-12) {
                    s = std::move(s_new);
                    moved = true;
                    if (++streak >= 3) {
                        beta = std::min(2.0 * beta, tol.beta0);
                        streak = 0;
                    }
                    break;
                }
            }
            beta *= 0.5;
            streak = 0;
        }
        if (!moved) {
            out.stop = DescentStop::StepUnderflow;
            return out;
        }
        if (s.z < out.z) {
            out.z = s.z;
            out.c = s.c;
        }
    }
    out.stop = DescentStop::IterCap;
    return out;
}

struct ZMaxOptions {
    std::vector<double> c_plus; ///< searched for when empty
    std::uint64_t seed = 0;
    int restarts = 30;
    std::optional<double> z_guess; ///< incumbent initializer only, never a result by itself
    int descent_iters = 500;
};

struct Discovery {
    std::vector<double> c_start; ///< the C- member the restart landed on
    std::vector<double> c_final; ///< where the descent from it ended
    double z_start = 0.0;
    double z_final = 0.0;
    DescentStop stop = DescentStop::IterCap;
    bool duplicate = false; ///< same C- point as an earlier restart
};

struct ZMaxResult {
    double z_max = 0.0;          ///< the convex cut level: min over C- of z(c)
    std::vector<double> c_star;  ///< minimizing direction (normalized coordinates)
    std::vector<Discovery> discoveries;
    QuadraticMap normalized;
    CutTransform transform;
    int restarts = 0;
    int hits = 0;
};

/// The convex cut level z_max = min_{c in C-} z(c), estimated by multistart
/// descent: each restart draws a random direction, retracts it onto C- by
/// Gauss-Newton, and runs the projected descent. z is invariant under the
/// coordinate normalization, so the value applies to the original map.
inline ZMaxResult get_z_max(const QuadraticMap& f, const ZMaxOptions& opts,
                            const ToleranceConfig& tol = {}) {
    if (is_b_trivial(f, tol.triviality_tol).trivial)
        throw TrivialBError("get_z_max: map is homogeneous, the cut is undefined");

    std::vector<double> c_plus = opts.c_plus;
    if (c_plus.empty()) {
        auto found = find_definite_direction(f, tol);
        if (!found)
            throw NotDefiniteError("get_z_max: no definite direction exists for this map");
        c_plus = *found;
    }

    ZMaxResult out;
    try {
        auto [fn, transform] = normalize_for_cut(f, c_plus);
        out.normalized = std::move(fn);
        out.transform = std::move(transform);
    } catch (const std::domain_error&) {
        throw NotDefiniteError("get_z_max: the supplied direction is not definite");
    }
    const QuadraticMap& fn = out.normalized;
    const std::vector<double>& cp = out.transform.c_plus;
    const std::size_t m = f.m;

    double best_z = std::numeric_limits<double>::infinity();
    std::vector<double> best_c;
    CounterRng rng(opts.seed);

    for (int k = 0; k < opts.restarts; ++k) {
        ++out.restarts;
        std::vector<double> d(m);
        for (std::size_t i = 0; i < m; ++i) d[i] = rng.next_gaussian();
        auto c0 = refine_to_cminus(fn, cp, d, tol.kernel_tol, 1e-9, 60);
        if (!c0) continue;

        Discovery disc;
        disc.c_start = *c0;
        disc.z_start = z_of_c(fn, cp, *c0, tol.kernel_tol);
        for (const Discovery& prev : out.discoveries) {
            double cc = 0.0;
            for (std::size_t i = 0; i < m; ++i) cc += prev.c_start[i] * disc.c_start[i];
            if (std::fabs(cc) > tol.duplicate_cos) {
                disc.duplicate = true;
                break;
            }
        }

        DescentTrace t = descend(fn, cp, *c0, tol, opts.descent_iters);
        disc.c_final = t.c;
        disc.z_final = t.z;
        disc.stop = t.stop;
        ++out.hits;
        if (t.z < best_z) {
            best_z = t.z;
            best_c = t.c;
        }
        out.discoveries.push_back(std::move(disc));
    }

    if (out.hits == 0)
        throw NoCMinusFoundError("get_z_max: no C- member found; the image may be convex");

    out.z_max = best_z;
    out.c_star = best_c;
    if (opts.z_guess && *opts.z_guess < out.z_max) {
        // an externally supplied incumbent only tightens the reported level
        out.z_max = *opts.z_guess;
    }
    return out;
}

struct ComponentSample {
    std::vector<std::vector<double>> points; ///< ordered along the curve
    bool closed = false;                     ///< loop vs open interval
    /// for open intervals: lambda_2 / lambda_max of the boundary pencil at the
    /// two ends; a small ratio marks a rank-drop (kernel growth) endpoint
    double end_lambda2_rel_front = 1.0;
    double end_lambda2_rel_back = 1.0;
};

/// Trace the connected component of C- through a given member by
/// predictor-corrector continuation. Supported only for real maps with
/// m = 4, where C- is a union of curves on the gauge sphere.
inline ComponentSample sample_c_minus_component(const QuadraticMap& f,
                                                const std::vector<double>& c_plus,
                                                const std::vector<double>& c_start,
                                                double step = 0.02, int max_steps = 2000,
                                                const ToleranceConfig& tol = {}) {
    if (f.field != FieldTag::Real || f.m != 4)
        throw DimensionUnsupported(
            "sample_c_minus_component: only real maps with m = 4 are supported");
    const std::size_t m = f.m;

    auto refined = refine_to_cminus(f, c_plus, c_start, tol.kernel_tol, 1e-10, 60);
    if (!refined)
        throw std::invalid_argument("sample_c_minus_component: start is not on C-");

    auto tangent_at = [&](const CMinusState& s) -> std::optional<std::vector<double>> {
        std::vector<double> re_n(m);
        for (std::size_t i = 0; i < m; ++i) re_n[i] = s.n[i].re;
        // the curve tangent spans the orthogonal complement of {c, c+, n};
        // probe the coordinate directions and keep the largest projection
        std::vector<double> best(m, 0.0);
        double best_norm = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> e(m, 0.0);
            e[j] = 1.0;
            std::vector<double> t = project_tangent(e, {s.c, c_plus, re_n});
            double nt = 0.0;
            for (double v : t) nt += v * v;
            nt = std::sqrt(nt);
            if (nt > best_norm) {
                best_norm = nt;
                best = std::move(t);
            }
        }
        if (best_norm < 1e-8) return std::nullopt; // tangent direction degenerated
        for (double& v : best) v /= best_norm;
        return best;
    };

    auto march = [&](std::vector<double> c, std::vector<double> t_prev, int budget)
        -> std::pair<std::vector<std::vector<double>>, bool> {
        std::vector<std::vector<double>> pts;
        const std::vector<double> origin = c;
        double h = step;
        for (int it = 0; it < budget; ++it) {
            CMinusState s = make_cminus_state(f, c_plus, c, tol.kernel_tol);
            if (s.kernel_dim != 1) return {pts, false}; // kernel grew: endpoint
            auto t = tangent_at(s);
            if (!t) return {pts, false};
            double align = 0.0;
            for (std::size_t i = 0; i < m; ++i) align += (*t)[i] * t_prev[i];
            if (align < 0.0)
                for (double& v : *t) v = -v;

            // predictor-corrector with step shrink near the curve's end, so an
            // open interval is traced all the way to its endpoint
            std::optional<std::vector<double>> next;
            while (h > 1e-5 * step) {
                std::vector<double> pred(m);
                for (std::size_t i = 0; i < m; ++i) pred[i] = c[i] + h * (*t)[i];
                next = refine_to_cminus(f, c_plus, pred, tol.kernel_tol, 1e-10, 60);
                if (next) break;
                h *= 0.5;
            }
            if (!next) return {pts, false}; // step underflow: endpoint reached
            const std::vector<double> prev = c;
            c = *next;
            t_prev = *t;
            pts.push_back(c);
            h = std::min(step, 2.0 * h);
            {
                // a collapsing second eigenvalue marks a kernel-degeneracy
                // point: the interval ends there, and marching on would hop
                // onto a different sheet of C-
                CMinusState sn = make_cminus_state(f, c_plus, c, tol.kernel_tol);
                if (sn.kernel_dim != 1) return {pts, false};
                const double rel =
                    std::fabs(sn.q_eigs[1]) / std::max(std::fabs(sn.q_eigs.back()), 1e-300);
                if (rel < 5e-3) return {pts, false};
            }
            if (it >= 3) {
                // loop closure: the origin lies within half a step of the
                // segment just traversed (a point test alone can miss a
                // transversal pass between samples)
                double seg2 = 0.0, proj = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double sv = c[i] - prev[i];
                    seg2 += sv * sv;
                    proj += (origin[i] - prev[i]) * sv;
                }
                double u = seg2 > 0.0 ? std::clamp(proj / seg2, 0.0, 1.0) : 0.0;
                double dist = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double dv = origin[i] - (prev[i] + u * (c[i] - prev[i]));
                    dist += dv * dv;
                }
                if (std::sqrt(dist) < 0.5 * step) return {pts, true}; // loop closed
            }
        }
        return {pts, false};
    };

    const CMinusState s0 = make_cminus_state(f, c_plus, *refined, tol.kernel_tol);
    ComponentSample out;
    if (s0.kernel_dim != 1) {
        out.points.push_back(*refined);
        return out;
    }
    auto t0 = tangent_at(s0);
    if (!t0) {
        out.points.push_back(*refined);
        return out;
    }

    auto [fwd, closed] = march(*refined, *t0, max_steps);
    if (closed) {
        out.points.push_back(*refined);
        out.points.insert(out.points.end(), fwd.begin(), fwd.end());
        out.closed = true;
        return out;
    }
    std::vector<double> t_back(m);
    for (std::size_t i = 0; i < m; ++i) t_back[i] = -(*t0)[i];
    auto [bwd, closed_b] = march(*refined, t_back, max_steps);
    out.points.assign(bwd.rbegin(), bwd.rend());
    out.points.push_back(*refined);
    out.points.insert(out.points.end(), fwd.begin(), fwd.end());
    out.closed = closed_b;
    if (!out.closed) {
        auto lam2_rel = [&](const std::vector<double>& c) {
            const CMinusState s = make_cminus_state(f, c_plus, c, tol.kernel_tol);
            const double top = std::max(std::fabs(s.q_eigs.back()), 1e-300);
            return std::fabs(s.q_eigs[s.q_eigs.size() > 1 ? 1 : 0]) / top;
        };
        out.end_lambda2_rel_front = lam2_rel(out.points.front());
        out.end_lambda2_rel_back = lam2_rel(out.points.back());
    }
    return out;
}

} // namespace qcvx
