#pragma once

#include "cminus.hpp"
#include "oracles.hpp"
#include "rng.hpp"

namespace qcvx {

struct HomogeneousMapError : std::domain_error {
    using std::domain_error::domain_error;
};
struct InhomogeneousMapError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A certified C- member in normalized coordinates, together with the data
/// the membership decision was made from.
struct CMinusPoint {
    std::vector<double> c; ///< unit, orthogonal to c+
    std::vector<double> p; ///< projection onto dK (the singular direction)
    Vec x0;                ///< unit kernel vector of p.A
    int kernel_dim = 1;
    double defect = 0.0;   ///< |x0^*(c.b)| at acceptance
};

struct NonconvexityCertificate {
    enum class Kind { Inhomogeneous, Homogeneous };
    Kind kind = Kind::Inhomogeneous;
    std::vector<double> c;        ///< direction with singular PSD pencil
    Vec x_b;                      ///< particular solution (inhomogeneous)
    Vec x0, x1;                   ///< kernel basis (x1 only for homogeneous)
    std::vector<double> u;        ///< u_k = x0^* A_k x0
    std::vector<Cx> v;            ///< inhomogeneous: (x_b^* A_k + b_k^*) x0; homogeneous: x1^* A_k x1
    std::vector<Cx> w;            ///< homogeneous only: x0^* A_k x1
    double collinearity_defect = 0.0;
    int kernel_dim = 0;           ///< diagnostics (certificates need 1 or 2)
};

namespace detail {

inline double sine_angle(const std::vector<double>& a, const std::vector<double>& b) {
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        aa += a[i] * a[i];
        bb += b[i] * b[i];
        ab += a[i] * b[i];
    }
    if (aa < 1e-300 || bb < 1e-300) return 0.0; // zero vectors are collinear with anything
    const double c2 = std::min(1.0, (ab * ab) / (aa * bb));
    return std::sqrt(1.0 - c2);
}

/// Smallest singular value of the stacked row vectors after normalizing each
/// row, so the independence measure is scale invariant.
inline double min_singular_normalized(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size(), m = rows[0].size();
    std::vector<std::vector<double>> q(r, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < r; ++i) {
        double nr = 0.0;
        for (double v : rows[i]) nr += v * v;
        nr = std::sqrt(nr);
        if (nr < 1e-300) return 0.0;
        for (std::size_t j = 0; j < m; ++j) q[i][j] = rows[i][j] / nr;
    }
    Mat g(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += q[i][j] * q[k][j];
            g(i, k) = s;
        }
    const double lmin = hermitian_eig(g).values.front();
    return std::sqrt(std::max(0.0, lmin));
}

} // namespace detail

/// Proposition test for a boundary non-convexity at direction c on an
/// inhomogeneous map: c.A PSD with one-dimensional kernel, solvable shifted
/// system, and non-collinear witness vectors. Works in the map's original
/// coordinates; every returned certificate re-verifies from its stored data.
inline std::optional<NonconvexityCertificate> check_boundary_nonconvexity(
    const QuadraticMap& f, const std::vector<double>& c,
    const ToleranceConfig& tol = {}) {
    if (is_b_trivial(f, tol.triviality_tol).trivial)
        throw HomogeneousMapError("check_boundary_nonconvexity: map is homogeneous");
    if (f.m < 3 || f.n < 2) return std::nullopt;

    const Mat q = cdot(c, f.A);
    const RankKernel rk = rank_and_kernel_rel(q, tol.kernel_tol);
    double amax = 1e-300;
    for (double l : rk.eig.values) amax = std::max(amax, std::fabs(l));
    if (rk.eig.values.front() < -tol.kernel_tol * amax) return std::nullopt; // not PSD

    NonconvexityCertificate cert;
    cert.kernel_dim = static_cast<int>(rk.kernel.size());
    if (cert.kernel_dim != 1) return std::nullopt;
    cert.kind = NonconvexityCertificate::Kind::Inhomogeneous;
    cert.c = c;
    cert.x0 = rk.kernel[0];

    // particular solution of (c.A) x_b = -(c.b), must be exactly solvable
    const Vec cb = cdot(c, f.b);
    cert.x_b = Cx(-1.0) * (pseudo_inverse_from_eig(rk.eig, tol.kernel_tol) * cb);
    double bnorm = 0.0;
    for (const Vec& bk : f.b)
        for (std::size_t i = 0; i < f.n; ++i) bnorm += norm2(bk[i]);
    bnorm = std::sqrt(bnorm);
    const Vec resid = q * cert.x_b + cb;
    if (norm(resid) > tol.orth_tol * (1.0 + bnorm)) return std::nullopt;

    cert.u.resize(f.m);
    cert.v.resize(f.m);
    for (std::size_t k = 0; k < f.m; ++k) {
        cert.u[k] = dot(cert.x0, f.A[k] * cert.x0).re;
        // v_k = (x_b^* A_k + b_k^*) x0
        cert.v[k] = dot(cert.x_b, f.A[k] * cert.x0) + dot(f.b[k], cert.x0);
    }

    std::vector<double> re_v(f.m), im_v(f.m);
    for (std::size_t k = 0; k < f.m; ++k) {
        re_v[k] = cert.v[k].re;
        im_v[k] = cert.v[k].im;
    }
    if (f.field == FieldTag::Real) {
        cert.collinearity_defect = detail::sine_angle(cert.u, re_v);
    } else {
        // non-convex unless Re v, Im v and u are all collinear
        cert.collinearity_defect =
            std::max({detail::sine_angle(cert.u, re_v), detail::sine_angle(cert.u, im_v),
                      detail::sine_angle(re_v, im_v)});
    }
    if (cert.collinearity_defect < tol.collinearity_tol) return std::nullopt;
    return cert;
}

/// Appendix-style test for homogeneous maps: two-dimensional kernel and
/// linearly independent witness vectors {u, v, w} / {u, v, Re w, Im w}.
inline std::optional<NonconvexityCertificate> check_homogeneous_nonconvexity(
    const QuadraticMap& f, const std::vector<double>& c,
    const ToleranceConfig& tol = {}) {
    if (!is_b_trivial(f, tol.triviality_tol).trivial)
        throw InhomogeneousMapError("check_homogeneous_nonconvexity: map has non-trivial b");
    if (f.m < 3 || f.n < 2) return std::nullopt;

    const Mat q = cdot(c, f.A);
    const RankKernel rk = rank_and_kernel_rel(q, tol.kernel_tol);
    double amax = 1e-300;
    for (double l : rk.eig.values) amax = std::max(amax, std::fabs(l));
    if (rk.eig.values.front() < -tol.kernel_tol * amax) return std::nullopt;

    NonconvexityCertificate cert;
    cert.kernel_dim = static_cast<int>(rk.kernel.size());
    if (cert.kernel_dim != 2) return std::nullopt;
    cert.kind = NonconvexityCertificate::Kind::Homogeneous;
    cert.c = c;
    cert.x0 = rk.kernel[0];
    cert.x1 = rk.kernel[1];

    cert.u.resize(f.m);
    cert.v.resize(f.m);
    cert.w.resize(f.m);
    for (std::size_t k = 0; k < f.m; ++k) {
        cert.u[k] = dot(cert.x0, f.A[k] * cert.x0).re;
        cert.v[k] = Cx(dot(cert.x1, f.A[k] * cert.x1).re);
        cert.w[k] = dot(cert.x0, f.A[k] * cert.x1);
    }

    std::vector<std::vector<double>> rows;
    rows.push_back(cert.u);
    {
        std::vector<double> rv(f.m);
        for (std::size_t k = 0; k < f.m; ++k) rv[k] = cert.v[k].re;
        rows.push_back(rv);
    }
    {
        std::vector<double> rw(f.m), iw(f.m);
        for (std::size_t k = 0; k < f.m; ++k) {
            rw[k] = cert.w[k].re;
            iw[k] = cert.w[k].im;
        }
        rows.push_back(rw);
        if (f.field == FieldTag::Complex) rows.push_back(iw);
    }
    cert.collinearity_defect = detail::min_singular_normalized(rows);
    if (cert.collinearity_defect < tol.collinearity_tol) return std::nullopt;
    return cert;
}

/// One attempt of the stochastic C- search on a normalized map: sample a
/// direction, query the dual boundary oracle, project the returned normal
/// onto dK, then refine the defect to zero and test membership.
inline std::optional<CMinusPoint> try_c_minus_once(
    const QuadraticMap& fn, const std::vector<double>& c_plus,
    const std::vector<double>& y_base, CounterRng& rng, const ToleranceConfig& tol) {
    Vec dv = rng.next_unit_vector(fn.m);
    std::vector<double> d(fn.m);
    for (std::size_t k = 0; k < fn.m; ++k) d[k] = dv[k].re;

    std::vector<double> c;
    try {
        c = get_c_from_d(fn, y_base, d, tol).c;
    } catch (const NoSupportingHyperplane&) {
        return std::nullopt;
    }
    gauge_normalize(c, c_plus);
    double nc = 0.0;
    for (double v : c) nc += v * v;
    if (nc < 1e-10) return std::nullopt; // the oracle returned c parallel to c+

    auto refined = refine_to_cminus(fn, c_plus, c, tol.kernel_tol,
                                    tol.orth_tol * 1e-1, 60);
    if (!refined) return std::nullopt;
    CMinusState s = make_cminus_state(fn, c_plus, *refined, tol.kernel_tol);
    if (s.kernel_dim != 1) return std::nullopt;
    double bnorm = 0.0;
    for (const Vec& bk : fn.b)
        for (std::size_t i = 0; i < fn.n; ++i) bnorm += norm2(bk[i]);
    bnorm = std::sqrt(bnorm);
    if (abs(s.w) > tol.orth_tol * (1.0 + bnorm)) return std::nullopt;

    CMinusPoint pt;
    pt.c = *refined;
    pt.p = s.p;
    pt.x0 = s.x0;
    pt.kernel_dim = 1;
    pt.defect = abs(s.w);
    return pt;
}

/// Stochastic search for a C- member. `fn` must be the normalized map
/// (A+ = I, c+.b = 0) and `y_base` a point of G in normalized image
/// coordinates. Exhausting the iteration budget returns nullopt, which is
/// evidence (not proof) of convexity.
inline std::optional<CMinusPoint> get_c_minus(const QuadraticMap& fn,
                                              const std::vector<double>& c_plus,
                                              const std::vector<double>& y_base,
                                              std::uint64_t seed, int max_iters,
                                              const ToleranceConfig& tol = {}) {
    for (int it = 0; it < max_iters; ++it) {
        CounterRng rng(CounterRng::derive(seed, static_cast<std::uint64_t>(it)));
        if (auto pt = try_c_minus_once(fn, c_plus, y_base, rng, tol)) return pt;
    }
    return std::nullopt;
}

/// Homogeneous variant: drive the second-smallest eigenvalue of p(c).A to
/// zero by projected gradient descent over the gauge sphere, reaching a
/// two-dimensional kernel. The gradient of lambda_2 is x1^* A_i x1 in the
/// eigenvector basis (minus the x0 term that the dK projection contributes).
inline std::optional<std::vector<double>> find_kernel_dim2(
    const QuadraticMap& fn, const std::vector<double>& c_plus, std::uint64_t seed,
    int max_iters, const ToleranceConfig& tol = {}) {
    const std::size_t m = fn.m;
    auto lam2_state = [&](const std::vector<double>& c)
        -> std::tuple<double, std::vector<double>, double> {
        const std::vector<double> p = project_to_dK(fn, c_plus, c);
        const Mat q = cdot(p, fn.A);
        const EigDecomposition e = hermitian_eig(q);
        Vec x0(fn.n), x1(fn.n);
        for (std::size_t i = 0; i < fn.n; ++i) {
            x0[i] = e.vectors(i, 0);
            x1[i] = e.vectors(i, 1);
        }
        std::vector<double> g(m);
        for (std::size_t i = 0; i < m; ++i)
            g[i] = dot(x1, fn.A[i] * x1).re - dot(x0, fn.A[i] * x0).re;
        double amax = 1e-300;
        for (double l : e.values) amax = std::max(amax, std::fabs(l));
        return {e.values[1], g, amax};
    };

    for (int trial = 0; trial < max_iters; ++trial) {
        CounterRng rng(CounterRng::derive(seed ^ 0x517cc1b727220a95ULL,
                                          static_cast<std::uint64_t>(trial)));
        Vec cv = rng.next_unit_vector(m);
        std::vector<double> c(m);
        for (std::size_t i = 0; i < m; ++i) c[i] = cv[i].re;
        gauge_normalize(c, c_plus);
        auto [lam2, g, amax] = lam2_state(c);
        double beta = 0.2;
        for (int it = 0; it < 300; ++it) {
            if (lam2 < 1e-9 * std::max(1.0, amax)) return c;
            std::vector<double> pg = project_tangent(g, {c, c_plus});
            double npg = 0.0;
            for (double v : pg) npg += v * v;
            npg = std::sqrt(npg);
            if (npg < 1e-12) break;
            bool moved = false;
            while (beta > 1e-12) {
                const double scale = std::min(1.0, 5.0 * lam2 / npg) / npg;
                std::vector<double> c1(m);
                for (std::size_t i = 0; i < m; ++i) c1[i] = c[i] - beta * scale * pg[i];
                gauge_normalize(c1, c_plus);
                auto [l1, g1, a1] = lam2_state(c1);
                if (l1 < lam2) {
                    c = std::move(c1);
                    lam2 = l1;
                    g = std::move(g1);
                    amax = a1;
                    moved = true;
                    beta = std::min(2.0 * beta, 0.5);
                    break;
                }
                beta *= 0.5;
            }
            if (!moved) break;
        }
    }
    return std::nullopt;
}

struct CertificateSearchOptions {
    std::uint64_t seed = 0;
    int max_iters = 100;
    std::vector<double> c_plus; ///< optional; searched for when empty
};

/// Top-level stochastic non-convexity certification: dispatches on
/// b-triviality, searches C- in normalized coordinates and re-verifies the
/// certificate on the original map.
inline std::optional<NonconvexityCertificate> nonconvexity_certificate(
    const QuadraticMap& f, const CertificateSearchOptions& opts,
    const ToleranceConfig& tol = {}) {
    std::vector<double> c_plus = opts.c_plus;
    if (c_plus.empty()) {
        auto found = find_definite_direction(f, tol);
        if (!found) return std::nullopt; // search needs a definite direction
        c_plus = *found;
    }

    const bool homogeneous = is_b_trivial(f, tol.triviality_tol).trivial;
    auto [fn, transform] = normalize_for_cut(f, c_plus);

    if (homogeneous) {
        auto c = find_kernel_dim2(fn, transform.c_plus, opts.seed, opts.max_iters, tol);
        if (!c) return std::nullopt;
        std::vector<double> p = project_to_dK(fn, transform.c_plus, *c);
        double np = 0.0;
        for (double v : p) np += v * v;
        np = std::sqrt(np);
        if (np < 1e-12) return std::nullopt;
        for (double& v : p) v /= np;
        return check_homogeneous_nonconvexity(f, p, tol);
    }

    std::vector<double> y_base(f.m, 0.0); // f(0) = 0, shifted into new coordinates
    for (std::size_t k = 0; k < f.m; ++k) y_base[k] = -transform.image_shift[k];

    for (int it = 0; it < opts.max_iters; ++it) {
        CounterRng rng(CounterRng::derive(opts.seed, static_cast<std::uint64_t>(it)));
        auto pt = try_c_minus_once(fn, transform.c_plus, y_base, rng, tol);
        if (!pt) continue;
        // the singular direction transfers to original coordinates unchanged
        std::vector<double> p = pt->p;
        double np = 0.0;
        for (double v : p) np += v * v;
        np = std::sqrt(np);
        if (np < 1e-12) continue;
        for (double& v : p) v /= np;
        auto cert = check_boundary_nonconvexity(f, p, tol);
        if (cert) return cert;
    }
    return std::nullopt;
}

} // namespace qcvx
