#pragma once

#include "linalg.hpp"
#include "quadmap.hpp"

namespace qcvx {

/// p_i = c_i - (c+)_i * lambda_min(c.A): the radial projection of c onto the
/// boundary of the cone K, valid in normalized coordinates (A+ = I).
inline std::vector<double> project_to_dK(const QuadraticMap& f,
                                         const std::vector<double>& c_plus,
                                         const std::vector<double>& c) {
    const double lm = lambda_min(cdot(c, f.A));
    std::vector<double> p(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) p[k] = c[k] - c_plus[k] * lm;
    return p;
}

/// Everything the descent needs at one direction c: the boundary pencil
/// Q = p(c).A, its kernel vector x0, the cut value z = v^*v, the defect
/// w = x0^*(c.b), the flat-edge normals n_i = x0^* q_i and both gradients.
/// Valid only when kernel_dim == 1; other fields stay empty otherwise.
struct CMinusState {
    std::vector<double> c;  ///< unit, orthogonal to c+
    std::vector<double> p;  ///< projection of c onto dK
    int kernel_dim = 0;
    std::vector<double> q_eigs;
    Vec x0;                 ///< unit kernel vector of Q
    Mat q_pinv;
    Vec cb;                 ///< c.b (= p.b since c+.b = 0)
    Vec v;                  ///< Q^{-1}(c.b)
    double z = 0.0;         ///< v^*v
    Cx w;                   ///< x0^*(c.b); zero exactly on C-
    std::vector<Cx> n;      ///< flat-edge normals n_i = x0^* q_i
    std::vector<double> grad_z;   ///< 2 Re(v^* Q^{-1} q_i)
    std::vector<double> grad_rho; ///< 2 Re(conj(w) n_i)
};

inline CMinusState make_cminus_state(const QuadraticMap& f,
                                     const std::vector<double>& c_plus,
                                     const std::vector<double>& c,
                                     double kernel_tol = 1e-7) {
    CMinusState s;
    s.c = c;
    s.p = project_to_dK(f, c_plus, c);
    const Mat q = cdot(s.p, f.A);
    const RankKernel rk = rank_and_kernel_rel(q, kernel_tol);
    s.kernel_dim = static_cast<int>(rk.kernel.size());
    s.q_eigs = rk.eig.values;
    if (s.kernel_dim != 1) return s;

    s.x0 = rk.kernel[0];
    s.q_pinv = pseudo_inverse_from_eig(rk.eig, kernel_tol);
    s.cb = cdot(s.c, f.b);
    s.v = s.q_pinv * s.cb;
    s.z = dot(s.v, s.v).re;
    s.w = dot(s.x0, s.cb);

    const std::size_t m = f.m;
    s.n.resize(m);
    s.grad_z.resize(m);
    s.grad_rho.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        // q_i = b_i - (A_i - (x0^* A_i x0) I) Q^{-1}(c.b) = b_i - A_i v + (x0^* A_i x0) v
        const double xax = dot(s.x0, f.A[i] * s.x0).re;
        const Vec qi = f.b[i] - f.A[i] * s.v + Cx(xax) * s.v;
        s.n[i] = dot(s.x0, qi);
        s.grad_z[i] = 2.0 * dot(s.v, s.q_pinv * qi).re;
        s.grad_rho[i] = 2.0 * (conj(s.w) * s.n[i]).re;
    }
    return s;
}

/// Remove from g its components along c, c+ and the given normals
/// (Gram-Schmidt on the stacked span, so near-parallel normals are safe).
inline std::vector<double> project_tangent(std::vector<double> g,
                                           const std::vector<std::vector<double>>& span) {
    std::vector<std::vector<double>> basis;
    const std::size_t m = g.size();
    for (const auto& raw : span) {
        std::vector<double> v = raw;
        for (const auto& u : basis) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += u[i] * v[i];
            for (std::size_t i = 0; i < m; ++i) v[i] -= d * u[i];
        }
        double nv = 0.0;
        for (double x : v) nv += x * x;
        nv = std::sqrt(nv);
        if (nv > 1e-12) {
            for (double& x : v) x /= nv;
            basis.push_back(std::move(v));
        }
    }
    for (const auto& u : basis) {
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) d += u[i] * g[i];
        for (std::size_t i = 0; i < m; ++i) g[i] -= d * u[i];
    }
    return g;
}

inline void gauge_normalize(std::vector<double>& c, const std::vector<double>& c_plus) {
    double d = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) d += c_plus[i] * c[i];
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= d * c_plus[i];
    double nc = 0.0;
    for (double v : c) nc += v * v;
    nc = std::sqrt(nc);
    if (nc > 0.0)
        for (double& v : c) v /= nc;
}

/// Damped Gauss-Newton on the defect w(c) = x0^*(c.b) over the gauge sphere
/// {|c| = 1, c.c+ = 0}. The Jacobian rows are exactly the flat-edge normals
/// n_i, so each iteration reuses the descent state. Returns a C- member with
/// |w| < tol, or nullopt when the iteration stalls or the kernel degenerates.
inline std::optional<std::vector<double>> refine_to_cminus(
    const QuadraticMap& f, const std::vector<double>& c_plus, std::vector<double> c,
    double kernel_tol = 1e-7, double tol = 1e-9, int iters = 60) {
    const std::size_t m = f.m;
    gauge_normalize(c, c_plus);
    double nc = 0.0;
    for (double v : c) nc += v * v;
    if (nc < 1e-12) return std::nullopt;

    CMinusState s = make_cminus_state(f, c_plus, c, kernel_tol);
    if (s.kernel_dim != 1) return std::nullopt;
    const bool complex_field = f.field == FieldTag::Complex;

    for (int it = 0; it < iters; ++it) {
        const double rho = norm2(s.w);
        if (abs(s.w) < tol) return c;

        // residual r and Jacobian J (rows d(Re w)/dc, d(Im w)/dc = Re n, Im n),
        // projected onto the tangent space of the gauge sphere
        const std::size_t rows = complex_field ? 2 : 1;
        std::vector<std::vector<double>> jp(rows, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i) {
            jp[0][i] = s.n[i].re;
            if (complex_field) jp[1][i] = s.n[i].im;
        }
        for (auto& row : jp) row = project_tangent(row, {c, c_plus});
        std::vector<double> r = {s.w.re};
        if (complex_field) r.push_back(s.w.im);

        // minimum-norm least squares step dc = -Jp^T (Jp Jp^T)^{-1} r
        std::vector<std::vector<double>> gram(rows, std::vector<double>(rows, 0.0));
        for (std::size_t a = 0; a < rows; ++a)
            for (std::size_t b2 = 0; b2 < rows; ++b2)
                for (std::size_t i = 0; i < m; ++i) gram[a][b2] += jp[a][i] * jp[b2][i];
        for (std::size_t a = 0; a < rows; ++a) gram[a][a] += 1e-14;
        std::vector<double> lam;
        try {
            lam = solve_real_dense(gram, r);
        } catch (const std::runtime_error&) {
            return std::nullopt;
        }
        std::vector<double> dc(m, 0.0);
        for (std::size_t a = 0; a < rows; ++a)
            for (std::size_t i = 0; i < m; ++i) dc[i] -= lam[a] * jp[a][i];

        double step = 1.0;
        bool moved = false;
        while (step > 1e-14) {
            std::vector<double> c1(m);
            for (std::size_t i = 0; i < m; ++i) c1[i] = c[i] + step * dc[i];
            gauge_normalize(c1, c_plus);
            CMinusState s1 = make_cminus_state(f, c_plus, c1, kernel_tol);
            if (s1.kernel_dim == 1 && norm2(s1.w) < rho * (1.0 - 0.25 * step)) {
                c = std::move(c1);
                s = std::move(s1);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) return std::nullopt;
    }
    return abs(s.w) < tol ? std::optional<std::vector<double>>(c) : std::nullopt;
}

} // namespace qcvx
