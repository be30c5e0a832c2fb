#pragma once

#include <optional>
#include <string>

#include "linalg.hpp"
#include "tolerances.hpp"

namespace qcvx {

/// The central input object: f_k(x) = x^* A_k x + b_k^* x + x^* b_k over
/// R^n or C^n (the real case reduces to x^T A_k x + 2 b_k^T x).
struct QuadraticMap {
    FieldTag field = FieldTag::Real;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Mat> A; ///< m hermitian n x n matrices
    std::vector<Vec> b; ///< m vectors

    void validate() const {
        if (m < 1 || n < 1 || A.size() != m || b.size() != m)
            throw std::invalid_argument("map: inconsistent dimensions");
        for (std::size_t k = 0; k < m; ++k) {
            if (A[k].rows != n || A[k].cols != n || b[k].size() != n)
                throw std::invalid_argument("map: inconsistent dimensions");
            if (!is_hermitian(A[k], 1e-9))
                throw std::invalid_argument("map: A_" + std::to_string(k + 1) +
                                            " is not hermitian");
            if (field == FieldTag::Real) {
                for (const Cx& e : A[k].a)
                    if (e.im != 0.0) throw std::invalid_argument("map: complex entry in real map");
                for (std::size_t i = 0; i < n; ++i)
                    if (b[k][i].im != 0.0)
                        throw std::invalid_argument("map: complex entry in real map");
            }
        }
    }
};

/// c . A = sum_k c_k A_k for a real coefficient vector c.
inline Mat cdot(const std::vector<double>& c, const std::vector<Mat>& a) {
    Mat r(a[0].rows, a[0].cols);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0.0) r = r + Cx(c[k]) * a[k];
    return r;
}

inline Vec cdot(const std::vector<double>& c, const std::vector<Vec>& b) {
    Vec r(b[0].size());
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0.0) r = r + Cx(c[k]) * b[k];
    return r;
}

inline std::vector<double> evaluate(const QuadraticMap& f, const Vec& x) {
    if (x.size() != f.n) throw std::invalid_argument("evaluate: dimension mismatch");
    std::vector<double> y(f.m);
    for (std::size_t k = 0; k < f.m; ++k) {
        const Cx quad = dot(x, f.A[k] * x);
        const Cx lin = dot(f.b[k], x);
        const Cx val = quad + lin + conj(lin);
        if (std::fabs(val.im) > 1e-12 * (1.0 + std::fabs(val.re)))
            throw std::runtime_error("evaluate: nonreal value of a quadratic form");
        y[k] = val.re;
    }
    return y;
}

/// Lifted family H_k = [[A_k, b_k], [b_k^*, 0]]; f_k(x) = <H_k, (x;1)(x;1)^*>.
struct LiftedFamily {
    std::vector<Mat> H;
};

inline LiftedFamily lift(const QuadraticMap& f) {
    LiftedFamily l;
    l.H.reserve(f.m);
    for (std::size_t k = 0; k < f.m; ++k) {
        Mat h(f.n + 1, f.n + 1);
        for (std::size_t i = 0; i < f.n; ++i) {
            for (std::size_t j = 0; j < f.n; ++j) h(i, j) = f.A[k](i, j);
            h(i, f.n) = f.b[k][i];
            h(f.n, i) = conj(f.b[k][i]);
        }
        l.H.push_back(std::move(h));
    }
    return l;
}

/// b is trivial iff the stacked system A_k x0 = b_k (all k) is solvable.
/// Decided by least squares through the normal equations; for a homogeneous
/// map the witness is x0 = 0.
struct TrivialityResult {
    bool trivial = false;
    Vec witness;
    double residual = 0.0;
};

inline TrivialityResult is_b_trivial(const QuadraticMap& f, double tol = 1e-9) {
    const std::size_t n = f.n;
    Mat g(n, n);
    Vec h(n);
    double bnorm2 = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) {
        g = g + f.A[k] * f.A[k]; // A_k hermitian, so A_k^* A_k = A_k^2
        h = h + f.A[k] * f.b[k];
        for (std::size_t i = 0; i < n; ++i) bnorm2 += norm2(f.b[k][i]);
    }
    TrivialityResult r;
    r.witness = pseudo_inverse(g, 1e-12) * h;
    double res2 = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) {
        const Vec d = f.A[k] * r.witness - f.b[k];
        for (std::size_t i = 0; i < n; ++i) res2 += norm2(d[i]);
    }
    r.residual = std::sqrt(res2);
    r.trivial = r.residual < tol * (1.0 + std::sqrt(bnorm2));
    return r;
}

/// Coordinate change making A_+ = I and c_+ . b = 0: shift by
/// x0 = -A_+^{-1} b_+, then congruence by Lambda^{-1} with Lambda = A_+^{1/2}.
/// z values computed on the output map equal |.|_+^2 values on the original.
struct CutTransform {
    Vec x0;                          ///< domain shift
    Mat lambda;                      ///< factor with Lambda^* Lambda = A_+
    Mat lambda_inv;
    std::vector<double> image_shift; ///< f(x0), subtracted from y in new coordinates
    std::vector<double> c_plus;      ///< the (unit) definite direction used
};

inline std::pair<QuadraticMap, CutTransform> normalize_for_cut(
    const QuadraticMap& f, std::vector<double> c_plus, double tol = 1e-12) {
    double nc = 0.0;
    for (double v : c_plus) nc += v * v;
    nc = std::sqrt(nc);
    for (double& v : c_plus) v /= nc;

    const Mat a_plus = cdot(c_plus, f.A);
    if (lambda_min(a_plus) <= tol)
        throw std::domain_error("normalize_for_cut: c_plus is not a definite direction");

    CutTransform t;
    t.c_plus = c_plus;
    const Vec b_plus = cdot(c_plus, f.b);
    t.x0 = Cx(-1.0) * (inverse_posdef(a_plus) * b_plus);
    t.lambda = factor_posdef(a_plus);
    t.lambda_inv = inverse_posdef(t.lambda);
    t.image_shift = evaluate(f, t.x0);

    QuadraticMap g;
    g.field = f.field;
    g.n = f.n;
    g.m = f.m;
    for (std::size_t k = 0; k < f.m; ++k) {
        const Vec bk = f.b[k] + f.A[k] * t.x0;
        g.A.push_back(hermitian_part(t.lambda_inv * f.A[k] * t.lambda_inv));
        g.b.push_back(t.lambda_inv * bk);
    }
    return {std::move(g), std::move(t)};
}

/// Complex map rewritten over R^{2n} with x = u + iv. Image sets coincide;
/// used only for cross-validation, never inside certificates, because kernel
/// dimensions double under this embedding.
inline QuadraticMap real_embedding(const QuadraticMap& f) {
    if (f.field != FieldTag::Complex)
        throw std::invalid_argument("real_embedding: map is already real");
    QuadraticMap g;
    g.field = FieldTag::Real;
    g.n = 2 * f.n;
    g.m = f.m;
    for (std::size_t k = 0; k < f.m; ++k) {
        Mat a(g.n, g.n);
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t j = 0; j < f.n; ++j) {
                const Cx e = f.A[k](i, j); // R + iS with R symmetric, S antisymmetric
                a(i, j) = e.re;
                a(f.n + i, f.n + j) = e.re;
                a(i, f.n + j) = -e.im;
                a(f.n + i, j) = e.im;
            }
        Vec b(g.n);
        for (std::size_t i = 0; i < f.n; ++i) {
            b[i] = f.b[k][i].re;
            b[f.n + i] = f.b[k][i].im;
        }
        g.A.push_back(hermitian_part(a));
        g.b.push_back(std::move(b));
    }
    return g;
}

} // namespace qcvx
