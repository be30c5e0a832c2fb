#pragma once

#include "eig.hpp"
#include "tolerances.hpp"

namespace qcvx {

struct RankKernel {
    int rank = 0;
    std::vector<Vec> kernel; ///< orthonormal basis of the numerical kernel
    EigDecomposition eig;    ///< the decomposition the decision was made from
};

/// Rank decision: |lambda| <= tol * max(1, |lambda_max|) counts as zero.
inline RankKernel rank_and_kernel(const Mat& m, double tol) {
    RankKernel rk;
    rk.eig = hermitian_eig(m);
    const std::size_t n = m.rows;
    double amax = 0.0;
    for (double l : rk.eig.values) amax = std::max(amax, std::fabs(l));
    const double cutoff = tol * std::max(1.0, amax);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(rk.eig.values[k]) <= cutoff) {
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = rk.eig.vectors(i, k);
            rk.kernel.push_back(std::move(x));
        } else {
            ++rk.rank;
        }
    }
    return rk;
}

/// Relative variant used for C- membership: zero iff |lambda| <= tol * |lambda_max|.
inline RankKernel rank_and_kernel_rel(const Mat& m, double tol) {
    RankKernel rk;
    rk.eig = hermitian_eig(m);
    const std::size_t n = m.rows;
    double amax = 1e-300;
    for (double l : rk.eig.values) amax = std::max(amax, std::fabs(l));
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(rk.eig.values[k]) <= tol * amax) {
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = rk.eig.vectors(i, k);
            rk.kernel.push_back(std::move(x));
        } else {
            ++rk.rank;
        }
    }
    return rk;
}

/// Moore-Penrose pseudo-inverse via spectral inversion of the eigenvalues
/// that survive the rank cutoff.
inline Mat pseudo_inverse_from_eig(const EigDecomposition& e, double tol) {
    const std::size_t n = e.values.size();
    double amax = 1e-300;
    for (double l : e.values) amax = std::max(amax, std::fabs(l));
    Mat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(e.values[k]) <= tol * amax) continue;
        const double inv = 1.0 / e.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += inv * e.vectors(i, k) * conj(e.vectors(j, k));
    }
    return r;
}

inline Mat pseudo_inverse(const Mat& m, double tol) {
    return pseudo_inverse_from_eig(hermitian_eig(m), tol);
}

/// Symmetric square root A^{1/2} of a positive definite hermitian matrix,
/// the canonical factor Lambda with Lambda^* Lambda = A.
inline Mat factor_posdef(const Mat& a, double tol = 1e-12) {
    EigDecomposition e = hermitian_eig(a);
    if (e.values.front() <= tol)
        throw std::domain_error("factor_posdef: matrix not positive definite");
    const std::size_t n = a.rows;
    Mat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(e.values[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * e.vectors(i, k) * conj(e.vectors(j, k));
    }
    return r;
}

/// Inverse of a positive definite hermitian matrix (spectral).
inline Mat inverse_posdef(const Mat& a) {
    EigDecomposition e = hermitian_eig(a);
    if (e.values.front() <= 0.0)
        throw std::domain_error("inverse_posdef: matrix not positive definite");
    const std::size_t n = a.rows;
    Mat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double inv = 1.0 / e.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += inv * e.vectors(i, k) * conj(e.vectors(j, k));
    }
    return r;
}

/// Solve the dense square system L x = y by partial-pivot Gaussian
/// elimination. Used for the interior point Schur complements, where the
/// matrix is nonsingular by construction until the final iterations.
inline std::vector<double> solve_real_dense(std::vector<std::vector<double>> l,
                                            std::vector<double> y) {
    const std::size_t n = y.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(l[i][k]) > std::fabs(l[piv][k])) piv = i;
        std::swap(l[piv], l[k]);
        std::swap(y[piv], y[k]);
        if (std::fabs(l[k][k]) < 1e-300) throw std::runtime_error("singular system");
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = l[i][k] / l[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) l[i][j] -= f * l[k][j];
            y[i] -= f * y[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = y[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= l[k][j] * x[j];
        x[k] = s / l[k][k];
    }
    return x;
}

} // namespace qcvx
