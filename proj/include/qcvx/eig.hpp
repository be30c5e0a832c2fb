#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "matrix.hpp"

namespace qcvx {

struct EigDecomposition {
    std::vector<double> values; ///< ascending
    Mat vectors;                ///< orthonormal columns, M = V diag(values) V^*
};

/// Full spectral decomposition of a hermitian matrix by cyclic Jacobi with
/// unitary 2x2 rotations. Complex off-diagonal entries are handled by
/// absorbing their phase into the rotation, so real symmetric input produces
/// exactly real rotations and real eigenvectors.
inline EigDecomposition hermitian_eig(const Mat& m_in) {
    if (m_in.rows != m_in.cols) throw std::invalid_argument("hermitian_eig: not square");
    double dev = 0.0;
    Mat a = hermitian_part(m_in, &dev);
    double scale = frob_norm(a);
    if (dev > 1e-9 * (1.0 + scale))
        throw std::invalid_argument("hermitian_eig: input not hermitian");

    const std::size_t n = a.rows;
    Mat v = Mat::identity(n);
    const double stop = 1e-30 * (scale * scale + 1e-300);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += norm2(a(p, q));
        if (off <= stop) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Cx apq = a(p, q);
                const double beta = abs(apq);
                if (beta <= 1e-300) continue;
                const Cx phase = apq / beta; // e^{i arg apq}
                const double tau = (a(q, q).re - a(p, p).re) / (2.0 * beta);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Cx s = (t * c) * phase;
                const Cx sc = conj(s);

                // A <- U^* A U with U = [[c, s], [-conj(s), c]] on (p, q)
                for (std::size_t i = 0; i < n; ++i) {
                    const Cx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - sc * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Cx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = sc * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p).im = 0.0;
                a(q, q).im = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const Cx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sc * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).re < a(j, j).re; });

    EigDecomposition out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).re;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

inline double lambda_min(const Mat& m) { return hermitian_eig(m).values.front(); }
inline double lambda_max(const Mat& m) { return hermitian_eig(m).values.back(); }

} // namespace qcvx
