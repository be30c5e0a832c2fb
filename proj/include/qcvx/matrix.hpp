#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace qcvx {

/// Dense column vector over Cx.
struct Vec {
    std::vector<Cx> v;

    Vec() = default;
    explicit Vec(std::size_t n) : v(n) {}
    std::size_t size() const { return v.size(); }
    Cx& operator[](std::size_t i) { return v[i]; }
    const Cx& operator[](std::size_t i) const { return v[i]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        assert(a.size() == b.size());
        Vec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        assert(a.size() == b.size());
        Vec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
        return r;
    }
    friend Vec operator*(Cx s, const Vec& a) {
        Vec r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
        return r;
    }
};

/// a^* b  (conjugate-linear in the first argument)
inline Cx dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Cx s;
    for (std::size_t i = 0; i < a.size(); ++i) s += conj(a[i]) * b[i];
    return s;
}

inline double norm(const Vec& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += norm2(a[i]);
    return std::sqrt(s);
}

/// Dense row-major matrix over Cx.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<Cx> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    Cx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Cx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    friend Mat operator+(const Mat& x, const Mat& y) {
        assert(x.rows == y.rows && x.cols == y.cols);
        Mat r(x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
        return r;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        assert(x.rows == y.rows && x.cols == y.cols);
        Mat r(x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }
    friend Mat operator*(Cx s, const Mat& x) {
        Mat r(x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = s * x.a[i];
        return r;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        assert(x.cols == y.rows);
        Mat r(x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                Cx xv = x(i, k);
                if (xv.re == 0.0 && xv.im == 0.0) continue;
                for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
            }
        return r;
    }
    friend Vec operator*(const Mat& x, const Vec& v) {
        assert(x.cols == v.size());
        Vec r(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) {
            Cx s;
            for (std::size_t j = 0; j < x.cols; ++j) s += x(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }
};

inline Mat adjoint(const Mat& x) {
    Mat r(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) r(j, i) = conj(x(i, j));
    return r;
}

/// (M + M^*)/2; the deviation |M - M^*|_F is reported through *deviation.
inline Mat hermitian_part(const Mat& m, double* deviation = nullptr) {
    assert(m.rows == m.cols);
    Mat r(m.rows, m.cols);
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            Cx s = 0.5 * (m(i, j) + conj(m(j, i)));
            dev += norm2(m(i, j) - conj(m(j, i)));
            r(i, j) = s;
        }
    if (deviation) *deviation = 0.5 * std::sqrt(dev);
    return r;
}

inline double frob_norm(const Mat& m) {
    double s = 0.0;
    for (const Cx& e : m.a) s += norm2(e);
    return std::sqrt(s);
}

/// Re tr(A^* B), the real inner product on hermitian matrices.
inline double inner(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    double s = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        s += x.a[i].re * y.a[i].re + x.a[i].im * y.a[i].im;
    return s;
}

inline bool is_hermitian(const Mat& m, double tol = 1e-12) {
    if (m.rows != m.cols) return false;
    double dev = 0.0;
    hermitian_part(m, &dev);
    double scale = frob_norm(m);
    return dev <= tol * (1.0 + scale);
}

} // namespace qcvx
