#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qcvx/linalg.hpp>
#include <qcvx/rng.hpp>

using namespace qcvx;

namespace {

Mat random_hermitian(CounterRng& rng, std::size_t n, bool complex_field) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = complex_field ? Cx{rng.next_gaussian(), rng.next_gaussian()}
                                    : Cx{rng.next_gaussian()};
    return hermitian_part(m);
}

Mat diag(std::initializer_list<double> d) {
    Mat m(d.size(), d.size());
    std::size_t i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

} // namespace

TEST_CASE("hermitian_eig: identity and diagonal") {
    auto e = hermitian_eig(Mat::identity(3));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));

    auto e2 = hermitian_eig(diag({5.0, -2.0, 0.0}));
    CHECK(e2.values[0] == doctest::Approx(-2.0));
    CHECK(e2.values[1] == doctest::Approx(0.0));
    CHECK(e2.values[2] == doctest::Approx(5.0));
}

TEST_CASE("hermitian_eig: reconstruction and orthonormality, real and complex") {
    CounterRng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const bool cx = rep % 2;
        const std::size_t n = 2 + rep % 6;
        Mat m = random_hermitian(rng, n, cx);
        auto e = hermitian_eig(m);

        Mat rec(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    rec(i, j) += e.values[k] * e.vectors(i, k) * conj(e.vectors(j, k));
        CHECK(frob_norm(rec - m) < 1e-12 * (1.0 + frob_norm(m)));

        Mat vv = adjoint(e.vectors) * e.vectors;
        CHECK(frob_norm(vv - Mat::identity(n)) < 1e-12);

        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(e.values[k] <= e.values[k + 1]);
    }
}

TEST_CASE("hermitian_eig: real input keeps real eigenvectors") {
    CounterRng rng(11);
    Mat m = random_hermitian(rng, 5, false);
    auto e = hermitian_eig(m);
    for (const Cx& v : e.vectors.a) CHECK(v.im == 0.0);
}

TEST_CASE("hermitian_eig rejects non-hermitian input") {
    Mat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.0;
    CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("rank_and_kernel basics") {
    auto rk0 = rank_and_kernel(Mat(2, 2), 1e-8);
    CHECK(rk0.rank == 0);
    CHECK(rk0.kernel.size() == 2);

    auto rkI = rank_and_kernel(Mat::identity(4), 1e-8);
    CHECK(rkI.rank == 4);
    CHECK(rkI.kernel.empty());

    // rank decision is scale invariant on a fixed singular matrix
    Mat s = diag({0.0, 1.0, 3.0});
    for (double scale : {1e-6, 1.0, 1e6}) {
        auto rk = rank_and_kernel(Cx(scale) * s, 1e-8);
        CHECK(rk.rank == 2);
    }
}

TEST_CASE("pseudo_inverse: diagonal, invertible, Penrose identities") {
    Mat d = diag({2.0, 0.0});
    Mat p = pseudo_inverse(d, 1e-8);
    CHECK(p(0, 0).re == doctest::Approx(0.5));
    CHECK(p(1, 1).re == doctest::Approx(0.0));

    CounterRng rng(3);
    Mat m = random_hermitian(rng, 4, true) + Cx(8.0) * Mat::identity(4);
    Mat mi = pseudo_inverse(m, 1e-12);
    CHECK(frob_norm(mi * m - Mat::identity(4)) < 1e-12 * frob_norm(m));
}

TEST_CASE("pseudo_inverse: Penrose identities on 100 random rank-deficient matrices") {
    CounterRng rng(42);
    for (int rep = 0; rep < 100; ++rep) {
        const bool cx = rep % 2;
        const std::size_t n = 3 + rep % 4;
        const std::size_t r = 1 + rep % (n - 1);
        // build a rank-r hermitian matrix from r random vectors
        Mat m(n, n);
        for (std::size_t t = 0; t < r; ++t) {
            Vec u(n);
            for (std::size_t i = 0; i < n; ++i)
                u[i] = cx ? Cx{rng.next_gaussian(), rng.next_gaussian()}
                          : Cx{rng.next_gaussian()};
            const double w = (t % 2 ? -1.0 : 1.0) * (1.0 + rng.next_double());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) += w * u[i] * conj(u[j]);
        }
        m = hermitian_part(m);
        Mat p = pseudo_inverse(m, 1e-10);
        const double sc = 1.0 + frob_norm(m) + frob_norm(p);
        CHECK(frob_norm(m * p * m - m) < 1e-10 * sc);
        CHECK(frob_norm(p * m * p - p) < 1e-10 * sc);
        CHECK(frob_norm(m * p - adjoint(m * p)) < 1e-10 * sc);
        CHECK(frob_norm(p * m - adjoint(p * m)) < 1e-10 * sc);
    }
}

TEST_CASE("pseudo_inverse: rank n-1 identity Q^-1 Q = I - x0 x0^*") {
    CounterRng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 4;
        Mat m = random_hermitian(rng, n, rep % 2);
        auto e = hermitian_eig(m);
        // zero out the smallest-magnitude eigenvalue to force rank n-1
        std::size_t kmin = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::fabs(e.values[k]) < std::fabs(e.values[kmin])) kmin = k;
        Mat q(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == kmin) continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    q(i, j) += e.values[k] * e.vectors(i, k) * conj(e.vectors(j, k));
        }
        Vec x0(n);
        for (std::size_t i = 0; i < n; ++i) x0[i] = e.vectors(i, kmin);
        Mat proj = Mat::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) proj(i, j) -= x0[i] * conj(x0[j]);
        Mat qi = pseudo_inverse(q, 1e-10);
        CHECK(frob_norm(qi * q - proj) < 1e-10 * (1.0 + frob_norm(q)));
    }
}

TEST_CASE("factor_posdef") {
    CHECK(frob_norm(factor_posdef(Mat::identity(3)) - Mat::identity(3)) < 1e-14);
    Mat d = factor_posdef(diag({4.0, 9.0}));
    CHECK(d(0, 0).re == doctest::Approx(2.0));
    CHECK(d(1, 1).re == doctest::Approx(3.0));

    CounterRng rng(9);
    Mat g = random_hermitian(rng, 5, true);
    Mat a = hermitian_part(g * adjoint(g)) + Cx(0.1) * Mat::identity(5);
    Mat l = factor_posdef(a);
    CHECK(frob_norm(adjoint(l) * l - a) < 1e-11 * frob_norm(a));

    CHECK_THROWS_AS(factor_posdef(diag({1.0, -1.0})), std::domain_error);
}

TEST_CASE("counter rng: determinism and stream independence") {
    CounterRng a(123), b(123), c(CounterRng::derive(123, 1));
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() != c.next_u64());

    CounterRng g(77);
    double mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += g.next_gaussian();
    CHECK(std::fabs(mean / n) < 0.05);
}
