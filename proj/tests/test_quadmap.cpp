#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qcvx/json_io.hpp>
#include <qcvx/quadmap.hpp>
#include <qcvx/rng.hpp>

using namespace qcvx;

namespace {
QuadraticMap fixture(const std::string& name) {
    return load_map(std::string(QCVX_FIXTURE_DIR) + "/" + name + ".json");
}

Vec rvec(std::initializer_list<double> xs) {
    Vec v(xs.size());
    std::size_t i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}
} // namespace

TEST_CASE("fixtures load and validate") {
    for (int i = 1; i <= 10; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "example%02d", i);
        QuadraticMap f = fixture(name);
        CHECK(f.m >= 2);
        CHECK(f.n >= 2);
    }
}

TEST_CASE("map json: schema violations") {
    CHECK_THROWS_AS(map_from_json(nlohmann::json{{"field", "real"}}), std::invalid_argument);
    // non-square A_1
    nlohmann::json j = {
        {"field", "real"}, {"n", 2}, {"m", 1},
        {"A", {{{1.0, 0.0}}}},
        {"b", {{0.0, 0.0}}},
    };
    CHECK_THROWS_AS(map_from_json(j), std::invalid_argument);
    // non-symmetric beyond tolerance
    nlohmann::json j2 = {
        {"field", "real"}, {"n", 2}, {"m", 1},
        {"A", {{{0.0, 1.0}, {0.0, 0.0}}}},
        {"b", {{0.0, 0.0}}},
    };
    CHECK_THROWS_AS(map_from_json(j2), std::invalid_argument);
}

TEST_CASE("evaluate: f(0) = 0 and Example 2 hand expansion") {
    for (const char* name : {"example01", "example02", "example07"}) {
        QuadraticMap f = fixture(name);
        Vec zero(f.n);
        for (double yk : evaluate(f, zero)) CHECK(yk == 0.0);
    }
    QuadraticMap f2 = fixture("example02");
    auto y = evaluate(f2, rvec({1, 0, 0}));
    CHECK(y[0] == doctest::Approx(-0.5));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(0.0));
}

TEST_CASE("evaluate: Example 10 at e1 reads the diagonals") {
    QuadraticMap f = fixture("example10");
    auto y = evaluate(f, rvec({1, 0, 0, 0}));
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(0.0));
    CHECK(y[3] == doctest::Approx(1.0));
}

TEST_CASE("lift/evaluate consistency on random points") {
    CounterRng rng(13);
    for (const char* name : {"example01", "example04", "example08"}) {
        QuadraticMap f = fixture(name);
        LiftedFamily l = lift(f);
        for (int rep = 0; rep < 40; ++rep) {
            Vec x = f.field == FieldTag::Complex ? rng.next_complex_gaussian(f.n)
                                                 : Vec(f.n);
            if (f.field == FieldTag::Real)
                for (std::size_t i = 0; i < f.n; ++i) x[i] = rng.next_gaussian();
            auto y = evaluate(f, x);
            // X = (x;1)(x;1)^*
            Vec xe(f.n + 1);
            for (std::size_t i = 0; i < f.n; ++i) xe[i] = x[i];
            xe[f.n] = 1.0;
            for (std::size_t k = 0; k < f.m; ++k) {
                const Cx via_lift = dot(xe, l.H[k] * xe);
                CHECK(std::fabs(via_lift.re - y[k]) < 1e-12 * (1.0 + std::fabs(y[k])));
                CHECK(std::fabs(via_lift.im) < 1e-12);
            }
        }
    }
}

TEST_CASE("homogeneous map lifts with zero last column") {
    QuadraticMap f = fixture("example10");
    LiftedFamily l = lift(f);
    for (const Mat& h : l.H)
        for (std::size_t i = 0; i < f.n + 1; ++i) CHECK(abs(h(i, f.n)) == 0.0);
}

TEST_CASE("is_b_trivial") {
    CHECK(is_b_trivial(fixture("example10")).trivial);
    CHECK(!is_b_trivial(fixture("example01")).trivial);

    // constructed trivial case: b_k = A_k * ones
    QuadraticMap f = fixture("example01");
    Vec ones(f.n);
    for (std::size_t i = 0; i < f.n; ++i) ones[i] = 1.0;
    for (std::size_t k = 0; k < f.m; ++k) f.b[k] = f.A[k] * ones;
    auto t = is_b_trivial(f);
    REQUIRE(t.trivial);
    for (std::size_t i = 0; i < f.n; ++i)
        CHECK(t.witness[i].re == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("normalize_for_cut: Example 1 with c+ = e3 is a pure image shift") {
    QuadraticMap f = fixture("example01");
    auto [g, t] = normalize_for_cut(f, {0, 0, 1});
    CHECK(frob_norm(cdot({0, 0, 1}, g.A) - Mat::identity(3)) < 1e-12);
    CHECK(norm(t.x0) < 1e-12);
    CHECK(frob_norm(t.lambda - Mat::identity(3)) < 1e-12);
    const Vec bp = cdot(t.c_plus, g.b);
    CHECK(norm(bp) < 1e-12);
}

TEST_CASE("normalize_for_cut preserves membership up to the recorded shift") {
    CounterRng rng(31);
    for (const char* name : {"example05", "example04"}) {
        QuadraticMap f = fixture(name);
        std::vector<double> cp = name == std::string("example05")
                                     ? std::vector<double>{1, 0, 0, 0}
                                     : std::vector<double>{0.7991, -0.3533, 0.3924, 0.2876};
        auto [g, t] = normalize_for_cut(f, cp);
        CHECK(frob_norm(cdot(t.c_plus, g.A) - Mat::identity(f.n)) < 1e-10);
        CHECK(norm(cdot(t.c_plus, g.b)) < 1e-10);
        for (int rep = 0; rep < 20; ++rep) {
            Vec x = f.field == FieldTag::Complex ? rng.next_complex_gaussian(f.n) : Vec(f.n);
            if (f.field == FieldTag::Real)
                for (std::size_t i = 0; i < f.n; ++i) x[i] = rng.next_gaussian();
            // y in F(original)  <=>  y_new in F(normalized), where the domain
            // point maps as x = x0 + Lambda^{-1} x_new
            const Vec x_orig = t.x0 + t.lambda_inv * x;
            auto y_orig = evaluate(f, x_orig);
            auto y_new = evaluate(g, x);
            for (std::size_t k = 0; k < f.m; ++k)
                CHECK(y_orig[k] ==
                      doctest::Approx(y_new[k] + t.image_shift[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("normalize_for_cut rejects indefinite directions") {
    QuadraticMap f = fixture("example01");
    CHECK_THROWS_AS(normalize_for_cut(f, {1, 0, 0}), std::domain_error);
}

TEST_CASE("real_embedding: evaluation matches at matched points") {
    QuadraticMap f = fixture("example08");
    QuadraticMap g = real_embedding(f);
    CHECK(g.field == FieldTag::Real);
    CHECK(g.n == 2 * f.n);
    CounterRng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        Vec x = rng.next_complex_gaussian(f.n);
        Vec xr(2 * f.n);
        for (std::size_t i = 0; i < f.n; ++i) {
            xr[i] = x[i].re;
            xr[f.n + i] = x[i].im;
        }
        auto y1 = evaluate(f, x);
        auto y2 = evaluate(g, xr);
        for (std::size_t k = 0; k < f.m; ++k)
            CHECK(y1[k] == doctest::Approx(y2[k]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(real_embedding(g), std::invalid_argument);

    // homogeneous complex map stays homogeneous
    QuadraticMap h = fixture("example08");
    for (auto& bk : h.b)
        for (std::size_t i = 0; i < h.n; ++i) bk[i] = 0.0;
    QuadraticMap hr = real_embedding(h);
    CHECK(is_b_trivial(hr).trivial);
}

TEST_CASE("evaluate rejects dimension mismatch") {
    QuadraticMap f = fixture("example01");
    CHECK_THROWS_AS(evaluate(f, Vec(2)), std::invalid_argument);
}
