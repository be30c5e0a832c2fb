#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qcvx/json_io.hpp>
#include <qcvx/oracles.hpp>
#include <qcvx/rng.hpp>

using namespace qcvx;

namespace {
QuadraticMap fixture(const std::string& name) {
    return load_map(std::string(QCVX_FIXTURE_DIR) + "/" + name + ".json");
}

QuadraticMap norm_squared_map() {
    // f(x) = |x|^2 on R^2, image is the ray y >= 0
    QuadraticMap f;
    f.field = FieldTag::Real;
    f.n = 2;
    f.m = 1;
    f.A = {Mat::identity(2)};
    f.b = {Vec(2)};
    return f;
}

Vec random_point(CounterRng& rng, const QuadraticMap& f) {
    if (f.field == FieldTag::Complex) return rng.next_complex_gaussian(f.n);
    Vec x(f.n);
    for (std::size_t i = 0; i < f.n; ++i) x[i] = rng.next_gaussian();
    return x;
}
} // namespace

TEST_CASE("membership: f(0) and random image points are in G") {
    QuadraticMap f = fixture("example01");
    CHECK(membership_relaxation(f, {0, 0, 0}) == Membership::InG);
    CounterRng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
        auto y = evaluate(f, random_point(rng, f));
        CHECK(membership_relaxation(f, y) == Membership::InG);
    }
}

TEST_CASE("membership and certificate: Example 1 below the y3 >= 0 half-space") {
    QuadraticMap f = fixture("example01");
    const std::vector<double> y0 = {0, 0, -1};
    CHECK(membership_relaxation(f, y0) == Membership::NotInG);

    auto cert = infeasibility_oracle(f, y0);
    REQUIRE(cert.has_value());
    CHECK(cert->min_eigenvalue > 0.0);
    // independent re-verification
    const Mat hc = pencil_value(infeasibility_pencil(f, y0), cert->c);
    CHECK(lambda_min(hc) > 0.0);
    // the separating direction is essentially e3
    double nc = 0.0;
    for (double v : cert->c) nc += v * v;
    CHECK(cert->c[2] / std::sqrt(nc) > 0.9);
}

TEST_CASE("infeasibility oracle is sound on feasible points") {
    CounterRng rng(4);
    for (const char* name : {"example01", "example04", "example07"}) {
        QuadraticMap f = fixture(name);
        for (int rep = 0; rep < 8; ++rep) {
            auto y = evaluate(f, random_point(rng, f));
            CHECK(!infeasibility_oracle(f, y).has_value());
        }
        std::vector<double> zero(f.m, 0.0);
        CHECK(!infeasibility_oracle(f, zero).has_value());
    }
}

TEST_CASE("boundary oracle: Example 7 distance and support vector") {
    QuadraticMap f = fixture("example07");
    const std::vector<double> y(5, 0.0);
    const std::vector<double> d = {-1, -2, -3, -4, -5};
    BoundaryResult r = boundary_oracle(f, y, d);
    REQUIRE(r.status == BoundaryResult::Status::Ok);

    // the reference value quotes t in units of the raw direction
    const double t_caller = r.t / r.dir_norm;
    CHECK(std::fabs(t_caller - 0.1196) < 1e-3);

    // displayed supporting normal, compared after unit normalization
    const std::vector<double> want = {-0.0128, 0.1989, 0.1827, 0.3844, 0.8827};
    double nc = 0.0, sign = 0.0;
    for (double v : r.support.c) nc += v * v;
    nc = std::sqrt(nc);
    sign = r.support.c[4] > 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(std::fabs(sign * r.support.c[k] / nc - want[k]) < 1e-2);

    // the optimal lifted solution is not rank one here
    CHECK(r.rank_estimate == 2);
    CHECK(r.on_f == BoundaryResult::OnF::Ambiguous);

    // primal/dual agreement
    CHECK(std::fabs(r.t - r.support.objective) < 1e-6);
}

TEST_CASE("boundary oracle: ray image cases") {
    QuadraticMap f = norm_squared_map();
    BoundaryResult down = boundary_oracle(f, {0.0}, {-1.0});
    REQUIRE(down.status == BoundaryResult::Status::Ok);
    CHECK(std::fabs(down.t) < 1e-7);

    BoundaryResult up = boundary_oracle(f, {0.0}, {1.0});
    CHECK(up.status == BoundaryResult::Status::Unbounded);

    SupportVector s = get_c_from_d(f, {1.0}, {-1.0});
    CHECK(s.c[0] == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(boundary_oracle(f, {0.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)get_c_from_d(f, {0.0}, {1.0}), NoSupportingHyperplane);
}

TEST_CASE("boundary oracle: Example 1 half-space direction gives t = 0") {
    QuadraticMap f = fixture("example01");
    BoundaryResult r = boundary_oracle(f, {0, 0, 0}, {0, 0, -1});
    REQUIRE(r.status == BoundaryResult::Status::Ok);
    CHECK(std::fabs(r.t) < 1e-7);
}

TEST_CASE("boundary oracle: base point outside G is rejected") {
    QuadraticMap f = fixture("example01");
    BoundaryResult r = boundary_oracle(f, {0, 0, -1}, {1, 0, 0});
    CHECK(r.status == BoundaryResult::Status::NotInteriorPoint);
}

TEST_CASE("primal/dual objective agreement on random directions") {
    CounterRng rng(6);
    int checked = 0;
    for (const char* name : {"example01", "example05", "example04"}) {
        QuadraticMap f = fixture(name);
        std::vector<double> y(f.m, 0.0);
        for (int rep = 0; rep < 10; ++rep) {
            Vec dv = rng.next_unit_vector(f.m);
            std::vector<double> d(f.m);
            for (std::size_t k = 0; k < f.m; ++k) d[k] = dv[k].re;
            BoundaryResult r = boundary_oracle(f, y, d);
            if (r.status != BoundaryResult::Status::Ok) continue; // unbounded directions happen
            CHECK(std::fabs(r.t - r.support.objective) < 1e-6 * (1.0 + std::fabs(r.t)));
            // dual constraint c.d = -1 (unit d)
            double cd = 0.0, dn = 0.0;
            for (std::size_t k = 0; k < f.m; ++k) dn += d[k] * d[k];
            dn = std::sqrt(dn);
            for (std::size_t k = 0; k < f.m; ++k) cd += r.support.c[k] * d[k] / dn;
            CHECK(cd == doctest::Approx(-1.0).epsilon(1e-6));
            ++checked;
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("supporting property: c.f(x) stays above the supporting level") {
    QuadraticMap f = fixture("example01");
    CounterRng rng(8);
    BoundaryResult r = boundary_oracle(f, {0, 0, 0}, {1.0, 0.5, -0.25});
    REQUIRE(r.status == BoundaryResult::Status::Ok);
    double level = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) level += r.support.c[k] * r.point[k];
    for (int rep = 0; rep < 1000; ++rep) {
        auto y = evaluate(f, random_point(rng, f));
        double cy = 0.0;
        for (std::size_t k = 0; k < f.m; ++k) cy += r.support.c[k] * y[k];
        CHECK(cy >= level - 1e-6);
    }
}

TEST_CASE("t is reported against the unit direction regardless of input scale") {
    QuadraticMap f = fixture("example01");
    BoundaryResult r1 = boundary_oracle(f, {0, 0, 0}, {2, 1, -1});
    BoundaryResult r2 = boundary_oracle(f, {0, 0, 0}, {6, 3, -3});
    REQUIRE(r1.status == BoundaryResult::Status::Ok);
    REQUIRE(r2.status == BoundaryResult::Status::Ok);
    CHECK(r1.t == doctest::Approx(r2.t).epsilon(1e-7));
    CHECK(r2.dir_norm == doctest::Approx(3.0 * r1.dir_norm).epsilon(1e-12));
}

TEST_CASE("find_definite_direction") {
    auto c1 = find_definite_direction(fixture("example01"));
    REQUIRE(c1.has_value());
    CHECK(lambda_min(cdot(*c1, fixture("example01").A)) > 0.0);

    auto c10 = find_definite_direction(fixture("example10"));
    REQUIRE(c10.has_value());
    CHECK(lambda_min(cdot(*c10, fixture("example10").A)) > 0.0);

    QuadraticMap ind;
    ind.field = FieldTag::Real;
    ind.n = 2;
    ind.m = 1;
    Mat a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    ind.A = {a};
    ind.b = {Vec(2)};
    CHECK(!find_definite_direction(ind).has_value());
}
