#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qcvx/convexcut.hpp>
#include <qcvx/json_io.hpp>

using namespace qcvx;

namespace {
QuadraticMap fixture(const std::string& name) {
    return load_map(std::string(QCVX_FIXTURE_DIR) + "/" + name + ".json");
}

std::vector<double> unit(std::vector<double> v) {
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}
} // namespace

TEST_CASE("Example 1: z at the three reference directions") {
    QuadraticMap f = fixture("example01");
    auto [fn, t] = normalize_for_cut(f, {0, 0, 1});

    CHECK(z_of_c(fn, t.c_plus, {1, 0, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(z_of_c(fn, t.c_plus, unit({2, 1, -2})) ==
          doctest::Approx(74.0 / 75).epsilon(1e-9));

    // the third direction is quoted to four digits, so retract it first
    auto c3 = refine_to_cminus(fn, t.c_plus, unit({0.7227, 3.4347, 1.0}));
    REQUIRE(c3.has_value());
    CHECK(std::fabs(z_of_c(fn, t.c_plus, *c3) - 0.3656) < 1e-3);
}

TEST_CASE("z is invariant under positive scaling of c") {
    QuadraticMap f = fixture("example01");
    auto [fn, t] = normalize_for_cut(f, {0, 0, 1});
    const std::vector<double> c = unit({2, 1, -2});
    std::vector<double> c2 = c;
    for (double& v : c2) v *= 7.5;
    CHECK(z_of_c(fn, t.c_plus, c) == doctest::Approx(z_of_c(fn, t.c_plus, c2)).epsilon(1e-10));
}

TEST_CASE("gradient of z matches finite differences along tangent directions") {
    for (const char* name : {"example01", "example05"}) {
        QuadraticMap f = fixture(name);
        std::vector<double> cp = name == std::string("example01")
                                     ? std::vector<double>{0, 0, 1}
                                     : std::vector<double>{1, 0, 0, 0};
        auto [fn, t] = normalize_for_cut(f, cp);
        CounterRng rng(11);
        int checked = 0;
        for (int rep = 0; rep < 12 && checked < 4; ++rep) {
            std::vector<double> d(f.m);
            for (std::size_t i = 0; i < f.m; ++i) d[i] = rng.next_gaussian();
            auto c = refine_to_cminus(fn, t.c_plus, d);
            if (!c) continue;
            const std::vector<double> g = gradient_z(fn, t.c_plus, *c);
            for (int dir = 0; dir < 3; ++dir) {
                std::vector<double> e(f.m);
                for (std::size_t i = 0; i < f.m; ++i) e[i] = rng.next_gaussian();
                e = project_tangent(e, {*c, t.c_plus});
                double ne = 0;
                for (double v : e) ne += v * v;
                ne = std::sqrt(ne);
                if (ne < 1e-8) continue;
                for (double& v : e) v /= ne;
                const double h = 1e-6;
                std::vector<double> cp1(f.m), cm1(f.m);
                for (std::size_t i = 0; i < f.m; ++i) {
                    cp1[i] = (*c)[i] + h * e[i];
                    cm1[i] = (*c)[i] - h * e[i];
                }
                const double fd =
                    (z_of_c(fn, t.c_plus, cp1) - z_of_c(fn, t.c_plus, cm1)) / (2 * h);
                double ge = 0;
                for (std::size_t i = 0; i < f.m; ++i) ge += g[i] * e[i];
                CHECK(std::fabs(fd - ge) < 1e-5 * (1.0 + std::fabs(ge)));
            }
            ++checked;
        }
        CHECK(checked >= 2);
    }
}

TEST_CASE("flat edge: the cut hyperplane touches the image at -v") {
    QuadraticMap f = fixture("example01");
    auto [fn, t] = normalize_for_cut(f, {0, 0, 1});
    const std::vector<double> c = unit({2, 1, -2});
    CMinusState s = make_cminus_state(fn, t.c_plus, c);
    REQUIRE(s.kernel_dim == 1);
    CHECK(std::fabs(abs(s.w)) < 1e-9);

    // p . f(x) is minimized at x = -v, and z equals |v|^2
    std::vector<double> p = s.p;
    const Vec x_star = Cx(-1.0) * s.v;
    double level = 0.0;
    {
        auto y = evaluate(fn, x_star);
        for (std::size_t k = 0; k < fn.m; ++k) level += p[k] * y[k];
    }
    CHECK(dot(s.v, s.v).re == doctest::Approx(s.z).epsilon(1e-12));
    CounterRng rng(21);
    for (int rep = 0; rep < 500; ++rep) {
        Vec x(fn.n);
        for (std::size_t i = 0; i < fn.n; ++i) x[i] = rng.next_gaussian();
        auto y = evaluate(fn, x);
        double py = 0.0;
        for (std::size_t k = 0; k < fn.m; ++k) py += p[k] * y[k];
        CHECK(py >= level - 1e-9);
    }
}

TEST_CASE("retractions land back on the defect zero set") {
    // real retraction, Example 5 (m = 4, so the descent direction survives
    // the projection against c, c+ and the normal)
    {
        QuadraticMap f = fixture("example05");
        auto [fn, t] = normalize_for_cut(f, {1, 0, 0, 0});
        CounterRng rng(7);
        bool exercised = false;
        for (int rep = 0; rep < 20 && !exercised; ++rep) {
            std::vector<double> d(4);
            for (int i = 0; i < 4; ++i) d[i] = rng.next_gaussian();
            auto c_ref = refine_to_cminus(fn, t.c_plus, d);
            if (!c_ref) continue;
            CMinusState s = make_cminus_state(fn, t.c_plus, *c_ref);
            if (s.kernel_dim != 1) continue;
            std::vector<double> pg = project_gradient(s, t.c_plus);
            double npg = 0;
            for (double v : pg) npg += v * v;
            npg = std::sqrt(npg);
            if (npg < 1e-8) continue; // stationary point, try another seed
            std::vector<double> c_prime(4);
            for (int i = 0; i < 4; ++i) c_prime[i] = (*c_ref)[i] - 0.02 * pg[i];
            std::vector<double> nvec(4);
            double nn = 0;
            for (int i = 0; i < 4; ++i) {
                nvec[i] = s.n[i].re;
                nn += nvec[i] * nvec[i];
            }
            nn = std::sqrt(nn);
            if (nn < 1e-12) continue;
            for (double& v : nvec) v /= nn;
            auto c_new = retract_real(fn, t.c_plus, c_prime, nvec, 0.02 * npg, s.x0);
            if (!c_new) continue;
            CMinusState s2 = make_cminus_state(fn, t.c_plus, *c_new);
            CHECK(s2.kernel_dim == 1);
            CHECK(abs(s2.w) < 1e-8);
            CHECK(s2.z < s.z); // the step actually descended
            exercised = true;
        }
        CHECK(exercised);
    }
    // complex retraction, Example 4
    {
        QuadraticMap f = fixture("example04");
        const std::vector<double> cp = unit({0.7991, -0.3533, 0.3924, 0.2876});
        auto [fn, t] = normalize_for_cut(f, cp);
        auto c = refine_to_cminus(fn, t.c_plus, {0, 1, 0, 0});
        REQUIRE(c.has_value());
        CMinusState s = make_cminus_state(fn, t.c_plus, *c);
        std::vector<double> pg = project_gradient(s, t.c_plus);
        std::vector<double> c_prime(4);
        for (int i = 0; i < 4; ++i) c_prime[i] = (*c)[i] - 0.02 * pg[i];
        auto c_new = retract_complex(fn, t.c_plus, c_prime);
        REQUIRE(c_new.has_value());
        CMinusState s2 = make_cminus_state(fn, t.c_plus, *c_new);
        CHECK(s2.kernel_dim == 1);
        CHECK(abs(s2.w) < 1e-8);
    }
}

TEST_CASE("Example 4: z at the known direction and the global level") {
    QuadraticMap f = fixture("example04");
    const std::vector<double> cp = unit({0.7991, -0.3533, 0.3924, 0.2876});
    auto [fn, t] = normalize_for_cut(f, cp);
    CHECK(std::fabs(z_of_c(fn, t.c_plus, {0, 1, 0, 0}) - 1.4512) < 1e-3);

    ZMaxOptions opts;
    opts.c_plus = cp;
    opts.seed = 5;
    opts.restarts = 60;
    ZMaxResult r = get_z_max(f, opts);
    CHECK(r.z_max > 1.449);
    CHECK(r.z_max < 1.453);
}

TEST_CASE("Example 1: multistart finds z_max = 1/3") {
    QuadraticMap f = fixture("example01");
    ZMaxOptions opts;
    opts.c_plus = {0, 0, 1};
    opts.seed = 1;
    opts.restarts = 20;
    ZMaxResult r = get_z_max(f, opts);
    CHECK(std::fabs(r.z_max - 1.0 / 3) < 1e-3);
    CHECK(r.hits >= 2);
    // descent traces are monotone by construction; re-check one
    DescentTrace tr = descend(r.normalized, r.transform.c_plus, r.discoveries[0].c_start);
    for (std::size_t i = 1; i < tr.z_history.size(); ++i)
        CHECK(tr.z_history[i] <= tr.z_history[i - 1] + 1e-12);
}

TEST_CASE("Example 3: z_max = 1/sqrt(2) at c = (0,0,-1,-1)/sqrt(2)") {
    QuadraticMap f = fixture("example03");
    ZMaxOptions opts;
    const double s = 1.0 / std::sqrt(2.0);
    opts.c_plus = {s, s, 0, 0};
    opts.seed = 1;
    opts.restarts = 30;
    ZMaxResult r = get_z_max(f, opts);
    CHECK(std::fabs(r.z_max - 0.70711) < 1e-3);
    double align = s * (r.c_star[2] + r.c_star[3]);
    CHECK(std::fabs(align) > 0.9999);
}

TEST_CASE("Example 5: z_max") {
    QuadraticMap f = fixture("example05");
    ZMaxOptions opts;
    opts.c_plus = {1, 0, 0, 0};
    opts.seed = 1;
    opts.restarts = 30;
    ZMaxResult r = get_z_max(f, opts);
    CHECK(std::fabs(r.z_max - 0.007325) < 5e-4);
}

TEST_CASE("Example 7: z_max and the two local minimum levels") {
    QuadraticMap f = fixture("example07");
    ZMaxOptions opts;
    opts.c_plus = unit({0.1326, -0.3859, 0.1932, -0.6408, 0.6209});
    opts.seed = 1;
    opts.restarts = 40;
    ZMaxResult r = get_z_max(f, opts);
    CHECK(std::fabs(r.z_max - 0.0935) < 1e-3);

    bool low = false, high = false;
    for (const Discovery& d : r.discoveries) {
        if (std::fabs(d.z_final - 0.0935) < 1e-2) low = true;
        if (std::fabs(d.z_final - 1.8862) < 1e-2) high = true;
    }
    CHECK(low);
    CHECK(high);
}

TEST_CASE("z_guess only tightens the incumbent, never invents a result") {
    QuadraticMap f = fixture("example01");
    ZMaxOptions opts;
    opts.c_plus = {0, 0, 1};
    opts.seed = 1;
    opts.restarts = 10;
    opts.z_guess = 0.25; // below the true level
    ZMaxResult r = get_z_max(f, opts);
    CHECK(r.z_max == doctest::Approx(0.25));
    opts.z_guess = 10.0; // above: ignored
    r = get_z_max(f, opts);
    CHECK(std::fabs(r.z_max - 1.0 / 3) < 1e-3);
}

TEST_CASE("error taxonomy: trivial b and missing definite directions") {
    ZMaxOptions opts;
    opts.seed = 1;
    opts.restarts = 5;
    CHECK_THROWS_AS(get_z_max(fixture("example10"), opts), TrivialBError);

    QuadraticMap ind;
    ind.field = FieldTag::Real;
    ind.n = 2;
    ind.m = 2;
    Mat a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    Mat a2(2, 2);
    a2(0, 1) = 1.0;
    a2(1, 0) = 1.0;
    ind.A = {a, a2};
    ind.b = {Vec(2), Vec(2)};
    ind.b[0][0] = 1.0; // keep b nontrivial
    CHECK_THROWS_AS(get_z_max(ind, opts), NotDefiniteError);

    QuadraticMap f1 = fixture("example01");
    ZMaxOptions bad;
    bad.c_plus = {1, 0, 0}; // indefinite direction
    bad.seed = 1;
    bad.restarts = 5;
    CHECK_THROWS_AS(get_z_max(f1, bad), NotDefiniteError);
}

TEST_CASE("Example 5: the C- set has a loop and an open interval") {
    QuadraticMap f = fixture("example05");
    ZMaxOptions opts;
    opts.c_plus = {1, 0, 0, 0};
    opts.seed = 1;
    opts.restarts = 40;
    ZMaxResult r = get_z_max(f, opts);
    REQUIRE(r.hits >= 4);

    bool saw_loop = false, saw_interval = false;
    for (const Discovery& d : r.discoveries) {
        if (d.duplicate) continue;
        ComponentSample comp = sample_c_minus_component(r.normalized, r.transform.c_plus,
                                                        d.c_start, 0.02, 1500);
        if (comp.points.size() < 5) continue;
        if (comp.closed) saw_loop = true;
        else saw_interval = true;
        if (saw_loop && saw_interval) break;
    }
    CHECK(saw_loop);
    CHECK(saw_interval);

    CHECK_THROWS_AS(sample_c_minus_component(fixture("example07"),
                                             std::vector<double>{1, 0, 0, 0, 0},
                                             std::vector<double>{0, 1, 0, 0, 0}),
                    DimensionUnsupported);
}
