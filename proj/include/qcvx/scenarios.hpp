#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcvx {

/// Shipped analysis scenario for one worked example: the fixture, the
/// definite direction, the seeding, and the golden values the run is
/// compared against. Shared by the command-line driver and the acceptance
/// suite so both check the same thing.
struct ExampleScenario {
    int id = 0;
    std::string fixture;
    std::vector<double> c_plus;
    std::uint64_t seed = 0;
    int restarts = 30;
    std::optional<double> z_guess;

    /// golden cut level; empty for the homogeneous example
    std::optional<double> z_expect;
    double z_tol = 1e-3;

    /// direction of the minimizing c (normalized coordinates); checked by
    /// |cosine| when non-empty
    std::vector<double> c_star_expect;
    double c_star_cos = 0.0;

    /// the map has trivial b: expect a homogeneous certificate and a
    /// TrivialB rejection from the cut-level search
    bool homogeneous = false;

    /// boundary-oracle side scenario (only example 7 ships one)
    bool has_boundary = false;
    std::vector<double> boundary_y;
    std::vector<double> boundary_d;
    double t_expect = 0.0;
    double t_tol = 1e-3;
    std::vector<double> support_expect; ///< unit normalized, sign of last entry
    double support_tol = 1e-2;
};

namespace detail {
inline std::vector<double> unit_vector(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}
} // namespace detail

inline const std::vector<ExampleScenario>& example_scenarios() {
    static const std::vector<ExampleScenario> table = [] {
        std::vector<ExampleScenario> t(10);
        const double s = 1.0 / std::sqrt(2.0);

        t[0].id = 1;
        t[0].fixture = "example01";
        t[0].c_plus = {0, 0, 1};
        t[0].seed = 1;
        t[0].restarts = 40;
        t[0].z_expect = 1.0 / 3.0;
        t[0].z_tol = 1e-3;
        t[0].c_star_expect = {1, 0, 0};
        t[0].c_star_cos = 0.999;

        t[1].id = 2;
        t[1].fixture = "example02";
        t[1].c_plus = {2.0 / 3, 2.0 / 3, 1.0 / 3};
        t[1].seed = 1;
        t[1].restarts = 30;
        t[1].z_expect = 0.0283;
        t[1].z_tol = 1e-3;
        t[1].c_star_expect = {0.3169, 0.9196, 0.2322};
        t[1].c_star_cos = 0.995;

        t[2].id = 3;
        t[2].fixture = "example03";
        t[2].c_plus = {s, s, 0, 0};
        t[2].seed = 1;
        t[2].restarts = 30;
        t[2].z_expect = 0.70711;
        t[2].z_tol = 1e-3;
        t[2].c_star_expect = {0, 0, -s, -s};
        t[2].c_star_cos = 0.9999;

        t[3].id = 4;
        t[3].fixture = "example04";
        t[3].c_plus = detail::unit_vector({0.7991, -0.3533, 0.3924, 0.2876});
        t[3].seed = 5;
        t[3].restarts = 60;
        t[3].z_expect = 1.451;
        t[3].z_tol = 2e-3;

        t[4].id = 5;
        t[4].fixture = "example05";
        t[4].c_plus = {1, 0, 0, 0};
        t[4].seed = 1;
        t[4].restarts = 30;
        t[4].z_expect = 0.007325;
        t[4].z_tol = 5e-4;

        t[5].id = 6;
        t[5].fixture = "example06";
        t[5].c_plus = detail::unit_vector({0.558584, 0.087798, 0.310907, 0.763945});
        t[5].seed = 1;
        t[5].restarts = 60;
        t[5].z_expect = 0.001059;
        t[5].z_tol = 5e-4;

        t[6].id = 7;
        t[6].fixture = "example07";
        t[6].c_plus = detail::unit_vector({0.1326, -0.3859, 0.1932, -0.6408, 0.6209});
        t[6].seed = 1;
        t[6].restarts = 40;
        t[6].z_expect = 0.0935;
        t[6].z_tol = 1e-3;
        t[6].has_boundary = true;
        t[6].boundary_y = {0, 0, 0, 0, 0};
        t[6].boundary_d = {-1, -2, -3, -4, -5};
        t[6].t_expect = 0.1196;
        t[6].t_tol = 1e-3;
        t[6].support_expect = {-0.0128, 0.1989, 0.1827, 0.3844, 0.8827};
        t[6].support_tol = 1e-2;

        t[7].id = 8;
        t[7].fixture = "example08";
        t[7].c_plus = detail::unit_vector({0.058455, 0.428284, 0.132223, -0.20632, 0.867816});
        t[7].seed = 3;
        t[7].restarts = 300;
        t[7].z_expect = 0.00768;
        t[7].z_tol = 5e-4;

        t[8].id = 9;
        t[8].fixture = "example09";
        t[8].c_plus = detail::unit_vector({0.00281, 0.04243, -0.06787, -0.08432, -0.13114, 0.98452});
        t[8].seed = 3;
        t[8].restarts = 100;
        t[8].z_expect = 0.0335;
        t[8].z_tol = 1e-3;

        t[9].id = 10;
        t[9].fixture = "example10";
        t[9].c_plus = {0, 0, 0, 1};
        t[9].seed = 1;
        t[9].restarts = 30;
        t[9].homogeneous = true;

        return t;
    }();
    return table;
}

} // namespace qcvx
