// Walkthrough of the library on one quadratic map: validate the fixture,
// test a point for membership in the convex hull G, certify a boundary
// non-convexity, and compute the convex cut level z_max.
//
//   ./demo_cut fixtures/example01.json
#include <cstdio>

#include <qcvx/convexcut.hpp>
#include <qcvx/json_io.hpp>
#include <qcvx/nonconvexity.hpp>
#include <qcvx/oracles.hpp>

using namespace qcvx;

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : QCVX_FIXTURE_DIR "/example01.json";
    QuadraticMap f = load_map(path);
    std::printf("map: %s, n=%zu, m=%zu\n",
                f.field == FieldTag::Real ? "real" : "complex", f.n, f.m);

    // a definite direction c+ with c+.A > 0 makes the analysis applicable
    auto c_plus = find_definite_direction(f);
    if (!c_plus) {
        std::printf("no definite direction; the cut analysis does not apply\n");
        return 1;
    }
    std::printf("definite direction c+ = (");
    for (std::size_t k = 0; k < f.m; ++k)
        std::printf("%s%.4f", k ? ", " : "", (*c_plus)[k]);
    std::printf(")\n");

    // membership of a target point in G via the lifted relaxation
    std::vector<double> y0(f.m, 0.0);
    y0.back() = -1.0;
    if (auto cert = infeasibility_oracle(f, y0)) {
        std::printf("y0 is certified outside G (margin %.3e)\n", cert->min_eigenvalue);
    } else {
        std::printf("no infeasibility certificate for y0\n");
    }

    // stochastic search for a boundary non-convexity certificate
    CertificateSearchOptions copts;
    copts.seed = 1;
    if (auto cert = nonconvexity_certificate(f, copts)) {
        std::printf("non-convexity certificate at c = (");
        for (std::size_t k = 0; k < f.m; ++k)
            std::printf("%s%.4f", k ? ", " : "", cert->c[k]);
        std::printf("), defect %.4f\n", cert->collinearity_defect);
    } else {
        std::printf("no non-convexity certificate found\n");
    }

    // the convex cut level: {c+.y <= z_max} intersected with the image is convex
    ZMaxOptions zopts;
    zopts.seed = 1;
    zopts.restarts = 30;
    try {
        ZMaxResult r = get_z_max(f, zopts);
        std::printf("z_max = %.6f from %d C- hits over %d restarts\n", r.z_max,
                    r.hits, r.restarts);
    } catch (const TrivialBError&) {
        std::printf("map is homogeneous, the cut level is undefined\n");
    }
    return 0;
}
