#pragma once

#include "quadmap.hpp"
#include "sdp.hpp"

namespace qcvx {

/// c with H(c) = [[c.A, c.b], [(c.b)^*, -c.y0]] > 0, proving y0 lies outside
/// G and therefore outside F.
struct InfeasibilityCertificate {
    std::vector<double> c;
    double min_eigenvalue = 0.0;
};

/// Lifted matrices of the infeasibility pencil for a given y0.
inline std::vector<Mat> infeasibility_pencil(const QuadraticMap& f,
                                             const std::vector<double>& y0) {
    std::vector<Mat> h = lift(f).H;
    for (std::size_t k = 0; k < f.m; ++k) h[k](f.n, f.n) = -y0[k];
    return h;
}

inline Mat pencil_value(const std::vector<Mat>& h, const std::vector<double>& c) {
    Mat r(h[0].rows, h[0].cols);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0.0) r = r + Cx(c[k]) * h[k];
    return r;
}

enum class Membership { InG, NotInG, Indeterminate };

/// Feasibility of the lifted LMI system H(X) = y0, X >= 0, X_{n+1,n+1} = 1,
/// solved with a trace objective for determinism.
inline Membership membership_relaxation(const QuadraticMap& f,
                                        const std::vector<double>& y0,
                                        const ToleranceConfig& tol = {}) {
    const LiftedFamily l = lift(f);
    SdpProblem p;
    p.block_sizes = {f.n + 1};
    p.C = {Mat::identity(f.n + 1)};
    for (std::size_t k = 0; k < f.m; ++k) {
        SdpProblem::Constraint con;
        con.F = {l.H[k]};
        con.rhs = y0[k];
        p.cons.push_back(std::move(con));
    }
    SdpProblem::Constraint corner;
    corner.F.resize(1);
    corner.F[0] = Mat(f.n + 1, f.n + 1);
    corner.F[0](f.n, f.n) = 1.0;
    corner.rhs = 1.0;
    p.cons.push_back(std::move(corner));

    const SdpSolution s = sdp_solve(p, tol);
    switch (s.status) {
        case SdpSolution::Status::Optimal: return Membership::InG;
        case SdpSolution::Status::Infeasible: return Membership::NotInG;
        default: return Membership::Indeterminate;
    }
}

/// Sufficient-condition oracle: a certificate is returned only when the
/// strict feasibility search clears the margin, and every returned
/// certificate re-verifies by an independent eigenvalue check.
inline std::optional<InfeasibilityCertificate> infeasibility_oracle(
    const QuadraticMap& f, const std::vector<double>& y0,
    const ToleranceConfig& tol = {}) {
    const std::vector<Mat> h = infeasibility_pencil(f, y0);
    auto w = strict_feasibility(Mat(f.n + 1, f.n + 1), h, tol.cert_margin, tol);
    if (!w) return std::nullopt;
    InfeasibilityCertificate cert;
    cert.c = w->c;
    cert.min_eigenvalue = lambda_min(pencil_value(h, cert.c));
    if (cert.min_eigenvalue <= 0.0) return std::nullopt;
    return cert;
}

/// Dual supporting-hyperplane data: c.d = -1 and
/// [[c.A, c.b], [(c.b)^*, gamma]] >= 0. Objective gamma + c.y equals the
/// primal boundary distance t.
struct SupportVector {
    std::vector<double> c;
    double gamma = 0.0;
    double objective = 0.0; ///< gamma + c.y, in unit-direction scale
};

struct BoundaryResult {
    enum class Status { Ok, Unbounded, NotInteriorPoint, NumericalTrouble };
    Status status = Status::NumericalTrouble;
    double t = 0.0;                 ///< distance along the unit-normalized direction
    double dir_norm = 1.0;          ///< |d| of the caller's direction
    std::vector<double> point;      ///< y + t * d/|d|
    Mat X;                          ///< lifted solution at the boundary
    int rank_estimate = 0;
    enum class OnF { Yes, Ambiguous } on_f = OnF::Ambiguous;
    SupportVector support;          ///< dual data (get_c_from_d)
};

/// max t subject to H(X) = y + t d, X >= 0, X_{n+1,n+1} = 1. The dual
/// multipliers give the supporting hyperplane normal, so one solve serves
/// both boundary_oracle and get_c_from_d.
inline BoundaryResult boundary_oracle(const QuadraticMap& f,
                                      const std::vector<double>& y,
                                      std::vector<double> d,
                                      const ToleranceConfig& tol = {}) {
    BoundaryResult out;
    double dn = 0.0;
    for (double v : d) dn += v * v;
    dn = std::sqrt(dn);
    if (dn < 1e-14) throw std::invalid_argument("boundary_oracle: zero direction");
    for (double& v : d) v /= dn;
    out.dir_norm = dn;

    const LiftedFamily l = lift(f);
    SdpProblem p;
    p.block_sizes = {f.n + 1};
    p.num_free = 1;
    p.q = {-1.0}; // maximize t
    for (std::size_t k = 0; k < f.m; ++k) {
        SdpProblem::Constraint con;
        con.F = {l.H[k]};
        con.g = {-d[k]};
        con.rhs = y[k];
        p.cons.push_back(std::move(con));
    }
    SdpProblem::Constraint corner;
    corner.F.resize(1);
    corner.F[0] = Mat(f.n + 1, f.n + 1);
    corner.F[0](f.n, f.n) = 1.0;
    corner.rhs = 1.0;
    p.cons.push_back(std::move(corner));

    const SdpSolution s = sdp_solve(p, tol);
    if (s.status == SdpSolution::Status::Unbounded) {
        out.status = BoundaryResult::Status::Unbounded;
        return out;
    }
    if (s.status == SdpSolution::Status::Infeasible) {
        out.status = BoundaryResult::Status::NotInteriorPoint;
        return out;
    }
    if (s.status != SdpSolution::Status::Optimal) return out;

    out.status = BoundaryResult::Status::Ok;
    out.t = s.u[0];
    out.X = s.X[0];
    out.point.resize(f.m);
    for (std::size_t k = 0; k < f.m; ++k) out.point[k] = y[k] + out.t * d[k];

    const EigDecomposition ex = hermitian_eig(out.X);
    const std::size_t nn = f.n + 1;
    const double l1 = std::max(ex.values[nn - 1], 1e-300);
    int rank = 0;
    for (double v : ex.values)
        if (v > 1e-6 * l1) ++rank;
    out.rank_estimate = std::max(rank, 1);
    out.on_f = (out.rank_estimate == 1) ? BoundaryResult::OnF::Yes
                                        : BoundaryResult::OnF::Ambiguous;

    out.support.c.resize(f.m);
    for (std::size_t k = 0; k < f.m; ++k) out.support.c[k] = -s.y[k];
    out.support.gamma = -s.y[f.m];
    double cy = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) cy += out.support.c[k] * y[k];
    out.support.objective = out.support.gamma + cy;
    return out;
}

/// Supporting hyperplane normal at the boundary point in direction d.
struct NoSupportingHyperplane : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline SupportVector get_c_from_d(const QuadraticMap& f, const std::vector<double>& y,
                                  const std::vector<double>& d,
                                  const ToleranceConfig& tol = {}) {
    const BoundaryResult r = boundary_oracle(f, y, d, tol);
    if (r.status != BoundaryResult::Status::Ok)
        throw NoSupportingHyperplane("get_c_from_d: no supporting hyperplane in this direction");
    return r.support;
}

/// Definite direction c+ (|c+| = 1, c+.A > 0) found by maximizing the
/// minimum eigenvalue over the unit ball; nullopt when the map is not
/// definite. The CLI lets a user-provided c+ override this search.
inline std::optional<std::vector<double>> find_definite_direction(
    const QuadraticMap& f, const ToleranceConfig& tol = {}) {
    auto w = strict_feasibility(Mat(f.n, f.n), f.A, 1e-9, tol);
    if (!w) return std::nullopt;
    double nc = 0.0;
    for (double v : w->c) nc += v * v;
    nc = std::sqrt(nc);
    std::vector<double> c = w->c;
    for (double& v : c) v /= nc;
    if (lambda_min(cdot(c, f.A)) <= 0.0) return std::nullopt;
    return c;
}

} // namespace qcvx
