#pragma once

namespace qcvx {

/// Central knobs for every rank / feasibility / convergence decision.
/// The rank tolerance is the single most consequential constant in the
/// library: it decides kernel dimensions, and therefore membership in C-.
struct ToleranceConfig {
    double rank_tol = 1e-8;        ///< relative, against the largest |eigenvalue|
    double kernel_tol = 1e-7;      ///< relative zero-eigenvalue cutoff for C- membership
    double feas_tol = 1e-9;        ///< SDP primal/dual residual target
    double gap_tol = 1e-9;         ///< SDP duality gap target
    int    sdp_iter_cap = 200;     ///< interior point iteration limit
    double cert_margin = 1e-7;     ///< strict feasibility margin for certificates
    double collinearity_tol = 1e-6;///< sine of principal angle below this = collinear
    double orth_tol = 1e-7;        ///< |x0^*(c.b)| <= orth_tol*(1+|b|)
    double triviality_tol = 1e-9;  ///< absolute residual for the stacked system A_k x = b_k
    double grad_stop = 1e-8;       ///< descent stop: |P[grad z]| < grad_stop*(1+|grad z|)
    double beta0 = 0.1;            ///< initial gradient step
    double beta_underflow = 1e-10; ///< give up shrinking the step below this
    int    bisect_iters = 80;      ///< real retraction bisection depth
    double rho_tol = 1e-16;        ///< complex retraction target on rho = |w|^2
    double duplicate_cos = 0.999;  ///< |c1.c2| above this = same C- discovery
};

} // namespace qcvx
