#pragma once

#include <vector>

#include "core/cocycle.hpp"

namespace ccr {

struct EllipticOptions {
    double ellipticity_floor = 1e-6;  // min over x of ||R_{2 theta(x)} - Id||
    double inner_tol = 1e-14;
    int max_inner = 40;
    double smallness_ratio = 0.05;  // ||F|| < ratio * min{1, ||R_{2 phi} - Id||_0}
    bool enforce_smallness = true;
    bool check_commutator = true;
    int bandwidth_cap = kDefaultBandwidthCap;
    double chop_tol = 1e-15;
};

struct EllipticResult {
    MatFn B;      // B A B^{-1} = R_phi up to the inner tolerance
    TorusFn phi;
    int inner_iters = 0;
    bool converged = false;
    double ellipticity_min = 0.0;  // min over grid of 2|sin(2 pi theta)|
    std::vector<double> g_norms;   // ||G_k||_0 per inner iteration
    double commutator_residual = 0.0;
};

/// One elliptic conjugation: given A = R_{phi_bar} + F_bar pointwise elliptic,
/// produces B with B(x) A(x) B(x)^{-1} = R_{phi(x)}. n_label is the convergent
/// index the caller is working at (diagnostics only).
EllipticResult elliptic_reduce(const TorusFn& phi_bar, const MatFn& F_bar, int n_label,
                               const EllipticOptions& opts = {});

struct PassRecord {
    int pass = 0;
    double norm0 = 0.0;
    double norm1 = 0.0;
    int inner_iters = 0;
    double ellipticity_min = 0.0;
};

struct CheapTrickOptions {
    int r0 = 3;  // r0 + 1 passes
    double floor_tol = 1e-15;
    double ellipticity_C = 10.0;  // precondition ||(R_{2 phi}-Id)^{-1}||_0 <= C n^2
    bool enforce_preconditions = true;
    bool check_defect_identity = true;
    EllipticOptions elliptic;
};

struct CheapTrickResult {
    MatFn B;       // = B_last * B_head
    MatFn B_last;  // conjugacy of the final pass alone
    MatFn B_head;  // product of the earlier passes
    TorusFn phi;
    MatFn F;
    int passes = 0;
    bool early_exit = false;
    std::vector<PassRecord> per_pass;
    double defect_identity_residual = 0.0;
    double measured_inverse_norm = 0.0;
};

/// The cheap trick over the frequency q_n * alpha: r0+1 elliptic passes, each
/// followed by the translated-defect formation. On return
/// B(x + q_n alpha) (R_{phi_bar} + F_bar)(x) B(x)^{-1} = R_phi + F.
CheapTrickResult cheap_trick(double alpha, const BigInt& q_n, int n_label,
                             const TorusFn& phi_bar, const MatFn& F_bar,
                             const CheapTrickOptions& opts = {});

/// min and max over the circle of ||R_{2 theta(x)} - Id|| = 2|sin(2 pi theta(x))|.
std::pair<double, double> ellipticity_range(const TorusFn& theta);

}  // namespace ccr
