#pragma once

#include "core/mat_fn.hpp"

namespace ccr {

struct Cocycle {
    double alpha = 0.0;
    MatFn A;
};

/// Transfer-matrix cocycle of (Hu)_n = u_{n+1} + u_{n-1} + v(theta + n alpha) u_n.
Cocycle schrodinger(const TorusFn& v, double E, double alpha);

/// A^{(n)}(x) = A(x+(n-1)a) ... A(x); O(log n) products via the splitting
/// A^{(m+k)}(x) = A^{(m)}(x+k a) A^{(k)}(x). naive forces the n-fold product.
MatFn iterate(const Cocycle& c, const BigInt& n, bool naive = false,
              double chop_tol = 1e-15);

/// Anti-conformal part Q(M) = (M + JMJ)/2, exact in coefficients.
MatFn q_project(const MatFn& m);

/// Continuous angle of a conformal matrix function [[p,-r],[r,p]].
/// phi is the periodic part; the integer winding is returned separately
/// (full angle = phi(x) + winding * x).
struct AngleLift {
    TorusFn phi;
    int winding = 0;
};
AngleLift conformal_angle(const TorusFn& p, const TorusFn& r,
                          int bandwidth_cap = kDefaultBandwidthCap);

struct DecomposedCocycle {
    double alpha = 0.0;
    TorusFn phi;
    MatFn F;
    int winding = 0;
};

/// A = R_phi + F with R_phi the normalized conformal part of A.
DecomposedCocycle decompose(const Cocycle& c, double min_conformal_det = 1e-10);

struct RotationNumberOptions {
    double target = 1e-9;
    long initial_orbit = 1 << 12;
    long max_orbit = 1 << 22;
    int phases = 8;
    double divergence_floor = 1e-3;
};

struct RotationNumberEstimate {
    double rho = 0.0;         // mod 1
    double error_bound = 0.0;
    BigInt orbit_length;
    int degree = 0;
};

RotationNumberEstimate rotation_number(const Cocycle& c, const RotationNumberOptions& opts = {});

/// Top Lyapunov exponent along a finite orbit, averaged over 8 phases.
double lyapunov(const Cocycle& c, long L);

struct IteratedDefect {
    BigInt n;
    MatFn xi;
    double norm0 = 0.0;
    double norm1 = 0.0;
};

/// xi such that A^{(n)} = R_{S_n phi} + xi for the reconstituted cocycle.
IteratedDefect iterated_defect(const DecomposedCocycle& d, const BigInt& n);

}  // namespace ccr
