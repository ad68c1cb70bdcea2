#pragma once

#include <array>

#include "core/torus_fn.hpp"

namespace ccr {

/// 2x2 matrix of TorusFn. The sl2 flag marks maps whose determinant is 1 up to
/// det_tol; adjugate inversion and product flag propagation rely on it.
class MatFn {
public:
    MatFn() = default;
    static MatFn identity();
    static MatFn constant(double a00, double a01, double a10, double a11);

    TorusFn& at(int i, int j) { return e_[i][j]; }
    const TorusFn& at(int i, int j) const { return e_[i][j]; }

    bool sl2() const { return sl2_; }
    MatFn& set_sl2(bool v) { sl2_ = v; return *this; }

    int bandwidth() const;
    std::array<std::array<double, 2>, 2> eval(double x) const;

    MatFn operator+(const MatFn& o) const;
    MatFn operator-(const MatFn& o) const;
    MatFn operator*(const MatFn& o) const;
    MatFn operator*(double s) const;
    MatFn operator-() const;

    MatFn translated(double beta) const;
    MatFn translated_exact(const BigInt& k, double alpha) const;

    TorusFn det() const;
    /// Adjugate for sl2-flagged maps; pointwise adjugate/det otherwise.
    MatFn inverse(double min_det = 1e-8) const;

    MatFn derivative(int order) const;
    /// sup over the circle of the Frobenius norm.
    double sup_norm() const;
    double cr_norm(int k) const;
    double max_det_deviation() const;  // sup |det - 1|

    MatFn chopped(double rel_tol = 1e-15) const;

private:
    std::array<std::array<TorusFn, 2>, 2> e_;
    bool sl2_ = false;
};

inline MatFn operator*(double s, const MatFn& m) { return m * s; }

/// R_phi with entries cos(2 pi phi), -sin / sin / cos; adaptive bandwidth.
MatFn rotation_mat(const TorusFn& phi, int bandwidth_cap = kDefaultBandwidthCap);

/// Constant rotation by angle 2 pi theta.
MatFn rotation_const(double theta);

}  // namespace ccr
