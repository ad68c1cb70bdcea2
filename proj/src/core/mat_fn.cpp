#include "core/mat_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/fft.hpp"

namespace ccr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

MatFn MatFn::identity() {
    MatFn m = constant(1.0, 0.0, 0.0, 1.0);
    m.sl2_ = true;
    return m;
}

MatFn MatFn::constant(double a00, double a01, double a10, double a11) {
    MatFn m;
    m.e_[0][0] = TorusFn(a00);
    m.e_[0][1] = TorusFn(a01);
    m.e_[1][0] = TorusFn(a10);
    m.e_[1][1] = TorusFn(a11);
    m.sl2_ = std::abs(a00 * a11 - a01 * a10 - 1.0) < 1e-12;
    return m;
}

int MatFn::bandwidth() const {
    int b = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b = std::max(b, e_[i][j].bandwidth());
    return b;
}

std::array<std::array<double, 2>, 2> MatFn::eval(double x) const {
    return {{{e_[0][0].evaluate(x), e_[0][1].evaluate(x)},
             {e_[1][0].evaluate(x), e_[1][1].evaluate(x)}}};
}

MatFn MatFn::operator+(const MatFn& o) const {
    MatFn r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j] + o.e_[i][j];
    return r;
}

MatFn MatFn::operator-(const MatFn& o) const { return *this + (-o); }

MatFn MatFn::operator-() const {
    MatFn r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = -e_[i][j];
    return r;
}

MatFn MatFn::operator*(double s) const {
    MatFn r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j] * s;
    return r;
}

MatFn MatFn::operator*(const MatFn& o) const {
    MatFn r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.e_[i][j] = e_[i][0] * o.e_[0][j] + e_[i][1] * o.e_[1][j];
    r.sl2_ = sl2_ && o.sl2_;
    return r;
}

MatFn MatFn::translated(double beta) const {
    MatFn r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j].translated(beta);
    return r;
}

MatFn MatFn::translated_exact(const BigInt& k, double alpha) const {
    MatFn r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j].translated_exact(k, alpha);
    return r;
}

TorusFn MatFn::det() const {
    return e_[0][0] * e_[1][1] - e_[0][1] * e_[1][0];
}

MatFn MatFn::inverse(double min_det) const {
    if (sl2_) {
        MatFn r;
        r.e_[0][0] = e_[1][1];
        r.e_[0][1] = -e_[0][1];
        r.e_[1][0] = -e_[1][0];
        r.e_[1][1] = e_[0][0];
        r.sl2_ = true;
        return r;
    }
    std::vector<const TorusFn*> in = {&e_[0][0], &e_[0][1], &e_[1][0], &e_[1][1]};
    bool singular = false;
    auto outs = map_pointwise(in, 4, [&](const double* v, double* out) {
        double d = v[0] * v[3] - v[1] * v[2];
        if (std::abs(d) < min_det) { singular = true; d = d >= 0 ? min_det : -min_det; }
        out[0] = v[3] / d;
        out[1] = -v[1] / d;
        out[2] = -v[2] / d;
        out[3] = v[0] / d;
    });
    if (singular) throw Error(ErrorCode::SingularMatrix, "determinant under min_det on grid");
    MatFn r;
    r.e_[0][0] = outs[0];
    r.e_[0][1] = outs[1];
    r.e_[1][0] = outs[2];
    r.e_[1][1] = outs[3];
    return r;
}

MatFn MatFn::derivative(int order) const {
    MatFn r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j].derivative(order);
    return r;
}

double MatFn::sup_norm() const {
    int m = std::max(16, fft::next_pow2(8 * (bandwidth() + 1)));
    double prev = -1.0;
    for (int round = 0; round < 5; ++round) {
        std::array<std::vector<double>, 4> s = {e_[0][0].samples(m), e_[0][1].samples(m),
                                                e_[1][0].samples(m), e_[1][1].samples(m)};
        double mx = 0.0;
        for (int j = 0; j < m; ++j) {
            double f = s[0][j] * s[0][j] + s[1][j] * s[1][j] + s[2][j] * s[2][j] +
                       s[3][j] * s[3][j];
            mx = std::max(mx, f);
        }
        mx = std::sqrt(mx);
        if (prev >= 0.0 && mx - prev <= 1e-10 * std::max(1.0, mx)) return mx;
        prev = mx;
        m *= 2;
    }
    return prev;
}

double MatFn::cr_norm(int k) const {
    double acc = 0.0;
    for (int h = 0; h <= k; ++h) acc += derivative(h).sup_norm();
    return acc;
}

double MatFn::max_det_deviation() const {
    TorusFn d = det() - TorusFn(1.0);
    return d.sup_norm();
}

MatFn MatFn::chopped(double rel_tol) const {
    MatFn r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j].chopped(rel_tol);
    return r;
}

MatFn rotation_mat(const TorusFn& phi, int bandwidth_cap) {
    auto outs = map_pointwise({&phi}, 2, [](const double* v, double* out) {
        out[0] = std::cos(kTwoPi * v[0]);
        out[1] = std::sin(kTwoPi * v[0]);
    }, bandwidth_cap);
    MatFn r;
    r.at(0, 0) = outs[0];
    r.at(0, 1) = -outs[1];
    r.at(1, 0) = outs[1];
    r.at(1, 1) = outs[0];
    r.set_sl2(true);
    return r;
}

MatFn rotation_const(double theta) {
    double c = std::cos(kTwoPi * theta), s = std::sin(kTwoPi * theta);
    MatFn r = MatFn::constant(c, -s, s, c);
    r.set_sl2(true);
    return r;
}

}  // namespace ccr
