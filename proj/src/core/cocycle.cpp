#include "core/cocycle.hpp"

#include <cmath>
#include <numbers>

#include "core/fft.hpp"

namespace ccr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal_angle(double dx, double dy, double px, double py) {
    // angle from (px,py) to (dx,dy) in (-pi, pi]
    return std::atan2(px * dy - py * dx, px * dx + py * dy);
}
}  // namespace

Cocycle schrodinger(const TorusFn& v, double E, double alpha) {
    Cocycle c;
    c.alpha = alpha;
    c.A.at(0, 0) = TorusFn(E) - v;
    c.A.at(0, 1) = TorusFn(-1.0);
    c.A.at(1, 0) = TorusFn(1.0);
    c.A.at(1, 1) = TorusFn(0.0);
    c.A.set_sl2(true);
    return c;
}

MatFn iterate(const Cocycle& c, const BigInt& n, bool naive, double chop_tol) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "iterate needs n >= 1");
    if (naive) {
        MatFn r = c.A;
        for (BigInt j = 1; j < n; ++j)
            r = (c.A.translated_exact(j, c.alpha) * r).chopped(chop_tol);
        r.set_sl2(true);
        return r;
    }
    // binary splitting: R = A^{(m)}; doubling R <- R(x+m a) R(x)
    MatFn r = MatFn::identity();
    BigInt m = 0;
    int bits = static_cast<int>(boost::multiprecision::msb(n));
    for (int b = bits; b >= 0; --b) {
        if (m > 0) {
            r = (r.translated_exact(m, c.alpha) * r).chopped(chop_tol);
            m *= 2;
        }
        if (boost::multiprecision::bit_test(n, b)) {
            r = (c.A.translated_exact(m, c.alpha) * r).chopped(chop_tol);
            m += 1;
        }
    }
    r.set_sl2(true);
    return r;
}

MatFn q_project(const MatFn& m) {
    // J M J = [[-d, c], [b, -a]]
    MatFn q;
    TorusFn half_amd = (m.at(0, 0) - m.at(1, 1)) * 0.5;
    TorusFn half_bpc = (m.at(0, 1) + m.at(1, 0)) * 0.5;
    q.at(0, 0) = half_amd;
    q.at(0, 1) = half_bpc;
    q.at(1, 0) = half_bpc;
    q.at(1, 1) = -half_amd;
    return q;
}

AngleLift conformal_angle(const TorusFn& p, const TorusFn& r, int bandwidth_cap) {
    int band = std::max(p.bandwidth(), r.bandwidth());
    int m = std::max(64, fft::next_pow2(8 * (band + 1)));
    for (;;) {
        auto ps = p.samples(m);
        auto rs = r.samples(m);
        std::vector<double> theta(m);
        double raw0 = std::atan2(rs[0], ps[0]) / kTwoPi;
        if (raw0 < 0) raw0 += 1.0;  // base point angle in [0,1)
        theta[0] = raw0;
        double prev = raw0;
        for (int j = 1; j < m; ++j) {
            double raw = std::atan2(rs[j], ps[j]) / kTwoPi;
            theta[j] = raw + std::round(prev - raw);
            prev = theta[j];
        }
        // close the loop back to x = 1 to read off the winding
        double theta_close = raw0 + std::round(prev - raw0);
        int winding = static_cast<int>(std::lround(theta_close - theta[0]));

        for (int j = 0; j < m; ++j) theta[j] -= winding * (double(j) / m);
        TorusFn phi = TorusFn::from_samples(theta);
        // accept once the spectral tail has died off; the absolute floor keeps
        // a pure-noise residual (angle exactly linear) from spinning forever
        const auto& cs = phi.coefficients();
        double mx = 0.0, tail = 0.0;
        for (const auto& z : cs) mx = std::max(mx, std::abs(z));
        for (size_t l = 3 * cs.size() / 4; l < cs.size(); ++l)
            tail = std::max(tail, std::abs(cs[l]));
        double noise = 1e-15 * (1.0 + std::abs(double(winding)) + mx);
        if (mx <= 10.0 * noise) {
            AngleLift out;
            out.phi = TorusFn(phi.mean());
            out.winding = winding;
            return out;
        }
        if (tail <= 1e-13 * mx + noise) {
            AngleLift out;
            out.phi = phi.chopped(1e-16);
            out.winding = winding;
            return out;
        }
        if (m / 2 >= bandwidth_cap)
            throw Error(ErrorCode::BandwidthOverflow, "angle lift did not settle below cap");
        m *= 2;
    }
}

DecomposedCocycle decompose(const Cocycle& c, double min_conformal_det) {
    MatFn conf = c.A - q_project(c.A);
    const TorusFn& p = conf.at(0, 0);
    const TorusFn& r = conf.at(1, 0);
    TorusFn d = p * p + r * r;  // = det(A - Q(A))
    // sample min
    int m = std::max(64, fft::next_pow2(8 * (d.bandwidth() + 1)));
    double mn = 1e300;
    for (double v : d.samples(m)) mn = std::min(mn, v);
    if (mn <= min_conformal_det)
        throw Error(ErrorCode::NotNearRotation, "det(A - Q(A)) too small on grid");

    AngleLift lift = conformal_angle(p, r);
    DecomposedCocycle out;
    out.alpha = c.alpha;
    out.phi = lift.phi;
    out.winding = lift.winding;
    if (lift.winding != 0)
        throw Error(ErrorCode::NotNearRotation,
                    "conformal part has nonzero winding; not close to rotations");
    out.F = c.A - rotation_mat(lift.phi);
    return out;
}

namespace {

struct OrbitSpec {
    const Cocycle* c;
    int degree;  // winding removed on the fly via R_{-degree x}
};

// weighted increments of the projective action along one orbit
double weighted_rotation(const OrbitSpec& spec, double x0, double beta0, long L) {
    double ux = std::cos(kTwoPi * beta0), uy = std::sin(kTwoPi * beta0);
    double x = x0;
    double alpha = spec.c->alpha;
    double acc = 0.0, wsum = 0.0;
    for (long j = 0; j < L; ++j) {
        auto M = spec.c->A.eval(x);
        if (spec.degree != 0) {
            double a = -kTwoPi * spec.degree * x;
            double ca = std::cos(a), sa = std::sin(a);
            double m00 = ca * M[0][0] - sa * M[1][0];
            double m01 = ca * M[0][1] - sa * M[1][1];
            double m10 = sa * M[0][0] + ca * M[1][0];
            double m11 = sa * M[0][1] + ca * M[1][1];
            M = {{{m00, m01}, {m10, m11}}};
        }
        double wx = M[0][0] * ux + M[0][1] * uy;
        double wy = M[1][0] * ux + M[1][1] * uy;
        double delta = principal_angle(wx, wy, ux, uy);
        double t = (double(j) + 1.0) / (double(L) + 1.0);
        double w = std::exp(-1.0 / (t * (1.0 - t)));
        acc += w * delta;
        wsum += w;
        double nrm = std::hypot(wx, wy);
        ux = wx / nrm;
        uy = wy / nrm;
        x += alpha;
        x -= std::floor(x);
    }
    return acc / (wsum * kTwoPi);
}

int column_winding(const MatFn& A) {
    const TorusFn& p = A.at(0, 0);
    const TorusFn& r = A.at(1, 0);
    int m = std::max(256, fft::next_pow2(16 * (A.bandwidth() + 1)));
    auto ps = p.samples(m);
    auto rs = r.samples(m);
    double first = std::atan2(rs[0], ps[0]) / kTwoPi;
    double prev = first;
    for (int j = 1; j < m; ++j) {
        double raw = std::atan2(rs[j], ps[j]) / kTwoPi;
        prev = raw + std::round(prev - raw);
    }
    double closing = first + std::round(prev - first);
    return static_cast<int>(std::lround(closing - first));
}

}  // namespace

RotationNumberEstimate rotation_number(const Cocycle& c, const RotationNumberOptions& opts) {
    OrbitSpec spec{&c, column_winding(c.A)};

    double prev_est = 0.0;
    bool have_prev = false;
    for (long L = opts.initial_orbit; L <= opts.max_orbit; L *= 2) {
        std::vector<double> ests(opts.phases);
        for (int i = 0; i < opts.phases; ++i) {
            double x0 = (i + 0.5) / opts.phases;
            double beta0 = double(i) / (2.0 * opts.phases);
            ests[i] = weighted_rotation(spec, x0, beta0, L);
        }
        double mean = 0.0;
        for (double e : ests) mean += e;
        mean /= opts.phases;
        double spread = 0.0;
        for (double e : ests) spread = std::max(spread, std::abs(e - mean));

        double step = have_prev ? std::abs(mean - prev_est) : 1.0;
        if (spread + step < opts.target || L == opts.max_orbit) {
            if (L == opts.max_orbit && spread > opts.divergence_floor)
                throw Error(ErrorCode::NonConvergent, "rotation number spread did not settle");
            RotationNumberEstimate out;
            double rho = mean + 0.5 * spec.degree;
            rho -= std::floor(rho);
            out.rho = rho;
            out.error_bound = std::max(spread + step, 1e-12);
            out.orbit_length = L;
            out.degree = spec.degree;
            return out;
        }
        prev_est = mean;
        have_prev = true;
    }
    throw Error(ErrorCode::NonConvergent, "rotation number did not converge");
}

double lyapunov(const Cocycle& c, long L) {
    if (L < 100) throw Error(ErrorCode::InvalidArgument, "lyapunov needs L >= 100");
    const int phases = 8;
    double acc = 0.0;
    for (int i = 0; i < phases; ++i) {
        double x = (i + 0.37) / phases;
        double ux = std::cos(kTwoPi * i / (2.0 * phases));
        double uy = std::sin(kTwoPi * i / (2.0 * phases));
        double sum = 0.0;
        for (long j = 0; j < L; ++j) {
            auto M = c.A.eval(x);
            double wx = M[0][0] * ux + M[0][1] * uy;
            double wy = M[1][0] * ux + M[1][1] * uy;
            double nrm = std::hypot(wx, wy);
            sum += std::log(nrm);
            ux = wx / nrm;
            uy = wy / nrm;
            x += c.alpha;
            x -= std::floor(x);
        }
        acc += sum / double(L);
    }
    return acc / phases;
}

IteratedDefect iterated_defect(const DecomposedCocycle& d, const BigInt& n) {
    Cocycle c;
    c.alpha = d.alpha;
    c.A = rotation_mat(d.phi) + d.F;
    c.A.set_sl2(true);
    IteratedDefect out;
    out.n = n;
    TorusFn s = birkhoff_sum(d.phi, d.alpha, n);
    out.xi = iterate(c, n) - rotation_mat(s);
    out.norm0 = out.xi.sup_norm();
    out.norm1 = out.norm0 + out.xi.derivative(1).sup_norm();
    return out;
}

}  // namespace ccr
