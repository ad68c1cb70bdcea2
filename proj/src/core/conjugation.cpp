#include "core/conjugation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/fft.hpp"

namespace ccr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

MatFn rotation_transpose(const MatFn& r) {
    MatFn t;
    t.at(0, 0) = r.at(0, 0);
    t.at(0, 1) = r.at(1, 0);
    t.at(1, 0) = r.at(0, 1);
    t.at(1, 1) = r.at(1, 1);
    t.set_sl2(true);
    return t;
}

// log(Id + Y) by the alternating power series; caller guarantees ||Y||_0 < 1/2.
MatFn matrix_log_series(const MatFn& y, double norm_y, double chop_tol) {
    MatFn g = y;
    MatFn term = y;
    double bound = norm_y;
    for (int h = 2; h <= 64; ++h) {
        bound *= norm_y;
        if (bound / h < 1e-17) break;
        term = (term * y).chopped(chop_tol);
        double coeff = (h % 2 == 0) ? -1.0 / h : 1.0 / h;
        g = g + term * coeff;
    }
    return g.chopped(chop_tol);
}

}  // namespace

std::pair<double, double> ellipticity_range(const TorusFn& theta) {
    int m = std::max(64, fft::next_pow2(8 * (theta.bandwidth() + 1)));
    double pmin = -1.0, pmax = -1.0;
    for (int round = 0; round < 5; ++round) {
        double mn = 1e300, mx = 0.0;
        for (double t : theta.samples(m)) {
            double e = 2.0 * std::abs(std::sin(kTwoPi * t));
            mn = std::min(mn, e);
            mx = std::max(mx, e);
        }
        if (pmin >= 0.0 && std::abs(mn - pmin) <= 1e-10 && std::abs(mx - pmax) <= 1e-10)
            return {mn, mx};
        pmin = mn;
        pmax = mx;
        m *= 2;
    }
    return {pmin, pmax};
}

EllipticResult elliptic_reduce(const TorusFn& phi_bar, const MatFn& F_bar, int /*n_label*/,
                               const EllipticOptions& opts) {
    EllipticResult res;

    auto ell0 = ellipticity_range(phi_bar);
    res.ellipticity_min = ell0.first;
    if (ell0.first < opts.ellipticity_floor)
        throw Error(ErrorCode::ResonantAngle,
                    "||R_{2 phi} - Id|| dips to " + std::to_string(ell0.first) + " on the grid");

    double f_norm = F_bar.sup_norm();
    if (opts.enforce_smallness &&
        f_norm >= opts.smallness_ratio * std::min(1.0, ell0.first))
        throw Error(ErrorCode::PreconditionViolated,
                    "||F||_0 = " + std::to_string(f_norm) +
                        " not below ratio * min{1, ||R_{2 phi} - Id||}");

    MatFn A = rotation_mat(phi_bar, opts.bandwidth_cap) + F_bar;
    double det_dev = A.max_det_deviation();
    if (det_dev > 1e-8)
        throw Error(ErrorCode::PreconditionViolated,
                    "input not SL(2): sup|det - 1| = " + std::to_string(det_dev));
    A.set_sl2(true);
    TorusFn theta = phi_bar;
    MatFn B = MatFn::identity();

    for (int k = 0; k < opts.max_inner; ++k) {
        MatFn R = rotation_mat(theta, opts.bandwidth_cap);
        MatFn Y = (A * rotation_transpose(R)).chopped(opts.chop_tol) - MatFn::identity();
        double ny = Y.sup_norm();
        if (!std::isfinite(ny))
            throw Error(ErrorCode::NonFinite, "non-finite entries in elliptic iteration");
        if (ny >= 0.5)
            throw Error(ErrorCode::LogDiverges,
                        "||A R_{-theta} - Id||_0 = " + std::to_string(ny) + " >= 1/2");

        MatFn G = matrix_log_series(Y, ny, opts.chop_tol);
        // drop the trace part (= log det / 2, conjugation-invariant; only rounding-level
        // for SL(2) input) so it cannot mask convergence of the reducible part
        TorusFn half_tr = (G.at(0, 0) + G.at(1, 1)) * 0.5;
        G.at(0, 0) = G.at(0, 0) - half_tr;
        G.at(1, 1) = G.at(1, 1) - half_tr;
        double gnorm = G.sup_norm();
        res.g_norms.push_back(gnorm);
        res.inner_iters = k + 1;
        if (gnorm < opts.inner_tol) {
            res.converged = true;
            break;
        }
        bool stagnant = k >= 2 && gnorm >= 0.9 * res.g_norms[k - 1] &&
                        res.g_norms[k - 1] >= 0.9 * res.g_norms[k - 2];
        if (stagnant && gnorm <= 100.0 * opts.inner_tol) {
            // quadratic descent bottomed out at the rounding floor; good enough
            res.converged = true;
            break;
        }
        if (stagnant) {
            std::string hist;
            for (double g : res.g_norms) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " %.3e", g);
                hist += buf;
            }
            throw Error(ErrorCode::NoContraction, "||G|| stagnated at" + hist);
        }

        // G = [[x, y - 2 pi z], [y + 2 pi z, -x]] + (trace part, discarded)
        TorusFn gx = (G.at(0, 0) - G.at(1, 1)) * 0.5;
        TorusFn gy = (G.at(0, 1) + G.at(1, 0)) * 0.5;
        TorusFn gz = (G.at(1, 0) - G.at(0, 1)) * (1.0 / (2.0 * kTwoPi));

        auto ell = ellipticity_range(theta);
        res.ellipticity_min = std::min(res.ellipticity_min, ell.first);
        if (ell.first < opts.ellipticity_floor)
            throw Error(ErrorCode::ResonantAngle,
                        "theta drifted into resonance, ||R_{2 theta} - Id|| = " +
                            std::to_string(ell.first));

        // (xt, yt) = (R_{2 theta} - Id)^{-1} (x, y), pointwise; det = 4 sin^2(2 pi theta)
        auto solved = map_pointwise({&gx, &gy, &theta}, 2, [](const double* in, double* out) {
            double psi = 2.0 * kTwoPi * in[2];
            double c = std::cos(psi) - 1.0, s = std::sin(psi);
            double det = c * c + s * s;  // = 2 - 2 cos(psi)
            out[0] = (c * in[0] + s * in[1]) / det;
            out[1] = (-s * in[0] + c * in[1]) / det;
        }, opts.bandwidth_cap);
        const TorusFn& xt = solved[0];
        const TorusFn& yt = solved[1];

        MatFn v;
        v.at(0, 0) = xt;
        v.at(0, 1) = yt;
        v.at(1, 0) = yt;
        v.at(1, 1) = -xt;

        if (opts.check_commutator) {
            MatFn gsym;
            gsym.at(0, 0) = gx;
            gsym.at(0, 1) = gy;
            gsym.at(1, 0) = gy;
            gsym.at(1, 1) = -gx;
            double resid = (v * R - R * v + gsym * R).sup_norm();
            res.commutator_residual = std::max(res.commutator_residual, resid);
        }

        // exp(v) = cosh(s) Id + sinh(s)/s v, s = sqrt(xt^2 + yt^2); det = 1 exactly
        auto ev = map_pointwise({&xt, &yt}, 3, [](const double* in, double* out) {
            double s2 = in[0] * in[0] + in[1] * in[1];
            double s = std::sqrt(s2);
            double ch = std::cosh(s);
            double sh = s > 1e-8 ? std::sinh(s) / s : 1.0 + s2 / 6.0;
            out[0] = ch + sh * in[0];
            out[1] = sh * in[1];
            out[2] = ch - sh * in[0];
        }, opts.bandwidth_cap);
        MatFn E;
        E.at(0, 0) = ev[0];
        E.at(0, 1) = ev[1];
        E.at(1, 0) = ev[1];
        E.at(1, 1) = ev[2];
        E.set_sl2(true);

        theta = (theta + gz).chopped(opts.chop_tol);
        A = (E * A * E.inverse()).chopped(opts.chop_tol);
        A.set_sl2(true);
        B = (E * B).chopped(opts.chop_tol);
    }

    if (!res.converged)
        throw Error(ErrorCode::NonConvergent,
                    "elliptic iteration hit max_inner with ||G|| = " +
                        std::to_string(res.g_norms.empty() ? -1.0 : res.g_norms.back()));

    res.B = B;
    res.phi = theta;
    return res;
}

CheapTrickResult cheap_trick(double alpha, const BigInt& q_n, int n_label,
                             const TorusFn& phi_bar, const MatFn& F_bar,
                             const CheapTrickOptions& opts) {
    if (q_n < 1) throw Error(ErrorCode::InvalidArgument, "cheap_trick needs q_n >= 1");

    CheapTrickResult res;
    auto ell0 = ellipticity_range(phi_bar);
    res.measured_inverse_norm = ell0.first > 0.0 ? 1.0 / ell0.first : 1e300;
    if (opts.enforce_preconditions) {
        double n_eff = std::max(n_label, 1);
        if (res.measured_inverse_norm > opts.ellipticity_C * n_eff * n_eff)
            throw Error(ErrorCode::PreconditionViolated,
                        "||(R_{2 phi} - Id)^{-1}||_0 = " +
                            std::to_string(res.measured_inverse_norm) + " exceeds C n^2");
        double f0 = F_bar.sup_norm();
        if (HpReal(f0) * HpReal(q_n) >= 1)
            throw Error(ErrorCode::PreconditionViolated,
                        "||F||_0 = " + std::to_string(f0) + " not below 1/q_n");
    }

    MatFn A_cur = rotation_mat(phi_bar, opts.elliptic.bandwidth_cap) + F_bar;
    A_cur.set_sl2(true);
    TorusFn phi_cur = phi_bar;
    MatFn F_cur = F_bar;
    MatFn B_total = MatFn::identity();

    for (int k = 0; k <= opts.r0; ++k) {
        EllipticResult er;
        try {
            er = elliptic_reduce(phi_cur, F_cur, n_label, opts.elliptic);
        } catch (const Error& e) {
            throw Error(e.code(), "pass " + std::to_string(k) + ": " + e.what());
        }

        MatFn b_shift = er.B.translated_exact(q_n, alpha);
        MatFn b_inv = er.B.inverse();
        MatFn A_next = (b_shift * A_cur * b_inv).chopped(opts.elliptic.chop_tol);
        A_next.set_sl2(true);
        MatFn F_next =
            (A_next - rotation_mat(er.phi, opts.elliptic.bandwidth_cap)).chopped(opts.elliptic.chop_tol);

        if (opts.check_defect_identity) {
            MatFn alt = ((b_shift - er.B) * A_cur * b_inv).chopped(opts.elliptic.chop_tol);
            res.defect_identity_residual =
                std::max(res.defect_identity_residual, (F_next - alt).sup_norm());
        }

        res.B_head = B_total;
        res.B_last = er.B;
        B_total = (er.B * B_total).chopped(opts.elliptic.chop_tol);
        A_cur = A_next;
        phi_cur = er.phi;
        F_cur = F_next;

        PassRecord rec;
        rec.pass = k;
        rec.norm0 = F_cur.sup_norm();
        rec.norm1 = rec.norm0 + F_cur.derivative(1).sup_norm();
        rec.inner_iters = er.inner_iters;
        rec.ellipticity_min = er.ellipticity_min;
        res.per_pass.push_back(rec);
        res.passes = k + 1;

        if (rec.norm0 < opts.floor_tol) {
            res.early_exit = true;
            break;
        }
    }

    res.B = B_total;
    res.phi = phi_cur;
    res.F = F_cur;
    return res;
}

}  // namespace ccr
