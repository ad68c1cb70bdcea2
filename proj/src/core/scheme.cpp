#include "core/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "core/fft.hpp"

namespace ccr {

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Converged: return "Converged";
        case Outcome::ResonanceBlocked: return "ResonanceBlocked";
        case Outcome::PreconditionFailed: return "PreconditionFailed";
        case Outcome::BudgetExhausted: return "BudgetExhausted";
        case Outcome::NumericalFailure: return "NumericalFailure";
    }
    return "NumericalFailure";
}

std::optional<MatFn> elliptic_normalizer(const std::array<std::array<double, 2>, 2>& M) {
    double a = M[0][0], b = M[0][1], c = M[1][0], d = M[1][1];
    // the mean of a rotation-valued map is kappa * R with kappa <= 1; scale it
    // back to SL(2) so the eigenbasis comes out orthogonal when M is conformal
    double det = a * d - b * c;
    if (!(det > 1e-12)) return std::nullopt;
    double rs = 1.0 / std::sqrt(det);
    a *= rs; b *= rs; c *= rs; d *= rs;
    double tr = a + d;
    if (std::abs(tr) >= 2.0 - 1e-12) return std::nullopt;
    double ct = tr / 2.0;
    double st = std::sqrt(1.0 - ct * ct);
    // eigenvector M w = e^{it} w, w = u + iv; P = [u v] gives P^{-1} M P = R_{-t}
    double u1, u2, v1, v2;
    if (std::abs(b) >= std::abs(c)) {
        u1 = b; u2 = ct - a; v1 = 0.0; v2 = st;
    } else {
        u1 = ct - d; u2 = c; v1 = st; v2 = 0.0;
    }
    double detP = u1 * v2 - u2 * v1;
    if (detP < 0) { v1 = -v1; v2 = -v2; detP = -detP; }
    double s = std::sqrt(detP);
    u1 /= s; u2 /= s; v1 /= s; v2 /= s;
    // C = P^{-1}, det P = 1 after normalization
    double c00 = v2, c01 = -v1, c10 = -u2, c11 = u1;
    // polar: C = Q S with S = sqrt(C^T C) = (T + Id)/sqrt(tr T + 2) for det T = 1
    double t00 = c00 * c00 + c10 * c10;
    double t01 = c00 * c01 + c10 * c11;
    double t11 = c01 * c01 + c11 * c11;
    double denom = std::sqrt(t00 + t11 + 2.0);
    MatFn S = MatFn::constant((t00 + 1.0) / denom, t01 / denom, t01 / denom,
                              (t11 + 1.0) / denom);
    S.set_sl2(true);
    return S;
}

namespace {

// min over the circle of p^2 + r^2 for the conformal pair, on a refined grid
double min_conformal_det(const TorusFn& p, const TorusFn& r) {
    TorusFn d = p * p + r * r;
    int m = std::max(64, fft::next_pow2(8 * (d.bandwidth() + 1)));
    double mn = 1e300;
    for (double v : d.samples(m)) mn = std::min(mn, v);
    return mn;
}

double resonance_threshold(double epsilon, int n_h) {
    int n_eff = std::max(n_h, 1);
    return epsilon / (double(n_eff) * n_eff);
}

double circle_dist(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

SchemeState reduce_step(const SchemeState& state, const Subsequence& sub,
                        const SchemeConfig& cfg, GoBackDiagnostics* diag) {
    if (state.h >= sub.count())
        throw Error(ErrorCode::InvalidArgument, "subsequence exhausted at step " +
                                                    std::to_string(state.h));
    int n_h = sub.indices[state.h];
    const BigInt& q = sub.q_values[state.h];
    double alpha = state.alpha;

    double res_value = dist_to_integer(frac_times(2 * q, state.rho));
    if (res_value < resonance_threshold(cfg.epsilon, n_h))
        throw Error(ErrorCode::ResonantAngle,
                    "||2 q_{n_h} rho|| = " + std::to_string(res_value) +
                        " under threshold at h = " + std::to_string(state.h));

    DecomposedCocycle dc;
    dc.alpha = alpha;
    dc.phi = state.phi;
    dc.F = state.F;
    IteratedDefect idef = iterated_defect(dc, q);
    TorusFn phi_bar = birkhoff_sum(state.phi, alpha, q);

    CheapTrickOptions cto;
    cto.r0 = cfg.r0;
    cto.ellipticity_C = cfg.ellipticity_C;
    cto.elliptic.inner_tol = cfg.inner_tol;
    cto.elliptic.bandwidth_cap = cfg.bandwidth_cap;
    cto.elliptic.chop_tol = cfg.chop_tol;
    CheapTrickResult ct = cheap_trick(alpha, q, n_h, phi_bar, idef.xi, cto);

    MatFn A_h = rotation_mat(state.phi, cfg.bandwidth_cap) + state.F;
    A_h.set_sl2(true);
    MatFn B_inv = ct.B.inverse();
    MatFn At = (ct.B.translated(alpha) * A_h * B_inv).chopped(cfg.chop_tol);
    At.set_sl2(true);

    MatFn L = q_project(At);
    MatFn conf = At - L;
    double mdet = min_conformal_det(conf.at(0, 0), conf.at(1, 0));
    if (mdet < cfg.min_goback_det)
        throw Error(ErrorCode::NotNearRotation,
                    "go-back: min det(A~ - L) = " + std::to_string(mdet) + " on grid");
    AngleLift lift = conformal_angle(conf.at(0, 0), conf.at(1, 0), cfg.bandwidth_cap);
    if (lift.winding != 0)
        throw Error(ErrorCode::NotNearRotation, "go-back: conformal part winds");
    TorusFn phi_next = lift.phi;
    MatFn F_next = (At - rotation_mat(phi_next, cfg.bandwidth_cap)).chopped(cfg.chop_tol);

    MatFn B_next = (ct.B * state.B_cum).chopped(cfg.chop_tol);
    B_next.set_sl2(true);
    MatFn recon = B_next.translated(alpha) * state.A0 * B_next.inverse() -
                  (rotation_mat(phi_next, cfg.bandwidth_cap) + F_next);
    double drift = recon.sup_norm();
    if (drift > cfg.reconstruction_tol)
        throw Error(ErrorCode::NonConvergent,
                    "state invariant drift " + std::to_string(drift) + " at step " +
                        std::to_string(state.h));

    if (diag) {
        diag->L = L;
        diag->L1 = q_project(At.translated_exact(q, alpha) - At);
        MatFn Abar = rotation_mat(phi_bar, cfg.bandwidth_cap) + idef.xi;
        Abar.set_sl2(true);
        MatFn RtF = rotation_mat(ct.phi, cfg.bandwidth_cap) + ct.F;
        MatFn bb_q = ct.B_last.translated_exact(q, alpha);
        MatFn bt_q = ct.B_head.translated_exact(q, alpha);
        diag->J1 = (ct.B_last.translated(alpha) - bb_q.translated(alpha)) *
                   bt_q.translated(alpha) * A_h.translated_exact(q, alpha) *
                   B_inv.translated_exact(q, alpha) * RtF;
        diag->J2 = (At.translated_exact(q, alpha) - At) * RtF;
        // note: the paper states J3 with (B_bar(x) - B_bar(x+q a)); the identity
        // only closes with the opposite sign, which is what we use
        diag->J3 = At * (bb_q - ct.B_last) * bt_q * Abar * B_inv;
        MatFn lhs = rotation_mat(ct.phi, cfg.bandwidth_cap).translated(alpha) * At -
                    At * rotation_mat(ct.phi, cfg.bandwidth_cap);
        diag->identity_residual = ((diag->J1 + diag->J2 + diag->J3) - lhs).sup_norm();
    }

    SchemeState next;
    next.h = state.h + 1;
    next.alpha = alpha;
    next.phi = phi_next;
    next.F = F_next;
    next.B_cum = B_next;
    next.A0 = state.A0;
    next.rho = state.rho;
    next.rho_err = state.rho_err;
    return next;
}

double verify_conjugacy(const MatFn& B, const Cocycle& c, const TorusFn& phi) {
    int bw = std::max({B.bandwidth(), c.A.bandwidth(), phi.bandwidth()});
    int m = std::max(256, fft::next_pow2(4 * 8 * (bw + 1)));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
        double x = double(j) / m;
        auto Bs = B.eval(x + c.alpha);
        auto A = c.A.eval(x);
        auto Bx = B.eval(x);
        double det = Bx[0][0] * Bx[1][1] - Bx[0][1] * Bx[1][0];
        std::array<std::array<double, 2>, 2> Bi = {
            {{Bx[1][1] / det, -Bx[0][1] / det}, {-Bx[1][0] / det, Bx[0][0] / det}}};
        double ph = kTwoPi * phi.evaluate(x);
        double cp = std::cos(ph), sp = std::sin(ph);
        double acc = 0.0;
        // (B(x+a) A(x)) B(x)^{-1} - R_phi
        std::array<std::array<double, 2>, 2> BA;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                BA[i][k] = Bs[i][0] * A[0][k] + Bs[i][1] * A[1][k];
        std::array<std::array<double, 2>, 2> R = {{{cp, -sp}, {sp, cp}}};
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                double e = BA[i][0] * Bi[0][k] + BA[i][1] * Bi[1][k] - R[i][k];
                acc += e * e;
            }
        worst = std::max(worst, std::sqrt(acc));
    }
    return worst;
}

BirkhoffCloseness birkhoff_closeness(const TorusFn& phi, double alpha,
                                     const ConvergentTable& table, int n) {
    if (n < 0 || n >= table.count())
        throw Error(ErrorCode::InvalidArgument, "n outside the stored convergent table");
    const BigInt& qn = table.denominators[n];
    TorusFn S = birkhoff_sum(phi, alpha, qn);
    BirkhoffCloseness out;
    out.value = (S - TorusFn(S.coeff(0).real())).sup_norm();
    for (int k = 0; k < table.count(); ++k) {
        const BigInt& qk = table.denominators[k];
        if (qk * qk < qn && qn < qk * qk * qk * qk) { out.lemma10 = true; break; }
    }
    if (n + 1 < table.count())
        out.lemma11 = table.denominators[n + 1] > qn * qn;
    return out;
}

namespace {

Outcome outcome_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ResonantAngle: return Outcome::ResonanceBlocked;
        case ErrorCode::PreconditionViolated: return Outcome::PreconditionFailed;
        default: return Outcome::NumericalFailure;
    }
}

}  // namespace

SchemeReport rotations_reduce(const Cocycle& c, const SchemeConfig& cfg,
                              const AlphaSpec* alpha_spec) {
    SchemeReport rep;
    rep.defect_target = 100.0 * cfg.target_norm;

    ConvergentTable table;
    Subsequence sub;
    try {
        table = alpha_spec
                    ? expand(alpha_spec->precise, cfg.cf_terms, cfg.cf_q_cap,
                             alpha_spec->uncertainty)
                    : expand(c.alpha, cfg.cf_terms, cfg.cf_q_cap);
        sub = select_subsequence(table);
    } catch (const Error& e) {
        rep.outcome = Outcome::PreconditionFailed;
        rep.message = std::string("continued fractions: ") + e.what();
        return rep;
    }

    try {
        auto rn = rotation_number(c, cfg.rotnum);
        rep.rho = rn.rho;
        rep.rho_err = rn.error_bound;
    } catch (const Error& e) {
        rep.outcome = Outcome::NumericalFailure;
        rep.message = std::string("rotation number: ") + e.what();
        return rep;
    }

    // constant pre-conjugation: bring an elliptic mean matrix to a rotation, so
    // the decomposition starts from a genuinely small defect
    MatFn A_work = c.A;
    MatFn B0 = MatFn::identity();
    std::array<std::array<double, 2>, 2> mean = {
        {{c.A.at(0, 0).coeff(0).real(), c.A.at(0, 1).coeff(0).real()},
         {c.A.at(1, 0).coeff(0).real(), c.A.at(1, 1).coeff(0).real()}}};
    if (auto S = elliptic_normalizer(mean)) {
        B0 = *S;
        A_work = (B0 * c.A * B0.inverse()).chopped(cfg.chop_tol);
        A_work.set_sl2(true);
    }

    SchemeState state;
    try {
        Cocycle cw;
        cw.alpha = c.alpha;
        cw.A = A_work;
        DecomposedCocycle dec = decompose(cw, cfg.min_goback_det);
        state.phi = dec.phi;
        state.F = dec.F;
    } catch (const Error& e) {
        rep.outcome = Outcome::PreconditionFailed;
        rep.message = std::string("decompose: ") + e.what();
        return rep;
    }
    state.h = 0;
    state.alpha = c.alpha;
    state.B_cum = B0;
    state.A0 = c.A;
    state.rho = rep.rho;
    state.rho_err = rep.rho_err;

    bool success = false;
    for (int h = 0;; ++h) {
        StepRecord rec;
        rec.h = h;
        bool have_index = h < sub.count();
        if (have_index) {
            rec.n_h = sub.indices[h];
            rec.q_nh = sub.q_values[h];
            rec.resonance_value = dist_to_integer(frac_times(2 * rec.q_nh, state.rho));
        }
        rec.norm0 = state.F.sup_norm();
        rec.norm1 = rec.norm0 + state.F.derivative(1).sup_norm();
        rec.norm_high = state.F.cr_norm(cfg.high_order);
        rec.bandwidth = std::max(state.F.bandwidth(), state.phi.bandwidth());

        if (rec.norm1 <= cfg.target_norm) {
            rec.outcome_so_far = outcome_name(Outcome::Converged);
            rep.trace.push_back(rec);
            rep.steps_used = h;
            success = true;
            break;
        }
        if (h >= cfg.max_steps) {
            rec.outcome_so_far = outcome_name(Outcome::BudgetExhausted);
            rep.trace.push_back(rec);
            rep.outcome = Outcome::BudgetExhausted;
            rep.message = "max_steps reached with ||F||_1 = " + std::to_string(rec.norm1);
            rep.steps_used = h;
            rep.final_defect = rec.norm0;
            return rep;
        }
        if (!have_index) {
            rec.outcome_so_far = outcome_name(Outcome::BudgetExhausted);
            rep.trace.push_back(rec);
            rep.outcome = Outcome::BudgetExhausted;
            rep.message = "convergent subsequence exhausted before target";
            rep.steps_used = h;
            rep.final_defect = rec.norm0;
            return rep;
        }

        try {
            GoBackDiagnostics diag;
            SchemeState next =
                reduce_step(state, sub, cfg, cfg.goback_diagnostics ? &diag : nullptr);
            if (cfg.goback_diagnostics) rep.diagnostics.push_back(diag);
            state = next;
        } catch (const Error& e) {
            Outcome o = outcome_for(e);
            // a rotation number sitting on an upcoming resonant scale poisons
            // the steps leading into it; report the cause, not the symptom
            std::string note;
            if (o != Outcome::ResonanceBlocked) {
                auto reports = check_resonances(state.rho, sub, cfg.epsilon);
                for (int hh = h; hh <= h + 2 && hh < static_cast<int>(reports.size()); ++hh) {
                    if (!reports[hh].passed) {
                        o = Outcome::ResonanceBlocked;
                        note = "rho resonant at the h = " + std::to_string(hh) +
                               " scale (q = " + reports[hh].q.str() + "); ";
                        break;
                    }
                }
            }
            rec.outcome_so_far = outcome_name(o);
            rep.trace.push_back(rec);
            rep.outcome = o;
            rep.message = note + e.what();
            rep.steps_used = h;
            rep.final_defect = rec.norm0;
            return rep;
        }
        rec.outcome_so_far = "running";
        rep.trace.push_back(rec);

        if (cfg.recheck_rho && h == 0) {
            // rho is a conjugacy invariant; a drift here means the numerics lied
            try {
                Cocycle cc;
                cc.alpha = c.alpha;
                cc.A = rotation_mat(state.phi, cfg.bandwidth_cap) + state.F;
                cc.A.set_sl2(true);
                auto rn2 = rotation_number(cc, cfg.rotnum);
                double d = circle_dist(rn2.rho, state.rho);
                if (d > 10.0 * (rn2.error_bound + state.rho_err)) {
                    rep.outcome = Outcome::NumericalFailure;
                    rep.message = "rotation number drifted by " + std::to_string(d) +
                                  " under conjugation";
                    rep.steps_used = state.h;
                    rep.final_defect = state.F.sup_norm();
                    return rep;
                }
            } catch (const Error& e) {
                rep.outcome = Outcome::NumericalFailure;
                rep.message = std::string("rho re-check: ") + e.what();
                rep.steps_used = state.h;
                return rep;
            }
        }
    }

    if (success) {
        rep.B = state.B_cum;
        rep.phi = state.phi;
        rep.has_conjugacy = true;
        rep.final_defect = verify_conjugacy(rep.B, c, rep.phi);
        if (rep.final_defect <= rep.defect_target) {
            rep.outcome = Outcome::Converged;
        } else {
            rep.outcome = Outcome::NumericalFailure;
            rep.message = "independent defect " + std::to_string(rep.final_defect) +
                          " above target";
        }
    }
    return rep;
}

}  // namespace ccr
