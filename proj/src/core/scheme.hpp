#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/conjugation.hpp"
#include "core/presets.hpp"

namespace ccr {

enum class Outcome {
    Converged,
    ResonanceBlocked,
    PreconditionFailed,
    BudgetExhausted,
    NumericalFailure,
};

std::string outcome_name(Outcome o);

struct SchemeConfig {
    double epsilon = 0.05;      // resonance threshold: ||2 q_{n_h} rho|| >= epsilon / max(n_h,1)^2
    int r0 = 3;                 // r0 + 1 cheap-trick passes per step
    int max_steps = 12;
    double target_norm = 1e-10;  // stop when ||F_h||_1 below
    double ellipticity_C = 10.0;
    double det_tol = 1e-8;
    double inner_tol = 1e-14;
    double reconstruction_tol = 1e-9;
    double min_goback_det = 1e-10;
    int high_order = 5;  // the "norm_high" ledger order
    int bandwidth_cap = kDefaultBandwidthCap;
    double chop_tol = 1e-15;
    int cf_terms = 40;
    BigInt cf_q_cap = BigInt(1) << 80;
    bool goback_diagnostics = false;
    bool recheck_rho = true;
    RotationNumberOptions rotnum;
};

struct StepRecord {
    int h = 0;
    int n_h = 0;
    BigInt q_nh;
    double resonance_value = 0.0;
    double norm0 = 0.0;
    double norm1 = 0.0;
    double norm_high = 0.0;
    int bandwidth = 0;
    std::string outcome_so_far;  // "running" or a final outcome name
};

struct GoBackDiagnostics {
    MatFn L;   // Q(A~)
    MatFn L1;  // Q(A~(.+q a) - A~)
    MatFn J1, J2, J3;
    double identity_residual = 0.0;  // ||J1+J2+J3 - (R_phi~(.+a) A~ - A~ R_phi~)||_0
};

struct SchemeState {
    int h = 0;
    double alpha = 0.0;
    TorusFn phi;
    MatFn F;
    MatFn B_cum;
    MatFn A0;  // original cocycle map, for the per-step reconstruction invariant
    double rho = 0.0;
    double rho_err = 0.0;
};

struct SchemeReport {
    Outcome outcome = Outcome::NumericalFailure;
    std::string message;
    double final_defect = 0.0;  // independent verify_conjugacy value when B present
    double defect_target = 0.0; // Converged guarantees final_defect <= this
    int steps_used = 0;
    double rho = 0.0;
    double rho_err = 0.0;
    std::vector<StepRecord> trace;
    bool has_conjugacy = false;
    MatFn B;
    TorusFn phi;
    std::vector<GoBackDiagnostics> diagnostics;
};

/// One inductive step of Proposition 1: iterate at q_{n_h}, cheap trick over the
/// frequency q_{n_h} alpha, then the go-back construction at frequency alpha.
/// Throws ccr::Error on obstructions; rotations_reduce maps those to outcomes.
SchemeState reduce_step(const SchemeState& state, const Subsequence& sub,
                        const SchemeConfig& cfg, GoBackDiagnostics* diag = nullptr);

/// Full reduction loop. Mathematical obstructions are reported as outcomes,
/// never exceptions. alpha_spec, when given, supplies extra precision for the
/// continued-fraction expansion of c.alpha.
SchemeReport rotations_reduce(const Cocycle& c, const SchemeConfig& cfg = {},
                              const AlphaSpec* alpha_spec = nullptr);

/// Independent end-to-end check: sup over a 4x-oversampled grid of
/// ||B(x+alpha) A(x) B(x)^{-1} - R_phi(x)||_F, via direct pointwise evaluation.
double verify_conjugacy(const MatFn& B, const Cocycle& c, const TorusFn& phi);

struct BirkhoffCloseness {
    double value = 0.0;  // |S_{q_n} phi - q_n phi^(0)|_0
    bool lemma10 = false;  // exists k with q_k^2 < q_n < q_k^4
    bool lemma11 = false;  // q_{n+1} > q_n^2
};

BirkhoffCloseness birkhoff_closeness(const TorusFn& phi, double alpha,
                                     const ConvergentTable& table, int n);

/// Constant C with C M C^{-1} = R_theta for elliptic M (|tr| < 2), chosen
/// symmetric positive definite (the polar factor), which minimizes ||C - Id||
/// over the left-rotation freedom. Returns nullopt when M is not elliptic.
std::optional<MatFn> elliptic_normalizer(const std::array<std::array<double, 2>, 2>& M);

}  // namespace ccr
