#include "core/serialize.hpp"

#include <cmath>

namespace ccr {

json to_json(const TorusFn& f) {
    json coeffs = json::array();
    for (int l = 0; l <= f.bandwidth(); ++l) {
        auto c = f.coeff(l);
        coeffs.push_back({c.real(), c.imag()});
    }
    return json{{"bandwidth", f.bandwidth()}, {"coefficients", coeffs}};
}

TorusFn torus_fn_from_json(const json& j) {
    if (!j.is_object() || !j.contains("bandwidth") || !j.contains("coefficients"))
        throw Error(ErrorCode::InvalidArgument, "TorusFn JSON needs bandwidth + coefficients");
    int n = j.at("bandwidth").get<int>();
    const json& cs = j.at("coefficients");
    if (!cs.is_array() || static_cast<int>(cs.size()) != n + 1)
        throw Error(ErrorCode::InvalidArgument, "TorusFn JSON: need bandwidth+1 coefficients");
    std::vector<std::complex<double>> c(n + 1);
    for (int l = 0; l <= n; ++l) {
        const json& p = cs.at(l);
        if (!p.is_array() || p.size() != 2)
            throw Error(ErrorCode::InvalidArgument, "TorusFn JSON: coefficient must be [re, im]");
        double re = p.at(0).get<double>(), im = p.at(1).get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw Error(ErrorCode::NonFinite, "TorusFn JSON: non-finite coefficient");
        c[l] = {re, im};
    }
    // data stores l >= 0 only; a real function additionally needs real c(0)
    if (std::abs(c[0].imag()) > 1e-14 * std::max(1.0, std::abs(c[0].real())))
        throw Error(ErrorCode::InvalidArgument,
                    "TorusFn JSON not Hermitian-completable: c(0) has imaginary part");
    c[0] = c[0].real();
    return TorusFn::from_coefficients(std::move(c));
}

json to_json(const MatFn& m) {
    return json{{"entries",
                 {to_json(m.at(0, 0)), to_json(m.at(0, 1)), to_json(m.at(1, 0)),
                  to_json(m.at(1, 1))}},
                {"sl2", m.sl2()}};
}

MatFn mat_fn_from_json(const json& j) {
    if (!j.is_object() || !j.contains("entries") || j.at("entries").size() != 4)
        throw Error(ErrorCode::InvalidArgument, "MatFn JSON needs 4 entries");
    MatFn m;
    for (int k = 0; k < 4; ++k)
        m.at(k / 2, k % 2) = torus_fn_from_json(j.at("entries").at(k));
    m.set_sl2(j.value("sl2", false));
    return m;
}

json to_json(const Cocycle& c) {
    return json{{"alpha", c.alpha}, {"A", to_json(c.A)}};
}

Cocycle cocycle_from_json(const json& j) {
    Cocycle c;
    c.alpha = j.at("alpha").get<double>();
    c.A = mat_fn_from_json(j.at("A"));
    return c;
}

json to_json(const PassRecord& r) {
    return json{{"pass", r.pass},
                {"norm0", r.norm0},
                {"norm1", r.norm1},
                {"inner_iters", r.inner_iters},
                {"ellipticity_min", r.ellipticity_min}};
}

json to_json(const StepRecord& r) {
    return json{{"h", r.h},
                {"n_h", r.n_h},
                {"q_nh", r.q_nh.str()},
                {"resonance_value", r.resonance_value},
                {"norm0", r.norm0},
                {"norm1", r.norm1},
                {"norm_high", r.norm_high},
                {"bandwidth", r.bandwidth},
                {"outcome_so_far", r.outcome_so_far}};
}

json to_json(const SchemeReport& r) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back(to_json(t));
    return json{{"outcome", outcome_name(r.outcome)},
                {"message", r.message},
                {"final_defect", r.final_defect},
                {"defect_target", r.defect_target},
                {"steps_used", r.steps_used},
                {"rho", r.rho},
                {"rho_err", r.rho_err},
                {"trace", trace}};
}

json bundle_json(const SchemeReport& r) {
    json b{{"report", to_json(r)}};
    if (r.has_conjugacy) {
        b["B"] = to_json(r.B);
        b["phi"] = to_json(r.phi);
    }
    return b;
}

std::vector<double> RunConfig::energies() const {
    std::vector<double> es;
    if (E) es.push_back(*E);
    if (E_grid) {
        if (E_grid->count < 1)
            throw Error(ErrorCode::InvalidArgument, "E_grid.count must be >= 1");
        for (int i = 0; i < E_grid->count; ++i) {
            double t = E_grid->count == 1
                           ? 0.0
                           : double(i) / (E_grid->count - 1);
            es.push_back(E_grid->start + t * (E_grid->stop - E_grid->start));
        }
    }
    if (es.empty())
        throw Error(ErrorCode::InvalidArgument, "config needs E or E_grid");
    return es;
}

TorusFn RunConfig::potential_fn() const {
    if (potential.empty()) return TorusFn(0.0);
    std::vector<std::complex<double>> c;
    c.reserve(potential.size());
    for (const auto& p : potential) c.emplace_back(p[0], p[1]);
    if (std::abs(c[0].imag()) > 1e-14 * std::max(1.0, std::abs(c[0].real())))
        throw Error(ErrorCode::InvalidArgument, "potential c(0) must be real");
    c[0] = c[0].real();
    return TorusFn::from_coefficients(std::move(c));
}

json to_json(const SchemeConfig& cfg) {
    return json{{"epsilon", cfg.epsilon},
                {"r0", cfg.r0},
                {"max_steps", cfg.max_steps},
                {"target_norm", cfg.target_norm},
                {"ellipticity_C", cfg.ellipticity_C},
                {"det_tol", cfg.det_tol},
                {"inner_tol", cfg.inner_tol},
                {"reconstruction_tol", cfg.reconstruction_tol},
                {"min_goback_det", cfg.min_goback_det},
                {"high_order", cfg.high_order},
                {"bandwidth_cap", cfg.bandwidth_cap},
                {"chop_tol", cfg.chop_tol},
                {"cf_terms", cfg.cf_terms},
                {"cf_q_cap", cfg.cf_q_cap.str()},
                {"goback_diagnostics", cfg.goback_diagnostics},
                {"recheck_rho", cfg.recheck_rho}};
}

SchemeConfig scheme_config_from_json(const json& j) {
    SchemeConfig cfg;
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.r0 = j.value("r0", cfg.r0);
    cfg.max_steps = j.value("max_steps", cfg.max_steps);
    cfg.target_norm = j.value("target_norm", cfg.target_norm);
    cfg.ellipticity_C = j.value("ellipticity_C", cfg.ellipticity_C);
    cfg.det_tol = j.value("det_tol", cfg.det_tol);
    cfg.inner_tol = j.value("inner_tol", cfg.inner_tol);
    cfg.reconstruction_tol = j.value("reconstruction_tol", cfg.reconstruction_tol);
    cfg.min_goback_det = j.value("min_goback_det", cfg.min_goback_det);
    cfg.high_order = j.value("high_order", cfg.high_order);
    cfg.bandwidth_cap = j.value("bandwidth_cap", cfg.bandwidth_cap);
    cfg.chop_tol = j.value("chop_tol", cfg.chop_tol);
    cfg.cf_terms = j.value("cf_terms", cfg.cf_terms);
    if (j.contains("cf_q_cap")) cfg.cf_q_cap = BigInt(j.at("cf_q_cap").get<std::string>());
    cfg.goback_diagnostics = j.value("goback_diagnostics", cfg.goback_diagnostics);
    cfg.recheck_rho = j.value("recheck_rho", cfg.recheck_rho);
    if (cfg.epsilon <= 0 || cfg.r0 < 0 || cfg.max_steps <= 0 || cfg.target_norm <= 0)
        throw Error(ErrorCode::InvalidArgument, "scheme config values out of range");
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j{{"alpha", cfg.alpha}, {"scheme", to_json(cfg.scheme)}, {"width", cfg.width}};
    json pot = json::array();
    for (const auto& p : cfg.potential) pot.push_back({p[0], p[1]});
    j["potential"] = pot;
    if (cfg.E) j["E"] = *cfg.E;
    if (cfg.E_grid)
        j["E_grid"] = json{{"start", cfg.E_grid->start},
                           {"stop", cfg.E_grid->stop},
                           {"count", cfg.E_grid->count}};
    if (!cfg.out.empty()) j["out"] = cfg.out;
    if (!cfg.trace_out.empty()) j["trace_out"] = cfg.trace_out;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object())
        throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    RunConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    if (j.contains("potential")) {
        for (const auto& p : j.at("potential")) {
            if (!p.is_array() || p.size() != 2)
                throw Error(ErrorCode::InvalidArgument, "potential entries must be [re, im]");
            cfg.potential.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
    }
    if (j.contains("E")) cfg.E = j.at("E").get<double>();
    if (j.contains("E_grid")) {
        const json& g = j.at("E_grid");
        cfg.E_grid = SweepGrid{g.at("start").get<double>(), g.at("stop").get<double>(),
                               g.at("count").get<int>()};
    }
    if (j.contains("scheme")) cfg.scheme = scheme_config_from_json(j.at("scheme"));
    cfg.width = j.value("width", cfg.width);
    cfg.out = j.value("out", cfg.out);
    cfg.trace_out = j.value("trace_out", cfg.trace_out);
    if (cfg.width < 1) throw Error(ErrorCode::InvalidArgument, "width must be >= 1");
    return cfg;
}

}  // namespace ccr
