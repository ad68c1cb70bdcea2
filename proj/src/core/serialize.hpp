#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/scheme.hpp"

namespace ccr {

using json = nlohmann::json;

json to_json(const TorusFn& f);
TorusFn torus_fn_from_json(const json& j);

json to_json(const MatFn& m);
MatFn mat_fn_from_json(const json& j);

json to_json(const Cocycle& c);
Cocycle cocycle_from_json(const json& j);

json to_json(const PassRecord& r);
json to_json(const StepRecord& r);
json to_json(const SchemeReport& r);

/// Result bundle {B, phi, report}; B/phi present only on success.
json bundle_json(const SchemeReport& r);

struct SweepGrid {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
};

struct RunConfig {
    std::string alpha = "golden";
    // v^(l) for l = 0..N as [re, im]; the negative side follows by symmetry
    std::vector<std::array<double, 2>> potential;
    std::optional<double> E;
    std::optional<SweepGrid> E_grid;
    SchemeConfig scheme;
    int width = 1;
    std::string out;
    std::string trace_out;

    std::vector<double> energies() const;
    TorusFn potential_fn() const;
};

json to_json(const SchemeConfig& cfg);
SchemeConfig scheme_config_from_json(const json& j);

json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const json& j);

}  // namespace ccr
