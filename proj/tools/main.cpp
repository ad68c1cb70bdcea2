// cocycle-reduce: reduction of close-to-constant quasi-periodic SL(2,R)
// cocycles to rotations, plus the continued-fraction and spectral utilities
// around it. Thin shell over the C API in cocycle_reduce.h.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cocycle_reduce.h"

namespace {

using nlohmann::json;

int fail_input(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return CCR_INPUT_ERROR;
}

bool write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << data;
    return f.good();
}

struct CommonOpts {
    std::string config_path;
    std::string alpha;
    std::optional<double> E;
    std::optional<double> lambda;
    std::optional<double> e_start, e_stop;
    std::optional<int> e_count;
    std::optional<int> width;
    std::string out;
    std::string trace;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool sweep) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--alpha", o.alpha, "frequency: golden, pi-3, liouville(k), or a literal");
    if (!sweep) cmd->add_option("--E", o.E, "energy");
    cmd->add_option("--lambda", o.lambda, "almost Mathieu coupling: v = 2*lambda*cos(2 pi x)");
    if (sweep) {
        cmd->add_option("--E-start", o.e_start, "sweep grid start");
        cmd->add_option("--E-stop", o.e_stop, "sweep grid stop");
        cmd->add_option("--E-count", o.e_count, "sweep grid size");
        cmd->add_option("--width", o.width, "worker pool width");
    }
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

// Build the config JSON the library consumes: file first, flags override.
int build_config(const CommonOpts& o, json& cfg, std::string& err) {
    cfg = json::object();
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) {
            err = "cannot read config file " + o.config_path;
            return CCR_INPUT_ERROR;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = json::parse(ss.str(), nullptr, false);
        if (cfg.is_discarded()) {
            err = "config file is not valid JSON";
            return CCR_INPUT_ERROR;
        }
    }
    if (!o.alpha.empty()) cfg["alpha"] = o.alpha;
    if (o.E) cfg["E"] = *o.E;
    if (o.lambda) cfg["potential"] = json::array({{0.0, 0.0}, {*o.lambda, 0.0}});
    if (o.e_start && o.e_stop && o.e_count)
        cfg["E_grid"] = json{{"start", *o.e_start}, {"stop", *o.e_stop}, {"count", *o.e_count}};
    if (o.width) cfg["width"] = *o.width;
    if (const char* env = std::getenv("COCYCLE_REDUCE_THREADS")) {
        char* end = nullptr;
        long w = std::strtol(env, &end, 10);
        if (end && *end == '\0' && w >= 1) cfg["width"] = static_cast<int>(w);
    }
    if (!o.out.empty()) cfg["out"] = o.out;
    if (!o.trace.empty()) cfg["trace_out"] = o.trace;
    return 0;
}

int emit(const std::string& data, const std::string& path) {
    if (path.empty()) {
        std::cout << data;
        if (!data.empty() && data.back() != '\n') std::cout << '\n';
        return 0;
    }
    if (!write_file(path, data)) return fail_input("cannot write " + path);
    return 0;
}

int run_cf(const std::string& alpha, int terms, const std::string& out) {
    ccr_result* r = nullptr;
    ccr_status st = ccr_cf(alpha.c_str(), terms, &r);
    if (st != CCR_OK) {
        std::cerr << "error: " << ccr_last_error() << "\n";
        ccr_result_free(r);
        return st;
    }
    json j = json::parse(ccr_result_json(r));
    std::printf("alpha = %s (%.17g)\n", j["alpha"].get<std::string>().c_str(),
                j["value"].get<double>());
    std::printf("%4s %12s %22s %22s\n", "n", "a_n", "p_n", "q_n");
    auto& pq = j["partial_quotients"];
    auto& ps = j["numerators"];
    auto& qs = j["denominators"];
    for (size_t n = 0; n < qs.size(); ++n) {
        std::string a = n == 0 ? "-" : pq[n - 1].get<std::string>();
        std::printf("%4zu %12s %22s %22s\n", n, a.c_str(),
                    ps[n].get<std::string>().c_str(), qs[n].get<std::string>().c_str());
    }
    std::printf("subsequence n_h:");
    for (auto& i : j["subsequence"]["indices"]) std::printf(" %d", i.get<int>());
    std::printf("\n");
    int rc = out.empty() ? 0 : emit(ccr_result_json(r), out);
    ccr_result_free(r);
    return rc;
}

int run_json_cmd(ccr_status (*fn)(const char*, ccr_result**), const CommonOpts& o,
                 bool with_trace) {
    json cfg;
    std::string err;
    if (int rc = build_config(o, cfg, err)) return fail_input(err);
    std::string out_path = o.out.empty() ? cfg.value("out", "") : o.out;
    std::string trace_path = o.trace.empty() ? cfg.value("trace_out", "") : o.trace;

    ccr_result* r = nullptr;
    ccr_status st = fn(cfg.dump().c_str(), &r);
    if (!r) {
        std::cerr << "error: " << ccr_last_error() << "\n";
        return st;
    }
    if (st != CCR_OK && ccr_last_error()[0] != '\0')
        std::cerr << "note: " << ccr_last_error() << "\n";
    if (with_trace && ccr_result_trace(r)[0] != '\0') {
        if (trace_path.empty())
            std::cout << ccr_result_trace(r);
        else if (!write_file(trace_path, ccr_result_trace(r))) {
            ccr_result_free(r);
            return fail_input("cannot write " + trace_path);
        }
    }
    const char* csv = ccr_result_csv(r);
    int rc = emit(csv[0] != '\0' ? csv : ccr_result_json(r), out_path);
    ccr_result_free(r);
    return rc != 0 ? rc : st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-periodic SL(2,R) cocycle reduction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ccr_version()));

    std::string cf_alpha;
    int cf_terms = 12;
    std::string cf_out;
    auto* cf = app.add_subcommand("cf", "continued-fraction table and subsequence");
    cf->add_option("--alpha", cf_alpha, "frequency spec")->required();
    cf->add_option("-n,--terms", cf_terms, "number of convergents");
    cf->add_option("--out", cf_out, "write the JSON table here");

    CommonOpts rot_o, red_o, sw_o;
    auto* rot = app.add_subcommand("rotnum", "fibered rotation number");
    add_common(rot, rot_o, false);
    auto* red = app.add_subcommand("reduce", "reduce one cocycle to rotations");
    add_common(red, red_o, false);
    red->add_option("--trace", red_o.trace, "NDJSON step trace path (default stdout)");
    auto* sw = app.add_subcommand("sweep", "energy sweep with classification");
    add_common(sw, sw_o, true);
    auto* self = app.add_subcommand("selftest", "built-in sanity checks");

    CLI11_PARSE(app, argc, argv);

    if (cf->parsed()) return run_cf(cf_alpha, cf_terms, cf_out);
    if (rot->parsed()) return run_json_cmd(ccr_rotnum, rot_o, false);
    if (red->parsed()) return run_json_cmd(ccr_reduce, red_o, true);
    if (sw->parsed()) return run_json_cmd(ccr_sweep, sw_o, false);
    if (self->parsed()) {
        ccr_result* r = nullptr;
        ccr_status st = ccr_selftest(&r);
        if (r) {
            std::cout << ccr_result_json(r) << "\n";
            ccr_result_free(r);
        }
        return st;
    }
    return 0;
}
