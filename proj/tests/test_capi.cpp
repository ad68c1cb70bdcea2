#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "cocycle_reduce.h"

using nlohmann::json;

namespace {

struct Result {
    ccr_result* r = nullptr;
    ~Result() { ccr_result_free(r); }
};

}  // namespace

TEST_CASE("version string") {
    CHECK(ccr_version() != nullptr);
    CHECK(std::strlen(ccr_version()) > 0);
}

TEST_CASE("cf: golden mean table") {
    Result res;
    REQUIRE(ccr_cf("golden", 12, &res.r) == CCR_OK);
    json j = json::parse(ccr_result_json(res.r));
    CHECK(j["alpha"] == "golden");
    CHECK(j["denominators"][0] == "1");
    CHECK(j["denominators"][5] == "8");
    CHECK(j["denominators"][10] == "89");
    CHECK(j["subsequence"]["indices"][0] == 0);
    CHECK(j["subsequence"]["indices"][1] == 1);
    CHECK(j["subsequence"]["indices"][2] == 4);
}

TEST_CASE("cf: rational literal is an input error") {
    Result res;
    CHECK(ccr_cf("0.5", 10, &res.r) == CCR_INPUT_ERROR);
    CHECK(std::string(ccr_last_error()).find("rational") != std::string::npos);
}

TEST_CASE("cf: garbage inputs") {
    Result res;
    CHECK(ccr_cf(nullptr, 10, &res.r) == CCR_INPUT_ERROR);
    Result res2;
    CHECK(ccr_cf("golden", 0, &res2.r) == CCR_INPUT_ERROR);
    Result res3;
    CHECK(ccr_cf("wat", 10, &res3.r) == CCR_INPUT_ERROR);
    CHECK(std::strlen(ccr_last_error()) > 0);
}

TEST_CASE("rotnum: free cocycle at E = 1") {
    Result res;
    const char* cfg = R"({"alpha": "golden", "E": 1.0})";
    REQUIRE(ccr_rotnum(cfg, &res.r) == CCR_OK);
    json j = json::parse(ccr_result_json(res.r));
    CHECK(std::abs(j["rho"].get<double>() - 1.0 / 6.0) < 1e-7);
    CHECK(j["err"].get<double>() < 1e-6);
}

TEST_CASE("rotnum without E is an input error") {
    Result res;
    CHECK(ccr_rotnum(R"({"alpha": "golden"})", &res.r) == CCR_INPUT_ERROR);
}

TEST_CASE("reduce: constant elliptic cocycle converges with a bundle") {
    Result res;
    const char* cfg = R"({"alpha": "golden", "E": 0.3})";
    REQUIRE(ccr_reduce(cfg, &res.r) == CCR_OK);
    json j = json::parse(ccr_result_json(res.r));
    CHECK(j["report"]["outcome"] == "Converged");
    CHECK(j.contains("B"));
    CHECK(j.contains("phi"));
    // NDJSON trace: one parseable object per line
    std::string trace = ccr_result_trace(res.r);
    CHECK(!trace.empty());
    size_t lines = 0, pos = 0;
    while ((pos = trace.find('\n')) != std::string::npos) {
        json line = json::parse(trace.substr(0, pos));
        CHECK(line.contains("h"));
        trace.erase(0, pos + 1);
        ++lines;
    }
    CHECK(lines == j["report"]["trace"].size());
}

TEST_CASE("reduce: almost Mathieu end to end") {
    Result res;
    const char* cfg =
        R"({"alpha": "golden", "potential": [[0,0],[0.001,0]], "E": 0.0})";
    REQUIRE(ccr_reduce(cfg, &res.r) == CCR_OK);
    json j = json::parse(ccr_result_json(res.r));
    CHECK(j["report"]["outcome"] == "Converged");
    CHECK(j["report"]["final_defect"].get<double>() < 1e-8);
    CHECK(std::abs(j["report"]["rho"].get<double>() - 0.25) < 1e-4);
}

TEST_CASE("reduce: band-edge resonance maps to exit 3") {
    Result res;
    const char* cfg =
        R"({"alpha": "golden", "potential": [[0,0],[0.001,0]], "E": -2.0})";
    ccr_status st = ccr_reduce(cfg, &res.r);
    CHECK(st == CCR_RESONANCE_BLOCKED);
    CHECK(std::strlen(ccr_last_error()) > 0);
    // the bundle still carries the report with the outcome
    json j = json::parse(ccr_result_json(res.r));
    CHECK(j["report"]["outcome"] == "ResonanceBlocked");
}

TEST_CASE("reduce: budget exhaustion maps to exit 5") {
    Result res;
    const char* cfg =
        R"({"alpha": "golden", "potential": [[0,0],[0.001,0]], "E": 0.0,
            "scheme": {"max_steps": 1}})";
    CHECK(ccr_reduce(cfg, &res.r) == CCR_BUDGET_EXHAUSTED);
}

TEST_CASE("reduce: invalid config JSON") {
    Result res;
    CHECK(ccr_reduce("{not json", &res.r) == CCR_INPUT_ERROR);
    Result res2;
    CHECK(ccr_reduce(nullptr, &res2.r) == CCR_INPUT_ERROR);
}

TEST_CASE("sweep: header, row count, and width invariance") {
    const char* base =
        R"({"alpha": "golden", "potential": [[0,0],[0,0]],
            "E_grid": {"start": -2.2, "stop": 2.2, "count": 9}, "width": %d})";
    char cfg1[256], cfg4[256];
    std::snprintf(cfg1, sizeof cfg1, base, 1);
    std::snprintf(cfg4, sizeof cfg4, base, 4);

    Result r1, r4;
    REQUIRE(ccr_sweep(cfg1, &r1.r) == CCR_OK);
    REQUIRE(ccr_sweep(cfg4, &r4.r) == CCR_OK);
    std::string csv1 = ccr_result_csv(r1.r), csv4 = ccr_result_csv(r4.r);
    CHECK(csv1 == csv4);
    CHECK(csv1.substr(0, csv1.find('\n')) ==
          "E,rho,rho_err,lyapunov,outcome,final_defect,steps,classification");
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 10);  // header + 9 rows
    // spot-check the middle row: E = 0 is elliptic, converges at step 0
    CHECK(csv1.find("\n0,") != std::string::npos);
    CHECK(csv1.find("ac-candidate") != std::string::npos);
    CHECK(csv1.find("nuh-candidate") != std::string::npos);
}

TEST_CASE("selftest passes") {
    Result res;
    REQUIRE(ccr_selftest(&res.r) == CCR_OK);
    json j = json::parse(ccr_result_json(res.r));
    CHECK(j["ok"] == true);
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("null result accessors are safe") {
    CHECK(std::string(ccr_result_json(nullptr)).empty());
    CHECK(std::string(ccr_result_trace(nullptr)).empty());
    CHECK(std::string(ccr_result_csv(nullptr)).empty());
    ccr_result_free(nullptr);
    CHECK(ccr_cf("golden", 5, nullptr) == CCR_INPUT_ERROR);
}
