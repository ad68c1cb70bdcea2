#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/arithmetic.hpp"
#include "core/presets.hpp"
#include "oracles.hpp"

using namespace ccr;

TEST_CASE("golden mean expands to Fibonacci denominators") {
    ConvergentTable t = expand(alpha_golden(), 25, BigInt(1) << 64);
    REQUIRE(t.count() >= 25);
    for (const auto& a : t.partial_quotients) CHECK(a == 1);
    BigInt f0 = 1, f1 = 1;
    for (int n = 0; n < 25; ++n) {
        CHECK(t.denominators[n] == f0);
        BigInt f2 = f0 + f1;
        f0 = f1;
        f1 = f2;
    }
    CHECK(t.denominators[20] == 10946);
}

TEST_CASE("expansion agrees with the Euclidean oracle on the exact value") {
    // run the plain Euclidean algorithm on a rational truncation accurate to
    // ~1e-60; the first 20 terms of both alphas are stable under that error
    auto check = [](const AlphaSpec& as, int terms) {
        BigInt scale = BigInt(10);
        for (int i = 0; i < 64; ++i) scale *= 10;  // 10^65
        HpReal scaled = as.precise * HpReal(scale);
        BigRat approx(BigInt(boost::multiprecision::floor(scaled)), scale);
        auto a_oracle = oracle::euclid_cf(approx, terms);
        ConvergentTable t = expand(as, terms, BigInt(1) << 256);
        REQUIRE(t.count() >= terms);
        for (int i = 0; i + 1 < terms; ++i) CHECK(t.partial_quotients[i] == a_oracle[i]);
    };
    check(alpha_golden(), 20);
    check(alpha_pi_minus_3(), 20);
}

TEST_CASE("pi - 3 convergents") {
    ConvergentTable t = expand(alpha_pi_minus_3(), 10, BigInt(1) << 64);
    REQUIRE(t.count() >= 5);
    CHECK(t.partial_quotients[0] == 7);
    CHECK(t.partial_quotients[1] == 15);
    CHECK(t.partial_quotients[2] == 1);
    CHECK(t.partial_quotients[3] == 292);
    CHECK(t.denominators[0] == 1);
    CHECK(t.denominators[1] == 7);
    CHECK(t.denominators[2] == 106);
    CHECK(t.denominators[3] == 113);
    CHECK(t.denominators[4] == 33102);
    // p/q = 355/113 territory
    CHECK(t.numerators[3] == 16);
}

TEST_CASE("recurrence q_{n+1} = a_{n+1} q_n + q_{n-1} holds for every stored row") {
    for (const char* spec : {"golden", "pi-3", "liouville(4)"}) {
        ConvergentTable t = expand(parse_alpha(spec), 30, BigInt(1) << 128);
        for (int n = 2; n < t.count(); ++n) {
            CHECK(t.denominators[n] ==
                  t.partial_quotients[n - 1] * t.denominators[n - 1] + t.denominators[n - 2]);
            CHECK(t.numerators[n] ==
                  t.partial_quotients[n - 1] * t.numerators[n - 1] + t.numerators[n - 2]);
        }
        // p_n q_{n-1} - p_{n-1} q_n = (-1)^n
        for (int n = 1; n < t.count(); ++n) {
            BigInt det = t.numerators[n] * t.denominators[n - 1] -
                         t.numerators[n - 1] * t.denominators[n];
            CHECK((det == 1 || det == -1));
        }
    }
}

TEST_CASE("rational input is rejected") {
    CHECK_THROWS_AS((void)expand(0.5, 10, BigInt(1) << 64), Error);
    try {
        (void)expand(0.25, 10, BigInt(1) << 64);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RationalInput);
    }
    CHECK_THROWS_AS((void)expand(0.0, 10, BigInt(1) << 64), Error);
    CHECK_THROWS_AS((void)expand(1.5, 10, BigInt(1) << 64), Error);
}

TEST_CASE("double-only expansion flags precision exhaustion instead of inventing terms") {
    ConvergentTable t = expand(0.6180339887498949, 60, BigInt(1) << 200);
    CHECK(t.precision_exhausted);
    // everything it does report must satisfy the recurrence
    for (int n = 2; n < t.count(); ++n)
        CHECK(t.denominators[n] ==
              t.partial_quotients[n - 1] * t.denominators[n - 1] + t.denominators[n - 2]);
    // and the certified prefix agrees with the exact golden expansion
    for (const auto& a : t.partial_quotients) CHECK(a == 1);
}

TEST_CASE("best-approximation property (best) certified for early convergents") {
    ConvergentTable g = expand(alpha_golden(), 25, BigInt(1) << 64);
    for (int n = 1; n <= 20; ++n) CHECK(verify_best_approximation(g, n, BigInt(200000)));
    ConvergentTable p = expand(alpha_pi_minus_3(), 25, BigInt(1) << 128);
    for (int n = 1; n <= 20 && n + 3 <= p.count(); ++n)
        CHECK(verify_best_approximation(p, n, BigInt(200000)));
}

TEST_CASE("sandwich bounds (best2) hold for the first 20 convergents") {
    for (const char* spec : {"golden", "pi-3"}) {
        ConvergentTable t = expand(parse_alpha(spec), 25, BigInt(1) << 128);
        for (int k = 0; k + 1 < t.count() && k < 20; ++k) CHECK(verify_sandwich(t, k));
    }
}

TEST_CASE("sandwich numerically: 1/(q_{k+1}+q_k) < ||q_k alpha|| < 1/q_{k+1}") {
    ConvergentTable t = expand(alpha_golden(), 20, BigInt(1) << 64);
    for (int k = 1; k + 1 < t.count() && t.denominators[k + 1] < (BigInt(1) << 40); ++k) {
        double dist = dist_to_integer(frac_times(t.denominators[k], t.alpha));
        double qk = t.denominators[k].convert_to<double>();
        double qk1 = t.denominators[k + 1].convert_to<double>();
        if (qk1 > 1e12) continue;  // double alpha too coarse beyond this
        CHECK(dist > 1.0 / (qk1 + qk) * (1.0 - 1e-6));
        CHECK(dist < 1.0 / qk1 * (1.0 + 1e-6));
    }
}

TEST_CASE("subsequence for the golden mean matches the hand-checked prefix") {
    ConvergentTable t = expand(alpha_golden(), 40, BigInt(1) << 80);
    Subsequence s = select_subsequence(t);
    REQUIRE(s.count() >= 5);
    CHECK(s.indices[0] == 0);
    CHECK(s.indices[1] == 1);
    CHECK(s.indices[2] == 4);
    CHECK(s.indices[3] == 10);
    CHECK(s.indices[4] == 22);
    CHECK(s.q_values[2] == 5);
    CHECK(s.q_values[3] == 89);
    CHECK(s.q_values[4] == 28657);
    // s_h really is the running product of the selected q's
    BigInt prod = 1;
    for (int h = 0; h < s.count(); ++h) {
        prod *= s.q_values[h];
        CHECK(s.s_values[h] == prod);
    }
}

TEST_CASE("subsequence rule: q_{n_h+1}^2 <= q_{n_{h+1}} < q_{n_h+1}^4 when attainable") {
    for (const char* spec : {"golden", "pi-3"}) {
        ConvergentTable t = expand(parse_alpha(spec), 35, BigInt(1) << 128);
        Subsequence s = select_subsequence(t);
        for (int h = 0; h + 1 < s.count(); ++h) {
            BigInt qn1 = t.denominators[s.indices[h] + 1];
            BigInt qnext = s.q_values[h + 1];
            // either the window [q^2, q^4) was hit, or the fallback (largest
            // q_k <= q^2) applies -- which never exceeds q^4
            CHECK(qnext <= qn1 * qn1 * qn1 * qn1);
            CHECK(s.indices[h + 1] > s.indices[h]);
        }
    }
}

TEST_CASE("liouville(4) has the expected jump and the subsequence survives it") {
    ConvergentTable t = expand(alpha_liouville(4), 30, BigInt(1) << 200);
    bool jump = false;
    for (int n = 0; n + 1 < t.count(); ++n)
        if (t.denominators[n + 1] > 50 * t.denominators[n]) jump = true;
    CHECK(jump);
    Subsequence s = select_subsequence(t);
    CHECK(s.count() >= 3);
}

TEST_CASE("frac_times matches exact rational arithmetic") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double x = u(rng);
        BigInt k = BigInt(rng() % 1000000) + 1;
        double got = frac_times(k, x);
        // exact: x = num / 2^shift with num = mantissa(x) * 2^53, an integer
        int e;
        double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
        BigInt num = BigInt(std::ldexp(m, 53));
        int shift = 53 - e;
        BigInt mod = BigInt(1) << shift;
        BigInt r = (k * num) % mod;
        double want = r.convert_to<double>() / std::ldexp(1.0, shift);
        CHECK(std::abs(got - want) < 1e-12);
        CHECK(got >= 0.0);
        CHECK(got < 1.0);
    }
}

TEST_CASE("dist_to_integer") {
    CHECK(dist_to_integer(0.0) == 0.0);
    CHECK(dist_to_integer(0.5) == doctest::Approx(0.5));
    CHECK(dist_to_integer(1.75) == doctest::Approx(0.25));
    CHECK(dist_to_integer(-0.1) == doctest::Approx(0.1));
    CHECK(dist_to_integer(123456.999) == doctest::Approx(0.001).epsilon(1e-6));
}

TEST_CASE("resonance report flags a contrived resonant rho") {
    ConvergentTable t = expand(alpha_golden(), 40, BigInt(1) << 80);
    Subsequence s = select_subsequence(t);
    // rho = 1/(2 q_{n_2}) = 1/10 makes ||2 q_{n_2} rho|| = 0 at h = 2
    auto reports = check_resonances(0.1, s, 0.05);
    REQUIRE(reports.size() >= 3);
    CHECK(reports[0].passed);
    CHECK(reports[1].passed);
    CHECK_FALSE(reports[2].passed);
    CHECK(reports[2].value == doctest::Approx(0.0));
    // a generic rho passes everywhere the threshold allows
    auto ok = check_resonances(0.361, s, 0.05);
    for (size_t h = 0; h < ok.size() && h < 4; ++h) CHECK(ok[h].passed);
}

TEST_CASE("parse_alpha round trip") {
    CHECK(parse_alpha("golden").value == doctest::Approx(0.6180339887498949));
    CHECK(parse_alpha("pi-3").value == doctest::Approx(M_PI - 3.0));
    CHECK(parse_alpha("liouville(3)").value ==
          doctest::Approx(0.1 + 0.01 + 1e-6).epsilon(1e-12));
    CHECK(parse_alpha("0.37281").value == doctest::Approx(0.37281));
    CHECK_THROWS_AS(parse_alpha("nonsense"), Error);
    CHECK_THROWS_AS(parse_alpha("liouville(0)"), Error);
}
