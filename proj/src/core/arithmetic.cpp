#include "core/arithmetic.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace ccr {

double dist_to_integer(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "dist_to_integer on non-finite input");
    double d = std::abs(x - std::nearbyint(x));
    return d > 0.5 ? 1.0 - d : d;  // cannot happen with nearbyint, kept as a guard
}

double frac_times(const BigInt& k, double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "frac_times on non-finite input");
    if (x == 0.0 || k == 0) return 0.0;
    // x = mantissa * 2^shift exactly, mantissa a 53-bit integer.
    int exp2 = 0;
    double m = std::frexp(std::abs(x), &exp2);
    auto mantissa = static_cast<std::int64_t>(std::ldexp(m, 53));
    int shift = 53 - exp2;  // x = mantissa / 2^shift
    if (shift <= 0) return 0.0;  // |x| is an integer multiple of 1
    BigInt num = k * mantissa;
    if (x < 0) num = -num;
    BigInt den_mask = (BigInt(1) << shift) - 1;
    BigInt frac_num = num & den_mask;
    if (num < 0) {
        // C++ % truncates; bring the representative into [0, 2^shift)
        frac_num = ((num % (BigInt(1) << shift)) + (BigInt(1) << shift)) % (BigInt(1) << shift);
    }
    HpReal value = HpReal(frac_num);
    value = boost::multiprecision::ldexp(value, -shift);
    double out = static_cast<double>(value);
    if (out >= 1.0) out = 0.0;
    if (out < 0.0) out += 1.0;
    return out;
}

ConvergentTable expand(const HpReal& alpha, int max_terms, const BigInt& q_cap,
                       const HpReal& input_uncertainty) {
    if (!(alpha > 0 && alpha < 1))
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    if (max_terms < 1) throw Error(ErrorCode::InvalidArgument, "max_terms must be >= 1");

    ConvergentTable table;
    table.alpha = static_cast<double>(alpha);
    table.numerators = {0};
    table.denominators = {1};

    HpReal floor_err = boost::multiprecision::ldexp(HpReal(1), -160);
    HpReal r = alpha;
    HpReal err = input_uncertainty > floor_err ? input_uncertainty : floor_err;

    BigInt p_prev = 0, q_prev = 1;   // (p_0, q_0)
    BigInt p_pprev = 1, q_pprev = 0; // (p_{-1}, q_{-1})

    while (table.count() < max_terms) {
        if (r <= err) {
            // residual indistinguishable from zero: alpha looks rational
            if (table.partial_quotients.size() < 2)
                throw Error(ErrorCode::RationalInput, "alpha is rational at working precision");
            table.precision_exhausted = true;
            break;
        }
        HpReal inv_lo = 1 / (r + err);
        HpReal inv_hi = 1 / (r - err);
        BigInt a_lo = BigInt(boost::multiprecision::floor(inv_lo).convert_to<BigInt>());
        BigInt a_hi = BigInt(boost::multiprecision::floor(inv_hi).convert_to<BigInt>());
        if (a_lo != a_hi) {
            // ambiguous this early means the input sits on a low-order rational
            if (table.partial_quotients.size() < 2)
                throw Error(ErrorCode::RationalInput,
                            "alpha is indistinguishable from a rational");
            table.precision_exhausted = true;
            break;
        }
        BigInt a = a_lo;
        BigInt q_new = a * q_prev + q_pprev;
        if (q_new > q_cap) break;
        BigInt p_new = a * p_prev + p_pprev;

        table.partial_quotients.push_back(a);
        table.numerators.push_back(p_new);
        table.denominators.push_back(q_new);
        p_pprev = p_prev; q_pprev = q_prev;
        p_prev = p_new; q_prev = q_new;

        HpReal inv = 1 / r;
        HpReal r_new = inv - HpReal(a.str());
        // 1/r amplifies the uncertainty by 1/r^2; widen a touch for the rounding of the ops
        err = err / (r * r) * HpReal("1.000001") + floor_err;
        r = r_new;
        if (r < 0) r = 0;
    }
    return table;
}

ConvergentTable expand(double alpha, int max_terms, const BigInt& q_cap) {
    if (!std::isfinite(alpha)) throw Error(ErrorCode::NonFinite, "expand on non-finite alpha");
    HpReal a(alpha);
    HpReal ulp = boost::multiprecision::ldexp(HpReal(1), std::ilogb(std::abs(alpha)) - 52);
    return expand(a, max_terms, q_cap, ulp);
}

Subsequence select_subsequence(const ConvergentTable& table) {
    if (table.count() < 2)
        throw Error(ErrorCode::InvalidArgument, "select_subsequence needs >= 2 convergents");

    const auto& q = table.denominators;
    Subsequence sub;
    sub.indices.push_back(0);
    sub.q_values.push_back(q[0]);
    sub.s_values.push_back(q[0]);

    for (;;) {
        int n_h = sub.indices.back();
        if (n_h + 1 >= table.count()) { sub.exhausted = true; break; }
        BigInt base = q[n_h + 1];
        BigInt lo = base * base;
        BigInt hi = lo * lo;

        int first_ge = -1;
        for (int k = 0; k < table.count(); ++k) {
            if (q[k] >= lo) { first_ge = k; break; }
        }
        if (first_ge < 0) { sub.exhausted = true; break; }

        int next;
        if (q[first_ge] < hi) {
            next = first_ge;  // smallest admissible k (tie-break rule)
        } else {
            // no q_k in [lo, hi): take max{k : q_k <= lo}
            next = first_ge - 1;
            while (next > 0 && q[next] > lo) --next;
            if (next <= n_h) {
                sub.diagnostics.push_back(
                    "else-branch max at h=" + std::to_string(sub.count() - 1) +
                    " did not advance; forced n_{h+1}=n_h+1");
                next = n_h + 1;
            }
        }
        sub.indices.push_back(next);
        sub.q_values.push_back(q[next]);
        sub.s_values.push_back(sub.s_values.back() * q[next]);
    }
    return sub;
}

std::vector<ResonanceReport> check_resonances(double rho, const Subsequence& sub, double epsilon) {
    if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    std::vector<ResonanceReport> reports;
    for (int h = 0; h < sub.count(); ++h) {
        ResonanceReport r;
        r.h = h;
        r.q = sub.q_values[h];
        r.rho = rho;
        r.value = dist_to_integer(frac_times(2 * sub.q_values[h], rho));
        int n_h = sub.indices[h];
        r.threshold = (n_h == 0) ? epsilon : epsilon / (double(n_h) * double(n_h));
        r.passed = r.value >= r.threshold;
        reports.push_back(r);
    }
    return reports;
}

namespace {

BigRat dist_to_integer_rat(const BigRat& x) {
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    BigInt r = num % den;
    if (r < 0) r += den;
    BigRat frac(r, den);
    BigRat half(1, 2);
    return frac > half ? BigRat(den - r, den) : frac;
}

}  // namespace

bool verify_best_approximation(const ConvergentTable& table, int n, const BigInt& k_limit) {
    int M = table.count() - 1;
    if (n < 1 || n > M) throw Error(ErrorCode::InvalidArgument, "convergent index out of range");
    if (M < n + 2) return false;  // proxy not deep enough to certify

    const auto& q = table.denominators;
    const auto& p = table.numerators;
    BigRat proxy(p[M], q[M]);
    // |alpha - p_M/q_M| < 1/q_M^2
    BigRat delta(1, q[M] * q[M]);
    BigRat rhs = dist_to_integer_rat(BigRat(q[n - 1]) * proxy) + BigRat(q[n - 1]) * delta;

    auto check_k = [&](const BigInt& k) {
        if (k == q[n - 1]) return true;  // equality case, trivially satisfied
        BigRat lhs = dist_to_integer_rat(BigRat(k) * proxy) - BigRat(k) * delta;
        return lhs >= rhs;
    };

    if (q[n] <= k_limit) {
        for (BigInt k = 1; k < q[n]; ++k)
            if (!check_k(k)) return false;
        return true;
    }
    // sampled check: all stored denominators below q_n, their neighbors, and a
    // deterministic pseudo-random draw
    for (int j = 0; j < n; ++j) {
        for (int off = -2; off <= 2; ++off) {
            BigInt k = q[j] + off;
            if (k >= 1 && k < q[n] && !check_k(k)) return false;
        }
    }
    std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(n));
    for (int draws = 0; draws < 10000; ++draws) {
        BigInt k = 1 + BigInt(rng()) % (q[n] - 1);
        if (!check_k(k)) return false;
    }
    return true;
}

bool verify_sandwich(const ConvergentTable& table, int k) {
    int M = table.count() - 1;
    if (k < 0 || k + 1 > M) throw Error(ErrorCode::InvalidArgument, "convergent index out of range");
    if (M < k + 2) return false;

    const auto& q = table.denominators;
    const auto& p = table.numerators;
    BigRat proxy(p[M], q[M]);
    BigRat delta(1, q[M] * q[M]);
    // |q_k alpha - p_k|; equals ||q_k alpha|| for k >= 1, and is the right
    // reading of the bound at k = 0 when a_1 = 1
    BigRat mid = boost::multiprecision::abs(BigRat(q[k]) * proxy - BigRat(p[k]));
    BigRat margin = BigRat(q[k]) * delta;
    BigRat lower(1, q[k + 1] + q[k]);
    BigRat upper(1, q[k + 1]);
    return (mid - margin > lower) && (mid + margin < upper);
}

}  // namespace ccr
