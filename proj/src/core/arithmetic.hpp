#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "core/errors.hpp"

namespace ccr {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
// ~166 bits of fraction, comfortably above the 80-bit floor the expansion needs.
using HpReal = boost::multiprecision::cpp_bin_float_50;

/// Continued-fraction expansion of an irrational alpha in (0,1).
/// q[0] = 1, q[n+1] = a[n+1] q[n] + q[n-1]; partial_quotients[i] = a_{i+1}.
struct ConvergentTable {
    double alpha = 0.0;
    std::vector<BigInt> partial_quotients;  // a_1, a_2, ...
    std::vector<BigInt> numerators;         // p_0 = 0, p_1, ...
    std::vector<BigInt> denominators;       // q_0 = 1, q_1, ...
    bool precision_exhausted = false;

    int count() const { return static_cast<int>(denominators.size()); }
};

/// Subsequence (n_h) of Definition-1 type, with s_h = prod_{l<=h} q_{n_l}.
struct Subsequence {
    std::vector<int> indices;
    std::vector<BigInt> q_values;
    std::vector<BigInt> s_values;
    bool exhausted = true;  // ran out of convergents before deciding the next n_h
    std::vector<std::string> diagnostics;

    int count() const { return static_cast<int>(indices.size()); }
};

struct ResonanceReport {
    int h = 0;
    BigInt q;
    double rho = 0.0;
    double value = 0.0;      // ||2 q_{n_h} rho||
    double threshold = 0.0;  // eps / n_h^2, eps itself at n_h = 0
    bool passed = false;
};

double dist_to_integer(double x);

/// Exact k*x mod 1 in [0,1); x is treated as the exact binary rational it is.
double frac_times(const BigInt& k, double x);

ConvergentTable expand(const HpReal& alpha, int max_terms, const BigInt& q_cap,
                       const HpReal& input_uncertainty);
ConvergentTable expand(double alpha, int max_terms, const BigInt& q_cap);

Subsequence select_subsequence(const ConvergentTable& table);

std::vector<ResonanceReport> check_resonances(double rho, const Subsequence& sub, double epsilon);

/// Exact check of eq. (best): ||k alpha|| >= ||q_{n-1} alpha|| for all 1 <= k < q_n.
/// alpha is represented by the deepest stored convergent; the comparison carries a
/// rigorous error margin, so a `true` result is certified. Requires q_n <= k_limit.
bool verify_best_approximation(const ConvergentTable& table, int n, const BigInt& k_limit);

/// Exact check of eq. (best2): 1/(q_{k+1}+q_k) < ||q_k alpha|| < 1/q_{k+1}.
bool verify_sandwich(const ConvergentTable& table, int k);

}  // namespace ccr
