#pragma once

#include <string>

#include "core/arithmetic.hpp"

namespace ccr {

/// A frequency together with the high-precision value used for exact
/// continued-fraction work. For literal inputs both carry the same double.
struct AlphaSpec {
    double value = 0.0;
    HpReal precise;
    HpReal uncertainty;
    std::string label;  // "golden", "liouville(4)", or decimal literal
};

HpReal golden_mean_hp();
HpReal pi_minus_3_hp();
HpReal liouville_hp(int k);  // sum_{j<=k} 10^{-j!}

AlphaSpec alpha_golden();
AlphaSpec alpha_pi_minus_3();
AlphaSpec alpha_liouville(int k);
AlphaSpec alpha_literal(double value);

/// Parses "golden", "liouville(k)", "pi-3", or a decimal literal.
AlphaSpec parse_alpha(const std::string& spec);

ConvergentTable expand(const AlphaSpec& alpha, int max_terms, const BigInt& q_cap);

}  // namespace ccr
