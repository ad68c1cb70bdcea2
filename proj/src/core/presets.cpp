#include "core/presets.hpp"

#include <boost/math/constants/constants.hpp>

namespace ccr {

namespace {
HpReal tiny_uncertainty() { return boost::multiprecision::ldexp(HpReal(1), -150); }
}

HpReal golden_mean_hp() {
    return (boost::multiprecision::sqrt(HpReal(5)) - 1) / 2;
}

HpReal pi_minus_3_hp() {
    return boost::math::constants::pi<HpReal>() - 3;
}

HpReal liouville_hp(int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "liouville(k) needs k >= 1");
    HpReal sum = 0;
    long fact = 1;
    for (int j = 1; j <= k; ++j) {
        fact *= j;
        if (fact > 45) break;  // below representable precision anyway
        sum += boost::multiprecision::pow(HpReal(10), -fact);
    }
    return sum;
}

AlphaSpec alpha_golden() {
    AlphaSpec a;
    a.precise = golden_mean_hp();
    a.value = static_cast<double>(a.precise);
    a.uncertainty = tiny_uncertainty();
    a.label = "golden";
    return a;
}

AlphaSpec alpha_pi_minus_3() {
    AlphaSpec a;
    a.precise = pi_minus_3_hp();
    a.value = static_cast<double>(a.precise);
    a.uncertainty = tiny_uncertainty();
    a.label = "pi-3";
    return a;
}

AlphaSpec alpha_liouville(int k) {
    AlphaSpec a;
    a.precise = liouville_hp(k);
    a.value = static_cast<double>(a.precise);
    a.uncertainty = tiny_uncertainty();
    a.label = "liouville(" + std::to_string(k) + ")";
    return a;
}

AlphaSpec alpha_literal(double value) {
    AlphaSpec a;
    a.value = value;
    a.precise = HpReal(value);
    a.uncertainty = boost::multiprecision::ldexp(HpReal(1), std::ilogb(std::abs(value)) - 52);
    a.label = std::to_string(value);
    return a;
}

AlphaSpec parse_alpha(const std::string& spec) {
    if (spec == "golden") return alpha_golden();
    if (spec == "pi-3") return alpha_pi_minus_3();
    if (spec.rfind("liouville(", 0) == 0 && spec.back() == ')') {
        int k = std::stoi(spec.substr(10, spec.size() - 11));
        return alpha_liouville(k);
    }
    try {
        size_t pos = 0;
        double v = std::stod(spec, &pos);
        if (pos != spec.size()) throw std::invalid_argument(spec);
        return alpha_literal(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "unrecognized alpha spec: " + spec);
    }
}

ConvergentTable expand(const AlphaSpec& alpha, int max_terms, const BigInt& q_cap) {
    ConvergentTable t = expand(alpha.precise, max_terms, q_cap, alpha.uncertainty);
    t.alpha = alpha.value;
    return t;
}

}  // namespace ccr
