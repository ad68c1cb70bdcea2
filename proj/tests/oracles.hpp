// Shared helpers for the test binaries: independent oracles (Euclidean
// continued fractions, Sturm eigenvalue counts, direct Birkhoff summation)
// and generators for random trigonometric polynomials / near-rotation maps.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/cocycle.hpp"
#include "core/presets.hpp"

namespace oracle {

using ccr::BigInt;
using ccr::BigRat;
using ccr::MatFn;
using ccr::TorusFn;

// Plain Euclidean algorithm on an exact rational; the library's expansion of
// a high-precision alpha must agree on every term that is certified.
inline std::vector<BigInt> euclid_cf(BigRat x, int max_terms) {
    std::vector<BigInt> a;
    for (int i = 0; i < max_terms; ++i) {
        BigInt num = boost::multiprecision::numerator(x);
        BigInt den = boost::multiprecision::denominator(x);
        if (num == 0) break;
        BigInt q = den / num;  // term of 1/x
        a.push_back(q);
        x = BigRat(den - q * num, num);  // frac(1/x)
    }
    return a;
}

inline std::vector<BigInt> convergent_denominators(const std::vector<BigInt>& a) {
    std::vector<BigInt> q = {BigInt(1)};
    BigInt qm1 = 0;
    for (const auto& ai : a) {
        BigInt next = ai * q.back() + qm1;
        qm1 = q.back();
        q.push_back(next);
    }
    return q;
}

inline TorusFn random_trig_poly(std::mt19937_64& rng, int bandwidth, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> c(bandwidth + 1);
    c[0] = scale * u(rng);
    for (int l = 1; l <= bandwidth; ++l)
        c[l] = scale * std::complex<double>(u(rng), u(rng)) / double(l * l);
    return TorusFn::from_coefficients(std::move(c));
}

// S_n f(x) summed term by term with the orbit reduced mod 1 exactly.
inline double birkhoff_direct(const TorusFn& f, double alpha, long n, double x) {
    double s = 0.0;
    for (long j = 0; j < n; ++j) {
        double xj = x + ccr::frac_times(BigInt(j), alpha);
        s += f.evaluate(xj - std::floor(xj));
    }
    return s;
}

// exp of the trace-free matrix [[a, b], [c, -a]]: M^2 = (a^2 + bc) Id.
inline void exp_trace_free(double a, double b, double c, double out[4]) {
    double delta = a * a + b * c;
    double ch, shs;  // cosh(s), sinh(s)/s with s = sqrt(delta)
    if (delta > 1e-16) {
        double s = std::sqrt(delta);
        ch = std::cosh(s);
        shs = std::sinh(s) / s;
    } else if (delta < -1e-16) {
        double s = std::sqrt(-delta);
        ch = std::cos(s);
        shs = std::sin(s) / s;
    } else {
        ch = 1.0 + delta / 2.0;
        shs = 1.0 + delta / 6.0;
    }
    out[0] = ch + shs * a;
    out[1] = shs * b;
    out[2] = shs * c;
    out[3] = ch - shs * a;
}

// exp(G) with G a trace-free MatFn; det exp(G) = 1 exactly.
inline MatFn exp_mat(const MatFn& g, int bandwidth_cap = ccr::kDefaultBandwidthCap) {
    auto outs = ccr::map_pointwise(
        {&g.at(0, 0), &g.at(0, 1), &g.at(1, 0)}, 4,
        [](const double* in, double* out) { exp_trace_free(in[0], in[1], in[2], out); },
        bandwidth_cap);
    MatFn m;
    m.at(0, 0) = outs[0];
    m.at(0, 1) = outs[1];
    m.at(1, 0) = outs[2];
    m.at(1, 1) = outs[3];
    m.set_sl2(true);
    return m;
}

inline MatFn random_trace_free(std::mt19937_64& rng, int bandwidth, double scale) {
    MatFn g;
    g.at(0, 0) = random_trig_poly(rng, bandwidth, scale);
    g.at(0, 1) = random_trig_poly(rng, bandwidth, scale);
    g.at(1, 0) = random_trig_poly(rng, bandwidth, scale);
    g.at(1, 1) = -g.at(0, 0);
    return g;
}

// A = exp(g) R_phi: an SL(2) perturbation of the rotation cocycle whose
// defect F = A - R_phi scales linearly with g for small g.
inline MatFn near_rotation(std::mt19937_64& rng, const TorusFn& phi, int bandwidth,
                           double f_scale) {
    MatFn g = random_trace_free(rng, bandwidth, 1.0);
    MatFn a = exp_mat(g * f_scale) * ccr::rotation_mat(phi);
    a.set_sl2(true);
    return a;
}

// Eigenvalue-count oracle: number of eigenvalues of the L-site Dirichlet
// discretization of u_{n+1} + u_{n-1} + v(x0 + n alpha) u_n below E, by the
// Sturm sign count on the tridiagonal Cholesky-like recursion.
inline long sturm_count_below(const TorusFn& v, double alpha, double E, long L,
                              double x0 = 0.0) {
    long count = 0;
    double d = 0.0;
    for (long n = 0; n < L; ++n) {
        double xn = x0 + ccr::frac_times(BigInt(n), alpha);
        xn -= std::floor(xn);
        double diag = v.evaluate(xn) - E;
        d = (n == 0) ? diag : diag - 1.0 / d;
        if (d == 0.0) d = 1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

// rho = (1 - N(E)) / 2 with N the integrated density of states.
inline double ids_rotation_number(const TorusFn& v, double alpha, double E, long L) {
    double N = double(sturm_count_below(v, alpha, E, L)) / double(L);
    return (1.0 - N) / 2.0;
}

}  // namespace oracle
