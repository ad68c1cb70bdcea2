#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "core/arithmetic.hpp"

namespace ccr {

inline constexpr int kDefaultBandwidthCap = 1 << 14;

/// Real-valued smooth function on the circle, stored as a band-limited Fourier
/// series. Coefficients are kept for l = 0..N only; negative modes follow by
/// Hermitian symmetry. Immutable after construction.
class TorusFn {
public:
    TorusFn() : c_(1, 0.0) {}
    explicit TorusFn(double constant) : c_(1, constant) {}

    static TorusFn from_samples(const std::vector<double>& samples);
    static TorusFn from_coefficients(std::vector<std::complex<double>> coeffs);
    /// c * e^{2 pi i l x} + conj; for l = 0 the real part alone.
    static TorusFn harmonic(int l, std::complex<double> coeff);

    int bandwidth() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<std::complex<double>>& coefficients() const { return c_; }
    std::complex<double> coeff(int l) const;
    double mean() const { return c_[0].real(); }

    double evaluate(double x) const;
    /// Exact samples on the uniform grid x_j = j/m; requires m >= 2N+2.
    std::vector<double> samples(int m) const;
    int natural_grid(int oversample = 4) const;

    TorusFn derivative(int order = 1) const;
    double sup_norm() const;
    double cr_norm(int k) const;

    TorusFn truncate(double a) const;
    TorusFn rest(double a) const;

    TorusFn translated(double beta) const;
    /// Translation by k*alpha with the phase k*l*alpha reduced mod 1 exactly.
    TorusFn translated_exact(const BigInt& k, double alpha) const;

    TorusFn chopped(double rel_tol = 1e-15) const;

    TorusFn operator+(const TorusFn& o) const;
    TorusFn operator-(const TorusFn& o) const;
    TorusFn operator*(const TorusFn& o) const;  // exact product, band N1+N2
    TorusFn operator*(double s) const;
    TorusFn operator-() const;
    TorusFn& operator+=(const TorusFn& o) { return *this = *this + o; }

private:
    std::vector<std::complex<double>> c_;
};

inline TorusFn operator*(double s, const TorusFn& f) { return f * s; }

/// Pointwise nonlinear map of several functions, re-expanded with adaptive
/// bandwidth until the spectral tail is below tail_tol relative.
std::vector<TorusFn> map_pointwise(const std::vector<const TorusFn*>& inputs, int n_outputs,
                                   const std::function<void(const double*, double*)>& op,
                                   int bandwidth_cap = kDefaultBandwidthCap,
                                   double tail_tol = 1e-13);

/// S_n f in coefficient space. Modes whose small divisor |e^{2 pi i l alpha}-1|
/// falls under 1e-14 are recorded in small_divisor_modes when given.
TorusFn birkhoff_sum(const TorusFn& f, double alpha, const BigInt& n,
                     std::vector<int>* small_divisor_modes = nullptr);

/// |D^b f|_0 / (||f||_a^{1-t} ||f||_c^t), t = (b-a)/(c-a).
double interpolation_ratio(const TorusFn& f, int a, int b, int c);

}  // namespace ccr
