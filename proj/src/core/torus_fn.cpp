#include "core/torus_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/fft.hpp"

namespace ccr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double max_abs(const std::vector<std::complex<double>>& c) {
    double m = 0.0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}
}  // namespace

TorusFn TorusFn::from_samples(const std::vector<double>& samples) {
    if (samples.size() < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite sample");
    int m = static_cast<int>(samples.size());
    auto c = fft::forward(samples);
    // the Nyquist sample content lands once in c[m/2]; stored as a +-N pair it
    // must carry half the weight
    c[m / 2] = 0.5 * c[m / 2].real();
    c[0] = c[0].real();
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::from_coefficients(std::vector<std::complex<double>> coeffs) {
    if (coeffs.empty()) coeffs.assign(1, 0.0);
    for (const auto& z : coeffs)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(ErrorCode::NonFinite, "non-finite coefficient");
    coeffs[0] = coeffs[0].real();
    TorusFn f;
    f.c_ = std::move(coeffs);
    return f;
}

TorusFn TorusFn::harmonic(int l, std::complex<double> coeff) {
    if (l < 0) { l = -l; coeff = std::conj(coeff); }
    std::vector<std::complex<double>> c(l + 1, 0.0);
    c[l] = coeff;
    return from_coefficients(std::move(c));
}

std::complex<double> TorusFn::coeff(int l) const {
    int a = std::abs(l);
    if (a > bandwidth()) return 0.0;
    return l >= 0 ? c_[a] : std::conj(c_[a]);
}

double TorusFn::evaluate(double x) const {
    double acc = c_[0].real();
    std::complex<double> w = std::polar(1.0, kTwoPi * x);
    std::complex<double> wl = 1.0;
    for (int l = 1; l <= bandwidth(); ++l) {
        wl *= w;
        acc += 2.0 * (c_[l] * wl).real();
    }
    return acc;
}

int TorusFn::natural_grid(int oversample) const {
    return std::max(16, fft::next_pow2(oversample * (bandwidth() + 1)));
}

std::vector<double> TorusFn::samples(int m) const {
    if (m < 2 * bandwidth() + 2)
        throw Error(ErrorCode::InvalidArgument, "sample grid under the Nyquist size");
    return fft::inverse(c_, m);
}

TorusFn TorusFn::derivative(int order) const {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
    if (order == 0) return *this;
    auto c = c_;
    c[0] = 0.0;
    for (int l = 1; l <= bandwidth(); ++l) {
        std::complex<double> factor = std::pow(std::complex<double>(0.0, kTwoPi * l), order);
        c[l] *= factor;
    }
    return from_coefficients(std::move(c));
}

double TorusFn::sup_norm() const {
    if (bandwidth() == 0) return std::abs(c_[0].real());
    int m = std::max(16, fft::next_pow2(8 * (bandwidth() + 1)));
    auto s = samples(m);
    double mx = 0.0;
    for (double v : s) mx = std::max(mx, std::abs(v));
    // ternary-refine |f| around every grid local maximum; 8x oversampling is
    // enough for the global peak to sit inside one of these brackets
    for (int i = 0; i < m; ++i) {
        double b = std::abs(s[i]);
        if (b < std::abs(s[(i + m - 1) % m]) || b < std::abs(s[(i + 1) % m])) continue;
        if (b < 0.5 * mx) continue;
        double lo = (i - 1.0) / m, hi = (i + 1.0) / m;
        for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
            double x1 = lo + (hi - lo) / 3.0, x2 = hi - (hi - lo) / 3.0;
            if (std::abs(evaluate(x1)) < std::abs(evaluate(x2))) lo = x1; else hi = x2;
        }
        mx = std::max(mx, std::abs(evaluate(0.5 * (lo + hi))));
    }
    return mx;
}

double TorusFn::cr_norm(int k) const {
    double acc = 0.0;
    for (int h = 0; h <= k; ++h) acc += derivative(h).sup_norm();
    return acc;
}

TorusFn TorusFn::truncate(double a) const {
    if (a < 0) throw Error(ErrorCode::InvalidArgument, "truncation order must be >= 0");
    int cut = static_cast<int>(std::floor(a));
    auto c = c_;
    for (int l = cut + 1; l <= bandwidth(); ++l) c[l] = 0.0;
    c.resize(std::min<size_t>(c.size(), cut + 1));
    if (c.empty()) c.assign(1, 0.0);
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::rest(double a) const {
    if (a < 0) throw Error(ErrorCode::InvalidArgument, "truncation order must be >= 0");
    int cut = static_cast<int>(std::floor(a));
    auto c = c_;
    for (int l = 0; l <= std::min(cut, bandwidth()); ++l) c[l] = 0.0;
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::translated(double beta) const {
    auto c = c_;
    for (int l = 1; l <= bandwidth(); ++l) c[l] *= std::polar(1.0, kTwoPi * l * beta);
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::translated_exact(const BigInt& k, double alpha) const {
    auto c = c_;
    for (int l = 1; l <= bandwidth(); ++l) {
        double phase = frac_times(k * l, alpha);
        c[l] *= std::polar(1.0, kTwoPi * phase);
    }
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::chopped(double rel_tol) const {
    double mx = max_abs(c_);
    if (mx == 0.0) return TorusFn();
    auto c = c_;
    for (auto& z : c)
        if (std::abs(z) < rel_tol * mx) z = 0.0;
    while (c.size() > 1 && c.back() == std::complex<double>(0.0, 0.0)) c.pop_back();
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::operator+(const TorusFn& o) const {
    std::vector<std::complex<double>> c(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t l = 0; l < c_.size(); ++l) c[l] += c_[l];
    for (size_t l = 0; l < o.c_.size(); ++l) c[l] += o.c_[l];
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::operator-(const TorusFn& o) const { return *this + (-o); }

TorusFn TorusFn::operator-() const {
    auto c = c_;
    for (auto& z : c) z = -z;
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::operator*(double s) const {
    auto c = c_;
    for (auto& z : c) z *= s;
    return from_coefficients(std::move(c));
}

TorusFn TorusFn::operator*(const TorusFn& o) const {
    // band of the product is N1+N2; a grid of > 2(N1+N2) points is alias-free
    int band = bandwidth() + o.bandwidth();
    int m = std::max(16, fft::next_pow2(2 * band + 2));
    auto a = samples(m);
    auto b = o.samples(m);
    for (int j = 0; j < m; ++j) a[j] *= b[j];
    auto c = fft::forward(a);
    c.resize(band + 1);
    return from_coefficients(std::move(c));
}

std::vector<TorusFn> map_pointwise(const std::vector<const TorusFn*>& inputs, int n_outputs,
                                   const std::function<void(const double*, double*)>& op,
                                   int bandwidth_cap, double tail_tol) {
    int max_band = 0;
    for (const auto* f : inputs) max_band = std::max(max_band, f->bandwidth());
    int m = std::max(16, fft::next_pow2(4 * (max_band + 1)));

    for (;;) {
        std::vector<std::vector<double>> in_samples;
        in_samples.reserve(inputs.size());
        for (const auto* f : inputs) in_samples.push_back(f->samples(m));

        std::vector<std::vector<double>> out_samples(n_outputs, std::vector<double>(m));
        std::vector<double> in_row(inputs.size());
        std::vector<double> out_row(n_outputs);
        for (int j = 0; j < m; ++j) {
            for (size_t i = 0; i < inputs.size(); ++i) in_row[i] = in_samples[i][j];
            op(in_row.data(), out_row.data());
            for (int i = 0; i < n_outputs; ++i) out_samples[i][j] = out_row[i];
        }

        // rounding in the op and the FFT is absolute at the scale of the data
        // involved, so small outputs carry a flat noise spectrum near
        // 1e-16 * scale that a purely relative tail test would never pass
        double scale = 1.0;
        for (const auto& s : in_samples)
            for (double v : s) scale = std::max(scale, std::abs(v));
        for (const auto& s : out_samples)
            for (double v : s) scale = std::max(scale, std::abs(v));
        double noise = 1e-15 * scale;

        std::vector<std::vector<std::complex<double>>> specs(n_outputs);
        bool ok = true;
        int bad_i = 0;
        double bad_mx = 0.0, bad_tail = 0.0;
        for (int i = 0; i < n_outputs; ++i) {
            specs[i] = fft::forward(out_samples[i]);
            specs[i].resize(m / 2);
            double mx = max_abs(specs[i]);
            double tail = 0.0;
            for (int l = 3 * (m / 2) / 4; l < m / 2; ++l)
                tail = std::max(tail, std::abs(specs[i][l]));
            if (tail > tail_tol * mx + noise) {
                ok = false;
                bad_i = i;
                bad_mx = mx;
                bad_tail = tail;
                break;
            }
        }
        if (ok) {
            std::vector<TorusFn> out;
            out.reserve(n_outputs);
            for (int i = 0; i < n_outputs; ++i) {
                double mx = max_abs(specs[i]);
                if (mx <= 10.0 * noise) {
                    out.emplace_back(0.0);  // zero at working precision
                    continue;
                }
                double rel = std::max(1e-16, noise / mx);
                out.push_back(
                    TorusFn::from_coefficients(std::move(specs[i])).chopped(std::min(rel, 0.5)));
            }
            return out;
        }
        if (m / 2 >= bandwidth_cap)
            throw Error(ErrorCode::BandwidthOverflow,
                        "pointwise map did not settle below the bandwidth cap (m=" +
                            std::to_string(m) + ", output " + std::to_string(bad_i) +
                            ", max coeff " + fmt_sci(bad_mx) + ", tail " +
                            fmt_sci(bad_tail) + ")");
        m *= 2;
    }
}

TorusFn birkhoff_sum(const TorusFn& f, double alpha, const BigInt& n,
                     std::vector<int>* small_divisor_modes) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "birkhoff_sum needs n >= 1");
    auto c = f.coefficients();
    c[0] *= static_cast<double>(HpReal(n));
    for (int l = 1; l <= f.bandwidth(); ++l) {
        std::complex<double> num = std::polar(1.0, kTwoPi * frac_times(n * l, alpha)) - 1.0;
        std::complex<double> den = std::polar(1.0, kTwoPi * frac_times(BigInt(l), alpha)) - 1.0;
        if (std::abs(den) < 1e-14 && small_divisor_modes) small_divisor_modes->push_back(l);
        c[l] *= num / den;
    }
    return TorusFn::from_coefficients(std::move(c));
}

double interpolation_ratio(const TorusFn& f, int a, int b, int c) {
    if (!(a < b && b < c)) throw Error(ErrorCode::InvalidArgument, "need a < b < c");
    double lambda = double(b - a) / double(c - a);
    double denom = std::pow(f.cr_norm(a), 1.0 - lambda) * std::pow(f.cr_norm(c), lambda);
    if (denom < 1e-300) throw Error(ErrorCode::DegenerateNorm, "interpolation denominator vanished");
    return f.derivative(b).sup_norm() / denom;
}

}  // namespace ccr
