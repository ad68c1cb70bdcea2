#include "core/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ccr::fft {

namespace {
// FFTW plan creation is not thread-safe; execution of a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

int next_pow2(int m) {
    int p = 1;
    while (p < m) p <<= 1;
    return p;
}

std::vector<std::complex<double>> forward(const std::vector<double>& samples) {
    int m = static_cast<int>(samples.size());
    if (m < 2) throw std::invalid_argument("fft::forward needs at least 2 samples");
    std::vector<double> in(samples);
    std::vector<std::complex<double>> out(m / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(m, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    double inv_m = 1.0 / m;
    for (auto& c : out) c *= inv_m;
    return out;
}

std::vector<double> inverse(const std::vector<std::complex<double>>& coeffs, int m) {
    int bands = static_cast<int>(coeffs.size());
    if (m < 2 * (bands - 1)) throw std::invalid_argument("fft::inverse grid too small for band");
    std::vector<std::complex<double>> in(m / 2 + 1, 0.0);
    for (int l = 0; l < bands && l <= m / 2; ++l) in[l] = coeffs[l];
    std::vector<double> out(m);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace ccr::fft
