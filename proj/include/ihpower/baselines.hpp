#pragma once

// Reference spectrum estimators the proposed method is benchmarked against:
//  - fft_estimate: rectangular-window DFT with plain per-bin peak readout.
//    Frequencies snap to the bin grid, amplitudes and phases carry the full
//    fence-effect bias. Fast and deliberately naive.
//  - wifft_estimate: Blackman-windowed DFT with a four-bin least-squares fit
//    of the analytic main-lobe shape per peak, recovering sub-bin frequency
//    and debiased amplitude/phase. Cannot separate tones sharing one main
//    lobe, which is the regime the cluster estimator targets.

#include <algorithm>
#include <vector>

#include "ihpower/power.hpp"
#include "ihpower/spectrum.hpp"

namespace ihpower {

struct BaselineConfig {
    double peak_threshold = 0.01;   // relative magnitude floor for peak pickup
};

namespace detail {

// Local maxima of |bins| on [1, N/2 - 1] at or above threshold * band max.
inline std::vector<int> spectral_peaks(const Spectrum& s, double threshold) {
    const int k_hi = static_cast<int>(s.size() / 2) - 1;
    std::vector<int> peaks;
    if (k_hi < 1) return peaks;
    double max_mag = 0.0;
    for (int k = 1; k <= k_hi; ++k) max_mag = std::max(max_mag, s.magnitude(static_cast<std::size_t>(k)));
    if (max_mag <= 0.0) return peaks;
    for (int k = 1; k <= k_hi; ++k) {
        const double m = s.magnitude(static_cast<std::size_t>(k));
        if (m < threshold * max_mag || m <= 0.0) continue;
        const double left = s.magnitude(static_cast<std::size_t>(k - 1));
        const double right =
            (k + 1 < static_cast<int>(s.size())) ? s.magnitude(static_cast<std::size_t>(k + 1)) : 0.0;
        if (m > left && m >= right) peaks.push_back(k);
    }
    return peaks;
}

// Periodic Blackman main-lobe magnitude at offset x from the tone, the sum of
// the window's three cosine terms shifted onto the sinc kernel.
inline double blackman_lobe(double x) {
    return 0.42 * normalized_sinc(x) +
           0.25 * (normalized_sinc(x - 1.0) + normalized_sinc(x + 1.0)) +
           0.04 * (normalized_sinc(x - 2.0) + normalized_sinc(x + 2.0));
}

}  // namespace detail

// Plain-FFT readout: every retained peak becomes a component at the bin
// frequency with envelope taken verbatim from the bin.
inline std::vector<RecoveredComponent> fft_estimate(const SampledSignal& signal,
                                                    const BaselineConfig& cfg = {}) {
    const Spectrum s = dft(signal);
    std::vector<RecoveredComponent> out;
    for (int k : detail::spectral_peaks(s, cfg.peak_threshold))
        out.push_back(sine_from_envelope(s.bins[static_cast<std::size_t>(k)],
                                         s.freq_of_bin(static_cast<double>(k))));
    return out;
}

// Blackman-windowed DFT with four-line interpolation per peak. The four bins
// on the heavier side of the peak are fitted to A * blackman_lobe(delta - o)
// over the sub-bin offset delta: the amplitude solve is closed-form for fixed
// delta, and delta itself comes from a coarse scan plus golden-section
// refinement of the residual.
inline std::vector<RecoveredComponent> wifft_estimate(const SampledSignal& signal,
                                                      const BaselineConfig& cfg = {}) {
    const std::size_t n = signal.size();
    if (n < 8) throw std::invalid_argument("wifft_estimate: record too short for the window fit");

    SampledSignal windowed;
    windowed.fs = signal.fs;
    windowed.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
        windowed.samples[i] = signal.samples[i] * (0.42 - 0.5 * std::cos(t) + 0.08 * std::cos(2.0 * t));
    }
    const Spectrum s = dft(windowed);
    const int k_hi = static_cast<int>(n / 2) - 1;

    std::vector<RecoveredComponent> out;
    for (int k0 : detail::spectral_peaks(s, cfg.peak_threshold)) {
        // Four bins biased toward the stronger neighbor.
        bool right = s.magnitude(static_cast<std::size_t>(k0 + 1)) >=
                     s.magnitude(static_cast<std::size_t>(k0 - 1));
        if (k0 - 2 < 1) right = true;
        if (k0 + 2 > k_hi) right = false;
        const int o_lo = right ? -1 : -2;
        if (k0 + o_lo < 1 || k0 + o_lo + 3 > k_hi) continue;

        double mags[4];
        double offs[4];
        for (int j = 0; j < 4; ++j) {
            offs[j] = static_cast<double>(o_lo + j);
            mags[j] = s.magnitude(static_cast<std::size_t>(k0 + o_lo + j));
        }

        auto amp_for = [&](double delta) {
            double num = 0.0, den = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double e = detail::blackman_lobe(delta - offs[j]);
                num += mags[j] * e;
                den += e * e;
            }
            return den > 0.0 ? num / den : 0.0;
        };
        auto residual = [&](double delta) {
            const double a = amp_for(delta);
            double r = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double d = mags[j] - a * detail::blackman_lobe(delta - offs[j]);
                r += d * d;
            }
            return r;
        };

        double best = 0.0, best_r = residual(0.0);
        for (double d = -0.6; d <= 0.6; d += 0.02) {
            const double r = residual(d);
            if (r < best_r) {
                best_r = r;
                best = d;
            }
        }
        double lo = best - 0.02, hi = best + 0.02;
        constexpr double inv_phi = 0.6180339887498949;
        double x1 = hi - (hi - lo) * inv_phi, x2 = lo + (hi - lo) * inv_phi;
        double r1 = residual(x1), r2 = residual(x2);
        for (int it = 0; it < 60; ++it) {
            if (r1 < r2) {
                hi = x2;
                x2 = x1;
                r2 = r1;
                x1 = hi - (hi - lo) * inv_phi;
                r1 = residual(x1);
            } else {
                lo = x1;
                x1 = x2;
                r1 = r2;
                x2 = lo + (hi - lo) * inv_phi;
                r2 = residual(x2);
            }
        }
        const double delta = 0.5 * (lo + hi);
        const double a_env = amp_for(delta);
        if (!(a_env > 0.0)) continue;

        // The windowed kernel advances the bin phase by pi*delta*(N-1)/N
        // relative to the tone's start phase; undo it before converting.
        const double ph = std::arg(s.bins[static_cast<std::size_t>(k0)]) -
                          pi * delta * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
        const double freq = (static_cast<double>(k0) + delta) * s.delta_f;
        RecoveredComponent comp = sine_from_envelope(std::polar(a_env, ph), freq);
        out.push_back(comp);
    }
    std::sort(out.begin(), out.end(), [](const RecoveredComponent& a, const RecoveredComponent& b) {
        return a.freq_hz < b.freq_hz;
    });
    return out;
}

}  // namespace ihpower
