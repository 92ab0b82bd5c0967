#pragma once

// DFT front end and the rational single-tone bin model used by the component
// estimator. Bins carry the 1/N normalization so a bin-centered unit tone of
// amplitude A shows up as a bin of magnitude A/2 (envelope convention below).

#include <algorithm>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "ihpower/signal.hpp"

namespace ihpower {

using cdouble = std::complex<double>;

struct Spectrum {
    std::vector<cdouble> bins;   // length N, bins[k] = (1/N) sum_n x[n] e^{-j2pi kn/N}
    double delta_f = 0.0;        // fs / N
    double fs = 0.0;

    std::size_t size() const { return bins.size(); }
    double magnitude(std::size_t k) const { return std::abs(bins[k]); }
    double freq_of_bin(double k) const { return k * delta_f; }
};

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle tables are cached per transform size; the table for N holds
// exp(-j*2*pi*j/N) for j in [0, N/2).
inline const std::vector<cdouble>& twiddles(std::size_t n) {
    thread_local std::map<std::size_t, std::vector<cdouble>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cdouble> w(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j)
        w[j] = std::polar(1.0, -2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
    return cache.emplace(n, std::move(w)).first->second;
}

// In-place iterative radix-2 decimation-in-time transform, unnormalized.
inline void fft_pow2(std::vector<cdouble>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cdouble u = a[i + j];
                const cdouble v = a[i + j + len / 2] * w[j * stride];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace detail

// Full-length normalized DFT of a real record. Powers of two take the radix-2
// path; other lengths fall back to direct summation (test sizes only).
inline Spectrum dft(const SampledSignal& signal) {
    const std::size_t n = signal.size();
    if (n < 2) throw std::invalid_argument("dft: need at least 2 samples");
    if (!(signal.fs > 0.0)) throw std::invalid_argument("dft: sample rate must be positive");

    Spectrum s;
    s.fs = signal.fs;
    s.delta_f = signal.fs / static_cast<double>(n);
    if (detail::is_pow2(n)) {
        s.bins.assign(signal.samples.begin(), signal.samples.end());
        detail::fft_pow2(s.bins);
    } else {
        s.bins.assign(n, cdouble{0.0, 0.0});
        for (std::size_t k = 0; k < n; ++k) {
            cdouble acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                acc += signal.samples[i] *
                       std::polar(1.0, -2.0 * pi * static_cast<double>(k) * static_cast<double>(i) /
                                           static_cast<double>(n));
            s.bins[k] = acc;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& b : s.bins) b *= inv_n;
    return s;
}

// A sinusoid recovered from a spectrum, in the real-sine convention
// amp * sin(2*pi*freq_hz*t + phase_rad).
struct RecoveredComponent {
    double freq_hz = 0.0;
    double amp = 0.0;
    double phase_rad = 0.0;
};

// The positive-frequency complex envelope of A*sin(2*pi*f*t + psi) is
// (A/2)*exp(j(psi - pi/2)); these two helpers convert in both directions.
inline RecoveredComponent sine_from_envelope(cdouble envelope, double freq_hz) {
    return {freq_hz, 2.0 * std::abs(envelope), wrap_phase(std::arg(envelope) + pi / 2.0)};
}

inline cdouble envelope_from_sine(double amp, double phase_rad) {
    return std::polar(amp / 2.0, phase_rad - pi / 2.0);
}

// Residue of the rational bin model for a tone at fractional bin beta with the
// given complex envelope: near its peak the spectrum behaves as alpha/(beta - k).
inline cdouble tone_alpha(double beta, cdouble envelope) {
    const cdouble num = std::polar(1.0, 2.0 * pi * beta) - 1.0;
    return envelope * num / cdouble{0.0, 2.0 * pi};
}

// Inverts tone_alpha. Throws when beta sits within pole_eps of an integer bin,
// where the rational model degenerates (the tone is exactly bin-centered and
// its envelope is read directly off that bin instead).
inline cdouble envelope_from_alpha(cdouble alpha, double beta, double pole_eps = 1e-9) {
    if (std::abs(beta - std::round(beta)) <= pole_eps)
        throw std::domain_error("envelope_from_alpha: beta indistinguishable from an integer bin");
    const cdouble num = std::polar(1.0, 2.0 * pi * beta) - 1.0;
    return alpha * cdouble{0.0, 2.0 * pi} / num;
}

// Evaluates the single-tone model S(k) = alpha / (beta - k). Throws on
// evaluation inside the pole guard band.
inline cdouble eval_linear_model(cdouble alpha, double beta, double k, double pole_eps = 1e-9) {
    const double d = beta - k;
    if (std::abs(d) <= pole_eps)
        throw std::domain_error("eval_linear_model: evaluation at the model pole");
    return alpha / d;
}

// A contiguous window of 2q positive-frequency bins around one spectral peak.
struct PeakCluster {
    int k_peak = 0;
    std::vector<int> k_indices;   // ascending, size 2q

    int q() const { return static_cast<int>(k_indices.size() / 2); }
};

// Locates local maxima of |bins| on the positive-frequency band [1, N/2 - 1],
// keeps those at or above threshold * (band maximum), merges maxima within two
// bins of each other (one main lobe can split under noise), and centers a
// 2q-bin window on the dominant bin of each cluster, shifted as needed to stay
// inside the band. Distinct maxima farther apart each get their own window
// even when the windows overlap; the estimator deduplicates shared
// discoveries. threshold in [0, 1).
inline std::vector<PeakCluster> find_peaks(const Spectrum& spectrum, double threshold, int q) {
    if (q < 1) throw std::invalid_argument("find_peaks: q must be >= 1");
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw std::invalid_argument("find_peaks: threshold must lie in [0, 1)");
    const std::size_t n = spectrum.size();
    const int k_hi = static_cast<int>(n / 2) - 1;   // last usable bin (Nyquist excluded)
    if (k_hi < 2 * q)
        throw std::invalid_argument("find_peaks: record too short for the requested window size");

    double max_mag = 0.0;
    for (int k = 1; k <= k_hi; ++k) max_mag = std::max(max_mag, spectrum.magnitude(k));
    std::vector<PeakCluster> out;
    if (max_mag <= 0.0) return out;

    std::vector<int> peaks;
    for (int k = 1; k <= k_hi; ++k) {
        const double m = spectrum.magnitude(k);
        if (m < threshold * max_mag || m <= 0.0) continue;
        const double left = spectrum.magnitude(k - 1);
        const double right = (k + 1 < static_cast<int>(n)) ? spectrum.magnitude(k + 1) : 0.0;
        if (m > left && m >= right) peaks.push_back(k);
    }

    std::size_t i = 0;
    while (i < peaks.size()) {
        std::size_t j = i;
        while (j + 1 < peaks.size() && peaks[j + 1] - peaks[j] <= 2) ++j;
        int best = peaks[i];
        for (std::size_t t = i; t <= j; ++t)
            if (spectrum.magnitude(peaks[t]) > spectrum.magnitude(best)) best = peaks[t];

        int start = best - (q - 1);
        if (start < 1) start = 1;
        if (start + 2 * q - 1 > k_hi) start = k_hi - 2 * q + 1;
        PeakCluster c;
        c.k_peak = best;
        c.k_indices.resize(static_cast<std::size_t>(2 * q));
        for (int t = 0; t < 2 * q; ++t) c.k_indices[static_cast<std::size_t>(t)] = start + t;
        out.push_back(std::move(c));
        i = j + 1;
    }
    return out;
}

}  // namespace ihpower
