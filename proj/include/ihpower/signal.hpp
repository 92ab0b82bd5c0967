#pragma once

// Multi-tone test-signal synthesis with reproducible additive white Gaussian
// noise. All randomness in the library flows through the two primitives here:
// splitmix64-based sub-seed derivation and a Box-Muller Gaussian sampler on
// mt19937_64. std::normal_distribution is deliberately not used: its algorithm
// is implementation-defined, and benchmark tables are required to be
// bit-reproducible for a fixed seed across standard libraries.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ihpower {

inline constexpr double pi = std::numbers::pi;

// Wraps an angle to [-pi, pi).
inline double wrap_phase(double x) {
    double w = x - 2.0 * pi * std::floor((x + pi) / (2.0 * pi));
    if (w >= pi) w -= 2.0 * pi;   // guards the floor() rounding edge
    if (w < -pi) w += 2.0 * pi;
    return w;
}

// One sinusoidal term of the signal model: amp * sin(2*pi*freq_hz*t + phase_rad).
struct FrequencyComponent {
    double freq_hz = 0.0;
    double amp = 0.0;
    double phase_rad = 0.0;
};

// Full description of a finite sampled record. snr_db empty means noise-free;
// seed feeds the noise generator only.
struct SignalSpec {
    double fs = 0.0;
    std::size_t n_samples = 0;
    std::vector<FrequencyComponent> components;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
};

struct SampledSignal {
    std::vector<double> samples;
    double fs = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return fs > 0.0 ? static_cast<double>(samples.size()) / fs : 0.0; }
};

// Throws std::invalid_argument on the first violated precondition.
inline void validate(const SignalSpec& spec) {
    if (!(spec.fs > 0.0) || !std::isfinite(spec.fs))
        throw std::invalid_argument("signal spec: fs must be positive and finite");
    if (spec.n_samples < 2)
        throw std::invalid_argument("signal spec: need at least 2 samples");
    if (spec.components.empty())
        throw std::invalid_argument("signal spec: component list is empty");
    const double nyquist = spec.fs / 2.0;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const auto& c = spec.components[i];
        if (!std::isfinite(c.freq_hz) || c.freq_hz <= 0.0 || c.freq_hz >= nyquist)
            throw std::invalid_argument("signal spec: component " + std::to_string(i) +
                                        " frequency outside (0, fs/2)");
        if (!std::isfinite(c.amp) || c.amp <= 0.0)
            throw std::invalid_argument("signal spec: component " + std::to_string(i) +
                                        " amplitude must be positive");
        if (!std::isfinite(c.phase_rad))
            throw std::invalid_argument("signal spec: component " + std::to_string(i) +
                                        " phase must be finite");
        for (std::size_t j = 0; j < i; ++j)
            if (spec.components[j].freq_hz == c.freq_hz)
                throw std::invalid_argument("signal spec: duplicate component frequency");
    }
    if (spec.snr_db && !std::isfinite(*spec.snr_db))
        throw std::invalid_argument("signal spec: snr_db must be finite");
}

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the RNG seed for one (trial, channel) cell of a Monte-Carlo run from
// the run's master seed. Channels by convention: 0 voltage phases, 1 current
// phases, 2 voltage noise, 3 current noise.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t channel) {
    return splitmix64(splitmix64(splitmix64(master) + trial) + channel);
}

// Standard-normal sampler: Box-Muller over mt19937_64. Both algorithms are
// pinned by name so a seed reproduces the identical sample stream anywhere.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so log(u1) is finite; 53-bit mantissa resolution.
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Uniform phase in [-pi, pi), for randomized trial phases.
inline double uniform_phase(std::mt19937_64& gen) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;   // [0, 1)
    return -pi + 2.0 * pi * u;
}

// Adds white Gaussian noise scaled so that (deterministic power) / (noise
// power) equals snr_db in expectation. The reference power is the mean square
// of the samples as given, which must not be identically zero.
inline std::vector<double> add_awgn(std::vector<double> samples, double snr_db, std::uint64_t seed) {
    if (samples.empty())
        throw std::invalid_argument("add_awgn: empty sample vector");
    double p_sig = 0.0;
    for (double v : samples) p_sig += v * v;
    p_sig /= static_cast<double>(samples.size());
    if (p_sig <= 0.0)
        throw std::invalid_argument("add_awgn: zero-power signal cannot be scaled to an SNR");
    const double sigma = std::sqrt(p_sig * std::pow(10.0, -snr_db / 10.0));
    GaussianSampler normal(seed);
    for (double& v : samples) v += sigma * normal();
    return samples;
}

// Evaluates the deterministic model and applies noise when the spec asks for it.
inline SampledSignal synthesize(const SignalSpec& spec) {
    validate(spec);
    SampledSignal out;
    out.fs = spec.fs;
    out.samples.assign(spec.n_samples, 0.0);
    for (const auto& c : spec.components) {
        const double w = 2.0 * pi * c.freq_hz / spec.fs;
        for (std::size_t i = 0; i < spec.n_samples; ++i)
            out.samples[i] += c.amp * std::sin(w * static_cast<double>(i) + c.phase_rad);
    }
    if (spec.snr_db)
        out.samples = add_awgn(std::move(out.samples), *spec.snr_db, spec.seed);
    return out;
}

}  // namespace ihpower
