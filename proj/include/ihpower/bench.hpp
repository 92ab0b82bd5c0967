#pragma once

// Monte-Carlo benchmark harness: scenario definitions, per-trial channel
// synthesis with reproducible sub-seeded randomness, algorithm dispatch,
// error metrics, the window-size study and the runtime-vs-component-count
// study. Everything is a pure function of (definition, run config), so a
// fixed master seed reproduces every table bit-for-bit apart from the
// timing columns.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ihpower/baselines.hpp"
#include "ihpower/estimator.hpp"
#include "ihpower/power.hpp"
#include "ihpower/signal.hpp"

namespace ihpower {

enum class Algorithm { proposed, fft, wifft };

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::proposed: return "proposed";
        case Algorithm::fft: return "fft";
        case Algorithm::wifft: return "wifft";
    }
    return "unknown";
}

inline std::optional<Algorithm> algorithm_from_string(const std::string& s) {
    if (s == "proposed") return Algorithm::proposed;
    if (s == "fft") return Algorithm::fft;
    if (s == "wifft") return Algorithm::wifft;
    return {};
}

// One benchmark scenario: a named sweep over signal variants at a fixed
// sampling setup (5 kHz, 1024 samples, ~4.88 Hz resolution).
struct Scenario {
    std::string id;
    std::string sweep_name;
    std::vector<double> sweep_values;
    double snr_db = 60.0;   // ignored when the sweep itself is SNR
    double fs = 5000.0;
    std::size_t n_samples = 1024;
};

// A: lone interharmonic walking toward/away from the 50 Hz fundamental.
// B: lone interharmonic near the third harmonic.
// C: interharmonic pair offset from both fundamental and third harmonic.
// D: fundamental shift, harmonics tracking h*f1, offsets f1+1 and 3f1+1.
// E: scenario C at offset 1 Hz under an SNR sweep.
inline Scenario make_scenario(char id) {
    Scenario s;
    s.id = std::string(1, id);
    switch (id) {
        case 'A':
            s.sweep_name = "f_ih_hz";
            s.sweep_values = {46, 47, 48, 49, 51, 52, 53, 54};
            break;
        case 'B':
            s.sweep_name = "f_ih_hz";
            s.sweep_values = {151, 152, 153, 154};
            break;
        case 'C':
            s.sweep_name = "offset_hz";
            s.sweep_values = {1, 2, 3, 4};
            break;
        case 'D':
            // Off-nominal fundamental; the nominal 50.0 point is excluded.
            s.sweep_name = "f1_hz";
            for (int i = 0; i <= 10; ++i)
                if (i != 5) s.sweep_values.push_back(49.5 + 0.1 * i);
            break;
        case 'E':
            s.sweep_name = "snr_db";
            for (int v = 40; v <= 80; v += 5) s.sweep_values.push_back(v);
            break;
        default:
            throw std::invalid_argument("make_scenario: unknown scenario id");
    }
    return s;
}

// Component set (phases zero; drawn per trial) for one sweep value.
inline std::vector<FrequencyComponent> scenario_components(const Scenario& s, double sweep_value) {
    static constexpr int harmonic_orders[] = {3, 5, 7, 11, 13};
    std::vector<FrequencyComponent> c;
    const char id = s.id.empty() ? '?' : s.id[0];
    if (id == 'D') {
        const double f1 = sweep_value;
        c.push_back({f1, 1.0, 0.0});
        for (int h : harmonic_orders) c.push_back({f1 * h, 0.1, 0.0});
        c.push_back({f1 + 1.0, 0.1, 0.0});
        c.push_back({3.0 * f1 + 1.0, 0.1, 0.0});
        return c;
    }
    c.push_back({50.0, 1.0, 0.0});
    for (int h : harmonic_orders) c.push_back({50.0 * h, 0.1, 0.0});
    switch (id) {
        case 'A':
        case 'B':
            c.push_back({sweep_value, 0.1, 0.0});
            break;
        case 'C':
            c.push_back({50.0 + sweep_value, 0.1, 0.0});
            c.push_back({150.0 + sweep_value, 0.1, 0.0});
            break;
        case 'E':
            c.push_back({51.0, 0.1, 0.0});
            c.push_back({151.0, 0.1, 0.0});
            break;
        default:
            throw std::invalid_argument("scenario_components: unknown scenario id");
    }
    return c;
}

// Voltage/current specs for one Monte-Carlo trial: equal component structure,
// independently drawn phases, independent noise. Sub-seed channels: 0 voltage
// phases, 1 current phases, 2 voltage noise, 3 current noise.
inline std::pair<SignalSpec, SignalSpec> trial_specs(const std::vector<FrequencyComponent>& comps,
                                                     double fs, std::size_t n_samples,
                                                     std::optional<double> snr_db,
                                                     std::uint64_t master, std::uint64_t trial) {
    SignalSpec u, i;
    u.fs = i.fs = fs;
    u.n_samples = i.n_samples = n_samples;
    u.components = i.components = comps;
    u.snr_db = i.snr_db = snr_db;
    u.seed = mix_seed(master, trial, 2);
    i.seed = mix_seed(master, trial, 3);
    std::mt19937_64 gen_u(mix_seed(master, trial, 0));
    std::mt19937_64 gen_i(mix_seed(master, trial, 1));
    for (auto& comp : u.components) comp.phase_rad = uniform_phase(gen_u);
    for (auto& comp : i.components) comp.phase_rad = uniform_phase(gen_i);
    return {std::move(u), std::move(i)};
}

// Sieve-threshold selection from an assumed signal population. Treating all
// non-fundamental components as the "noise" of a unit fundamental pins their
// total power: sum of squared amplitudes = 10^(-snr_db/10). A shape model
// distributes that power over the n-1 non-fundamental components, and the
// threshold is c_factor times the weakest resulting amplitude, so genuine
// components pass while noise-floor artifacts are rejected.
enum class AmplitudeModel { exponential, polynomial, constant };

struct MuResult {
    double mu = 0.0;
    std::vector<double> amplitudes;   // scaled A_2..A_n, descending
    bool underflow = false;           // mu hit the representable floor
};

inline MuResult compute_mu(double snr_db, AmplitudeModel model, int n_components,
                           double shape_param, double c_factor = 0.1) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("compute_mu: snr_db must be finite");
    if (n_components < 2)
        throw std::invalid_argument("compute_mu: need at least one non-fundamental component");
    if (!(c_factor > 0.0 && c_factor <= 1.0))
        throw std::invalid_argument("compute_mu: c_factor must be in (0, 1]");

    std::vector<double> shape;
    shape.reserve(static_cast<std::size_t>(n_components - 1));
    switch (model) {
        case AmplitudeModel::exponential:
            if (!(shape_param > 0.0 && shape_param < 1.0))
                throw std::invalid_argument("compute_mu: exponential ratio must be in (0, 1)");
            for (int k = 2; k <= n_components; ++k)
                shape.push_back(std::pow(shape_param, k - 1));
            break;
        case AmplitudeModel::polynomial:
            if (!(shape_param > 0.0))
                throw std::invalid_argument("compute_mu: polynomial exponent must be positive");
            for (int k = 2; k <= n_components; ++k)
                shape.push_back(std::pow(static_cast<double>(k), -shape_param));
            break;
        case AmplitudeModel::constant:
            if (!(shape_param > 0.0 && shape_param <= 1.0))
                throw std::invalid_argument("compute_mu: constant level must be in (0, 1]");
            shape.assign(static_cast<std::size_t>(n_components - 1), shape_param);
            break;
    }

    double ss = 0.0;
    for (double s : shape) ss += s * s;
    const double target = std::pow(10.0, -snr_db / 10.0);
    MuResult out;
    if (ss > 0.0 && std::isfinite(ss)) {
        const double lambda = std::sqrt(target / ss);
        for (double s : shape) out.amplitudes.push_back(lambda * s);
    } else {
        out.amplitudes.assign(shape.size(), 0.0);
    }
    const double a_min =
        out.amplitudes.empty() ? 0.0 : *std::min_element(out.amplitudes.begin(), out.amplitudes.end());
    out.mu = c_factor * a_min;
    if (!(out.mu >= 1e-300) || !std::isfinite(out.mu)) {
        out.mu = 1e-300;
        out.underflow = true;
    }
    return out;
}

struct RunConfig {
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms = {Algorithm::proposed, Algorithm::fft, Algorithm::wifft};
    EstimatorConfig estimator;
    BaselineConfig baseline;
    std::optional<double> snr_override;   // replaces the scenario's fixed SNR (not an SNR sweep)
};

inline std::vector<RecoveredComponent> run_algorithm(Algorithm alg, const SampledSignal& sig,
                                                     const EstimatorConfig& est,
                                                     const BaselineConfig& base) {
    switch (alg) {
        case Algorithm::proposed: return estimate_components(sig, est).components;
        case Algorithm::fft: return fft_estimate(sig, base);
        case Algorithm::wifft: return wifft_estimate(sig, base);
    }
    throw std::invalid_argument("run_algorithm: unknown algorithm");
}

inline constexpr int n_bands = 5;

inline const char* band_name(int b) {
    switch (b) {
        case 0: return "fund";
        case 1: return "harm";
        case 2: return "inter";
        case 3: return "cross";
        case 4: return "total";
    }
    return "unknown";
}

inline double band_value(const PowerReport& r, int b) {
    switch (b) {
        case 0: return r.p_fund;
        case 1: return r.p_harm;
        case 2: return r.p_inter;
        case 3: return r.p_cross;
        case 4: return r.p_total;
    }
    throw std::invalid_argument("band_value: band index out of range");
}

struct BandMetrics {
    double rmse = 0.0;
    double ec_mean = 0.0;
    double ec_std = 0.0;
};

// Per-band error statistics over paired estimate/truth reports. ec is the
// per-trial relative error |e|/|truth|, floored at 1e-12 in the denominator
// so band powers that cross zero on a particular phase draw do not divide
// out; rmse is absolute; ec_std is the population deviation.
inline std::array<BandMetrics, n_bands> compute_metrics(const std::vector<PowerReport>& estimates,
                                                        const std::vector<PowerReport>& truths) {
    if (estimates.empty() || estimates.size() != truths.size())
        throw std::invalid_argument("compute_metrics: need equally many estimates and truths");
    std::array<BandMetrics, n_bands> out{};
    const double n = static_cast<double>(estimates.size());
    for (int b = 0; b < n_bands; ++b) {
        double se = 0.0, ec_sum = 0.0, ec_sq = 0.0;
        for (std::size_t t = 0; t < estimates.size(); ++t) {
            const double e = band_value(estimates[t], b) - band_value(truths[t], b);
            const double ec = std::abs(e) / std::max(std::abs(band_value(truths[t], b)), 1e-12);
            se += e * e;
            ec_sum += ec;
            ec_sq += ec * ec;
        }
        out[static_cast<std::size_t>(b)].rmse = std::sqrt(se / n);
        const double mean = ec_sum / n;
        out[static_cast<std::size_t>(b)].ec_mean = mean;
        out[static_cast<std::size_t>(b)].ec_std = std::sqrt(std::max(0.0, ec_sq / n - mean * mean));
    }
    return out;
}

inline std::array<BandMetrics, n_bands> compute_metrics(const std::vector<PowerReport>& estimates,
                                                        const PowerReport& truth) {
    return compute_metrics(estimates, std::vector<PowerReport>(estimates.size(), truth));
}

struct MetricsRow {
    std::string scenario;
    double sweep_value = 0.0;
    std::string algorithm;
    std::string band;
    double rmse = 0.0;
    double ec_mean = 0.0;
    double ec_std = 0.0;
    double mean_time_ms = 0.0;
    int failures = 0;
};

struct TrialRecord {
    std::string scenario;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t master_seed = 0;
    Algorithm algorithm = Algorithm::proposed;
    bool failed = false;
    double time_ms = 0.0;
    PowerReport estimate;
    PowerReport truth;
};

struct ScenarioResult {
    std::vector<MetricsRow> metrics;
    std::vector<TrialRecord> trials;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0,
                         std::chrono::steady_clock::time_point t1) {
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace detail

// Runs one scenario sweep. A trial fails for an algorithm when it yields no
// matched pairs or any stage throws; failures are counted per row and the
// trial is excluded from that algorithm's statistics instead of aborting the
// sweep. Matching tolerance is a quarter bin; band rules are the classify
// defaults. Each algorithm derives K from its own fundamental estimate.
inline ScenarioResult run_scenario(const Scenario& scenario, const RunConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_scenario: need at least one trial");
    if (cfg.algorithms.empty()) throw std::invalid_argument("run_scenario: no algorithms selected");

    ScenarioResult result;
    const double delta_f = scenario.fs / static_cast<double>(scenario.n_samples);
    const double match_tol = delta_f / 4.0;
    const double window_s = static_cast<double>(scenario.n_samples) / scenario.fs;

    for (double sweep : scenario.sweep_values) {
        const auto comps = scenario_components(scenario, sweep);
        std::optional<double> snr;
        if (scenario.sweep_name == "snr_db")
            snr = sweep;
        else
            snr = cfg.snr_override ? *cfg.snr_override : scenario.snr_db;

        struct PerAlg {
            std::vector<PowerReport> estimates, truths;
            double time_sum = 0.0;
            int failures = 0;
        };
        std::vector<PerAlg> acc(cfg.algorithms.size());

        for (int trial = 0; trial < cfg.trials; ++trial) {
            const auto [spec_u, spec_i] =
                trial_specs(comps, scenario.fs, scenario.n_samples, snr, cfg.seed,
                            static_cast<std::uint64_t>(trial));
            const PowerReport truth = ground_truth_power(spec_u, spec_i);
            const SampledSignal su = synthesize(spec_u);
            const SampledSignal si = synthesize(spec_i);

            for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
                const Algorithm alg = cfg.algorithms[a];
                TrialRecord rec;
                rec.scenario = scenario.id;
                rec.sweep_value = sweep;
                rec.trial = trial;
                rec.master_seed = cfg.seed;
                rec.algorithm = alg;
                rec.truth = truth;
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const auto fu = run_algorithm(alg, su, cfg.estimator, cfg.baseline);
                    const auto fi = run_algorithm(alg, si, cfg.estimator, cfg.baseline);
                    const auto t2 = std::chrono::steady_clock::now();
                    rec.time_ms = 0.5 * detail::elapsed_ms(t0, t2);   // per channel

                    const auto matched = match_components(fu, fi, match_tol);
                    if (matched.pairs.empty()) throw std::runtime_error("no matched pairs");
                    const auto part = classify(matched.pairs);
                    const double f1 = matched.pairs[part.fundamental].freq();
                    rec.estimate = band_powers(matched.pairs, part, window_s * f1);

                    acc[a].estimates.push_back(rec.estimate);
                    acc[a].truths.push_back(truth);
                    acc[a].time_sum += rec.time_ms;
                } catch (const std::exception&) {
                    rec.failed = true;
                    acc[a].failures += 1;
                }
                result.trials.push_back(std::move(rec));
            }
        }

        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
            std::array<BandMetrics, n_bands> m{};
            if (!acc[a].estimates.empty()) m = compute_metrics(acc[a].estimates, acc[a].truths);
            const double mean_time =
                acc[a].estimates.empty() ? 0.0
                                         : acc[a].time_sum / static_cast<double>(acc[a].estimates.size());
            for (int b = 0; b < n_bands; ++b) {
                MetricsRow row;
                row.scenario = scenario.id;
                row.sweep_value = sweep;
                row.algorithm = to_string(cfg.algorithms[a]);
                row.band = band_name(b);
                row.rmse = m[static_cast<std::size_t>(b)].rmse;
                row.ec_mean = m[static_cast<std::size_t>(b)].ec_mean;
                row.ec_std = m[static_cast<std::size_t>(b)].ec_std;
                row.mean_time_ms = mean_time;
                row.failures = acc[a].failures;
                result.metrics.push_back(std::move(row));
            }
        }
    }
    return result;
}

// Window-size study: fundamental, harmonics {3,5,7,11,13} and a 52.5 Hz
// interharmonic, all non-fundamental amplitudes 0.1, SNR 60 dB. For each q the
// per-component mean absolute frequency/amplitude/phase errors are averaged
// over trials; a truth component with no estimate within 2 Hz counts as a miss
// and contributes its full amplitude to the amplitude error. freq_hz = -1
// carries the all-component aggregate.
struct QSweepRow {
    int q = 0;
    double freq_hz = 0.0;
    double mean_freq_err_hz = 0.0;
    double mean_amp_err_pu = 0.0;
    double mean_phase_err_rad = 0.0;
    double miss_rate = 0.0;
    double mean_time_ms = 0.0;
};

inline std::vector<QSweepRow> run_q_sweep(const std::vector<int>& q_values, int trials,
                                          std::uint64_t seed,
                                          const EstimatorConfig& base_cfg = {}) {
    if (trials < 1) throw std::invalid_argument("run_q_sweep: need at least one trial");
    std::vector<FrequencyComponent> comps{{50.0, 1.0, 0.0}};
    for (int h : {3, 5, 7, 11, 13}) comps.push_back({50.0 * h, 0.1, 0.0});
    comps.push_back({52.5, 0.1, 0.0});
    const std::size_t nc = comps.size();

    std::vector<QSweepRow> rows;
    for (int q : q_values) {
        EstimatorConfig cfg = base_cfg;
        cfg.q = q;

        std::vector<double> freq_err(nc, 0.0), amp_err(nc, 0.0), phase_err(nc, 0.0);
        std::vector<int> matched_n(nc, 0), missed_n(nc, 0);
        double time_sum = 0.0;

        for (int trial = 0; trial < trials; ++trial) {
            auto [spec_u, spec_i] = trial_specs(comps, 5000.0, 1024, 60.0, seed,
                                                static_cast<std::uint64_t>(trial));
            (void)spec_i;
            const auto sig = synthesize(spec_u);
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = estimate_components(sig, cfg);
            time_sum += detail::elapsed_ms(t0, std::chrono::steady_clock::now());

            for (std::size_t c = 0; c < nc; ++c) {
                const auto& truth = spec_u.components[c];
                const RecoveredComponent* best = nullptr;
                for (const auto& est : res.components)
                    if (std::abs(est.freq_hz - truth.freq_hz) <= 2.0 &&
                        (!best || std::abs(est.freq_hz - truth.freq_hz) <
                                      std::abs(best->freq_hz - truth.freq_hz)))
                        best = &est;
                if (!best) {
                    missed_n[c] += 1;
                    amp_err[c] += truth.amp;   // estimate of zero
                    continue;
                }
                matched_n[c] += 1;
                freq_err[c] += std::abs(best->freq_hz - truth.freq_hz);
                amp_err[c] += std::abs(best->amp - truth.amp);
                phase_err[c] += std::abs(wrap_phase(best->phase_rad - truth.phase_rad));
            }
        }

        double agg_f = 0.0, agg_a = 0.0, agg_p = 0.0;
        int agg_matched = 0, agg_missed = 0;
        for (std::size_t c = 0; c < nc; ++c) {
            QSweepRow row;
            row.q = q;
            row.freq_hz = comps[c].freq_hz;
            row.mean_freq_err_hz = matched_n[c] ? freq_err[c] / matched_n[c] : 0.0;
            row.mean_amp_err_pu = amp_err[c] / trials;
            row.mean_phase_err_rad = matched_n[c] ? phase_err[c] / matched_n[c] : 0.0;
            row.miss_rate = static_cast<double>(missed_n[c]) / trials;
            row.mean_time_ms = time_sum / trials;
            rows.push_back(row);
            agg_f += freq_err[c];
            agg_a += amp_err[c];
            agg_p += phase_err[c];
            agg_matched += matched_n[c];
            agg_missed += missed_n[c];
        }
        QSweepRow agg;
        agg.q = q;
        agg.freq_hz = -1.0;
        agg.mean_freq_err_hz = agg_matched ? agg_f / agg_matched : 0.0;
        agg.mean_amp_err_pu = agg_a / (static_cast<double>(trials) * static_cast<double>(nc));
        agg.mean_phase_err_rad = agg_matched ? agg_p / agg_matched : 0.0;
        agg.miss_rate = static_cast<double>(agg_missed) /
                        (static_cast<double>(trials) * static_cast<double>(nc));
        agg.mean_time_ms = time_sum / trials;
        rows.push_back(agg);
    }
    return rows;
}

// Runtime-vs-component-count study: fundamental plus harmonics 2..Q at 0.1,
// SNR 60 dB. Median of `reps` runs after 5 warmups per point, then an
// ordinary least-squares line time = intercept + slope * Q with its R^2.
struct TimingRow {
    int n_components = 0;
    double time_ms = 0.0;
};

struct TimingStudy {
    std::vector<TimingRow> rows;
    double slope_ms = 0.0;
    double intercept_ms = 0.0;
    double r_squared = 1.0;
};

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline TimingStudy run_timing_study(const std::vector<int>& component_counts, int reps,
                                    std::uint64_t seed, const EstimatorConfig& cfg = {}) {
    if (reps < 1) throw std::invalid_argument("run_timing_study: need at least one repetition");
    TimingStudy study;
    std::vector<SampledSignal> sigs;
    sigs.reserve(component_counts.size());
    for (int qc : component_counts) {
        if (qc < 1 || 50 * qc >= 2500)
            throw std::invalid_argument("run_timing_study: component count out of range");
        std::vector<FrequencyComponent> comps{{50.0, 1.0, 0.0}};
        for (int h = 2; h <= qc; ++h) comps.push_back({50.0 * h, 0.1, 0.0});
        auto [spec_u, spec_i] =
            trial_specs(comps, 5000.0, 1024, 60.0, seed, static_cast<std::uint64_t>(qc));
        (void)spec_i;
        sigs.push_back(synthesize(spec_u));
    }

    // Repetitions are interleaved across the component counts so a slow
    // scheduling period inflates every point a little instead of poisoning
    // one row of the fit.
    for (const auto& sig : sigs)
        for (int w = 0; w < 5; ++w) (void)estimate_components(sig, cfg);
    std::vector<std::vector<double>> times(sigs.size());
    for (auto& t : times) t.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r)
        for (std::size_t i = 0; i < sigs.size(); ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)estimate_components(sigs[i], cfg);
            times[i].push_back(detail::elapsed_ms(t0, std::chrono::steady_clock::now()));
        }
    for (std::size_t i = 0; i < sigs.size(); ++i)
        study.rows.push_back({component_counts[i], median_of(std::move(times[i]))});

    const double n = static_cast<double>(study.rows.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : study.rows) {
        sx += r.n_components;
        sy += r.time_ms;
        sxx += static_cast<double>(r.n_components) * r.n_components;
        sxy += r.n_components * r.time_ms;
    }
    const double denom = n * sxx - sx * sx;
    if (denom != 0.0) {
        study.slope_ms = (n * sxy - sx * sy) / denom;
        study.intercept_ms = (sy - study.slope_ms * sx) / n;
        double ss_res = 0.0, ss_tot = 0.0;
        const double mean_y = sy / n;
        for (const auto& r : study.rows) {
            const double fit = study.intercept_ms + study.slope_ms * r.n_components;
            ss_res += (r.time_ms - fit) * (r.time_ms - fit);
            ss_tot += (r.time_ms - mean_y) * (r.time_ms - mean_y);
        }
        study.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return study;
}

// Median per-call runtimes of the three algorithms on one record, for
// side-by-side overhead comparisons.
struct AlgorithmTimings {
    double proposed_ms = 0.0;
    double fft_ms = 0.0;
    double wifft_ms = 0.0;
};

inline AlgorithmTimings time_algorithms(const SampledSignal& sig, int reps,
                                        const EstimatorConfig& est = {},
                                        const BaselineConfig& base = {}) {
    if (reps < 1) throw std::invalid_argument("time_algorithms: need at least one repetition");
    auto measure = [&](auto&& fn) {
        for (int w = 0; w < 5; ++w) (void)fn();
        std::vector<double> times;
        times.reserve(static_cast<std::size_t>(reps));
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)fn();
            times.push_back(detail::elapsed_ms(t0, std::chrono::steady_clock::now()));
        }
        return median_of(std::move(times));
    };
    AlgorithmTimings t;
    t.proposed_ms = measure([&] { return estimate_components(sig, est).components.size(); });
    t.fft_ms = measure([&] { return fft_estimate(sig, base).size(); });
    t.wifft_ms = measure([&] { return wifft_estimate(sig, base).size(); });
    return t;
}

}  // namespace ihpower
