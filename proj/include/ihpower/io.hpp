#pragma once

// Serialization: CSV writers for every table the tools emit, a JSON signal
// spec format, and a CSV sample reader. All floating-point columns use %.17g
// so files round trip doubles exactly.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ihpower/bench.hpp"
#include "ihpower/estimator.hpp"
#include "ihpower/signal.hpp"
#include "ihpower/spectrum.hpp"

namespace ihpower {

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_samples_csv(std::ostream& os, const SampledSignal& sig) {
    os << "index,time_s,value\n";
    for (std::size_t n = 0; n < sig.samples.size(); ++n)
        os << n << ',' << detail::fmt(static_cast<double>(n) / sig.fs) << ','
           << detail::fmt(sig.samples[n]) << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const Spectrum& spec) {
    os << "k,freq_hz,re,im,magnitude\n";
    for (std::size_t k = 0; k < spec.bins.size(); ++k)
        os << k << ',' << detail::fmt(spec.freq_of_bin(k)) << ','
           << detail::fmt(spec.bins[k].real()) << ',' << detail::fmt(spec.bins[k].imag()) << ','
           << detail::fmt(std::abs(spec.bins[k])) << '\n';
}

inline void write_components_csv(std::ostream& os, const std::vector<RecoveredComponent>& comps) {
    os << "freq_hz,amp_pu,phase_rad\n";
    for (const auto& c : comps)
        os << detail::fmt(c.freq_hz) << ',' << detail::fmt(c.amp) << ','
           << detail::fmt(c.phase_rad) << '\n';
}

// Full candidate dump, including the sieve's rejects, for diagnosing a record.
inline void write_candidates_csv(std::ostream& os, const EstimationResult& res) {
    os << "cluster_peak_bin,beta_re,beta_im,freq_hz,amp_pu,phase_rad,plausible,accepted,reject\n";
    for (const auto& c : res.candidates) {
        os << c.k_peak << ',' << detail::fmt(c.beta.real()) << ',' << detail::fmt(c.beta.imag())
           << ',';
        if (c.plausible)
            os << detail::fmt(c.params.freq_hz) << ',' << detail::fmt(c.params.amp) << ','
               << detail::fmt(c.params.phase_rad);
        else
            os << ",,";
        os << ',' << (c.plausible ? 1 : 0) << ',' << (c.accepted ? 1 : 0) << ','
           << to_string(c.reject) << '\n';
    }
}

inline void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
    os << "scenario,sweep_value,algorithm,band,rmse,ec_mean,ec_std,mean_time_ms,failures\n";
    for (const auto& r : rows)
        os << r.scenario << ',' << detail::fmt(r.sweep_value) << ',' << r.algorithm << ','
           << r.band << ',' << detail::fmt(r.rmse) << ',' << detail::fmt(r.ec_mean) << ','
           << detail::fmt(r.ec_std) << ',' << detail::fmt(r.mean_time_ms) << ',' << r.failures
           << '\n';
}

inline void write_reports_csv(std::ostream& os, const std::vector<TrialRecord>& recs) {
    os << "scenario,sweep_value,trial,algorithm,failed,time_ms,"
          "p_fund,p_harm,p_inter,p_cross,p_total,k_cycles,"
          "p_fund_true,p_harm_true,p_inter_true,p_cross_true,p_total_true\n";
    for (const auto& r : recs) {
        os << r.scenario << ',' << detail::fmt(r.sweep_value) << ',' << r.trial << ','
           << to_string(r.algorithm) << ',' << (r.failed ? 1 : 0) << ','
           << detail::fmt(r.time_ms);
        for (int b = 0; b < n_bands; ++b) os << ',' << detail::fmt(band_value(r.estimate, b));
        os << ',' << detail::fmt(r.estimate.k_cycles);
        for (int b = 0; b < n_bands; ++b) os << ',' << detail::fmt(band_value(r.truth, b));
        os << '\n';
    }
}

inline void write_qsweep_csv(std::ostream& os, const std::vector<QSweepRow>& rows) {
    os << "q,freq_hz,mean_freq_err_hz,mean_amp_err_pu,mean_phase_err_rad,miss_rate,"
          "mean_time_ms\n";
    for (const auto& r : rows)
        os << r.q << ',' << detail::fmt(r.freq_hz) << ',' << detail::fmt(r.mean_freq_err_hz)
           << ',' << detail::fmt(r.mean_amp_err_pu) << ',' << detail::fmt(r.mean_phase_err_rad)
           << ',' << detail::fmt(r.miss_rate) << ',' << detail::fmt(r.mean_time_ms) << '\n';
}

inline void write_timing_csv(std::ostream& os, const TimingStudy& study) {
    os << "n_components,time_ms\n";
    for (const auto& r : study.rows) os << r.n_components << ',' << detail::fmt(r.time_ms) << '\n';
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::json to_json(const SignalSpec& spec) {
    nlohmann::json j;
    j["fs"] = spec.fs;
    j["n_samples"] = spec.n_samples;
    if (spec.snr_db) j["snr_db"] = *spec.snr_db;
    j["seed"] = spec.seed;
    j["components"] = nlohmann::json::array();
    for (const auto& c : spec.components)
        j["components"].push_back({{"freq_hz", c.freq_hz}, {"amp", c.amp}, {"phase_rad", c.phase_rad}});
    return j;
}

inline SignalSpec spec_from_json(const nlohmann::json& j) {
    SignalSpec spec;
    spec.fs = j.at("fs").get<double>();
    spec.n_samples = j.at("n_samples").get<std::size_t>();
    if (j.contains("snr_db") && !j["snr_db"].is_null()) spec.snr_db = j["snr_db"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    for (const auto& c : j.at("components"))
        spec.components.push_back({c.at("freq_hz").get<double>(), c.at("amp").get<double>(),
                                   c.value("phase_rad", 0.0)});
    validate(spec);
    return spec;
}

inline SignalSpec read_spec_json(std::istream& is) {
    nlohmann::json j;
    is >> j;
    return spec_from_json(j);
}

inline nlohmann::json to_json(const std::vector<MetricsRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"scenario", r.scenario},
                       {"sweep_value", r.sweep_value},
                       {"algorithm", r.algorithm},
                       {"band", r.band},
                       {"rmse", r.rmse},
                       {"ec_mean", r.ec_mean},
                       {"ec_std", r.ec_std},
                       {"mean_time_ms", r.mean_time_ms},
                       {"failures", r.failures}});
    return arr;
}

inline nlohmann::json to_json(const std::vector<QSweepRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"q", r.q},
                       {"freq_hz", r.freq_hz},
                       {"mean_freq_err_hz", r.mean_freq_err_hz},
                       {"mean_amp_err_pu", r.mean_amp_err_pu},
                       {"mean_phase_err_rad", r.mean_phase_err_rad},
                       {"miss_rate", r.miss_rate},
                       {"mean_time_ms", r.mean_time_ms}});
    return arr;
}

inline nlohmann::json to_json(const TimingStudy& study) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : study.rows)
        j["rows"].push_back({{"n_components", r.n_components}, {"time_ms", r.time_ms}});
    j["fit"] = {{"slope_ms", study.slope_ms},
                {"intercept_ms", study.intercept_ms},
                {"r_squared", study.r_squared}};
    return j;
}

inline nlohmann::json to_json(const std::vector<RecoveredComponent>& comps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : comps)
        arr.push_back({{"freq_hz", c.freq_hz}, {"amp", c.amp}, {"phase_rad", c.phase_rad}});
    return arr;
}

// --- readers ----------------------------------------------------------------

// Reads the write_samples_csv layout: header then "index,time_s,value" rows.
// The sample rate is recovered from the time column, which must be uniform.
inline SampledSignal read_samples_csv(std::istream& is) {
    SampledSignal sig;
    std::vector<double> times;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        if (first) {
            first = false;
            if (line.rfind("index", 0) == 0) continue;   // header
        }
        double idx = 0.0, t = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &idx, &t, &v) != 3)
            throw std::invalid_argument("read_samples_csv: malformed row: " + line);
        times.push_back(t);
        sig.samples.push_back(v);
    }
    if (sig.samples.size() < 2)
        throw std::invalid_argument("read_samples_csv: need at least two samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("read_samples_csv: time column must increase");
    for (std::size_t n = 1; n < times.size(); ++n) {
        const double step = times[n] - times[n - 1];
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("read_samples_csv: non-uniform sampling");
    }
    sig.fs = 1.0 / dt;
    return sig;
}

// --- file helpers -----------------------------------------------------------

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

}  // namespace ihpower
