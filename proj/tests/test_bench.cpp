#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "ihpower/bench.hpp"

using namespace ihpower;

namespace {

PowerReport report_with(double fund, double harm, double inter, double cross) {
    PowerReport r;
    r.p_fund = fund;
    r.p_harm = harm;
    r.p_inter = inter;
    r.p_cross = cross;
    r.p_total = fund + harm + inter + cross;
    r.k_cycles = 10.24;
    return r;
}

}  // namespace

TEST_CASE("scenario definitions match the benchmark matrix", "[bench]") {
    const auto a = make_scenario('A');
    CHECK(a.sweep_name == "f_ih_hz");
    CHECK(a.sweep_values == std::vector<double>{46, 47, 48, 49, 51, 52, 53, 54});
    CHECK(a.snr_db == 60.0);
    CHECK(a.fs == 5000.0);
    CHECK(a.n_samples == 1024);

    CHECK(make_scenario('B').sweep_values == std::vector<double>{151, 152, 153, 154});
    CHECK(make_scenario('C').sweep_values == std::vector<double>{1, 2, 3, 4});

    const auto d = make_scenario('D');
    REQUIRE(d.sweep_values.size() == 10);
    CHECK(d.sweep_values.front() == Catch::Approx(49.5));
    CHECK(d.sweep_values.back() == Catch::Approx(50.5));
    for (double f1 : d.sweep_values) CHECK(f1 != Catch::Approx(50.0));

    const auto e = make_scenario('E');
    CHECK(e.sweep_name == "snr_db");
    REQUIRE(e.sweep_values.size() == 9);
    CHECK(e.sweep_values.front() == 40.0);
    CHECK(e.sweep_values.back() == 80.0);

    CHECK_THROWS_AS(make_scenario('Z'), std::invalid_argument);
}

TEST_CASE("scenario component sets", "[bench]") {
    SECTION("A: fundamental, five harmonics, one interharmonic") {
        const auto c = scenario_components(make_scenario('A'), 54.0);
        REQUIRE(c.size() == 7);
        CHECK(c[0].freq_hz == 50.0);
        CHECK(c[0].amp == 1.0);
        std::set<double> freqs;
        for (const auto& fc : c) freqs.insert(fc.freq_hz);
        for (double f : {150.0, 250.0, 350.0, 550.0, 650.0, 54.0}) CHECK(freqs.count(f) == 1);
        for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].amp == 0.1);
    }
    SECTION("C: interharmonic pair at both offsets") {
        const auto c = scenario_components(make_scenario('C'), 2.0);
        REQUIRE(c.size() == 8);
        std::set<double> freqs;
        for (const auto& fc : c) freqs.insert(fc.freq_hz);
        CHECK(freqs.count(52.0) == 1);
        CHECK(freqs.count(152.0) == 1);
    }
    SECTION("D: everything tracks the shifted fundamental") {
        const auto c = scenario_components(make_scenario('D'), 49.9);
        REQUIRE(c.size() == 8);
        CHECK(c[0].freq_hz == Catch::Approx(49.9));
        CHECK(c[1].freq_hz == Catch::Approx(3 * 49.9));
        CHECK(c[5].freq_hz == Catch::Approx(13 * 49.9));
        CHECK(c[6].freq_hz == Catch::Approx(50.9));
        CHECK(c[7].freq_hz == Catch::Approx(3 * 49.9 + 1.0));
    }
    SECTION("E: fixed pair, sweep only changes noise") {
        const auto c = scenario_components(make_scenario('E'), 45.0);
        std::set<double> freqs;
        for (const auto& fc : c) freqs.insert(fc.freq_hz);
        CHECK(freqs.count(51.0) == 1);
        CHECK(freqs.count(151.0) == 1);
    }
}

TEST_CASE("trial specs draw independent phases and noise per channel", "[bench]") {
    const auto comps = scenario_components(make_scenario('A'), 51.0);
    const auto [u1, i1] = trial_specs(comps, 5000.0, 1024, 60.0, 42, 0);
    const auto [u2, i2] = trial_specs(comps, 5000.0, 1024, 60.0, 42, 0);
    const auto [u3, i3] = trial_specs(comps, 5000.0, 1024, 60.0, 42, 1);

    REQUIRE(u1.components.size() == comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        CHECK(u1.components[c].freq_hz == comps[c].freq_hz);
        CHECK(u1.components[c].amp == comps[c].amp);
        // same draw stream -> bitwise equal; different channel/trial -> differs
        CHECK(u1.components[c].phase_rad == u2.components[c].phase_rad);
        CHECK(i1.components[c].phase_rad == i2.components[c].phase_rad);
        CHECK(u1.components[c].phase_rad != i1.components[c].phase_rad);
        CHECK(u1.components[c].phase_rad != u3.components[c].phase_rad);
    }
    CHECK(u1.seed == u2.seed);
    CHECK(u1.seed != i1.seed);
    CHECK(u1.seed != u3.seed);
    REQUIRE(u1.snr_db.has_value());
    CHECK(*u1.snr_db == 60.0);

    const auto us = synthesize(u1);
    const auto is = synthesize(i1);
    CHECK(us.samples != is.samples);
}

TEST_CASE("band metrics from hand-checked reports", "[bench]") {
    const PowerReport truth = report_with(1.0, 0.1, 0.05, -0.02);
    PowerReport e1 = truth, e2 = truth;
    e1.p_fund = 1.1;   // +0.1
    e2.p_fund = 0.7;   // -0.3
    e1.p_total = e1.p_fund + e1.p_harm + e1.p_inter + e1.p_cross;
    e2.p_total = e2.p_fund + e2.p_harm + e2.p_inter + e2.p_cross;

    const auto m = compute_metrics({e1, e2}, truth);
    CHECK(m[0].rmse == Catch::Approx(std::sqrt(0.05)).epsilon(1e-12));
    CHECK(m[0].ec_mean == Catch::Approx(0.2).epsilon(1e-12));
    CHECK(m[0].ec_std == Catch::Approx(0.1).epsilon(1e-12));
    // untouched bands are exact
    CHECK(m[1].rmse == 0.0);
    CHECK(m[2].ec_mean == 0.0);

    SECTION("broadcast overload matches the pairwise one") {
        const auto pairwise = compute_metrics({e1, e2}, std::vector<PowerReport>{truth, truth});
        for (int b = 0; b < n_bands; ++b) {
            CHECK(m[static_cast<std::size_t>(b)].rmse == pairwise[static_cast<std::size_t>(b)].rmse);
            CHECK(m[static_cast<std::size_t>(b)].ec_mean ==
                  pairwise[static_cast<std::size_t>(b)].ec_mean);
        }
    }
    SECTION("zero truth power floors the relative-error denominator") {
        const PowerReport z = report_with(0.0, 0.0, 0.0, 0.0);
        PowerReport est = z;
        est.p_fund = 1e-6;
        const auto mz = compute_metrics({est}, z);
        CHECK(mz[0].ec_mean == Catch::Approx(1e6).epsilon(1e-9));
    }
    SECTION("shape errors throw") {
        CHECK_THROWS_AS(compute_metrics({}, truth), std::invalid_argument);
        CHECK_THROWS_AS(compute_metrics({e1}, std::vector<PowerReport>{truth, truth}),
                        std::invalid_argument);
    }
}

TEST_CASE("sieve threshold from SNR and amplitude model", "[bench]") {
    SECTION("constant model: equal split of the constrained power") {
        const auto r = compute_mu(60.0, AmplitudeModel::constant, 8, 0.1);
        REQUIRE(r.amplitudes.size() == 7);
        const double expected = std::sqrt(1e-6 / 7.0);
        double ss = 0.0;
        for (double a : r.amplitudes) {
            CHECK(a == Catch::Approx(expected).epsilon(1e-12));
            ss += a * a;
        }
        CHECK(ss == Catch::Approx(1e-6).epsilon(1e-12));
        CHECK(r.mu == 0.1 * r.amplitudes.back());
        CHECK_FALSE(r.underflow);
    }
    SECTION("exponential model keeps its decay ratio after scaling") {
        const auto r = compute_mu(40.0, AmplitudeModel::exponential, 5, 0.5);
        REQUIRE(r.amplitudes.size() == 4);
        double ss = 0.0;
        for (std::size_t i = 0; i + 1 < r.amplitudes.size(); ++i)
            CHECK(r.amplitudes[i + 1] / r.amplitudes[i] == Catch::Approx(0.5).epsilon(1e-12));
        for (double a : r.amplitudes) ss += a * a;
        CHECK(ss == Catch::Approx(1e-4).epsilon(1e-12));
        CHECK(r.mu == 0.1 * r.amplitudes.back());
    }
    SECTION("polynomial model ratios") {
        const auto r = compute_mu(60.0, AmplitudeModel::polynomial, 4, 2.0);
        REQUIRE(r.amplitudes.size() == 3);
        CHECK(r.amplitudes[0] / r.amplitudes[1] == Catch::Approx(9.0 / 4.0).epsilon(1e-12));
        CHECK(r.amplitudes[1] / r.amplitudes[2] == Catch::Approx(16.0 / 9.0).epsilon(1e-12));
    }
    SECTION("SNR shift rescales every amplitude by 10^(-delta/20)") {
        const auto lo = compute_mu(40.0, AmplitudeModel::constant, 6, 0.1);
        const auto hi = compute_mu(80.0, AmplitudeModel::constant, 6, 0.1);
        CHECK(hi.mu / lo.mu == Catch::Approx(1e-2).epsilon(1e-10));
    }
    SECTION("deep exponential decay underflows to the floor") {
        const auto r = compute_mu(60.0, AmplitudeModel::exponential, 200, 1e-3);
        CHECK(r.underflow);
        CHECK(r.mu == 1e-300);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::exponential, 5, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::exponential, 5, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::polynomial, 5, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::constant, 5, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::constant, 5, 1.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::constant, 1, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_mu(60.0, AmplitudeModel::constant, 5, 0.1, 0.0),
                        std::invalid_argument);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(compute_mu(nan, AmplitudeModel::constant, 5, 0.1), std::invalid_argument);
    }
}

TEST_CASE("scenario run produces rows per sweep value, algorithm and band", "[bench]") {
    Scenario s = make_scenario('A');
    s.sweep_values = {54.0};   // trimmed sweep keeps the test fast
    RunConfig cfg;
    cfg.trials = 3;
    cfg.seed = 7;
    cfg.algorithms = {Algorithm::proposed, Algorithm::fft};

    const auto res = run_scenario(s, cfg);
    REQUIRE(res.metrics.size() == 2 * n_bands);
    REQUIRE(res.trials.size() == 6);

    for (const auto& rec : res.trials) {
        CHECK(rec.scenario == "A");
        CHECK(rec.sweep_value == 54.0);
        CHECK_FALSE(rec.failed);
        CHECK(rec.truth.p_total != 0.0);
    }

    auto row = [&](const std::string& alg, const std::string& band) {
        for (const auto& r : res.metrics)
            if (r.algorithm == alg && r.band == band) return r;
        FAIL("missing row " << alg << "/" << band);
        return res.metrics.front();
    };
    const auto prop_total = row("proposed", "total");
    const auto fft_total = row("fft", "total");
    CHECK(prop_total.failures == 0);
    CHECK(fft_total.failures == 0);
    CHECK(prop_total.mean_time_ms > 0.0);
    // a 54 Hz interharmonic leaks across the whole spectrum of a plain
    // bin readout; the cluster estimator resolves it
    CHECK(prop_total.ec_mean < fft_total.ec_mean);
    CHECK(prop_total.ec_mean < 0.01);

    SECTION("identical config reproduces every accuracy column bitwise") {
        const auto res2 = run_scenario(s, cfg);
        REQUIRE(res2.metrics.size() == res.metrics.size());
        for (std::size_t i = 0; i < res.metrics.size(); ++i) {
            CHECK(res2.metrics[i].rmse == res.metrics[i].rmse);
            CHECK(res2.metrics[i].ec_mean == res.metrics[i].ec_mean);
            CHECK(res2.metrics[i].ec_std == res.metrics[i].ec_std);
            CHECK(res2.metrics[i].failures == res.metrics[i].failures);
        }
    }
    SECTION("config validation") {
        RunConfig bad = cfg;
        bad.trials = 0;
        CHECK_THROWS_AS(run_scenario(s, bad), std::invalid_argument);
        bad = cfg;
        bad.algorithms.clear();
        CHECK_THROWS_AS(run_scenario(s, bad), std::invalid_argument);
    }
}

TEST_CASE("window-size sweep reports per-component and aggregate rows", "[bench]") {
    const auto rows = run_q_sweep({5}, 3, 11);
    REQUIRE(rows.size() == 8);   // 7 components + aggregate
    const auto& agg = rows.back();
    CHECK(agg.freq_hz == -1.0);
    CHECK(agg.q == 5);
    for (const auto& r : rows) {
        CHECK(r.q == 5);
        CHECK(r.miss_rate == 0.0);
        CHECK(r.mean_freq_err_hz < 0.05);
        CHECK(r.mean_amp_err_pu < 0.01);
        CHECK(r.mean_time_ms == agg.mean_time_ms);
    }
    std::set<double> freqs;
    for (const auto& r : rows) freqs.insert(r.freq_hz);
    for (double f : {50.0, 52.5, 150.0, 250.0, 350.0, 550.0, 650.0}) CHECK(freqs.count(f) == 1);

    CHECK_THROWS_AS(run_q_sweep({5}, 0, 1), std::invalid_argument);
}

TEST_CASE("timing study fits a line to runtime vs component count", "[bench]") {
    const auto study = run_timing_study({2, 4, 6}, 5, 3);
    REQUIRE(study.rows.size() == 3);
    for (const auto& r : study.rows) CHECK(r.time_ms > 0.0);
    CHECK(std::isfinite(study.slope_ms));
    CHECK(std::isfinite(study.intercept_ms));
    CHECK(study.r_squared <= 1.0);

    CHECK_THROWS_AS(run_timing_study({2}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_timing_study({0}, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_timing_study({50}, 3, 1), std::invalid_argument);
}

TEST_CASE("per-algorithm timings are positive", "[bench]") {
    SignalSpec spec;
    spec.fs = 5000.0;
    spec.n_samples = 1024;
    spec.components = {{50.0, 1.0, 0.3}, {150.0, 0.1, -0.4}};
    const auto t = time_algorithms(synthesize(spec), 3);
    CHECK(t.proposed_ms > 0.0);
    CHECK(t.fft_ms > 0.0);
    CHECK(t.wifft_ms > 0.0);
    CHECK_THROWS_AS(time_algorithms(synthesize(spec), 0), std::invalid_argument);
}

TEST_CASE("algorithm names round trip", "[bench]") {
    for (Algorithm a : {Algorithm::proposed, Algorithm::fft, Algorithm::wifft}) {
        const auto back = algorithm_from_string(to_string(a));
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    CHECK_FALSE(algorithm_from_string("music").has_value());
}
