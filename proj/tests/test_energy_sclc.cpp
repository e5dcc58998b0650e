#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "memrc/energy.hpp"
#include "memrc/rng.hpp"
#include "memrc/sclc.hpp"

using namespace memrc;

namespace {

// Log-spaced synthetic sweep following I = coeff * V^slope per region, with
// optional multiplicative current noise.
IvTrace power_law_trace(const std::vector<double>& v_edges,
                        const std::vector<double>& slopes, double i_start,
                        int points_per_region, double noise_sigma, Rng* rng) {
    IvTrace trace;
    double i_at_edge = i_start;
    for (std::size_t region = 0; region + 1 < v_edges.size(); ++region) {
        const double v0 = v_edges[region];
        const double v1 = v_edges[region + 1];
        const double m = slopes[region];
        for (int j = 0; j < points_per_region; ++j) {
            // skip the shared edge point except in the very first region
            if (region > 0 && j == 0) continue;
            const double frac = static_cast<double>(j) / (points_per_region - 1);
            const double v = v0 * std::pow(v1 / v0, frac);
            double i = i_at_edge * std::pow(v / v0, m);
            if (rng != nullptr) i *= 1.0 + noise_sigma * rng->normal();
            trace.points.push_back({v, i});
        }
        i_at_edge *= std::pow(v1 / v0, m);  // continuity across the edge
    }
    return trace;
}

}  // namespace

TEST_CASE("pulse energy pins: write pulse and synapse pulse") {
    // 6 V x 300 nA x 10 us = 18 pJ
    CHECK(pulse_energy(6.0, 300e-9, 10e-6) == doctest::Approx(18e-12).epsilon(1e-12));
    // 5 V x 1 uA x 5 us = 25 pJ
    CHECK(pulse_energy(5.0, 1e-6, 5e-6) == doctest::Approx(25e-12).epsilon(1e-12));
}

TEST_CASE("pulse energy: zero factors give zero, negatives are rejected") {
    CHECK(pulse_energy(0.0, 300e-9, 10e-6) == 0.0);
    CHECK(pulse_energy(6.0, 0.0, 10e-6) == 0.0);
    CHECK(pulse_energy(6.0, 300e-9, 0.0) == 0.0);
    CHECK_THROWS_AS(pulse_energy(-6.0, 300e-9, 10e-6), std::domain_error);
    CHECK_THROWS_AS(pulse_energy(6.0, -1e-9, 10e-6), std::domain_error);
    CHECK_THROWS_AS(pulse_energy(6.0, 300e-9, -1e-6), std::domain_error);
}

TEST_CASE("pulse energy is linear in each factor") {
    const double base = pulse_energy(2.0, 1e-7, 1e-5);
    CHECK(pulse_energy(4.0, 1e-7, 1e-5) == doctest::Approx(2.0 * base));
    CHECK(pulse_energy(2.0, 3e-7, 1e-5) == doctest::Approx(3.0 * base));
    CHECK(pulse_energy(2.0, 1e-7, 5e-5) == doctest::Approx(5.0 * base));
}

TEST_CASE("efficiency pins the published operations-per-watt figures") {
    const double ts = efficiency(27200.0, 1.0, 8896e-6);
    CHECK(std::abs(ts - 3057553.0) <= 1.0);
    CHECK(std::llround(ts) == 3057554);

    const double sp = efficiency(150.0, 5.5e-3, 150e-6);
    CHECK(std::abs(sp - 181818182.0) <= 1.0);
    CHECK(std::llround(sp) == 181818182);
}

TEST_CASE("efficiency rejects nonpositive inputs and cancels common scales") {
    CHECK_THROWS_AS(efficiency(0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(efficiency(1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(efficiency(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(efficiency(-1.0, 1.0, 1.0), std::domain_error);

    const double base = efficiency(100.0, 2.0, 3e-3);
    CHECK(efficiency(700.0, 2.0, 21e-3) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("memristor counts follow (fan_in + 1) * fan_out per layer") {
    CHECK(count_memristors({20, 128, 64, 1}) == 11009);
    CHECK(count_memristors({32, 128, 64, 10}) == 13130);
    CHECK(count_memristors({1, 1}) == 2);
    CHECK(count_memristors({3, 4}) == 16);
    CHECK_THROWS_AS(count_memristors({5}), std::invalid_argument);
    CHECK_THROWS_AS(count_memristors({4, 0}), std::invalid_argument);
    CHECK_THROWS_AS(count_memristors({4, -2, 3}), std::invalid_argument);
}

TEST_CASE("time-series energy report keeps computed and reference counts apart") {
    const EnergyConfig cfg;
    const EnergyReport r = network_report(cfg, EnergyTask::timeseries);

    CHECK(r.readout_sizes == std::vector<int>{20, 128, 64, 1});
    CHECK(r.memristor_count == 11009);
    CHECK(r.reference_count == 8896);
    CHECK(r.memristor_count != r.reference_count);  // reported side by side
    CHECK(r.reservoir_pulse_energy_j == doctest::Approx(18e-12));
    CHECK(r.total_power_w == doctest::Approx(11009e-6));
    CHECK(r.ops_per_watt ==
          doctest::Approx(efficiency(27200.0, 1.0, 11009e-6)).epsilon(1e-12));
    CHECK(std::llround(r.reference_ops_per_watt) == 3057554);

    std::vector<std::string> names;
    for (const auto& row : r.rows) names.push_back(row.component);
    CHECK(std::count(names.begin(), names.end(), "reservoir_pulse") == 1);
    CHECK(std::count(names.begin(), names.end(), "readout_computed") == 1);
    CHECK(std::count(names.begin(), names.end(), "readout_reference") == 1);
    CHECK(std::count(names.begin(), names.end(), "adc_note_few_pJ_per_conversion") == 1);
}

TEST_CASE("speech energy report uses the wider front end and published figures") {
    const EnergyConfig cfg;
    const EnergyReport r = network_report(cfg, EnergyTask::speech);
    CHECK(r.readout_sizes == std::vector<int>{32, 128, 64, 10});
    CHECK(r.memristor_count == 13130);
    CHECK(r.reference_count == 150);
    CHECK(r.ops == 150.0);
    CHECK(r.epoch_time_s == doctest::Approx(5.5e-3));
    CHECK(std::llround(r.reference_ops_per_watt) == 181818182);
}

TEST_CASE("energy formatting includes the headline numbers") {
    const EnergyReport r = network_report(EnergyConfig{}, EnergyTask::timeseries);
    const std::string table = format_energy_table(r);
    CHECK(table.find("3057554") != std::string::npos);
    CHECK(table.find("11009") != std::string::npos);
    CHECK(table.find("8896") != std::string::npos);
    CHECK(table.find("timeseries") != std::string::npos);

    const std::string csv = energy_report_csv(r);
    CHECK(csv.rfind("component,energy_per_op_j,count,power_w,ops_per_watt\n", 0) == 0);
    CHECK(csv.find("reservoir_pulse") != std::string::npos);

    EnergyConfig bad;
    bad.epoch_time = 0.0;
    CHECK_THROWS_AS(network_report(bad, EnergyTask::speech), std::invalid_argument);
}

TEST_CASE("slope classification bands") {
    CHECK(classify_slope(0.5) == Conduction::unclassified);
    CHECK(classify_slope(0.79) == Conduction::unclassified);
    CHECK(classify_slope(0.8) == Conduction::ohmic);
    CHECK(classify_slope(1.0) == Conduction::ohmic);
    CHECK(classify_slope(1.2) == Conduction::ohmic);
    CHECK(classify_slope(1.21) == Conduction::sclc);
    CHECK(classify_slope(2.0) == Conduction::sclc);
    CHECK(classify_slope(2.2) == Conduction::sclc);
    CHECK(classify_slope(2.3) == Conduction::tfl);
    CHECK(classify_slope(6.0) == Conduction::tfl);

    CHECK(to_string(Conduction::ohmic) == "ohmic");
    CHECK(to_string(Conduction::sclc) == "sclc");
    CHECK(to_string(Conduction::tfl) == "tfl");
    CHECK(to_string(Conduction::unclassified) == "unclassified");
}

TEST_CASE("iv trace validation") {
    IvTrace trace;
    trace.points = {{0.1, 1e-9}, {0.2, 2e-9}};
    CHECK_THROWS_AS(trace.validate(), std::invalid_argument);  // too few

    trace.points = {{0.1, 1e-9}, {0.2, -2e-9}, {0.3, 3e-9}};
    CHECK_THROWS_AS(trace.validate(), std::domain_error);  // negative current

    trace.points = {{0.1, 1e-9}, {0.0, 2e-9}, {0.3, 3e-9}};
    CHECK_THROWS_AS(trace.validate(), std::domain_error);  // nonpositive voltage

    trace.points = {{0.1, 1e-9}, {0.3, 2e-9}, {0.2, 3e-9}};
    CHECK_THROWS_AS(trace.validate(), std::invalid_argument);  // not increasing

    trace.points = {{0.1, 1e-9}, {0.2, 2e-9}, {0.3, 3e-9}};
    CHECK_NOTHROW(trace.validate());
}

TEST_CASE("noise-free power law recovers slope, intercept, and unit r-squared") {
    const IvTrace trace =
        power_law_trace({0.1, 10.0}, {1.0}, 1e-9 * 0.1, 20, 0.0, nullptr);
    const auto fits = fit_segments(trace, {});
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].slope == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fits[0].intercept == doctest::Approx(-9.0).epsilon(1e-9));
    CHECK(fits[0].r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fits[0].classification == Conduction::ohmic);
    CHECK(fits[0].v_lo == doctest::Approx(0.1));
    CHECK(fits[0].v_hi == doctest::Approx(10.0));

    const IvTrace square =
        power_law_trace({0.5, 5.0}, {2.0}, 1e-8, 15, 0.0, nullptr);
    const auto fits2 = fit_segments(square, {});
    CHECK(fits2[0].slope == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fits2[0].classification == Conduction::sclc);
}

TEST_CASE("slope is invariant to current and voltage rescaling") {
    const IvTrace base =
        power_law_trace({0.2, 4.0}, {1.7}, 2e-9, 15, 0.0, nullptr);
    IvTrace scaled_i = base;
    for (auto& p : scaled_i.points) p.current *= 10.0;
    IvTrace scaled_v = base;
    for (auto& p : scaled_v.points) p.voltage *= 3.0;

    const double m0 = fit_segments(base, {})[0].slope;
    const auto fit_i = fit_segments(scaled_i, {})[0];
    const auto fit_v = fit_segments(scaled_v, {})[0];
    CHECK(fit_i.slope == doctest::Approx(m0).epsilon(1e-10));
    CHECK(fit_i.intercept == doctest::Approx(fit_segments(base, {})[0].intercept + 1.0)
                                 .epsilon(1e-9));
    CHECK(fit_v.slope == doctest::Approx(m0).epsilon(1e-10));
}

TEST_CASE("manual breakpoints recover a noisy three-region sweep") {
    Rng rng(2718);
    const IvTrace trace = power_law_trace({0.1, 1.0, 10.0, 100.0}, {1.0, 2.0, 3.5},
                                          1e-10, 16, 0.02, &rng);
    const auto fits = fit_segments(trace, {1.0, 10.0});
    REQUIRE(fits.size() == 3);
    CHECK(fits[0].slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fits[1].slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fits[2].slope == doctest::Approx(3.5).epsilon(0.05));
    CHECK(fits[0].classification == Conduction::ohmic);
    CHECK(fits[1].classification == Conduction::sclc);
    CHECK(fits[2].classification == Conduction::tfl);
    for (const auto& f : fits) CHECK(f.r_squared > 0.99);

    // Segments tile the trace.
    CHECK(fits[0].first == 0);
    CHECK(fits[1].first == fits[0].last + 1);
    CHECK(fits[2].first == fits[1].last + 1);
    CHECK(fits[2].last == trace.points.size() - 1);

    // Breakpoint order does not matter.
    const auto swapped = fit_segments(trace, {10.0, 1.0});
    CHECK(swapped[0].slope == fits[0].slope);
    CHECK(swapped[2].slope == fits[2].slope);
}

TEST_CASE("breakpoints leaving fewer than 3 points per segment are rejected") {
    const IvTrace trace =
        power_law_trace({0.1, 10.0}, {1.0}, 1e-10, 8, 0.0, nullptr);
    CHECK_THROWS_AS(fit_segments(trace, {trace.points[1].voltage}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_segments(trace, {trace.points[7].voltage}),
                    std::invalid_argument);
    CHECK_NOTHROW(fit_segments(trace, {trace.points[4].voltage}));
}

TEST_CASE("automatic segmentation matches the generating breakpoint structure") {
    Rng rng(31415);
    const IvTrace trace = power_law_trace({0.1, 1.0, 10.0, 100.0}, {1.0, 2.0, 3.0},
                                          1e-10, 16, 0.02, &rng);
    const auto fits = fit_segments_auto(trace);
    REQUIRE(fits.size() == 3);
    CHECK(fits[0].slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fits[1].slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fits[2].slope == doctest::Approx(3.0).epsilon(0.05));

    // Recovered cut indices sit within one grid point of the true edges.
    // True edges: first region has 16 points, later ones 15 each.
    CHECK(std::llabs(static_cast<long long>(fits[1].first) - 16) <= 1);
    CHECK(std::llabs(static_cast<long long>(fits[2].first) - 31) <= 1);

    // Segmentation can only reduce the squared residual.
    const auto single = fit_segments(trace, {});
    CHECK(total_squared_residual(trace, fits) <=
          total_squared_residual(trace, single) + 1e-12);
}

TEST_CASE("automatic segmentation keeps one region for a clean power law") {
    const IvTrace clean =
        power_law_trace({0.1, 10.0}, {1.5}, 1e-10, 24, 0.0, nullptr);
    CHECK(fit_segments_auto(clean).size() == 1);

    Rng rng(99);
    const IvTrace noisy =
        power_law_trace({0.1, 10.0}, {1.5}, 1e-10, 24, 0.02, &rng);
    const auto fits = fit_segments_auto(noisy);
    CHECK(fits.size() == 1);
    CHECK(fits[0].slope == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("degenerate voltage spread is reported as an error") {
    const double v1 = std::nextafter(1.0, 2.0);
    const double v2 = std::nextafter(v1, 2.0);
    IvTrace trace;
    trace.points = {{1.0, 1e-9}, {v1, 2e-9}, {v2, 3e-9}};
    // validate() passes (strictly increasing) but the log-domain spread is nil.
    CHECK_THROWS_AS(fit_segments(trace, {}), std::invalid_argument);
}
