// Energy and efficiency arithmetic for the two hardware mappings: per-pulse
// energy, operations-per-second-per-watt, and full-network reports that
// compare counts computed from actual readout shapes against published
// reference figures.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace memrc {

struct EnergyConfig {
    double pulse_voltage = 6.0;       // volts, reservoir write pulse
    double device_current = 300e-9;   // amperes, device response during pulse
    double pulse_width = 10e-6;       // seconds
    double ops_per_epoch = 27200.0;   // readout operations per training epoch
    double epoch_time = 1.0;          // seconds per epoch
    double power_per_memristor = 1e-6;  // watts (1 uW convention)

    void validate() const;  // throws std::invalid_argument on nonpositives
};

// E = v * i * t. Zero factors yield 0 J; negative factors are rejected.
double pulse_energy(double v, double i, double t);

// ops / (epoch_time * total_power); all inputs must be strictly positive.
double efficiency(double ops, double epoch_time, double total_power);

// One memristor per weight and per bias: sum over consecutive layer pairs of
// (fan_in + 1) * fan_out.
long long count_memristors(const std::vector<int>& layer_sizes);

enum class EnergyTask { speech, timeseries };

struct EnergyRow {
    std::string component;
    double energy_per_op_j = 0.0;  // 0 when not applicable
    double count = 0.0;
    double power_w = 0.0;
    double ops_per_watt = 0.0;
};

struct EnergyReport {
    EnergyTask task = EnergyTask::timeseries;
    double reservoir_pulse_energy_j = 0.0;
    std::vector<int> readout_sizes;   // layer widths used for the count
    long long memristor_count = 0;    // computed from readout_sizes
    double total_power_w = 0.0;       // count * power_per_memristor
    double ops = 0.0;
    double epoch_time_s = 0.0;
    double ops_per_watt = 0.0;        // computed from this report's own numbers

    // Published reference figures for the same task, echoed verbatim for
    // side-by-side comparison; the computed count is NOT forced to match.
    long long reference_count = 0;
    double reference_ops = 0.0;
    double reference_epoch_time_s = 0.0;
    double reference_power_w = 0.0;
    double reference_ops_per_watt = 0.0;

    std::vector<EnergyRow> rows;      // flattened, printable form
};

// Builds the per-task report: readout shapes 20-128-64-1 (time series) or
// 32-128-64-10 (speech), reservoir pulse energy from the config, and the
// reference comparison row.
EnergyReport network_report(const EnergyConfig& cfg, EnergyTask task);

std::string format_energy_table(const EnergyReport& report);  // human-readable
std::string energy_report_csv(const EnergyReport& report);    // header + rows

}  // namespace memrc
