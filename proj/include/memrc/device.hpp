// Behavioral models of the two memristive device families used by the
// harness: a volatile short-term-memory device that acts as a reservoir
// neuron, and a nonvolatile analog synapse whose conductance is programmed
// by potentiation/depression pulse trains.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "memrc/rng.hpp"

namespace memrc {

// ---------------------------------------------------------------------------
// Volatile reservoir neuron
// ---------------------------------------------------------------------------

struct VolatileParams {
    double w_write_gain = 0.5;   // state increment fraction per '1' pulse
    double decay_factor = 0.8;   // state retention multiplier per slot
    double g_off = 5e-9;         // siemens, zero-state conductance
    double g_on = 150e-9;        // siemens, full-state conductance
    double v_read = 2.0;         // volts
    double v_write = 6.0;        // volts
    double pulse_width = 10e-6;  // seconds
    double c2c_sigma = 0.04;     // relative std of read-current noise
    double d2d_sigma = 0.05;     // relative std of per-device g_on/g_off spread
    int averaging_runs = 16;     // noisy repetitions averaged into the lookup

    void validate() const;  // throws std::invalid_argument on bad ranges
};

// Internal state of one volatile device instance. The device-to-device
// perturbation is frozen per device_id (drawn from a seeded substream), so
// rebuilding the same id always yields the same device.
class VolatileDevice {
  public:
    VolatileDevice(const VolatileParams& p, int device_id, std::uint64_t root_seed);

    // One write/read slot: state decays, an optional write fires, and the
    // read current (optionally noisy) is returned. State stays in [0,1].
    double step_slot(int bit, Rng* noise_rng);

    // Applies a 4-bit stream (MSB first) from a reset state and returns the
    // four read currents.
    std::array<double, 4> run_bit_stream(const std::array<int, 4>& bits, Rng* noise_rng);

    void reset() { w_ = 0.0; }
    double state() const { return w_; }
    int id() const { return id_; }
    double g_on_effective() const { return g_on_eff_; }
    double g_off_effective() const { return g_off_eff_; }
    const VolatileParams& params() const { return params_; }

  private:
    VolatileParams params_;
    int id_;
    double w_ = 0.0;
    double g_on_eff_;
    double g_off_eff_;
};

// 16-row table of normalized read currents: row index is the 4-bit code
// (0b0000..0b1111, MSB first), columns are reads 1..4. Min-max normalized
// over the whole table so entries span [0,1] exactly.
struct StateLookup {
    std::array<std::array<double, 4>, 16> rows{};
    int device_id = 0;
    double raw_min = 0.0;  // amperes, before normalization
    double raw_max = 0.0;

    const std::array<double, 4>& operator[](int code) const { return rows[static_cast<std::size_t>(code)]; }
};

// Expands a 4-bit code into bits, MSB first: 0b1000 -> {1,0,0,0}.
std::array<int, 4> code_bits(int code);

// Builds the per-device lookup table by averaging `averaging_runs` noisy
// repetitions of every code, then normalizing. With add_noise=false the table
// is the deterministic response, still normalized.
StateLookup build_lookup_table(const VolatileParams& p, int device_id,
                               std::uint64_t root_seed, bool add_noise = true);

// ---------------------------------------------------------------------------
// Nonvolatile analog synapse
// ---------------------------------------------------------------------------

struct SynapseParams {
    double g_min = 0.1e-6;     // siemens
    double g_max = 1.0e-6;     // siemens
    int n_pot = 45;            // pulses for a full potentiation sweep
    int n_dep = 45;            // pulses for a full depression sweep
    double a_pot = 15.0;       // nonlinearity constant, potentiation
    double a_dep = 15.0;       // nonlinearity constant, depression
    double c2c_sigma = 0.04;   // relative std per programming pulse
    double v_pot = 5.0;        // volts
    double v_dep = -2.0;       // volts
    double pulse_width = 5e-6; // seconds

    void validate() const;
};

enum class PulseDirection { potentiate, depress };

// Saturating-exponential conductance after n potentiation pulses from g_min.
// g(0) = g_min, g(n_pot) = g_max, monotone nondecreasing.
double potentiation_conductance(int n, const SynapseParams& p);

// Mirror curve: g(0) = g_max, g(n_dep) = g_min, monotone nonincreasing.
double depression_conductance(int n, const SynapseParams& p);

// Moves g one pulse along the selected curve (inverts the curve for the
// effective pulse index, advances one pulse, applies multiplicative noise),
// clamped to [g_min, g_max]. Pass nullptr to disable noise.
double noisy_pulse_update(double g, PulseDirection dir, const SynapseParams& p,
                          Rng* noise_rng);

// One potentiation/depression cycle: n_pot pulses up from the current g,
// then n_dep pulses down, recording conductance after every pulse.
// Returns n_pot + n_dep samples.
std::vector<double> pd_cycle(double g_start, const SynapseParams& p, Rng* noise_rng);

// Statistics of repeated P/D cycles: per pulse index, mean conductance,
// relative standard deviation, and relative standard error of the mean.
struct PdStats {
    std::vector<double> mean;     // per pulse index
    std::vector<double> rel_std;  // std / mean
    std::vector<double> rel_sem;  // std / (mean * sqrt(cycles))
    int cycles = 0;
};

PdStats simulate_pd_cycles(int cycles, const SynapseParams& p,
                           std::uint64_t root_seed, bool add_noise = true);

}  // namespace memrc
