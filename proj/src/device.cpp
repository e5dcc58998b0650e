#include "memrc/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace memrc {

void VolatileParams::validate() const {
    if (!(decay_factor > 0.0 && decay_factor < 1.0))
        throw std::invalid_argument("decay_factor must be in (0,1)");
    if (!(w_write_gain > 0.0 && w_write_gain <= 1.0))
        throw std::invalid_argument("w_write_gain must be in (0,1]");
    if (!(g_on > g_off && g_off > 0.0))
        throw std::invalid_argument("require g_on > g_off > 0");
    if (!(v_read > 0.0 && v_write > 0.0 && pulse_width > 0.0))
        throw std::invalid_argument("voltages and pulse width must be positive");
    if (c2c_sigma < 0.0 || d2d_sigma < 0.0)
        throw std::invalid_argument("noise sigmas must be nonnegative");
    if (averaging_runs < 1)
        throw std::invalid_argument("averaging_runs must be >= 1");
}

VolatileDevice::VolatileDevice(const VolatileParams& p, int device_id,
                               std::uint64_t root_seed)
    : params_(p), id_(device_id) {
    params_.validate();
    Rng d2d = substream(root_seed, "volatile-d2d", static_cast<std::uint64_t>(device_id));
    g_on_eff_ = p.g_on * (1.0 + p.d2d_sigma * d2d.normal());
    g_off_eff_ = p.g_off * (1.0 + p.d2d_sigma * d2d.normal());
    // Keep the perturbed pair physical: ordered and positive.
    g_off_eff_ = std::max(g_off_eff_, 0.05 * p.g_off);
    g_on_eff_ = std::max(g_on_eff_, 2.0 * g_off_eff_);
}

double VolatileDevice::step_slot(int bit, Rng* noise_rng) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    w_ *= params_.decay_factor;
    if (bit == 1) w_ += params_.w_write_gain * (1.0 - w_);
    w_ = std::clamp(w_, 0.0, 1.0);
    double current = params_.v_read * (g_off_eff_ + w_ * (g_on_eff_ - g_off_eff_));
    if (noise_rng != nullptr)
        current *= 1.0 + params_.c2c_sigma * noise_rng->normal();
    return current;
}

std::array<double, 4> VolatileDevice::run_bit_stream(const std::array<int, 4>& bits,
                                                     Rng* noise_rng) {
    reset();
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = step_slot(bits[i], noise_rng);
    return out;
}

std::array<int, 4> code_bits(int code) {
    if (code < 0 || code > 15) throw std::out_of_range("code must be in [0,15]");
    return {(code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1};
}

StateLookup build_lookup_table(const VolatileParams& p, int device_id,
                               std::uint64_t root_seed, bool add_noise) {
    VolatileDevice dev(p, device_id, root_seed);
    Rng noise = substream(root_seed, "lookup-c2c", static_cast<std::uint64_t>(device_id));
    Rng* noise_ptr = add_noise ? &noise : nullptr;

    StateLookup lut;
    lut.device_id = device_id;
    const int runs = add_noise ? p.averaging_runs : 1;
    for (int code = 0; code < 16; ++code) {
        std::array<double, 4> acc{};
        const auto bits = code_bits(code);
        for (int r = 0; r < runs; ++r) {
            const auto reads = dev.run_bit_stream(bits, noise_ptr);
            for (std::size_t i = 0; i < 4; ++i) acc[i] += reads[i];
        }
        for (std::size_t i = 0; i < 4; ++i)
            lut.rows[static_cast<std::size_t>(code)][i] = acc[i] / runs;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : lut.rows)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    lut.raw_min = lo;
    lut.raw_max = hi;
    const double span = hi - lo;
    for (auto& row : lut.rows)
        for (double& v : row) v = span > 0.0 ? (v - lo) / span : 0.5;
    return lut;
}

void SynapseParams::validate() const {
    if (!(g_max > g_min && g_min > 0.0))
        throw std::invalid_argument("require g_max > g_min > 0");
    if (n_pot < 1 || n_dep < 1)
        throw std::invalid_argument("pulse counts must be >= 1");
    if (a_pot <= 0.0 || a_dep <= 0.0)
        throw std::invalid_argument("nonlinearity constants must be positive");
    if (c2c_sigma < 0.0)
        throw std::invalid_argument("c2c_sigma must be nonnegative");
    if (pulse_width <= 0.0)
        throw std::invalid_argument("pulse_width must be positive");
}

namespace {

// Normalized saturating exponential: rises 0 -> 1 as n goes 0 -> n_total.
double curve01(double n, double n_total, double a) {
    return (1.0 - std::exp(-n / a)) / (1.0 - std::exp(-n_total / a));
}

// Inverse of curve01 on [0,1].
double curve01_inverse(double y, double n_total, double a) {
    const double denom = 1.0 - std::exp(-n_total / a);
    const double inner = 1.0 - y * denom;
    return -a * std::log(std::max(inner, 1e-300));
}

}  // namespace

double potentiation_conductance(int n, const SynapseParams& p) {
    p.validate();
    if (n < 0 || n > p.n_pot) throw std::domain_error("pulse index out of range");
    return p.g_min + (p.g_max - p.g_min) * curve01(n, p.n_pot, p.a_pot);
}

double depression_conductance(int n, const SynapseParams& p) {
    p.validate();
    if (n < 0 || n > p.n_dep) throw std::domain_error("pulse index out of range");
    return p.g_max - (p.g_max - p.g_min) * curve01(n, p.n_dep, p.a_dep);
}

double noisy_pulse_update(double g, PulseDirection dir, const SynapseParams& p,
                          Rng* noise_rng) {
    const double span = p.g_max - p.g_min;
    double g_new;
    if (dir == PulseDirection::potentiate) {
        const double y = std::clamp((g - p.g_min) / span, 0.0, 1.0);
        double n_eff = curve01_inverse(y, p.n_pot, p.a_pot);
        n_eff = std::min(n_eff + 1.0, static_cast<double>(p.n_pot));
        g_new = p.g_min + span * curve01(n_eff, p.n_pot, p.a_pot);
    } else {
        const double y = std::clamp((p.g_max - g) / span, 0.0, 1.0);
        double n_eff = curve01_inverse(y, p.n_dep, p.a_dep);
        n_eff = std::min(n_eff + 1.0, static_cast<double>(p.n_dep));
        g_new = p.g_max - span * curve01(n_eff, p.n_dep, p.a_dep);
    }
    if (noise_rng != nullptr)
        g_new *= 1.0 + p.c2c_sigma * noise_rng->normal();
    return std::clamp(g_new, p.g_min, p.g_max);
}

std::vector<double> pd_cycle(double g_start, const SynapseParams& p, Rng* noise_rng) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(p.n_pot + p.n_dep));
    double g = g_start;
    for (int i = 0; i < p.n_pot; ++i) {
        g = noisy_pulse_update(g, PulseDirection::potentiate, p, noise_rng);
        out.push_back(g);
    }
    for (int i = 0; i < p.n_dep; ++i) {
        g = noisy_pulse_update(g, PulseDirection::depress, p, noise_rng);
        out.push_back(g);
    }
    return out;
}

PdStats simulate_pd_cycles(int cycles, const SynapseParams& p,
                           std::uint64_t root_seed, bool add_noise) {
    p.validate();
    if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
    Rng noise = substream(root_seed, "synapse-c2c");
    Rng* noise_ptr = add_noise ? &noise : nullptr;

    // Welford running moments: stable, and exactly zero variance when every
    // cycle produces the same trace (the noise-free case).
    const std::size_t samples = static_cast<std::size_t>(p.n_pot + p.n_dep);
    std::vector<double> mean(samples, 0.0);
    std::vector<double> m2(samples, 0.0);
    double g = p.g_min;
    for (int c = 0; c < cycles; ++c) {
        const auto trace = pd_cycle(g, p, noise_ptr);
        for (std::size_t i = 0; i < samples; ++i) {
            const double delta = trace[i] - mean[i];
            mean[i] += delta / (c + 1);
            m2[i] += delta * (trace[i] - mean[i]);
        }
        g = trace.back();  // cycles chain: next one starts where this ended
    }

    PdStats stats;
    stats.cycles = cycles;
    stats.mean = std::move(mean);
    stats.rel_std.resize(samples);
    stats.rel_sem.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double sd = std::sqrt(std::max(m2[i], 0.0) / cycles);
        stats.rel_std[i] = sd / stats.mean[i];
        stats.rel_sem[i] =
            sd / (stats.mean[i] * std::sqrt(static_cast<double>(cycles)));
    }
    return stats;
}

}  // namespace memrc
