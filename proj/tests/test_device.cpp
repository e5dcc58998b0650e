#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "memrc/device.hpp"
#include "memrc/rng.hpp"

using namespace memrc;

namespace {

VolatileParams noiseless_volatile() {
    VolatileParams p;
    p.c2c_sigma = 0.0;
    p.d2d_sigma = 0.0;
    return p;
}

SynapseParams noiseless_synapse() {
    SynapseParams p;
    p.c2c_sigma = 0.0;
    return p;
}

}  // namespace

TEST_CASE("volatile state follows decay-then-write update for 1,1,0,0") {
    VolatileDevice dev(noiseless_volatile(), 0, 42);
    dev.step_slot(1, nullptr);
    CHECK(dev.state() == doctest::Approx(0.5).epsilon(1e-12));
    dev.step_slot(1, nullptr);
    CHECK(dev.state() == doctest::Approx(0.7).epsilon(1e-12));
    dev.step_slot(0, nullptr);
    CHECK(dev.state() == doctest::Approx(0.56).epsilon(1e-12));
    dev.step_slot(0, nullptr);
    CHECK(dev.state() == doctest::Approx(0.448).epsilon(1e-12));
}

TEST_CASE("volatile read current is v_read times state-interpolated conductance") {
    const VolatileParams p = noiseless_volatile();
    VolatileDevice dev(p, 0, 42);
    // w = 0.5 after the first write: I = 2 V * (5 nS + 0.5 * 145 nS)
    const double i1 = dev.step_slot(1, nullptr);
    CHECK(i1 == doctest::Approx(2.0 * (5e-9 + 0.5 * 145e-9)).epsilon(1e-12));
    const double i2 = dev.step_slot(1, nullptr);  // w = 0.7
    CHECK(i2 == doctest::Approx(2.0 * (5e-9 + 0.7 * 145e-9)).epsilon(1e-12));
    const double i3 = dev.step_slot(0, nullptr);  // w = 0.56
    CHECK(i3 == doctest::Approx(2.0 * (5e-9 + 0.56 * 145e-9)).epsilon(1e-12));
}

TEST_CASE("volatile state relaxes geometrically when no writes arrive") {
    VolatileDevice dev(noiseless_volatile(), 3, 7);
    dev.step_slot(1, nullptr);  // w = 0.5
    double expected = 0.5;
    for (int k = 0; k < 20; ++k) {
        dev.step_slot(0, nullptr);
        expected *= 0.8;
        CHECK(dev.state() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("volatile state stays in [0,1] under random bit streams") {
    VolatileParams p;
    p.w_write_gain = 1.0;  // most aggressive legal gain
    p.c2c_sigma = 0.0;
    p.d2d_sigma = 0.0;
    VolatileDevice dev(p, 0, 1);
    Rng rng(123);
    for (int k = 0; k < 5000; ++k) {
        dev.step_slot(rng.uniform() < 0.5 ? 1 : 0, nullptr);
        CHECK(dev.state() >= 0.0);
        CHECK(dev.state() <= 1.0);
    }
}

TEST_CASE("run_bit_stream resets state and is msb-first") {
    VolatileDevice dev(noiseless_volatile(), 0, 42);
    dev.step_slot(1, nullptr);  // dirty the state
    const auto reads = dev.run_bit_stream({1, 1, 0, 0}, nullptr);
    CHECK(reads[0] == doctest::Approx(2.0 * (5e-9 + 0.500 * 145e-9)).epsilon(1e-12));
    CHECK(reads[1] == doctest::Approx(2.0 * (5e-9 + 0.700 * 145e-9)).epsilon(1e-12));
    CHECK(reads[2] == doctest::Approx(2.0 * (5e-9 + 0.560 * 145e-9)).epsilon(1e-12));
    CHECK(reads[3] == doctest::Approx(2.0 * (5e-9 + 0.448 * 145e-9)).epsilon(1e-12));

    CHECK(code_bits(0b1000) == std::array<int, 4>{1, 0, 0, 0});
    CHECK(code_bits(0b0001) == std::array<int, 4>{0, 0, 0, 1});
    CHECK_THROWS_AS(code_bits(16), std::out_of_range);
    CHECK_THROWS_AS(code_bits(-1), std::out_of_range);
}

TEST_CASE("codes whose bits dominate produce pointwise larger reads") {
    const VolatileParams p = noiseless_volatile();
    VolatileDevice dev(p, 0, 42);
    std::array<std::array<double, 4>, 16> reads{};
    for (int code = 0; code < 16; ++code)
        reads[static_cast<std::size_t>(code)] = dev.run_bit_stream(code_bits(code), nullptr);

    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            if ((a & b) != b || a == b) continue;  // a's bits must cover b's
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(reads[static_cast<std::size_t>(a)][i] >=
                      reads[static_cast<std::size_t>(b)][i] - 1e-18);
        }
    }
}

TEST_CASE("device-to-device spread is frozen per device id") {
    VolatileParams p;  // default d2d_sigma = 0.05
    VolatileDevice a1(p, 4, 99), a2(p, 4, 99);
    CHECK(a1.g_on_effective() == a2.g_on_effective());
    CHECK(a1.g_off_effective() == a2.g_off_effective());

    VolatileDevice b(p, 5, 99);
    CHECK(a1.g_on_effective() != b.g_on_effective());

    VolatileDevice c(p, 4, 100);  // same id, different root seed
    CHECK(a1.g_on_effective() != c.g_on_effective());

    // Perturbed pair stays physical.
    CHECK(b.g_on_effective() > b.g_off_effective());
    CHECK(b.g_off_effective() > 0.0);
}

TEST_CASE("noise-free lookup table rows are distinct and span [0,1] exactly") {
    const auto lut = build_lookup_table(noiseless_volatile(), 0, 42, false);

    double lo = 1e300, hi = -1e300;
    std::set<std::array<double, 4>> distinct;
    for (int code = 0; code < 16; ++code) {
        for (double v : lut[code]) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        distinct.insert(lut[code]);
    }
    CHECK(distinct.size() == 16);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);

    // Code 0 never writes: all four reads sit at the table minimum.
    for (double v : lut[0]) CHECK(v == 0.0);
    // Code 15 writes every slot: its final read is the table maximum.
    CHECK(lut[15][3] == 1.0);
    CHECK(lut.raw_max > lut.raw_min);
}

TEST_CASE("noisy lookup table averages toward the deterministic one") {
    VolatileParams p;  // default noise
    p.averaging_runs = 64;
    const auto noisy = build_lookup_table(p, 0, 42, true);
    const auto clean = build_lookup_table(p, 0, 42, false);
    // Same device (same d2d draw), so normalized tables should agree within
    // a few percent once 64 runs are averaged.
    for (int code = 0; code < 16; ++code)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(noisy[code][i] - clean[code][i]) < 0.06);
    // And it is reproducible.
    const auto noisy2 = build_lookup_table(p, 0, 42, true);
    for (int code = 0; code < 16; ++code)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(noisy[code][i] == noisy2[code][i]);
}

TEST_CASE("volatile parameter validation rejects unphysical values") {
    VolatileParams p;
    p.decay_factor = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = VolatileParams{};
    p.w_write_gain = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = VolatileParams{};
    p.g_off = 200e-9;  // above g_on
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = VolatileParams{};
    p.c2c_sigma = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = VolatileParams{};
    p.averaging_runs = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_NOTHROW(VolatileParams{}.validate());
}

TEST_CASE("synapse sweep curves hit both endpoints and are monotone") {
    const SynapseParams p = noiseless_synapse();
    CHECK(potentiation_conductance(0, p) == doctest::Approx(p.g_min).epsilon(1e-12));
    CHECK(potentiation_conductance(p.n_pot, p) == doctest::Approx(p.g_max).epsilon(1e-12));
    CHECK(depression_conductance(0, p) == doctest::Approx(p.g_max).epsilon(1e-12));
    CHECK(depression_conductance(p.n_dep, p) == doctest::Approx(p.g_min).epsilon(1e-12));

    for (int n = 1; n <= p.n_pot; ++n)
        CHECK(potentiation_conductance(n, p) > potentiation_conductance(n - 1, p));
    for (int n = 1; n <= p.n_dep; ++n)
        CHECK(depression_conductance(n, p) < depression_conductance(n - 1, p));

    // Early potentiation pulses move conductance more than late ones
    // (saturating nonlinearity).
    const double first = potentiation_conductance(1, p) - potentiation_conductance(0, p);
    const double last = potentiation_conductance(p.n_pot, p) -
                        potentiation_conductance(p.n_pot - 1, p);
    CHECK(first > last);

    CHECK_THROWS_AS(potentiation_conductance(-1, p), std::domain_error);
    CHECK_THROWS_AS(potentiation_conductance(p.n_pot + 1, p), std::domain_error);
}

TEST_CASE("single pulses retrace the closed-form sweep exactly when noise is off") {
    const SynapseParams p = noiseless_synapse();
    double g = p.g_min;
    for (int n = 1; n <= p.n_pot; ++n) {
        g = noisy_pulse_update(g, PulseDirection::potentiate, p, nullptr);
        CHECK(g == doctest::Approx(potentiation_conductance(n, p)).epsilon(1e-12));
    }
    for (int n = 1; n <= p.n_dep; ++n) {
        g = noisy_pulse_update(g, PulseDirection::depress, p, nullptr);
        CHECK(g == doctest::Approx(depression_conductance(n, p)).epsilon(1e-12));
    }
    CHECK(g == doctest::Approx(p.g_min).epsilon(1e-12));
}

TEST_CASE("pulse updates keep conductance in range and move in the right direction") {
    SynapseParams p;  // default c2c noise 0.04
    Rng rng(7);
    double g = 0.5 * (p.g_min + p.g_max);
    for (int k = 0; k < 2000; ++k) {
        const auto dir = (k % 3 == 0) ? PulseDirection::depress : PulseDirection::potentiate;
        g = noisy_pulse_update(g, dir, p, &rng);
        CHECK(g >= p.g_min);
        CHECK(g <= p.g_max);
    }

    // Noise-free direction check away from the rails.
    const SynapseParams q = noiseless_synapse();
    const double mid = 0.4e-6;
    CHECK(noisy_pulse_update(mid, PulseDirection::potentiate, q, nullptr) > mid);
    CHECK(noisy_pulse_update(mid, PulseDirection::depress, q, nullptr) < mid);
    // Saturated states are absorbing.
    CHECK(noisy_pulse_update(q.g_max, PulseDirection::potentiate, q, nullptr) ==
          doctest::Approx(q.g_max));
    CHECK(noisy_pulse_update(q.g_min, PulseDirection::depress, q, nullptr) ==
          doctest::Approx(q.g_min));
}

TEST_CASE("pd cycle traces the potentiation then depression sweep") {
    const SynapseParams p = noiseless_synapse();
    const auto trace = pd_cycle(p.g_min, p, nullptr);
    REQUIRE(trace.size() == static_cast<std::size_t>(p.n_pot + p.n_dep));
    for (int n = 1; n <= p.n_pot; ++n)
        CHECK(trace[static_cast<std::size_t>(n - 1)] ==
              doctest::Approx(potentiation_conductance(n, p)).epsilon(1e-12));
    for (int n = 1; n <= p.n_dep; ++n)
        CHECK(trace[static_cast<std::size_t>(p.n_pot + n - 1)] ==
              doctest::Approx(depression_conductance(n, p)).epsilon(1e-12));
}

TEST_CASE("repeated pd cycles report per-pulse statistics") {
    SynapseParams p;  // noisy
    const auto stats = simulate_pd_cycles(50, p, 2024, true);
    REQUIRE(stats.mean.size() == static_cast<std::size_t>(p.n_pot + p.n_dep));
    CHECK(stats.cycles == 50);
    for (std::size_t i = 0; i < stats.mean.size(); ++i) {
        CHECK(stats.mean[i] >= p.g_min);
        CHECK(stats.mean[i] <= p.g_max);
        CHECK(stats.rel_std[i] >= 0.0);
        CHECK(stats.rel_sem[i] ==
              doctest::Approx(stats.rel_std[i] / std::sqrt(50.0)).epsilon(1e-12));
    }

    // Noise off: every cycle is identical, so spread is exactly zero.
    const auto clean = simulate_pd_cycles(10, p, 2024, false);
    for (double s : clean.rel_std) CHECK(s == 0.0);

    CHECK_THROWS_AS(simulate_pd_cycles(0, p, 1, true), std::invalid_argument);
}

TEST_CASE("synapse parameter validation rejects unphysical values") {
    SynapseParams p;
    p.g_min = 2e-6;  // above g_max
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SynapseParams{};
    p.n_pot = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SynapseParams{};
    p.a_dep = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SynapseParams{};
    p.c2c_sigma = -1e-3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_NOTHROW(SynapseParams{}.validate());
}
