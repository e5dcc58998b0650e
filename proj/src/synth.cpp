#include "memrc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <stdexcept>

#include "memrc/audio.hpp"
#include "memrc/rng.hpp"

namespace memrc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Deliberate articulation: stretches every template segment so utterances
// fill most of the fixed 2 s analysis window instead of drowning in padding.
constexpr double kTempo = 2.4;

struct Segment {
    double dur;          // seconds at rate 1.0
    bool voiced;         // harmonic source vs shaped noise; amp 0 = silence
    double f[3];         // formant / noise-band centers, Hz
    double bw[3];        // bandwidths, Hz
    double amp;          // relative level
};

// Rough articulations of the ten English digit words. Only acoustic
// distinctness matters here, not phonetic fidelity.
std::vector<Segment> digit_template(int digit) {
    switch (digit) {
        case 0:  // "zero": voiced sibilant onset, /I/ -> /oU/
            return {{0.10, false, {3400, 2600, 0}, {600, 500, 1}, 0.35},
                    {0.22, true, {400, 2000, 2600}, {90, 120, 150}, 1.0},
                    {0.26, true, {450, 900, 2400}, {90, 110, 150}, 0.95}};
        case 1:  // "one": /w/ glide, /V/, nasal coda
            return {{0.12, true, {350, 750, 2200}, {80, 100, 150}, 0.7},
                    {0.26, true, {650, 1200, 2500}, {90, 110, 150}, 1.0},
                    {0.16, true, {300, 1300, 2400}, {70, 90, 140}, 0.55}};
        case 2:  // "two": /t/ burst then long /u:/
            return {{0.05, false, {3000, 1800, 0}, {800, 600, 1}, 0.5},
                    {0.38, true, {320, 850, 2300}, {80, 100, 150}, 1.0}};
        case 3:  // "three": dental noise, /r/, /i:/
            return {{0.11, false, {2800, 1500, 0}, {700, 500, 1}, 0.3},
                    {0.10, true, {350, 1300, 1650}, {80, 100, 120}, 0.8},
                    {0.27, true, {280, 2400, 3100}, {70, 130, 160}, 1.0}};
        case 4:  // "four": /f/ noise, /O:/, /r/ coda
            return {{0.11, false, {1500, 3000, 0}, {900, 700, 1}, 0.25},
                    {0.30, true, {550, 900, 2500}, {90, 110, 150}, 1.0},
                    {0.12, true, {420, 1250, 1700}, {80, 100, 120}, 0.7}};
        case 5:  // "five": /f/, /aI/ diphthong, voiced /v/ tail
            return {{0.10, false, {1500, 3000, 0}, {900, 700, 1}, 0.25},
                    {0.18, true, {750, 1200, 2500}, {100, 120, 150}, 1.0},
                    {0.18, true, {400, 2100, 2700}, {80, 120, 150}, 0.9},
                    {0.10, true, {300, 1100, 2300}, {70, 100, 140}, 0.5}};
        case 6:  // "six": /s/, /I/, stop gap, /ks/ noise
            return {{0.14, false, {3600, 2800, 0}, {500, 500, 1}, 0.4},
                    {0.18, true, {400, 2000, 2600}, {90, 120, 150}, 1.0},
                    {0.05, true, {0, 0, 0}, {1, 1, 1}, 0.0},
                    {0.14, false, {3500, 2400, 0}, {600, 600, 1}, 0.4}};
        case 7:  // "seven": /s/, /E/, /v/, nasal /@n/
            return {{0.13, false, {3600, 2800, 0}, {500, 500, 1}, 0.4},
                    {0.18, true, {600, 1800, 2600}, {90, 120, 150}, 1.0},
                    {0.08, true, {300, 1100, 2300}, {70, 100, 140}, 0.5},
                    {0.15, true, {300, 1300, 2400}, {70, 90, 140}, 0.6}};
        case 8:  // "eight": /eI/ diphthong, stop gap, /t/ burst
            return {{0.20, true, {500, 1900, 2600}, {90, 120, 150}, 1.0},
                    {0.16, true, {350, 2200, 2800}, {80, 120, 150}, 0.9},
                    {0.06, true, {0, 0, 0}, {1, 1, 1}, 0.0},
                    {0.06, false, {3000, 1800, 0}, {800, 600, 1}, 0.5}};
        default:  // "nine": nasal, /aI/ diphthong, nasal coda
            return {{0.11, true, {300, 1300, 2400}, {70, 90, 140}, 0.6},
                    {0.18, true, {750, 1200, 2500}, {100, 120, 150}, 1.0},
                    {0.16, true, {400, 2100, 2700}, {80, 120, 150}, 0.9},
                    {0.13, true, {300, 1300, 2400}, {70, 90, 140}, 0.55}};
    }
}

struct Voice {
    double f0;        // Hz
    double tract;     // formant scale factor
    double rate;      // duration scale factor (inverse speed)
};

constexpr Voice kVoices[6] = {
    {105.0, 1.00, 1.00}, {120.0, 0.96, 0.93}, {135.0, 1.04, 1.06},
    {160.0, 1.08, 1.00}, {185.0, 0.92, 0.95}, {210.0, 1.12, 1.10},
};

void render_segment(std::vector<double>& out, const Segment& seg_in, double f0,
                    double tract, double rate, int sr, Rng& rng) {
    Segment seg = seg_in;
    const double dur = seg.dur * kTempo * rate * (1.0 + 0.08 * rng.normal());
    const int n = std::max(8, static_cast<int>(dur * sr));
    const double amp = seg.amp * std::max(0.2, 1.0 + 0.10 * rng.normal());
    for (double& f : seg.f) f *= tract * (1.0 + 0.025 * rng.normal());

    std::vector<double> block(static_cast<std::size_t>(n), 0.0);
    const double nyq_cap = 3800.0;
    if (seg.amp <= 0.0) {
        // articulatory gap: keep silence
    } else if (seg.voiced) {
        const double f0_seg = f0 * (1.0 + 0.03 * rng.normal());
        const int harmonics = std::max(1, static_cast<int>(nyq_cap / f0_seg));
        std::vector<double> h_amp(static_cast<std::size_t>(harmonics));
        std::vector<double> h_phase(static_cast<std::size_t>(harmonics));
        for (int h = 1; h <= harmonics; ++h) {
            const double fh = h * f0_seg;
            double a = 0.0;
            for (int j = 0; j < 3; ++j) {
                if (seg.f[j] <= 0.0) continue;
                const double z = (fh - seg.f[j]) / seg.bw[j];
                a += std::exp(-0.5 * z * z);
            }
            // gentle source tilt so low harmonics carry more energy
            h_amp[static_cast<std::size_t>(h - 1)] = a / std::pow(h, 0.35);
            h_phase[static_cast<std::size_t>(h - 1)] = rng.uniform() * kTwoPi;
        }
        // 6% pitch declination across the segment
        for (int s = 0; s < n; ++s) {
            const double frac = static_cast<double>(s) / n;
            const double f0_now = f0_seg * (1.0 - 0.06 * frac);
            double v = 0.0;
            for (int h = 1; h <= harmonics; ++h) {
                auto& ph = h_phase[static_cast<std::size_t>(h - 1)];
                v += h_amp[static_cast<std::size_t>(h - 1)] * std::sin(ph);
                ph += kTwoPi * h * f0_now / sr;
            }
            block[static_cast<std::size_t>(s)] = v;
        }
    } else {
        // band-shaped noise: dense random-phase sinusoid bank
        const double step = 74.0;
        for (double fc = 150.0; fc <= nyq_cap; fc += step) {
            double a = 0.0;
            for (int j = 0; j < 3; ++j) {
                if (seg.f[j] <= 0.0) continue;
                const double z = (fc - seg.f[j]) / seg.bw[j];
                a += std::exp(-0.5 * z * z);
            }
            if (a < 1e-4) continue;
            double phase = rng.uniform() * kTwoPi;
            const double w = kTwoPi * fc / sr;
            for (int s = 0; s < n; ++s) {
                block[static_cast<std::size_t>(s)] += a * std::sin(phase);
                phase += w;
            }
        }
    }

    // segment-internal 8 ms raised-cosine attack/release
    const int ramp = std::min(n / 2, sr * 8 / 1000);
    for (int s = 0; s < ramp; ++s) {
        const double g = 0.5 * (1.0 - std::cos(std::numbers::pi * (s + 1) / ramp));
        block[static_cast<std::size_t>(s)] *= g;
        block[static_cast<std::size_t>(n - 1 - s)] *= g;
    }
    double peak = 1e-12;
    for (const double v : block) peak = std::max(peak, std::abs(v));
    const double gain = seg.amp > 0.0 ? amp / peak : 0.0;
    for (const double v : block) out.push_back(v * gain);
}

}  // namespace

const std::vector<std::string>& synth_speakers() {
    static const std::vector<std::string> names = {"ada",    "bruno", "chiyo",
                                                   "dareios", "elif",  "farid"};
    return names;
}

std::vector<double> synthesize_digit(int digit, int speaker, int take,
                                     const SynthConfig& cfg) {
    if (digit < 0 || digit > 9) throw std::invalid_argument("digit must be 0..9");
    if (speaker < 0 || speaker >= 6) throw std::invalid_argument("speaker must be 0..5");
    const Voice& voice = kVoices[speaker];
    Rng rng = substream(cfg.seed, "synth-take",
                        static_cast<std::uint64_t>(digit * 6 + speaker),
                        static_cast<std::uint64_t>(take));
    const double f0 = voice.f0 * (1.0 + 0.05 * rng.normal());

    std::vector<double> samples;
    samples.reserve(16000);
    // 50 ms lead-in silence before the first articulation
    samples.resize(static_cast<std::size_t>(0.05 * cfg.sample_rate), 0.0);
    for (const Segment& seg : digit_template(digit))
        render_segment(samples, seg, f0, voice.tract, voice.rate, cfg.sample_rate, rng);

    // recording-floor noise: keeps silent stretches from being numerically
    // pristine, like a real microphone capture
    for (double& v : samples) v += 0.008 * rng.normal();

    double peak = 1e-12;
    for (const double v : samples) peak = std::max(peak, std::abs(v));
    const double gain = 0.8 / peak;
    for (double& v : samples) v = std::clamp(v * gain, -1.0, 1.0);
    return samples;
}

std::size_t synthesize_corpus(const SynthConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.out_dir.empty()) throw std::invalid_argument("corpus output dir is empty");
    fs::create_directories(cfg.out_dir);
    std::size_t written = 0;
    for (int digit = 0; digit <= 9; ++digit) {
        for (int speaker = 0; speaker < 6; ++speaker) {
            for (int take = 0; take < cfg.takes_per_speaker; ++take) {
                const auto samples = synthesize_digit(digit, speaker, take, cfg);
                const std::string name = std::to_string(digit) + "_" +
                                         synth_speakers()[static_cast<std::size_t>(speaker)] +
                                         "_" + std::to_string(take) + ".wav";
                write_wav((fs::path(cfg.out_dir) / name).string(), samples,
                          cfg.sample_rate);
                ++written;
            }
        }
    }
    return written;
}

}  // namespace memrc
