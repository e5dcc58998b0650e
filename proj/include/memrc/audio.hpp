// Audio ingestion and MFCC feature extraction for the spoken-digit task:
// PCM WAV parsing, length normalization, a from-scratch MFCC pipeline
// (pre-emphasis, Hann frames, radix-2 FFT, mel filterbank, log, DCT-II),
// min-max feature normalization, and Gaussian input noise.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "memrc/rng.hpp"

namespace memrc {

struct AudioClip {
    std::vector<double> samples;  // amplitudes in [-1,1]
    int sample_rate = 8000;
    int label = -1;           // digit 0-9, parsed from the filename
    std::string speaker;      // parsed from the filename
    std::string source_path;
};

// Raised for malformed/unsupported WAV input; what() names the bad field.
struct WavFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads a mono 8 kHz PCM WAV (8- or 16-bit). Label and speaker come from the
// `{digit}_{speaker}_{index}.wav` naming convention when present.
AudioClip load_wav(const std::string& path);

// Writes a mono 16-bit PCM WAV.
void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate);

// Zero-pads or cuts the tail so the clip has exactly target samples.
AudioClip pad_or_truncate(AudioClip clip, std::size_t target = 16000);

struct MfccConfig {
    int frame_len = 256;         // power of two (radix-2 transform)
    int hop = 128;
    int n_mel = 26;
    int n_coeff = 13;
    double pre_emphasis = 0.97;
    double fmin = 0.0;           // Hz
    double fmax = 4000.0;        // Hz (Nyquist at 8 kHz)
    double log_floor = 1e-10;

    void validate() const;
};

// In-place radix-2 decimation-in-time FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

// frames x n_coeff matrix, row-major. Frame count at defaults for a 16000
// sample clip: floor((16000 - 256)/128) + 1 = 124.
std::vector<std::vector<double>> mfcc(const AudioClip& clip, const MfccConfig& cfg);

// Per-coefficient min-max normalizer fit on training features only.
struct FeatureNormalizer {
    std::vector<double> min;
    std::vector<double> max;

    // x' = (x - min)/(max - min) clamped to [0,1]; degenerate columns -> 0.5.
    std::vector<std::vector<double>> apply(
        const std::vector<std::vector<double>>& frames) const;
};

FeatureNormalizer fit_normalizer(const std::vector<std::vector<double>>& frames);

// Adds per-sample Gaussian amplitude noise, clamped back to [-1,1].
AudioClip add_gaussian_noise(AudioClip clip, double sigma, Rng& rng);

}  // namespace memrc
