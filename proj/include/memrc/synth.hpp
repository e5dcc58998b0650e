// Deterministic formant-synthesized spoken-digit corpus in the standard
// free-spoken-digit layout ({digit}_{speaker}_{index}.wav, mono 8 kHz PCM),
// used as a self-contained stand-in when no recorded dataset is mounted.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace memrc {

struct SynthConfig {
    std::string out_dir;
    int takes_per_speaker = 50;   // per digit; 6 speakers -> 3000 clips total
    std::uint64_t seed = 99;
    int sample_rate = 8000;
};

// Names of the six synthetic voices (distinct pitch, vocal-tract scaling,
// and speaking rate).
const std::vector<std::string>& synth_speakers();

// Renders one clip deterministically from (digit, speaker index, take).
std::vector<double> synthesize_digit(int digit, int speaker, int take,
                                     const SynthConfig& cfg);

// Writes the whole corpus; returns the number of files written.
std::size_t synthesize_corpus(const SynthConfig& cfg);

}  // namespace memrc
