#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "memrc/audio.hpp"
#include "memrc/rng.hpp"

using namespace memrc;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "memrc_audio_tests";
    fs::create_directories(dir);
    return dir;
}

// Mirrors the reference script in tests/oracles/mfcc_oracle.py.
std::vector<double> oracle_signal(std::size_t n = 16000) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / 8000.0;
        x[i] = 0.6 * std::sin(2.0 * std::numbers::pi * 440.0 * t) +
               0.3 * std::sin(2.0 * std::numbers::pi * 1337.0 * t + 1.0) +
               0.1 * std::sin(2.0 * std::numbers::pi * 2900.0 * t + 2.0);
    }
    return x;
}

// Minimal hand-rolled WAV writer so format rejections are exercised against
// byte streams the production writer refuses to produce.
void write_raw_wav(const fs::path& path, std::uint16_t audio_format,
                   std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                   std::size_t n_samples) {
    std::ofstream out(path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
    const std::uint32_t bytes_per = bits / 8u;
    const std::uint32_t data_len =
        static_cast<std::uint32_t>(n_samples) * channels * bytes_per;
    out.write("RIFF", 4);
    u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(audio_format);
    u16(channels);
    u32(rate);
    u32(rate * channels * bytes_per);
    u16(static_cast<std::uint16_t>(channels * bytes_per));
    u16(bits);
    out.write("data", 4);
    u32(data_len);
    for (std::uint32_t i = 0; i < data_len; ++i) out.put(0);
}

}  // namespace

TEST_CASE("wav round trip preserves samples to 16-bit precision") {
    const fs::path path = temp_dir() / "roundtrip.wav";
    std::vector<double> samples;
    for (int i = 0; i < 800; ++i)
        samples.push_back(std::sin(2.0 * std::numbers::pi * i / 80.0) * 0.9);
    samples.push_back(1.0);
    samples.push_back(-1.0);
    samples.push_back(0.0);
    samples.push_back(1.7);  // clamped on write

    write_wav(path.string(), samples, 8000);
    const AudioClip clip = load_wav(path.string());

    CHECK(clip.sample_rate == 8000);
    REQUIRE(clip.samples.size() == samples.size());
    const double tol = 1.5 / 32768.0;  // quantization plus 32767/32768 rescale
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        CHECK(std::abs(clip.samples[i] - samples[i]) <= tol);
    CHECK(std::abs(clip.samples.back() - 1.0) <= tol);  // clamp applied
    for (double s : clip.samples) {
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("digit and speaker are parsed from the file name convention") {
    const fs::path good = temp_dir() / "3_bob_7.wav";
    write_wav(good.string(), std::vector<double>(100, 0.0), 8000);
    const AudioClip clip = load_wav(good.string());
    CHECK(clip.label == 3);
    CHECK(clip.speaker == "bob");

    const fs::path other = temp_dir() / "9_zara_15.wav";
    write_wav(other.string(), std::vector<double>(100, 0.0), 8000);
    const AudioClip clip2 = load_wav(other.string());
    CHECK(clip2.label == 9);
    CHECK(clip2.speaker == "zara");

    const fs::path odd = temp_dir() / "notadigit.wav";
    write_wav(odd.string(), std::vector<double>(100, 0.0), 8000);
    CHECK(load_wav(odd.string()).label == -1);
}

TEST_CASE("unsupported wav layouts are rejected with the offending field named") {
    const fs::path dir = temp_dir();

    const fs::path stereo = dir / "stereo.wav";
    write_raw_wav(stereo, 1, 2, 8000, 16, 64);
    CHECK_THROWS_WITH_AS(load_wav(stereo.string()),
                         doctest::Contains("channels"), WavFormatError);

    const fs::path fast = dir / "fast.wav";
    write_raw_wav(fast, 1, 1, 16000, 16, 64);
    CHECK_THROWS_WITH_AS(load_wav(fast.string()),
                         doctest::Contains("sample rate"), WavFormatError);

    const fs::path floaty = dir / "float.wav";
    write_raw_wav(floaty, 3, 1, 8000, 32, 64);
    CHECK_THROWS_WITH_AS(load_wav(floaty.string()),
                         doctest::Contains("PCM"), WavFormatError);

    const fs::path missing = dir / "does_not_exist.wav";
    CHECK_THROWS_AS(load_wav(missing.string()), WavFormatError);

    const fs::path garbage = dir / "garbage.wav";
    std::ofstream(garbage) << "this is not a riff container at all";
    CHECK_THROWS_AS(load_wav(garbage.string()), WavFormatError);
}

TEST_CASE("pad_or_truncate zero-fills or cuts the tail") {
    AudioClip clip;
    clip.samples = {0.1, 0.2, 0.3};
    const AudioClip padded = pad_or_truncate(clip, 6);
    CHECK(padded.samples == std::vector<double>{0.1, 0.2, 0.3, 0.0, 0.0, 0.0});

    const AudioClip cut = pad_or_truncate(padded, 2);
    CHECK(cut.samples == std::vector<double>{0.1, 0.2});

    AudioClip longclip;
    longclip.samples.assign(20000, 0.5);
    CHECK(pad_or_truncate(longclip).samples.size() == 16000);
}

TEST_CASE("fft: impulse, pure tone, Parseval, and size checks") {
    // Unit impulse -> flat unit spectrum.
    std::vector<std::complex<double>> x(64, {0.0, 0.0});
    x[0] = {1.0, 0.0};
    fft_radix2(x);
    for (const auto& v : x) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(v.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }

    // cos(2 pi k n / N) concentrates at bins k and N-k with value N/2.
    const std::size_t n = 128;
    const int k = 5;
    std::vector<std::complex<double>> tone(n);
    for (std::size_t i = 0; i < n; ++i)
        tone[i] = {std::cos(2.0 * std::numbers::pi * k * static_cast<double>(i) / n), 0.0};
    auto original = tone;
    fft_radix2(tone);
    for (std::size_t b = 0; b < n; ++b) {
        const double expected = (b == static_cast<std::size_t>(k) ||
                                 b == n - static_cast<std::size_t>(k))
                                    ? n / 2.0
                                    : 0.0;
        CHECK(std::abs(tone[b]) == doctest::Approx(expected).scale(n / 2.0).epsilon(1e-10));
    }

    // Parseval: sum |x|^2 == (1/N) sum |X|^2.
    double time_e = 0.0, freq_e = 0.0;
    for (const auto& v : original) time_e += std::norm(v);
    for (const auto& v : tone) freq_e += std::norm(v);
    CHECK(time_e == doctest::Approx(freq_e / n).epsilon(1e-9));

    std::vector<std::complex<double>> bad(100);
    CHECK_THROWS_AS(fft_radix2(bad), std::invalid_argument);
    std::vector<std::complex<double>> empty;
    CHECK_THROWS_AS(fft_radix2(empty), std::invalid_argument);
}

TEST_CASE("mfcc matches the independent reference implementation") {
    AudioClip clip;
    clip.samples = oracle_signal();
    clip.sample_rate = 8000;
    const auto coeffs = mfcc(clip, MfccConfig{});

    REQUIRE(coeffs.size() == 124);  // floor((16000 - 256)/128) + 1
    REQUIRE(coeffs[0].size() == 13);

    // Frozen from tests/oracles/mfcc_oracle.py (numpy.fft.rfft + scipy DCT).
    const std::array<double, 13> frame0 = {
        -34.13365723558536,   -1.7295033283664925, -10.281578512306204,
        -9.5859322540269574,  -4.8066897178750878, -16.454735894862601,
        -14.743374015492581,  25.273535122979904,  -3.6363219237826354,
        6.0648975942283059,   -3.1685697485559738, 3.3870104673710864,
        -6.9708087949279385};
    const std::array<double, 13> frame60 = {
        -33.636517819485299,  -2.3286296322814422, -10.422715381669768,
        -9.1585267420723149,  -5.4960079976078946, -16.285104210660727,
        -14.544699016087208,  24.557635918841445,  -3.1984736006430494,
        5.8283413392661441,   -3.4984818000461253, 3.7425176195906356,
        -7.3362498703325709};

    for (std::size_t j = 0; j < 13; ++j) {
        CHECK(coeffs[0][j] == doctest::Approx(frame0[j]).epsilon(1e-9));
        CHECK(coeffs[60][j] == doctest::Approx(frame60[j]).epsilon(1e-9));
    }
}

TEST_CASE("scaling the waveform shifts only the dc cepstral coefficient") {
    AudioClip clip;
    clip.samples = oracle_signal(4096);
    clip.sample_rate = 8000;
    const auto base = mfcc(clip, MfccConfig{});

    AudioClip scaled = clip;
    for (double& s : scaled.samples) s *= 0.5;
    const auto half = mfcc(scaled, MfccConfig{});

    // Power scales by c^2, log-mel shifts by 2 ln c in every band, and the
    // orthonormal dc basis vector has entries 1/sqrt(26): shift = 2 ln c sqrt(26).
    const double expected_shift = 2.0 * std::log(0.5) * std::sqrt(26.0);
    REQUIRE(base.size() == half.size());
    for (std::size_t f = 0; f < base.size(); ++f) {
        CHECK(half[f][0] - base[f][0] ==
              doctest::Approx(expected_shift).epsilon(1e-9));
        for (std::size_t j = 1; j < 13; ++j)
            CHECK(half[f][j] == doctest::Approx(base[f][j]).scale(30.0).epsilon(1e-10));
    }
}

TEST_CASE("mfcc configuration validation") {
    AudioClip clip;
    clip.samples = oracle_signal(512);

    MfccConfig cfg;
    cfg.frame_len = 100;  // not a power of two
    CHECK_THROWS_AS(mfcc(clip, cfg), std::invalid_argument);
    cfg = MfccConfig{};
    cfg.hop = 0;
    CHECK_THROWS_AS(mfcc(clip, cfg), std::invalid_argument);
    cfg = MfccConfig{};
    cfg.n_mel = 12;  // fewer filters than coefficients
    CHECK_THROWS_AS(mfcc(clip, cfg), std::invalid_argument);
    cfg = MfccConfig{};
    cfg.n_coeff = 12;
    CHECK_THROWS_AS(mfcc(clip, cfg), std::invalid_argument);
    cfg = MfccConfig{};
    cfg.fmax = 0.0;
    CHECK_THROWS_AS(mfcc(clip, cfg), std::invalid_argument);

    AudioClip tiny;
    tiny.samples.assign(100, 0.0);  // shorter than one frame
    CHECK_THROWS_AS(mfcc(tiny, MfccConfig{}), std::invalid_argument);
}

TEST_CASE("normalizer maps train extrema to [0,1] and clamps outside values") {
    const std::vector<std::vector<double>> train = {
        {0.0, 10.0, 5.0}, {2.0, 20.0, 5.0}, {1.0, 15.0, 5.0}};
    const FeatureNormalizer norm = fit_normalizer(train);

    const auto mapped = norm.apply(train);
    CHECK(mapped[0][0] == 0.0);
    CHECK(mapped[1][0] == 1.0);
    CHECK(mapped[2][0] == doctest::Approx(0.5));
    CHECK(mapped[0][1] == 0.0);
    CHECK(mapped[1][1] == 1.0);
    // Degenerate column (zero spread) maps to the midpoint.
    for (const auto& row : mapped) CHECK(row[2] == 0.5);

    // Out-of-range test values are clamped, never extrapolated.
    const auto outside = norm.apply({{-5.0, 100.0, 7.0}});
    CHECK(outside[0][0] == 0.0);
    CHECK(outside[0][1] == 1.0);
    CHECK(outside[0][2] == 0.5);

    CHECK_THROWS_AS(fit_normalizer({}), std::invalid_argument);
    CHECK_THROWS_AS(fit_normalizer({{1.0, 2.0}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(norm.apply({{1.0}}), std::invalid_argument);
}

TEST_CASE("gaussian amplitude noise: identity at zero, clamped, reproducible") {
    AudioClip clip;
    clip.samples = {0.0, 0.5, -0.5, 0.99, -0.99};

    Rng rng(5);
    const AudioClip same = add_gaussian_noise(clip, 0.0, rng);
    CHECK(same.samples == clip.samples);

    Rng r1(5), r2(5), r3(6);
    const AudioClip n1 = add_gaussian_noise(clip, 0.1, r1);
    const AudioClip n2 = add_gaussian_noise(clip, 0.1, r2);
    const AudioClip n3 = add_gaussian_noise(clip, 0.1, r3);
    CHECK(n1.samples == n2.samples);
    CHECK(n1.samples != n3.samples);
    CHECK(n1.samples != clip.samples);

    AudioClip loud;
    loud.samples.assign(2000, 0.95);
    Rng r4(7);
    const AudioClip noisy = add_gaussian_noise(loud, 0.5, r4);
    for (double s : noisy.samples) {
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }

    Rng r5(8);
    CHECK_THROWS_AS(add_gaussian_noise(clip, -0.01, r5), std::invalid_argument);
}
