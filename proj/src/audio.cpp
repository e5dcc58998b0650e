#include "memrc/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace memrc {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void parse_fsdd_name(const std::string& path, AudioClip& clip) {
    const std::string stem = std::filesystem::path(path).stem().string();
    const auto first = stem.find('_');
    if (first == std::string::npos || first != 1) return;
    const char d = stem[0];
    if (d < '0' || d > '9') return;
    const auto second = stem.find('_', first + 1);
    clip.label = d - '0';
    clip.speaker = second == std::string::npos
                       ? stem.substr(first + 1)
                       : stem.substr(first + 1, second - first - 1);
}

}  // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WavFormatError("cannot open WAV file: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavFormatError("malformed RIFF/WAVE header: " + path);

    std::uint16_t channels = 0, bits = 0, audio_format = 0;
    std::uint32_t rate = 0;
    std::size_t data_off = 0, data_len = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = read_u32(&bytes[pos + 4]);
        const bool is_fmt = std::memcmp(&bytes[pos], "fmt ", 4) == 0;
        const bool is_data = std::memcmp(&bytes[pos], "data", 4) == 0;
        const std::size_t body = pos + 8;
        if (is_fmt) {
            if (body + 16 > bytes.size())
                throw WavFormatError("truncated fmt chunk: " + path);
            audio_format = read_u16(&bytes[body]);
            channels = read_u16(&bytes[body + 2]);
            rate = read_u32(&bytes[body + 4]);
            bits = read_u16(&bytes[body + 14]);
        } else if (is_data) {
            data_off = body;
            data_len = std::min<std::size_t>(chunk_len, bytes.size() - body);
        }
        pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }
    if (audio_format == 0 || data_off == 0)
        throw WavFormatError("missing fmt or data chunk: " + path);
    if (audio_format != 1)
        throw WavFormatError("unsupported WAV encoding (PCM required): " + path);
    if (channels != 1)
        throw WavFormatError("non-mono WAV (channels=" + std::to_string(channels) +
                             "): " + path);
    if (rate != 8000)
        throw WavFormatError("unsupported sample rate (" + std::to_string(rate) +
                             " Hz, 8000 required): " + path);
    if (bits != 8 && bits != 16)
        throw WavFormatError("unsupported bit depth (" + std::to_string(bits) +
                             "): " + path);

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.source_path = path;
    if (bits == 16) {
        const std::size_t n = data_len / 2;
        clip.samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint16_t raw = read_u16(&bytes[data_off + 2 * i]);
            clip.samples.push_back(static_cast<std::int16_t>(raw) / 32768.0);
        }
    } else {
        clip.samples.reserve(data_len);
        for (std::size_t i = 0; i < data_len; ++i)
            clip.samples.push_back((static_cast<int>(bytes[data_off + i]) - 128) / 128.0);
    }
    parse_fsdd_name(path, clip);
    return clip;
}

void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WavFormatError("cannot open for writing: " + path);
    const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
    const std::uint32_t riff_len = 36 + data_len;
    auto put_u32 = [&](std::uint32_t v) {
        const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff),
                                    static_cast<unsigned char>((v >> 16) & 0xff),
                                    static_cast<unsigned char>((v >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    auto put_u16 = [&](std::uint16_t v) {
        const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 2);
    };
    out.write("RIFF", 4);
    put_u32(riff_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(static_cast<std::uint32_t>(sample_rate));
    put_u32(static_cast<std::uint32_t>(sample_rate * 2));  // byte rate
    put_u16(2);   // block align
    put_u16(16);  // bits per sample
    out.write("data", 4);
    put_u32(data_len);
    for (double s : samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const auto v = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
        put_u16(static_cast<std::uint16_t>(v));
    }
}

AudioClip pad_or_truncate(AudioClip clip, std::size_t target) {
    clip.samples.resize(target, 0.0);
    return clip;
}

void MfccConfig::validate() const {
    if (frame_len <= 0 || (frame_len & (frame_len - 1)) != 0)
        throw std::invalid_argument("frame_len must be a power of two");
    if (hop <= 0) throw std::invalid_argument("hop must be positive");
    if (n_mel < n_coeff)
        throw std::invalid_argument("need at least as many mel filters as coefficients");
    if (n_coeff != 13)
        throw std::invalid_argument("pipeline is fixed at 13 coefficients");
    if (!(fmax > fmin && fmin >= 0.0))
        throw std::invalid_argument("require fmax > fmin >= 0");
}

void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

namespace {

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// n_mel x (frame_len/2 + 1) triangular filterbank with continuous (unrounded)
// frequency weighting and no area normalization.
std::vector<std::vector<double>> mel_filterbank(const MfccConfig& cfg, int sample_rate) {
    const int n_bins = cfg.frame_len / 2 + 1;
    const double mel_lo = hz_to_mel(cfg.fmin);
    const double mel_hi = hz_to_mel(cfg.fmax);
    std::vector<double> edges(static_cast<std::size_t>(cfg.n_mel) + 2);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                          static_cast<double>(cfg.n_mel + 1));
    std::vector<std::vector<double>> bank(
        static_cast<std::size_t>(cfg.n_mel),
        std::vector<double>(static_cast<std::size_t>(n_bins), 0.0));
    for (int m = 0; m < cfg.n_mel; ++m) {
        const double left = edges[static_cast<std::size_t>(m)];
        const double center = edges[static_cast<std::size_t>(m) + 1];
        const double right = edges[static_cast<std::size_t>(m) + 2];
        for (int k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / cfg.frame_len;
            double w = 0.0;
            if (f >= left && f <= center && center > left)
                w = (f - left) / (center - left);
            else if (f > center && f <= right && right > center)
                w = (right - f) / (right - center);
            bank[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = w;
        }
    }
    return bank;
}

}  // namespace

std::vector<std::vector<double>> mfcc(const AudioClip& clip, const MfccConfig& cfg) {
    cfg.validate();
    const std::size_t n = clip.samples.size();
    if (n < static_cast<std::size_t>(cfg.frame_len))
        throw std::invalid_argument("clip shorter than one frame");

    // pre-emphasis
    std::vector<double> x(n);
    x[0] = clip.samples[0];
    for (std::size_t i = 1; i < n; ++i)
        x[i] = clip.samples[i] - cfg.pre_emphasis * clip.samples[i - 1];

    // symmetric Hann window
    std::vector<double> window(static_cast<std::size_t>(cfg.frame_len));
    for (int i = 0; i < cfg.frame_len; ++i)
        window[static_cast<std::size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (cfg.frame_len - 1)));

    const auto bank = mel_filterbank(cfg, clip.sample_rate);
    const int n_bins = cfg.frame_len / 2 + 1;
    const std::size_t n_frames = (n - static_cast<std::size_t>(cfg.frame_len)) /
                                     static_cast<std::size_t>(cfg.hop) +
                                 1;

    // orthonormal DCT-II coefficients
    const double m_count = static_cast<double>(cfg.n_mel);
    std::vector<std::vector<double>> out(n_frames,
                                         std::vector<double>(static_cast<std::size_t>(cfg.n_coeff)));
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(cfg.frame_len));
    std::vector<double> logmel(static_cast<std::size_t>(cfg.n_mel));

    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * static_cast<std::size_t>(cfg.hop);
        for (int i = 0; i < cfg.frame_len; ++i)
            buf[static_cast<std::size_t>(i)] = {
                x[start + static_cast<std::size_t>(i)] * window[static_cast<std::size_t>(i)], 0.0};
        fft_radix2(buf);
        for (int m = 0; m < cfg.n_mel; ++m) {
            double e = 0.0;
            for (int k = 0; k < n_bins; ++k)
                e += bank[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] *
                     std::norm(buf[static_cast<std::size_t>(k)]);
            logmel[static_cast<std::size_t>(m)] = std::log(std::max(e, cfg.log_floor));
        }
        for (int j = 0; j < cfg.n_coeff; ++j) {
            double c = 0.0;
            for (int m = 0; m < cfg.n_mel; ++m)
                c += logmel[static_cast<std::size_t>(m)] *
                     std::cos(std::numbers::pi * j * (2.0 * m + 1.0) / (2.0 * m_count));
            const double scale =
                j == 0 ? std::sqrt(1.0 / m_count) : std::sqrt(2.0 / m_count);
            out[f][static_cast<std::size_t>(j)] = scale * c;
        }
    }
    return out;
}

FeatureNormalizer fit_normalizer(const std::vector<std::vector<double>>& frames) {
    if (frames.empty()) throw std::invalid_argument("fit_normalizer: empty training set");
    const std::size_t dim = frames[0].size();
    FeatureNormalizer norm;
    norm.min.assign(dim, std::numeric_limits<double>::infinity());
    norm.max.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& row : frames) {
        if (row.size() != dim)
            throw std::invalid_argument("fit_normalizer: ragged feature rows");
        for (std::size_t i = 0; i < dim; ++i) {
            norm.min[i] = std::min(norm.min[i], row[i]);
            norm.max[i] = std::max(norm.max[i], row[i]);
        }
    }
    return norm;
}

std::vector<std::vector<double>> FeatureNormalizer::apply(
    const std::vector<std::vector<double>>& frames) const {
    std::vector<std::vector<double>> out(frames.size(),
                                         std::vector<double>(min.size()));
    for (std::size_t r = 0; r < frames.size(); ++r) {
        if (frames[r].size() != min.size())
            throw std::invalid_argument("normalizer: feature dimension mismatch");
        for (std::size_t i = 0; i < min.size(); ++i) {
            const double span = max[i] - min[i];
            out[r][i] = span > 0.0
                            ? std::clamp((frames[r][i] - min[i]) / span, 0.0, 1.0)
                            : 0.5;
        }
    }
    return out;
}

AudioClip add_gaussian_noise(AudioClip clip, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("noise sigma must be nonnegative");
    if (sigma == 0.0) return clip;
    for (double& s : clip.samples)
        s = std::clamp(s + sigma * rng.normal(), -1.0, 1.0);
    return clip;
}

}  // namespace memrc
