#include "memrc/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace memrc {

int quantize4(double x) {
    if (std::isnan(x)) throw std::invalid_argument("quantize4: NaN input");
    const double clamped = std::clamp(x, 0.0, 1.0);
    // round half away from zero; inputs are nonnegative after clamping
    const int code = static_cast<int>(std::floor(clamped * 15.0 + 0.5));
    return std::min(code, 15);
}

Mask make_mask(std::size_t nodes, std::size_t features, std::uint64_t seed,
               double density) {
    if (nodes == 0 || features == 0)
        throw std::invalid_argument("mask dimensions must be positive");
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("mask density must be in (0,1]");
    Mask mask;
    mask.seed = seed;
    mask.rows.assign(nodes, std::vector<int>(features, 0));
    Rng rng = substream(seed, "mask");
    for (auto& row : mask.rows) {
        int ones = 0;
        do {
            ones = 0;
            for (auto& v : row) {
                v = rng.uniform() < density ? 1 : 0;
                ones += v;
            }
        } while (ones == 0);  // every node must see at least one feature
    }
    return mask;
}

std::vector<int> encode_frame(const std::vector<double>& features, const Mask& mask) {
    if (features.size() != mask.features())
        throw std::invalid_argument("encode_frame: feature dimension mismatch");
    std::vector<int> codes;
    codes.reserve(mask.nodes());
    for (const auto& row : mask.rows) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] != 0) {
                sum += features[i];
                ++count;
            }
        }
        codes.push_back(quantize4(std::clamp(sum / count, 0.0, 1.0)));
    }
    return codes;
}

void ReservoirConfig::fill_default_ids() {
    if (device_ids.empty()) {
        device_ids.resize(num_nodes);
        std::iota(device_ids.begin(), device_ids.end(), 0);
    }
}

void ReservoirConfig::validate() const {
    if (num_nodes == 0) throw std::invalid_argument("num_nodes must be positive");
    if (!device_ids.empty() && device_ids.size() != num_nodes)
        throw std::invalid_argument("device_ids length must equal num_nodes");
}

Reservoir::Reservoir(const ReservoirConfig& cfg, const VolatileParams& params,
                     std::uint64_t root_seed, bool add_noise) {
    ReservoirConfig c = cfg;
    c.validate();
    c.fill_default_ids();
    lookups_.reserve(c.num_nodes);
    for (std::size_t n = 0; n < c.num_nodes; ++n)
        lookups_.push_back(
            build_lookup_table(params, c.device_ids[n], root_seed, add_noise));
}

std::vector<double> Reservoir::forward(const std::vector<int>& codes) const {
    if (codes.size() != lookups_.size())
        throw std::invalid_argument("reservoir forward: one code per node required");
    std::vector<double> state;
    state.reserve(4 * lookups_.size());
    for (std::size_t n = 0; n < lookups_.size(); ++n) {
        const auto& row = lookups_[n][codes[n]];
        state.insert(state.end(), row.begin(), row.end());
    }
    return state;
}

std::vector<double> Reservoir::project_frame(const std::vector<double>& features,
                                             const Mask& mask) const {
    return forward(encode_frame(features, mask));
}

std::vector<double> pool_over_frames(const std::vector<std::vector<double>>& states,
                                     Pooling mode) {
    if (states.empty()) throw std::invalid_argument("pool_over_frames: no frames");
    if (mode == Pooling::last) return states.back();
    std::vector<double> out(states[0].size(), 0.0);
    for (const auto& frame : states) {
        if (frame.size() != out.size())
            throw std::invalid_argument("pool_over_frames: ragged frames");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += frame[i];
    }
    for (double& v : out) v /= static_cast<double>(states.size());
    return out;
}

}  // namespace memrc
