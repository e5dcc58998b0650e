// Reservoir layer: binary masks project feature vectors onto nodes, node
// scalars quantize to 4-bit codes, and per-device lookup tables turn codes
// into normalized read-current state vectors.
#pragma once

#include <cstdint>
#include <vector>

#include "memrc/device.hpp"
#include "memrc/rng.hpp"

namespace memrc {

// Quantizes x in [0,1] (inputs outside are clamped) to a 4-bit code using
// round-half-away-from-zero: 0.5 -> 8 (binary 1000). NaN is rejected.
int quantize4(double x);

// Binary projection mask: nodes x features of {0,1}; every row has at least
// one nonzero entry. Deterministic per seed.
struct Mask {
    std::vector<std::vector<int>> rows;  // nodes x features
    std::uint64_t seed = 0;

    std::size_t nodes() const { return rows.size(); }
    std::size_t features() const { return rows.empty() ? 0 : rows[0].size(); }
};

// density = probability of a 1 per entry (rows with all zeros are resampled).
Mask make_mask(std::size_t nodes, std::size_t features, std::uint64_t seed,
               double density = 0.5);

// Per node: masked mean of the features, clamped to [0,1], then quantized.
std::vector<int> encode_frame(const std::vector<double>& features, const Mask& mask);

enum class Pooling { mean, last };

struct ReservoirConfig {
    std::size_t num_nodes = 8;
    Pooling pooling = Pooling::mean;
    std::vector<int> device_ids;  // one per node; defaults to 0..num_nodes-1

    void fill_default_ids();
    void validate() const;
};

// Immutable bank of per-node lookup tables.
class Reservoir {
  public:
    Reservoir(const ReservoirConfig& cfg, const VolatileParams& params,
              std::uint64_t root_seed, bool add_noise = true);

    // codes -> concatenated per-node 4-read state vector (length 4*nodes).
    std::vector<double> forward(const std::vector<int>& codes) const;

    // Convenience: encode then forward.
    std::vector<double> project_frame(const std::vector<double>& features,
                                      const Mask& mask) const;

    std::size_t num_nodes() const { return lookups_.size(); }
    const StateLookup& lookup(std::size_t node) const { return lookups_[node]; }

  private:
    std::vector<StateLookup> lookups_;
};

// Element-wise mean over frames, or the final frame. Throws on zero frames.
std::vector<double> pool_over_frames(const std::vector<std::vector<double>>& states,
                                     Pooling mode);

}  // namespace memrc
