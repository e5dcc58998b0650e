// Configuration loading (strict JSON with unknown-key rejection), config
// hashing, atomic artifact writes, and the CSV/JSON emitters shared by the
// command-line tool. Every emitted artifact embeds (config hash, seed,
// version) for reproducibility.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memrc/device.hpp"
#include "memrc/energy.hpp"
#include "memrc/sclc.hpp"
#include "memrc/tasks.hpp"

namespace memrc {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StatesOptions {
    int device_id = 0;
    bool noise = true;
};

struct HarnessConfig {
    std::uint64_t seed = 1234;
    std::string out_dir = "out";
    FsddExperimentConfig fsdd = FsddExperimentConfig::make_default();
    TimeSeriesExperimentConfig timeseries = TimeSeriesExperimentConfig::make_default();
    EnergyConfig energy;
    StatesOptions states;
};

// Strict parse: an empty or missing file yields all defaults; any key not in
// the documented schema raises ConfigError naming the key. Values propagate
// into both experiment configs (shared device model, per-task training).
HarnessConfig load_config(const std::string& path);
HarnessConfig parse_config_text(const std::string& text);

// Canonical serialization (sorted keys) and its FNV-1a hash; load(emit(c))
// hashes identically to c.
std::string config_to_json_text(const HarnessConfig& cfg);
std::uint64_t config_hash(const HarnessConfig& cfg);

// Overrides every experiment root seed in one step (--seed flag).
void apply_seed(HarnessConfig& cfg, std::uint64_t seed);

// Writes via temp file + rename so readers never observe partial artifacts.
void atomic_write(const std::string& path, const std::string& content);

// First line of every CSV artifact: "# config_hash=... seed=... version=..."
std::string artifact_stamp(std::uint64_t hash, std::uint64_t seed);

// --- artifact bodies (stamp + header row + data rows) ---
std::string states_csv(const StateLookup& table, std::uint64_t hash, std::uint64_t seed);
std::string confusion_csv(const MetricsReport& m, std::uint64_t hash, std::uint64_t seed);
std::string accuracy_csv(const FsddResult& r, std::uint64_t hash, std::uint64_t seed);
std::string prediction_csv(const TimeSeriesResult& r, std::uint64_t hash,
                           std::uint64_t seed);
std::string noise_sweep_csv(const std::vector<double>& sigmas,
                            const std::vector<double>& mean_acc, std::uint64_t hash,
                            std::uint64_t seed);
std::string pd_cycle_csv(const PdStats& stats, std::uint64_t hash, std::uint64_t seed);
std::string region_fits_csv(const std::vector<RegionFit>& fits, std::uint64_t hash,
                            std::uint64_t seed);
std::string metrics_json(const MetricsReport& m, std::uint64_t hash, std::uint64_t seed);

// Parses a "voltage,current[,branch]" CSV (header optional) into a trace.
IvTrace load_iv_csv(const std::string& path);

}  // namespace memrc
