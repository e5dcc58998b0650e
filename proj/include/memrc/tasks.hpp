// End-to-end experiments: nonlinear time-series prediction and spoken-digit
// classification, wired through the reservoir and the device-trained readout.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memrc/audio.hpp"
#include "memrc/readout.hpp"
#include "memrc/reservoir.hpp"

namespace memrc {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct MetricsReport {
    double accuracy = 0.0;
    double wer = 0.0;  // classification word error rate = 1 - accuracy
    std::vector<std::vector<int>> confusion;      // 10x10 for digit tasks
    std::vector<double> per_class_precision;      // NaN where undefined
    std::vector<double> per_class_recall;
    double nrmse = 0.0;                           // regression tasks
    bool nrmse_defined = true;  // false when target std is ~0 (degenerate)
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

// Confusion/accuracy/precision/recall for integer class labels in [0, classes).
MetricsReport evaluate_classification(const Eigen::VectorXi& predicted,
                                      const Eigen::VectorXi& truth, int classes);

// ---------------------------------------------------------------------------
// Nonlinear time series
// ---------------------------------------------------------------------------

struct TimeSeriesConfig {
    // 5054 raw steps = 50 washout + 5000 usable 5-input windows + 4 lookahead,
    // which an 80/20 split cuts into exactly 4000 train / 1000 test steps.
    std::size_t length = 5054;
    std::size_t washout = 50;   // initial steps discarded before windowing
    std::uint64_t seed = 7;

    void validate() const;  // requires length > washout + 10
};

struct Series {
    std::vector<double> u;  // iid Uniform[0,1] inputs
    std::vector<double> y;  // recurrence output, zero initial history
};

// y[k] = 0.1 y[k-1] + 0.2 y[k-2] y[k-3] + 0.3 u[k]^3 + 0.25
Series generate_series(const TimeSeriesConfig& cfg);

// Fixed point of the u = 0 recurrence, found by iterating to convergence.
double series_fixed_point_u0(int iterations = 100);

enum class ReadPooling { all_reads, last_read };

struct TimeSeriesExperimentConfig {
    TimeSeriesConfig series;
    VolatileParams device;
    TrainConfig train;          // defaults overridden in make_default()
    std::size_t num_nodes = 5;
    std::vector<int> device_ids;          // defaults to 0..num_nodes-1
    ReadPooling pooling = ReadPooling::all_reads;
    double train_fraction = 0.8;          // contiguous split, train first
    bool standardize_targets = true;      // z-score on train statistics
    bool decoder_hidden = true;           // fixed lookup-derived hidden basis
    std::uint64_t root_seed = 1234;

    // The experiment's documented training configuration: scalar-output MSE
    // readout, fine-grained synapse programming (450 pulses per sweep), and
    // sign updates applied to the output synapse layer over the fixed basis.
    static TimeSeriesExperimentConfig make_default();
};

struct TimeSeriesResult {
    MetricsReport metrics;              // nrmse on the held-out tail
    std::vector<std::size_t> test_k;    // aligned time indices
    std::vector<double> test_y;
    std::vector<double> test_yhat;
    std::vector<EpochStats> history;    // per-epoch training stats
    // Online mode: running mean |error| over the prequential stream, sampled
    // at each quarter of the stream (prediction made before each update).
    std::vector<double> cumulative_mae_quarters;
    double train_nrmse = 0.0;
};

TimeSeriesResult run_timeseries_experiment(const TimeSeriesExperimentConfig& cfg);

// The fixed hidden-layer basis used by the time-series readout: per node, a
// monotone projection of that node's 16 possible lookup rows feeds a bank of
// ReLU ramp units whose grouped sums form a piecewise-linear decoder of the
// node's state. Built from device lookup tables only. Output layer starts
// at zero.
Network build_decoder_network(const std::vector<StateLookup>& lookups,
                              int hidden1, int hidden2, int reads_per_node);

// ---------------------------------------------------------------------------
// Spoken digits
// ---------------------------------------------------------------------------

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FsddExperimentConfig {
    std::string data_dir;            // directory of {digit}_{speaker}_{index}.wav
    double train_fraction = 0.9;     // stratified random split
    VolatileParams device;
    MfccConfig mfcc;
    TrainConfig train;               // cross-entropy Manhattan training
    std::size_t num_nodes = 8;
    std::vector<int> device_ids;     // defaults to 0..num_nodes-1
    double mask_density = 0.5;
    Pooling frame_pooling = Pooling::mean;
    double test_noise_sigma = 0.0;   // Gaussian amplitude noise on test clips
    std::uint64_t root_seed = 1234;

    static FsddExperimentConfig make_default();
};

struct FsddResult {
    MetricsReport metrics;
    std::vector<EpochStats> history;        // training-set stats per epoch
    std::vector<double> test_accuracy;      // per-epoch test accuracy curve
    std::size_t train_count = 0;
    std::size_t test_count = 0;
};

FsddResult run_fsdd_experiment(const FsddExperimentConfig& cfg);

// Lists WAV paths under dir; throws DatasetError (naming the path) when the
// directory is missing or contains no clips.
std::vector<std::string> list_fsdd_clips(const std::string& dir);

// Accuracy for each noise level, averaged over seeds; one experiment is
// trained per seed on clean audio and evaluated on noisy test clips.
std::vector<double> run_noise_sweep(const FsddExperimentConfig& base,
                                    const std::vector<double>& sigmas,
                                    const std::vector<std::uint64_t>& seeds);

}  // namespace memrc
