// Feedforward readout network with device-constrained training: weights live
// in [-1,1] (affine image of a synapse conductance range) and updates move by
// a fixed device-derived step in the direction opposite the gradient sign.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memrc/device.hpp"
#include "memrc/rng.hpp"

namespace memrc {

enum class Loss { mse, cross_entropy };
enum class TrainMode { offline, online };
enum class UpdateScope { all_layers, output_layer };

struct Layer {
    Eigen::MatrixXd W;  // fan_out x fan_in, entries in [-1,1]
    Eigen::VectorXd b;  // fan_out, entries in [-1,1]
};

// Hidden layers use ReLU; the output layer is linear (softmax is applied by
// the classification loss/prediction helpers, not stored in the layer).
struct Network {
    std::vector<Layer> layers;

    std::size_t input_dim() const { return static_cast<std::size_t>(layers.front().W.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(layers.back().W.rows()); }
};

// Uniform(-scale, scale) weights and biases.
Network init_network(const std::vector<int>& sizes, std::uint64_t seed,
                     double scale = 0.3);

// Affine map between conductance and unitless weight: g_min -> -1, g_max -> +1.
double conductance_to_weight(double g, const SynapseParams& p);
double weight_to_conductance(double w, const SynapseParams& p);

// Batch forward pass; rows of X are samples. Returns all activations
// (input, hidden..., linear output) for gradient computation.
std::vector<Eigen::MatrixXd> forward_activations(const Network& net,
                                                 const Eigen::MatrixXd& X);

// Linear network outputs, rows = samples.
Eigen::MatrixXd forward_linear(const Network& net, const Eigen::MatrixXd& X);

// Row-wise softmax with max-subtraction; rows sum to one.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

// Class probabilities / argmax labels for classification networks.
Eigen::MatrixXd predict_proba(const Network& net, const Eigen::MatrixXd& X);
Eigen::VectorXi predict_labels(const Network& net, const Eigen::MatrixXd& X);

struct Gradients {
    std::vector<Eigen::MatrixXd> W;
    std::vector<Eigen::VectorXd> b;
};

// Batch-summed loss and exact analytic gradients.
//   mse:           loss = sum_i (out_i - y_i)^2           (scalar output)
//   cross_entropy: loss = sum_i -log softmax(out_i)[y_i]  (class targets)
double mse_loss(const Network& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
double cross_entropy_loss(const Network& net, const Eigen::MatrixXd& X,
                          const Eigen::VectorXi& labels);
Gradients gradients_mse(const Network& net, const Eigen::MatrixXd& X,
                        const Eigen::VectorXd& y);
Gradients gradients_cross_entropy(const Network& net, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXi& labels);

struct TrainConfig {
    int epochs = 50;
    int batch_size = 64;
    TrainMode mode = TrainMode::offline;
    Loss loss = Loss::cross_entropy;
    bool noise_enabled = true;
    std::uint64_t seed = 1;
    SynapseParams synapse;  // the devices holding the trained weights
    UpdateScope update_scope = UpdateScope::all_layers;

    // Fixed step sizes derived from the synapse pulse counts: the [-1,1]
    // weight span divided by the pulses of a full sweep.
    double lr_pot() const { return 2.0 / synapse.n_pot; }
    double lr_dep() const { return 2.0 / synapse.n_dep; }
    // online mode always updates after every single sample
    int effective_batch() const { return mode == TrainMode::online ? 1 : batch_size; }
};

// One sign-rule update: w <- clamp(w - lr(dir)*sign(g), -1, 1) with
// sign(0) = 0; dir is potentiation when the update increases the weight.
// When cfg.noise_enabled, each applied step is scaled by (1 + eps),
// eps ~ Normal(0, synapse.c2c_sigma), drawn per weight per update.
void manhattan_update(Network& net, const Gradients& grads, const TrainConfig& cfg,
                      Rng& rng);

struct EpochStats {
    double loss = 0.0;      // mean per-sample loss over the epoch's updates
    double accuracy = 0.0;  // training accuracy (classification only)
};

using EpochCallback = std::function<void(int epoch, const Network& net)>;
// Called in online mode before each update with the pre-update prediction.
using SampleCallback =
    std::function<void(std::size_t index, double prediction, double target)>;

// Manhattan-rule training. Offline: per-epoch shuffle, gradients accumulated
// over each batch, one update per batch. Online: samples in stream order,
// one update per sample. Deterministic given cfg.seed.
std::vector<EpochStats> train(Network& net, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y_reg,
                              const Eigen::VectorXi& y_cls, const TrainConfig& cfg,
                              const EpochCallback& on_epoch = nullptr,
                              const SampleCallback& on_sample = nullptr);

// JSON checkpoint: layer shapes, weights, biases, config hash.
void save_checkpoint(const Network& net, const std::string& path,
                     std::uint64_t config_hash);
Network load_checkpoint(const std::string& path, std::uint64_t* config_hash = nullptr);

}  // namespace memrc
