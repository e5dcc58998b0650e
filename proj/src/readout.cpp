#include "memrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace memrc {

Network init_network(const std::vector<int>& sizes, std::uint64_t seed, double scale) {
    if (sizes.size() < 2) throw std::invalid_argument("need at least input and output sizes");
    Rng rng = substream(seed, "net-init");
    Network net;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.W.resize(sizes[l + 1], sizes[l]);
        layer.b.resize(sizes[l + 1]);
        for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.W.cols(); ++c)
                layer.W(r, c) = rng.uniform(-scale, scale);
        for (Eigen::Index r = 0; r < layer.b.size(); ++r)
            layer.b(r) = rng.uniform(-scale, scale);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

double conductance_to_weight(double g, const SynapseParams& p) {
    return 2.0 * (g - p.g_min) / (p.g_max - p.g_min) - 1.0;
}

double weight_to_conductance(double w, const SynapseParams& p) {
    return p.g_min + (w + 1.0) * 0.5 * (p.g_max - p.g_min);
}

std::vector<Eigen::MatrixXd> forward_activations(const Network& net,
                                                 const Eigen::MatrixXd& X) {
    if (static_cast<std::size_t>(X.cols()) != net.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(net.layers.size() + 1);
    acts.push_back(X);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Eigen::MatrixXd z =
            (acts.back() * net.layers[l].W.transpose()).rowwise() +
            net.layers[l].b.transpose();
        if (l + 1 < net.layers.size()) z = z.cwiseMax(0.0);  // hidden ReLU
        acts.push_back(std::move(z));
    }
    return acts;
}

Eigen::MatrixXd forward_linear(const Network& net, const Eigen::MatrixXd& X) {
    return forward_activations(net, X).back();
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p = logits;
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        const double m = p.row(r).maxCoeff();
        p.row(r) = (p.row(r).array() - m).exp();
        p.row(r) /= p.row(r).sum();
    }
    return p;
}

Eigen::MatrixXd predict_proba(const Network& net, const Eigen::MatrixXd& X) {
    return softmax_rows(forward_linear(net, X));
}

Eigen::VectorXi predict_labels(const Network& net, const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd out = forward_linear(net, X);
    Eigen::VectorXi labels(out.rows());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        Eigen::Index best = 0;
        out.row(r).maxCoeff(&best);  // ties resolve to the lowest index
        labels(r) = static_cast<int>(best);
    }
    return labels;
}

double mse_loss(const Network& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd out = forward_linear(net, X);
    if (out.cols() != 1) throw std::invalid_argument("mse loss expects scalar output");
    return (out.col(0) - y).squaredNorm();
}

double cross_entropy_loss(const Network& net, const Eigen::MatrixXd& X,
                          const Eigen::VectorXi& labels) {
    const Eigen::MatrixXd p = predict_proba(net, X);
    double loss = 0.0;
    for (Eigen::Index r = 0; r < p.rows(); ++r)
        loss -= std::log(std::max(p(r, labels(r)), 1e-300));
    return loss;
}

namespace {

// Shared backprop: delta is dLoss/d(linear output), batch rows.
Gradients backprop(const Network& net, const std::vector<Eigen::MatrixXd>& acts,
                   Eigen::MatrixXd delta) {
    Gradients g;
    g.W.resize(net.layers.size());
    g.b.resize(net.layers.size());
    for (std::size_t l = net.layers.size(); l-- > 0;) {
        g.W[l] = delta.transpose() * acts[l];
        g.b[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            delta = (delta * net.layers[l].W).cwiseProduct(
                (acts[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

}  // namespace

Gradients gradients_mse(const Network& net, const Eigen::MatrixXd& X,
                        const Eigen::VectorXd& y) {
    const auto acts = forward_activations(net, X);
    if (acts.back().cols() != 1)
        throw std::invalid_argument("mse gradients expect scalar output");
    Eigen::MatrixXd delta = 2.0 * (acts.back().col(0) - y);
    return backprop(net, acts, delta);
}

Gradients gradients_cross_entropy(const Network& net, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXi& labels) {
    const auto acts = forward_activations(net, X);
    Eigen::MatrixXd delta = softmax_rows(acts.back());
    for (Eigen::Index r = 0; r < delta.rows(); ++r) delta(r, labels(r)) -= 1.0;
    return backprop(net, acts, delta);
}

void manhattan_update(Network& net, const Gradients& grads, const TrainConfig& cfg,
                      Rng& rng) {
    if (grads.W.size() != net.layers.size())
        throw std::invalid_argument("manhattan_update: gradient shape mismatch");
    const double lr_pot = cfg.lr_pot();
    const double lr_dep = cfg.lr_dep();
    const double sigma = cfg.synapse.c2c_sigma;
    const std::size_t first =
        cfg.update_scope == UpdateScope::output_layer ? net.layers.size() - 1 : 0;
    for (std::size_t l = first; l < net.layers.size(); ++l) {
        auto apply = [&](double w, double g) {
            if (g == 0.0) return w;
            // descending against the gradient: positive gradient depresses
            // the weight, negative gradient potentiates it
            double step = g > 0.0 ? -lr_dep : lr_pot;
            if (cfg.noise_enabled) step *= 1.0 + sigma * rng.normal();
            return std::clamp(w + step, -1.0, 1.0);
        };
        Layer& layer = net.layers[l];
        const Eigen::MatrixXd& gW = grads.W[l];
        for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.W.cols(); ++c)
                layer.W(r, c) = apply(layer.W(r, c), gW(r, c));
        for (Eigen::Index r = 0; r < layer.b.size(); ++r)
            layer.b(r) = apply(layer.b(r), grads.b[l](r));
    }
}

std::vector<EpochStats> train(Network& net, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y_reg,
                              const Eigen::VectorXi& y_cls, const TrainConfig& cfg,
                              const EpochCallback& on_epoch,
                              const SampleCallback& on_sample) {
    const Eigen::Index n = X.rows();
    if (n == 0) throw std::invalid_argument("train: empty dataset");
    const bool classify = cfg.loss == Loss::cross_entropy;
    if (classify && y_cls.size() != n)
        throw std::invalid_argument("train: class targets required");
    if (!classify && y_reg.size() != n)
        throw std::invalid_argument("train: regression targets required");

    Rng update_rng = substream(cfg.seed, "train-noise");
    std::vector<EpochStats> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.mode == TrainMode::offline) {
            Rng shuffle_rng = substream(cfg.seed, "train-shuffle",
                                        static_cast<std::uint64_t>(epoch));
            shuffle(order, shuffle_rng);
        }
        const int batch = std::max(cfg.effective_batch(), 1);
        double loss_sum = 0.0;
        std::size_t correct = 0;

        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index count = std::min<Eigen::Index>(batch, n - start);
            Eigen::MatrixXd Xb(count, X.cols());
            Eigen::VectorXd yb_reg(classify ? 0 : count);
            Eigen::VectorXi yb_cls(classify ? count : 0);
            for (Eigen::Index i = 0; i < count; ++i) {
                const Eigen::Index src = order[static_cast<std::size_t>(start + i)];
                Xb.row(i) = X.row(src);
                if (classify)
                    yb_cls(i) = y_cls(src);
                else
                    yb_reg(i) = y_reg(src);
            }
            if (on_sample && cfg.mode == TrainMode::online && !classify) {
                const double pred = forward_linear(net, Xb)(0, 0);
                on_sample(static_cast<std::size_t>(order[static_cast<std::size_t>(start)]),
                          pred, yb_reg(0));
            }
            Gradients grads;
            if (classify) {
                loss_sum += cross_entropy_loss(net, Xb, yb_cls);
                const Eigen::VectorXi pred = predict_labels(net, Xb);
                for (Eigen::Index i = 0; i < count; ++i)
                    correct += pred(i) == yb_cls(i) ? 1u : 0u;
                grads = gradients_cross_entropy(net, Xb, yb_cls);
            } else {
                loss_sum += mse_loss(net, Xb, yb_reg);
                grads = gradients_mse(net, Xb, yb_reg);
            }
            manhattan_update(net, grads, cfg, update_rng);
        }

        EpochStats stats;
        stats.loss = loss_sum / static_cast<double>(n);
        stats.accuracy =
            classify ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
        history.push_back(stats);
        if (on_epoch) on_epoch(epoch, net);
    }
    return history;
}

void save_checkpoint(const Network& net, const std::string& path,
                     std::uint64_t config_hash) {
    nlohmann::json doc;
    doc["format"] = "memrc-checkpoint";
    doc["version"] = 1;
    doc["config_hash"] = config_hash;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : net.layers) {
        nlohmann::json jl;
        jl["rows"] = layer.W.rows();
        jl["cols"] = layer.W.cols();
        std::vector<double> w(static_cast<std::size_t>(layer.W.size()));
        Eigen::Map<Eigen::MatrixXd>(w.data(), layer.W.rows(), layer.W.cols()) = layer.W;
        jl["weights"] = w;
        jl["biases"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
        layers.push_back(std::move(jl));
    }
    doc["layers"] = std::move(layers);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << doc.dump(2) << "\n";
}

Network load_checkpoint(const std::string& path, std::uint64_t* config_hash) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.value("format", "") != "memrc-checkpoint")
        throw std::runtime_error("not a checkpoint file: " + path);
    if (config_hash != nullptr)
        *config_hash = doc.value("config_hash", std::uint64_t{0});
    Network net;
    for (const auto& jl : doc.at("layers")) {
        Layer layer;
        const Eigen::Index rows = jl.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = jl.at("cols").get<Eigen::Index>();
        const auto w = jl.at("weights").get<std::vector<double>>();
        const auto b = jl.at("biases").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
            static_cast<Eigen::Index>(b.size()) != rows)
            throw std::runtime_error("checkpoint shape mismatch: " + path);
        layer.W = Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols);
        layer.b = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
        net.layers.push_back(std::move(layer));
    }
    if (net.layers.empty()) throw std::runtime_error("checkpoint has no layers");
    return net;
}

}  // namespace memrc
