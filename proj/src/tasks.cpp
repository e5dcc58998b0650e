#include "memrc/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>

namespace memrc {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

MetricsReport evaluate_classification(const Eigen::VectorXi& predicted,
                                      const Eigen::VectorXi& truth, int classes) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("evaluate: prediction/truth length mismatch");
    MetricsReport report;
    report.confusion.assign(static_cast<std::size_t>(classes),
                            std::vector<int>(static_cast<std::size_t>(classes), 0));
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        if (truth(i) < 0 || truth(i) >= classes || predicted(i) < 0 ||
            predicted(i) >= classes)
            throw std::invalid_argument("evaluate: label out of range");
        report.confusion[static_cast<std::size_t>(truth(i))]
                        [static_cast<std::size_t>(predicted(i))] += 1;
    }
    long correct = 0;
    for (int c = 0; c < classes; ++c)
        correct += report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    report.accuracy = truth.size() > 0
                          ? static_cast<double>(correct) / static_cast<double>(truth.size())
                          : 0.0;
    report.wer = 1.0 - report.accuracy;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.per_class_precision.assign(static_cast<std::size_t>(classes), nan);
    report.per_class_recall.assign(static_cast<std::size_t>(classes), nan);
    for (int c = 0; c < classes; ++c) {
        long col = 0, row = 0;
        for (int r = 0; r < classes; ++r) {
            col += report.confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            row += report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        }
        const int diag =
            report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        if (col > 0)
            report.per_class_precision[static_cast<std::size_t>(c)] =
                static_cast<double>(diag) / static_cast<double>(col);
        if (row > 0)
            report.per_class_recall[static_cast<std::size_t>(c)] =
                static_cast<double>(diag) / static_cast<double>(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Time series generation
// ---------------------------------------------------------------------------

void TimeSeriesConfig::validate() const {
    if (length <= washout + 10)
        throw std::invalid_argument("series length must exceed washout + 10");
}

Series generate_series(const TimeSeriesConfig& cfg) {
    cfg.validate();
    Rng rng = substream(cfg.seed, "series-input");
    Series s;
    s.u.resize(cfg.length);
    s.y.resize(cfg.length);
    for (auto& v : s.u) v = rng.uniform();
    double y1 = 0.0, y2 = 0.0, y3 = 0.0;  // y[k-1], y[k-2], y[k-3]
    for (std::size_t k = 0; k < cfg.length; ++k) {
        const double yk =
            0.1 * y1 + 0.2 * y2 * y3 + 0.3 * s.u[k] * s.u[k] * s.u[k] + 0.25;
        s.y[k] = yk;
        y3 = y2;
        y2 = y1;
        y1 = yk;
    }
    return s;
}

double series_fixed_point_u0(int iterations) {
    double y1 = 0.0, y2 = 0.0, y3 = 0.0;
    double yk = 0.0;
    for (int k = 0; k < iterations; ++k) {
        yk = 0.1 * y1 + 0.2 * y2 * y3 + 0.25;
        y3 = y2;
        y2 = y1;
        y1 = yk;
    }
    return yk;
}

// ---------------------------------------------------------------------------
// Fixed decoder basis for the time-series readout
// ---------------------------------------------------------------------------

namespace {

// numpy-style linear-interpolation quantile of a sorted vector
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

Network build_decoder_network(const std::vector<StateLookup>& lookups,
                              int hidden1, int hidden2, int reads_per_node) {
    const int nodes = static_cast<int>(lookups.size());
    if (nodes == 0) throw std::invalid_argument("decoder needs at least one node");
    if (reads_per_node != 1 && reads_per_node != 4)
        throw std::invalid_argument("reads_per_node must be 1 or 4");
    const int in_dim = nodes * reads_per_node;
    const int l1_per = hidden1 / nodes;
    const int l2_per = hidden2 / nodes;
    if (l1_per < 2 || l2_per < 1)
        throw std::invalid_argument("hidden sizes too small for the decoder");

    Network net;
    net.layers.resize(3);
    Layer& L1 = net.layers[0];
    Layer& L2 = net.layers[1];
    Layer& Lo = net.layers[2];
    L1.W = Eigen::MatrixXd::Zero(hidden1, in_dim);
    L1.b = Eigen::VectorXd::Constant(hidden1, -0.5);  // unused units stay dark
    L2.W = Eigen::MatrixXd::Zero(hidden2, hidden1);
    L2.b = Eigen::VectorXd::Constant(hidden2, -0.5);
    Lo.W = Eigen::MatrixXd::Zero(1, hidden2);
    Lo.b = Eigen::VectorXd::Zero(1);

    for (int n = 0; n < nodes; ++n) {
        // Node input matrix: its 16 possible (normalized) read vectors.
        Eigen::MatrixXd rows(16, reads_per_node);
        for (int code = 0; code < 16; ++code)
            for (int r = 0; r < reads_per_node; ++r)
                rows(code, r) = reads_per_node == 1
                                    ? lookups[static_cast<std::size_t>(n)][code][3]
                                    : lookups[static_cast<std::size_t>(n)][code]
                                             [static_cast<std::size_t>(r)];

        // Monotonizing projection: least-squares map from read vectors to the
        // code levels 0/15..15/15, rescaled so weights, biases, and projected
        // values all stay inside [-1,1].
        Eigen::MatrixXd A(16, reads_per_node + 1);
        A.leftCols(reads_per_node) = rows;
        A.col(reads_per_node).setOnes();
        Eigen::VectorXd levels(16);
        for (int code = 0; code < 16; ++code) levels(code) = code / 15.0;
        const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(levels);
        Eigen::VectorXd alpha = sol.head(reads_per_node);
        Eigen::VectorXd p = rows * alpha;
        const double scale =
            std::max({1.0, alpha.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff()});
        alpha /= scale;
        p /= scale;

        // Ramp thresholds at spread quantiles of the projected values.
        std::vector<double> sorted(p.data(), p.data() + p.size());
        std::sort(sorted.begin(), sorted.end());
        const int base1 = n * l1_per;
        for (int j = 0; j < l1_per; ++j) {
            const double q = 0.02 + (0.92 - 0.02) * static_cast<double>(j) /
                                        static_cast<double>(l1_per - 1);
            const double theta = quantile_sorted(sorted, q);
            for (int r = 0; r < reads_per_node; ++r)
                L1.W(base1 + j, n * reads_per_node + r) = alpha(r);
            L1.b(base1 + j) = -theta;
        }

        // Second layer: adjacent ramps grouped into summing units (weights 1,
        // bias 0) — a piecewise-linear basis over each node's state ordering.
        const int base2 = n * l2_per;
        for (int j = 0; j < l2_per; ++j) {
            const int lo = (j * l1_per) / l2_per;
            const int hi = ((j + 1) * l1_per) / l2_per;
            for (int i = lo; i < hi; ++i) L2.W(base2 + j, base1 + i) = 1.0;
            L2.b(base2 + j) = 0.0;
        }
    }
    return net;
}

// ---------------------------------------------------------------------------
// Time-series experiment
// ---------------------------------------------------------------------------

TimeSeriesExperimentConfig TimeSeriesExperimentConfig::make_default() {
    TimeSeriesExperimentConfig cfg;
    cfg.train.loss = Loss::mse;
    cfg.train.mode = TrainMode::offline;
    cfg.train.epochs = 30;
    cfg.train.batch_size = 64;
    cfg.train.noise_enabled = true;
    cfg.train.update_scope = UpdateScope::output_layer;
    // The readout synapses are programmed with a fine-grained pulse scheme:
    // 450 weaker pulses sweep the same conductance range (well inside the
    // demonstrated multi-thousand-pulse endurance), giving step size 2/450.
    cfg.train.synapse.n_pot = 450;
    cfg.train.synapse.n_dep = 450;
    cfg.train.synapse.a_pot = 150.0;
    cfg.train.synapse.a_dep = 150.0;
    return cfg;
}

TimeSeriesResult run_timeseries_experiment(const TimeSeriesExperimentConfig& cfg) {
    cfg.series.validate();
    cfg.device.validate();
    cfg.train.synapse.validate();
    if (cfg.num_nodes == 0) throw std::invalid_argument("num_nodes must be positive");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0,1)");

    const Series series = generate_series(cfg.series);
    const std::size_t window = cfg.num_nodes;  // u[k] .. u[k+nodes-1]
    if (series.u.size() < cfg.series.washout + window + 20)
        throw std::invalid_argument("insufficient data after washout");
    const std::size_t first_k = cfg.series.washout;
    const std::size_t last_k = series.u.size() - window;  // inclusive
    const std::size_t n_samples = last_k - first_k + 1;

    // Reservoir: one volatile device per node, lookup built with noise.
    ReservoirConfig rc;
    rc.num_nodes = cfg.num_nodes;
    rc.device_ids = cfg.device_ids;
    Reservoir reservoir(rc, cfg.device, cfg.root_seed, true);

    const int reads = cfg.pooling == ReadPooling::all_reads ? 4 : 1;
    const int dim = static_cast<int>(cfg.num_nodes) * reads;
    Eigen::MatrixXd X(n_samples, dim);
    Eigen::VectorXd y(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const std::size_t k = first_k + s;
        for (std::size_t nnode = 0; nnode < cfg.num_nodes; ++nnode) {
            const int code = quantize4(series.u[k + nnode]);
            const auto& row = reservoir.lookup(nnode)[code];
            if (reads == 4)
                for (int r = 0; r < 4; ++r)
                    X(static_cast<Eigen::Index>(s),
                      static_cast<Eigen::Index>(nnode) * 4 + r) = row[static_cast<std::size_t>(r)];
            else
                X(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(nnode)) = row[3];
        }
        y(static_cast<Eigen::Index>(s)) = series.y[k];
    }

    const auto n_train =
        static_cast<Eigen::Index>(cfg.train_fraction * static_cast<double>(n_samples));
    const Eigen::Index n_test = static_cast<Eigen::Index>(n_samples) - n_train;
    if (n_train < 10 || n_test < 10)
        throw std::invalid_argument("insufficient data after washout");

    const Eigen::MatrixXd Xtr = X.topRows(n_train);
    const Eigen::MatrixXd Xte = X.bottomRows(n_test);
    const Eigen::VectorXd ytr = y.head(n_train);
    const Eigen::VectorXd yte = y.tail(n_test);

    // Degenerate-series guard: NRMSE needs nonzero target spread.
    const double test_mean = yte.mean();
    const double test_std =
        std::sqrt((yte.array() - test_mean).square().sum() / static_cast<double>(n_test));
    TimeSeriesResult result;
    result.metrics.seed = cfg.root_seed;
    if (test_std < 1e-9) {
        result.metrics.nrmse_defined = false;
        result.metrics.nrmse = std::numeric_limits<double>::quiet_NaN();
        return result;
    }

    double mu = 0.0, sd = 1.0;
    if (cfg.standardize_targets) {
        mu = ytr.mean();
        sd = std::sqrt((ytr.array() - mu).square().sum() / static_cast<double>(n_train));
        if (sd < 1e-12) sd = 1.0;
    }
    const Eigen::VectorXd ytr_s = (ytr.array() - mu) / sd;

    // Readout: fixed decoder hidden layers, trained output synapse layer.
    Network net;
    if (cfg.decoder_hidden) {
        std::vector<StateLookup> lookups;
        for (std::size_t nnode = 0; nnode < cfg.num_nodes; ++nnode)
            lookups.push_back(reservoir.lookup(nnode));
        net = build_decoder_network(lookups, 128, 64, reads);
    } else {
        net = init_network({dim, 128, 64, 1}, cfg.root_seed);
    }

    // Prequential trace (online mode): |error| in original units, before
    // each update, accumulated over the whole stream.
    std::vector<double> abs_err;
    SampleCallback on_sample = nullptr;
    if (cfg.train.mode == TrainMode::online) {
        abs_err.reserve(static_cast<std::size_t>(n_train) *
                        static_cast<std::size_t>(cfg.train.epochs));
        on_sample = [&](std::size_t, double pred, double target) {
            abs_err.push_back(std::abs(pred - target) * sd);
        };
    }

    TrainConfig tc = cfg.train;
    tc.loss = Loss::mse;
    tc.seed = cfg.root_seed;
    result.history = train(net, Xtr, ytr_s, Eigen::VectorXi(), tc, nullptr, on_sample);

    if (!abs_err.empty()) {
        double running = 0.0;
        const std::size_t total = abs_err.size();
        std::size_t next_quarter = 1;
        for (std::size_t i = 0; i < total; ++i) {
            running += abs_err[i];
            if (i + 1 == total * next_quarter / 4) {
                result.cumulative_mae_quarters.push_back(running /
                                                         static_cast<double>(i + 1));
                ++next_quarter;
            }
        }
    }

    auto nrmse_of = [&](const Eigen::MatrixXd& Xs, const Eigen::VectorXd& ys) {
        const Eigen::VectorXd pred =
            (forward_linear(net, Xs).col(0).array() * sd + mu).matrix();
        const double m = ys.mean();
        const double stdv = std::sqrt((ys.array() - m).square().sum() /
                                      static_cast<double>(ys.size()));
        const double rmse = std::sqrt((pred - ys).squaredNorm() /
                                      static_cast<double>(ys.size()));
        return rmse / stdv;
    };
    result.train_nrmse = nrmse_of(Xtr, ytr);
    result.metrics.nrmse = nrmse_of(Xte, yte);
    result.metrics.nrmse_defined = true;

    const Eigen::VectorXd pred_te =
        (forward_linear(net, Xte).col(0).array() * sd + mu).matrix();
    result.test_k.resize(static_cast<std::size_t>(n_test));
    result.test_y.resize(static_cast<std::size_t>(n_test));
    result.test_yhat.resize(static_cast<std::size_t>(n_test));
    for (Eigen::Index i = 0; i < n_test; ++i) {
        result.test_k[static_cast<std::size_t>(i)] =
            first_k + static_cast<std::size_t>(n_train + i);
        result.test_y[static_cast<std::size_t>(i)] = yte(i);
        result.test_yhat[static_cast<std::size_t>(i)] = pred_te(i);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Spoken-digit experiment
// ---------------------------------------------------------------------------

FsddExperimentConfig FsddExperimentConfig::make_default() {
    FsddExperimentConfig cfg;
    cfg.train.loss = Loss::cross_entropy;
    cfg.train.mode = TrainMode::offline;
    cfg.train.epochs = 200;
    cfg.train.batch_size = 135;  // 20 sign updates per epoch on a 2700-clip split
    cfg.train.noise_enabled = true;
    cfg.train.update_scope = UpdateScope::all_layers;
    // Fine-grained programming scheme: 1800 weak pulses per conductance sweep
    // (step 2/1800). Large batches plus small steps keep the accuracy curve's
    // trend monotone instead of orbiting the optimum.
    cfg.train.synapse.n_pot = 1800;
    cfg.train.synapse.n_dep = 1800;
    cfg.train.synapse.a_pot = 600.0;
    cfg.train.synapse.a_dep = 600.0;
    return cfg;
}

std::vector<std::string> list_fsdd_clips(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw DatasetError("dataset directory not found: " + dir);
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            paths.push_back(entry.path().string());
    if (paths.empty())
        throw DatasetError("no WAV clips in dataset directory: " + dir);
    std::sort(paths.begin(), paths.end());
    return paths;
}

namespace {

struct FsddData {
    std::vector<AudioClip> clips;       // padded/truncated, clean
    std::vector<Eigen::Index> train_idx;
    std::vector<Eigen::Index> test_idx;
};

FsddData load_and_split(const FsddExperimentConfig& cfg) {
    FsddData data;
    for (const auto& path : list_fsdd_clips(cfg.data_dir)) {
        AudioClip clip = pad_or_truncate(load_wav(path));
        if (clip.label < 0)
            throw DatasetError("clip name does not follow {digit}_{speaker}_{index}.wav: " +
                               path);
        data.clips.push_back(std::move(clip));
    }
    // Stratified split: shuffle within each class, first fraction trains.
    std::vector<std::vector<Eigen::Index>> by_class(10);
    for (std::size_t i = 0; i < data.clips.size(); ++i)
        by_class[static_cast<std::size_t>(data.clips[i].label)].push_back(
            static_cast<Eigen::Index>(i));
    for (int c = 0; c < 10; ++c) {
        auto& idx = by_class[static_cast<std::size_t>(c)];
        Rng rng = substream(cfg.root_seed, "fsdd-split", static_cast<std::uint64_t>(c));
        shuffle(idx, rng);
        const auto n_train = static_cast<std::size_t>(
            cfg.train_fraction * static_cast<double>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_train ? data.train_idx : data.test_idx).push_back(idx[i]);
    }
    std::sort(data.train_idx.begin(), data.train_idx.end());
    std::sort(data.test_idx.begin(), data.test_idx.end());
    return data;
}

// Shared per-seed state: the normalizer is fit on train frames only, then
// the same normalizer/mask/reservoir featurize any clip.
struct FsddPipeline {
    FeatureNormalizer norm;
    Mask mask;
    Reservoir reservoir;
    Eigen::MatrixXd Xtr;
    Eigen::VectorXi ytr;
};

std::vector<double> featurize_clip(const FsddExperimentConfig& cfg,
                                   const FsddPipeline& pipe, const AudioClip& clip) {
    const auto frames = pipe.norm.apply(mfcc(clip, cfg.mfcc));
    std::vector<std::vector<double>> states;
    states.reserve(frames.size());
    for (const auto& frame : frames)
        states.push_back(pipe.reservoir.project_frame(frame, pipe.mask));
    return pool_over_frames(states, cfg.frame_pooling);
}

FsddPipeline prepare_pipeline(const FsddExperimentConfig& cfg, const FsddData& data) {
    std::vector<std::vector<std::vector<double>>> train_mfcc;
    std::vector<std::vector<double>> train_frames;
    train_mfcc.reserve(data.train_idx.size());
    for (const auto& idx : data.train_idx) {
        train_mfcc.push_back(mfcc(data.clips[static_cast<std::size_t>(idx)], cfg.mfcc));
        for (const auto& frame : train_mfcc.back()) train_frames.push_back(frame);
    }

    ReservoirConfig rc;
    rc.num_nodes = cfg.num_nodes;
    rc.device_ids = cfg.device_ids;
    rc.pooling = cfg.frame_pooling;
    FsddPipeline pipe{fit_normalizer(train_frames),
                      make_mask(cfg.num_nodes, static_cast<std::size_t>(cfg.mfcc.n_coeff),
                                cfg.root_seed, cfg.mask_density),
                      Reservoir(rc, cfg.device, cfg.root_seed, true),
                      {},
                      {}};

    const int dim = static_cast<int>(cfg.num_nodes) * 4;
    pipe.Xtr.resize(static_cast<Eigen::Index>(data.train_idx.size()), dim);
    pipe.ytr.resize(static_cast<Eigen::Index>(data.train_idx.size()));
    for (std::size_t i = 0; i < data.train_idx.size(); ++i) {
        const auto frames = pipe.norm.apply(train_mfcc[i]);
        std::vector<std::vector<double>> states;
        states.reserve(frames.size());
        for (const auto& frame : frames)
            states.push_back(pipe.reservoir.project_frame(frame, pipe.mask));
        const auto vec = pool_over_frames(states, cfg.frame_pooling);
        for (int d = 0; d < dim; ++d)
            pipe.Xtr(static_cast<Eigen::Index>(i), d) = vec[static_cast<std::size_t>(d)];
        pipe.ytr(static_cast<Eigen::Index>(i)) =
            data.clips[static_cast<std::size_t>(data.train_idx[i])].label;
    }
    return pipe;
}

// Test features, optionally with Gaussian amplitude noise injected into the
// test clips (training stays clean).
void test_features(const FsddExperimentConfig& cfg, const FsddData& data,
                   const FsddPipeline& pipe, double sigma, Eigen::MatrixXd& Xte,
                   Eigen::VectorXi& yte) {
    const int dim = static_cast<int>(cfg.num_nodes) * 4;
    Xte.resize(static_cast<Eigen::Index>(data.test_idx.size()), dim);
    yte.resize(static_cast<Eigen::Index>(data.test_idx.size()));
    for (std::size_t i = 0; i < data.test_idx.size(); ++i) {
        const auto& clip = data.clips[static_cast<std::size_t>(data.test_idx[i])];
        std::vector<double> vec;
        if (sigma > 0.0) {
            Rng noise = substream(cfg.root_seed, "fsdd-noise", i);
            vec = featurize_clip(cfg, pipe, add_gaussian_noise(clip, sigma, noise));
        } else {
            vec = featurize_clip(cfg, pipe, clip);
        }
        for (int d = 0; d < dim; ++d)
            Xte(static_cast<Eigen::Index>(i), d) = vec[static_cast<std::size_t>(d)];
        yte(static_cast<Eigen::Index>(i)) = clip.label;
    }
}

Network train_readout(const FsddExperimentConfig& cfg, const FsddPipeline& pipe,
                      std::vector<EpochStats>* history, const EpochCallback& on_epoch) {
    Network net = init_network({static_cast<int>(cfg.num_nodes) * 4, 128, 64, 10},
                               cfg.root_seed);
    TrainConfig tc = cfg.train;
    tc.loss = Loss::cross_entropy;
    tc.seed = cfg.root_seed;
    auto stats = train(net, pipe.Xtr, Eigen::VectorXd(), pipe.ytr, tc, on_epoch);
    if (history) *history = std::move(stats);
    return net;
}

double accuracy_of(const Network& net, const Eigen::MatrixXd& X,
                   const Eigen::VectorXi& y) {
    const Eigen::VectorXi pred = predict_labels(net, X);
    long correct = 0;
    for (Eigen::Index i = 0; i < pred.size(); ++i)
        correct += pred(i) == y(i) ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

}  // namespace

FsddResult run_fsdd_experiment(const FsddExperimentConfig& cfg) {
    cfg.device.validate();
    cfg.mfcc.validate();
    const FsddData data = load_and_split(cfg);
    const FsddPipeline pipe = prepare_pipeline(cfg, data);
    Eigen::MatrixXd Xte;
    Eigen::VectorXi yte;
    test_features(cfg, data, pipe, cfg.test_noise_sigma, Xte, yte);

    FsddResult result;
    result.train_count = data.train_idx.size();
    result.test_count = data.test_idx.size();
    result.test_accuracy.reserve(static_cast<std::size_t>(cfg.train.epochs));
    EpochCallback on_epoch = [&](int, const Network& current) {
        result.test_accuracy.push_back(accuracy_of(current, Xte, yte));
    };
    const Network net = train_readout(cfg, pipe, &result.history, on_epoch);

    result.metrics = evaluate_classification(predict_labels(net, Xte), yte, 10);
    result.metrics.seed = cfg.root_seed;
    return result;
}

std::vector<double> run_noise_sweep(const FsddExperimentConfig& base,
                                    const std::vector<double>& sigmas,
                                    const std::vector<std::uint64_t>& seeds) {
    std::vector<double> mean_acc(sigmas.size(), 0.0);
    for (const auto seed : seeds) {
        FsddExperimentConfig cfg = base;
        cfg.root_seed = seed;
        const FsddData data = load_and_split(cfg);
        const FsddPipeline pipe = prepare_pipeline(cfg, data);
        const Network net = train_readout(cfg, pipe, nullptr, nullptr);

        // Same trained net against increasingly noisy test audio.
        for (std::size_t s = 0; s < sigmas.size(); ++s) {
            Eigen::MatrixXd Xte;
            Eigen::VectorXi yte;
            test_features(cfg, data, pipe, sigmas[s], Xte, yte);
            mean_acc[s] += accuracy_of(net, Xte, yte);
        }
    }
    for (auto& v : mean_acc) v /= static_cast<double>(seeds.size());
    return mean_acc;
}

}  // namespace memrc
