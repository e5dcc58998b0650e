// Command-line entry point: experiment subcommands, config loading, and
// artifact emission.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memrc/io.hpp"
#include "memrc/synth.hpp"

namespace fs = std::filesystem;
using namespace memrc;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

HarnessConfig resolve_config(const GlobalArgs& g) {
    HarnessConfig cfg = g.config_path.empty() ? HarnessConfig{} : load_config(g.config_path);
    if (g.seed_set) apply_seed(cfg, g.seed);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (cfg.fsdd.data_dir.empty())
        if (const char* env = std::getenv("MEMRC_DATA")) cfg.fsdd.data_dir = env;
    return cfg;
}

std::string out_path(const HarnessConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

int run_states(const HarnessConfig& cfg, const std::string& out_file) {
    const StateLookup table = build_lookup_table(cfg.fsdd.device, cfg.states.device_id,
                                                 cfg.seed, cfg.states.noise);
    const std::string path =
        out_file.empty() ? out_path(cfg, "states.csv") : out_file;
    atomic_write(path, states_csv(table, config_hash(cfg), cfg.seed));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_fsdd_cmd(const HarnessConfig& cfg, bool sweep) {
    const std::uint64_t hash = config_hash(cfg);
    if (sweep) {
        const std::vector<double> sigmas = {0.0, 0.01, 0.05, 0.1};
        const std::vector<std::uint64_t> seeds = {cfg.seed, cfg.seed + 1, cfg.seed + 2,
                                                  cfg.seed + 3, cfg.seed + 4};
        const auto acc = run_noise_sweep(cfg.fsdd, sigmas, seeds);
        const std::string path = out_path(cfg, "noise_sweep.csv");
        atomic_write(path, noise_sweep_csv(sigmas, acc, hash, cfg.seed));
        for (std::size_t i = 0; i < sigmas.size(); ++i)
            std::cout << "sigma=" << sigmas[i] << " mean_accuracy=" << acc[i] << "\n";
        std::cout << "wrote " << path << "\n";
        return 0;
    }
    const FsddResult result = run_fsdd_experiment(cfg.fsdd);
    MetricsReport metrics = result.metrics;
    metrics.config_hash = hash;
    atomic_write(out_path(cfg, "fsdd_metrics.json"), metrics_json(metrics, hash, cfg.seed));
    atomic_write(out_path(cfg, "fsdd_confusion.csv"), confusion_csv(metrics, hash, cfg.seed));
    atomic_write(out_path(cfg, "fsdd_accuracy.csv"), accuracy_csv(result, hash, cfg.seed));
    std::cout << "train clips: " << result.train_count
              << "  test clips: " << result.test_count << "\n";
    std::cout << "test accuracy: " << metrics.accuracy << "  wer: " << metrics.wer
              << "\n";
    std::cout << "wrote " << out_path(cfg, "fsdd_metrics.json") << "\n";
    return 0;
}

int run_timeseries_cmd(HarnessConfig cfg, long steps) {
    if (steps > 0)
        cfg.timeseries.series.length =
            cfg.timeseries.series.washout + static_cast<std::size_t>(steps) +
            cfg.timeseries.num_nodes - 1;
    const std::uint64_t hash = config_hash(cfg);
    const TimeSeriesResult result = run_timeseries_experiment(cfg.timeseries);
    MetricsReport metrics = result.metrics;
    metrics.config_hash = hash;
    atomic_write(out_path(cfg, "timeseries_prediction.csv"),
                 prediction_csv(result, hash, cfg.seed));
    atomic_write(out_path(cfg, "timeseries_metrics.json"),
                 metrics_json(metrics, hash, cfg.seed));
    if (metrics.nrmse_defined)
        std::cout << "NRMSE: " << metrics.nrmse << "\n";
    else
        std::cout << "NRMSE: undefined (degenerate target spread)\n";
    if (!result.cumulative_mae_quarters.empty()) {
        std::cout << "cumulative MAE at stream quarters:";
        for (const double v : result.cumulative_mae_quarters) std::cout << ' ' << v;
        std::cout << "\n";
    }
    std::cout << "wrote " << out_path(cfg, "timeseries_prediction.csv") << "\n";
    return 0;
}

int run_energy_cmd(const HarnessConfig& cfg, const std::string& task) {
    EnergyTask t;
    if (task == "timeseries")
        t = EnergyTask::timeseries;
    else if (task == "speech")
        t = EnergyTask::speech;
    else
        throw ConfigError("unknown energy task: " + task);
    const EnergyReport report = network_report(cfg.energy, t);
    std::cout << format_energy_table(report);
    const std::string path = out_path(cfg, "energy_" + task + ".csv");
    atomic_write(path, artifact_stamp(config_hash(cfg), cfg.seed) + energy_report_csv(report));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_sclc_cmd(const HarnessConfig& cfg, const std::string& input,
                 const std::vector<double>& breakpoints, bool auto_mode) {
    const IvTrace trace = load_iv_csv(input);
    const std::vector<RegionFit> fits =
        auto_mode ? fit_segments_auto(trace) : fit_segments(trace, breakpoints);
    for (const auto& f : fits)
        std::cout << "region [" << f.v_lo << " V, " << f.v_hi << " V]  slope "
                  << f.slope << "  r^2 " << f.r_squared << "  -> "
                  << to_string(f.classification) << "\n";
    const std::string path = out_path(cfg, "sclc_fits.csv");
    atomic_write(path, region_fits_csv(fits, config_hash(cfg), cfg.seed));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_synth_cmd(const HarnessConfig& cfg, const std::string& dir, int takes) {
    SynthConfig sc;
    sc.out_dir = dir.empty() ? out_path(cfg, "corpus") : dir;
    sc.takes_per_speaker = takes;
    sc.seed = cfg.seed;
    const std::size_t n = synthesize_corpus(sc);
    std::cout << "wrote " << n << " clips to " << sc.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: standalone invariant checks, exit 0 iff all pass
// ---------------------------------------------------------------------------

int run_selftest(const HarnessConfig& cfg) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    {  // deterministic volatile write/decay sequence
        VolatileParams p;
        p.c2c_sigma = 0.0;
        p.d2d_sigma = 0.0;
        VolatileDevice dev(p, 0, 1);
        dev.step_slot(1, nullptr);
        const double w1 = dev.state();
        dev.step_slot(1, nullptr);
        const double w2 = dev.state();
        dev.step_slot(0, nullptr);
        const double w3 = dev.state();
        dev.step_slot(0, nullptr);
        const double w4 = dev.state();
        check("volatile state sequence 0.5/0.7/0.56/0.448",
              std::abs(w1 - 0.5) < 1e-12 && std::abs(w2 - 0.7) < 1e-12 &&
                  std::abs(w3 - 0.56) < 1e-12 && std::abs(w4 - 0.448) < 1e-12);
    }
    {  // lookup normalization bounds and span
        const StateLookup t = build_lookup_table(cfg.fsdd.device, 0, cfg.seed, true);
        double lo = 1e9, hi = -1e9;
        for (int c = 0; c < 16; ++c)
            for (int r = 0; r < 4; ++r) {
                lo = std::min(lo, t[c][static_cast<std::size_t>(r)]);
                hi = std::max(hi, t[c][static_cast<std::size_t>(r)]);
            }
        check("lookup table spans [0,1]", std::abs(lo) < 1e-12 && std::abs(hi - 1.0) < 1e-12);
    }
    {  // synapse curve endpoints and closed-form retrace
        SynapseParams sp;
        const auto cycle = pd_cycle(sp.g_min, sp, nullptr);
        bool ok = cycle.size() == static_cast<std::size_t>(sp.n_pot + sp.n_dep);
        ok = ok && std::abs(cycle[static_cast<std::size_t>(sp.n_pot - 1)] - sp.g_max) < 1e-15;
        ok = ok && std::abs(cycle.back() - sp.g_min) < 1e-15;
        for (int n = 1; n <= sp.n_pot && ok; ++n)
            ok = std::abs(cycle[static_cast<std::size_t>(n - 1)] -
                          potentiation_conductance(n, sp)) < 1e-12;
        check("synapse pulse trains retrace the closed-form curves", ok);
    }
    {  // quantizer pins
        bool ok = quantize4(0.0) == 0 && quantize4(1.0) == 15 && quantize4(0.5) == 8 &&
                  quantize4(-2.0) == 0 && quantize4(2.0) == 15;
        bool threw = false;
        try {
            quantize4(std::numeric_limits<double>::quiet_NaN());
        } catch (const std::exception&) {
            threw = true;
        }
        check("4-bit quantizer pins and NaN rejection", ok && threw);
    }
    {  // decoder basis: projected lookup codes are strictly increasing
        std::vector<StateLookup> lookups;
        for (int n = 0; n < 5; ++n)
            lookups.push_back(build_lookup_table(cfg.timeseries.device, n, cfg.seed, true));
        const Network net = build_decoder_network(lookups, 128, 64, 4);
        bool ok = true;
        for (int n = 0; n < 5 && ok; ++n) {
            double prev = -1e9;
            for (int code = 0; code < 16 && ok; ++code) {
                double p = 0.0;
                for (int r = 0; r < 4; ++r)
                    p += net.layers[0].W(n * 25, n * 4 + r) *
                         lookups[static_cast<std::size_t>(n)][code][static_cast<std::size_t>(r)];
                ok = p > prev;
                prev = p;
            }
        }
        check("decoder projection orders all 16 codes per node", ok);
    }
    {  // Manhattan update keeps weights bounded; zero gradient is a no-op
        Network net = init_network({4, 8, 3}, 42);
        Rng rng(7);
        TrainConfig tc;
        Gradients g;
        for (const auto& layer : net.layers) {
            g.W.push_back(Eigen::MatrixXd::Random(layer.W.rows(), layer.W.cols()));
            g.b.push_back(Eigen::VectorXd::Random(layer.b.size()));
        }
        for (int i = 0; i < 100; ++i) manhattan_update(net, g, tc, rng);
        bool ok = true;
        for (const auto& layer : net.layers)
            ok = ok && layer.W.cwiseAbs().maxCoeff() <= 1.0 &&
                 layer.b.cwiseAbs().maxCoeff() <= 1.0;
        const Network before = net;
        Gradients zero;
        for (const auto& layer : net.layers) {
            zero.W.push_back(Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols()));
            zero.b.push_back(Eigen::VectorXd::Zero(layer.b.size()));
        }
        manhattan_update(net, zero, tc, rng);
        for (std::size_t l = 0; l < net.layers.size(); ++l)
            ok = ok && net.layers[l].W == before.layers[l].W &&
                 net.layers[l].b == before.layers[l].b;
        check("sign-rule updates stay in [-1,1]; zero gradient is a no-op", ok);
    }
    {  // energy pins
        bool ok = std::abs(pulse_energy(6.0, 300e-9, 10e-6) - 18e-12) < 1e-18;
        ok = ok && std::abs(pulse_energy(5.0, 1e-6, 5e-6) - 25e-12) < 1e-18;
        ok = ok && std::abs(efficiency(27200, 1.0, 8896e-6) - 3057553.0) <= 1.0;
        ok = ok && std::abs(efficiency(150, 5.5e-3, 150e-6) - 181818182.0) <= 1.0;
        ok = ok && count_memristors({20, 128, 64, 1}) == 11009;
        ok = ok && count_memristors({1, 1}) == 2;
        check("energy arithmetic reproduces the pinned figures", ok);
    }
    {  // sclc synthetic slopes
        IvTrace trace;
        for (int i = 1; i <= 20; ++i) {
            const double v = 0.05 * i;
            trace.points.push_back({v, 1e-6 * v});
        }
        const auto fits = fit_segments(trace, {});
        bool ok = fits.size() == 1 && std::abs(fits[0].slope - 1.0) < 0.01 &&
                  fits[0].classification == Conduction::ohmic;
        check("log-log fit recovers a unit power law", ok);
    }
    {  // series recurrence vs direct evaluation
        TimeSeriesConfig sc;
        sc.length = 1000;
        const Series s = generate_series(sc);
        bool ok = true;
        for (std::size_t k = 3; k < s.y.size() && ok; ++k) {
            const double expect = 0.1 * s.y[k - 1] + 0.2 * s.y[k - 2] * s.y[k - 3] +
                                  0.3 * s.u[k] * s.u[k] * s.u[k] + 0.25;
            ok = s.y[k] == expect;
        }
        const double fp = series_fixed_point_u0();
        ok = ok && std::abs(fp - (0.1 * fp + 0.2 * fp * fp + 0.25)) < 1e-12;
        check("series recurrence and u=0 fixed point", ok);
    }
    {  // config round-trip hash
        HarnessConfig base;
        const HarnessConfig again = parse_config_text(config_to_json_text(base));
        bool ok = config_hash(base) == config_hash(again);
        bool threw = false;
        try {
            parse_config_text("{\"devicee\": {}}");
        } catch (const ConfigError&) {
            threw = true;
        }
        check("config round-trip and unknown-key rejection", ok && threw);
    }
    std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristive reservoir-computing experiment harness"};
    app.require_subcommand(1);

    GlobalArgs global;
    app.add_option("--config", global.config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", global.seed, "root random seed");
    app.add_option("--out", global.out_dir, "output directory");

    auto* states = app.add_subcommand("states", "dump a device's 16-row state lookup table");
    int states_device = -1;
    std::string states_out;
    bool states_ideal = false;
    states->add_option("--device", states_device, "device id");
    states->add_option("--out", states_out, "output CSV path");
    states->add_flag("--ideal", states_ideal, "disable read noise/averaging");

    auto* fsdd = app.add_subcommand("fsdd", "spoken-digit classification experiment");
    std::string fsdd_data;
    bool fsdd_sweep = false;
    double fsdd_noise = -1.0;
    int fsdd_epochs = 0;
    fsdd->add_option("--data", fsdd_data, "dataset directory (or MEMRC_DATA)");
    fsdd->add_flag("--sweep", fsdd_sweep, "noise sweep over sigma and seeds");
    fsdd->add_option("--noise", fsdd_noise, "test-clip Gaussian noise sigma");
    fsdd->add_option("--epochs", fsdd_epochs, "override training epochs");

    auto* ts = app.add_subcommand("timeseries", "nonlinear series prediction experiment");
    std::string ts_mode;
    long ts_steps = 0;
    ts->add_option("--mode", ts_mode, "offline|online")
        ->check(CLI::IsMember({"offline", "online"}));
    ts->add_option("--steps", ts_steps, "usable prediction steps");

    auto* energy = app.add_subcommand("energy", "energy/efficiency report");
    std::string energy_task = "timeseries";
    energy->add_option("--task", energy_task, "timeseries|speech")
        ->check(CLI::IsMember({"timeseries", "speech"}));

    auto* sclc = app.add_subcommand("sclcfit", "piecewise log-log I-V fitting");
    std::string sclc_input;
    std::vector<double> sclc_bps;
    sclc->add_option("--input", sclc_input, "CSV of voltage,current[,branch]")
        ->required();
    sclc->add_option("--breakpoints", sclc_bps, "explicit breakpoint voltages");

    auto* synth = app.add_subcommand("synth", "generate the synthetic spoken-digit corpus");
    std::string synth_dir;
    int synth_takes = 50;
    synth->add_option("--dir", synth_dir, "corpus output directory");
    synth->add_option("--takes", synth_takes, "takes per speaker per digit");

    app.add_subcommand("selftest", "run the built-in invariant checks");
    // global --config/--seed/--out remain valid after the subcommand name
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }
    global.seed_set = seed_opt->count() > 0;

    try {
        HarnessConfig cfg = resolve_config(global);
        if (states->parsed()) {
            if (states_device >= 0) cfg.states.device_id = states_device;
            if (states_ideal) cfg.states.noise = false;
            return run_states(cfg, states_out);
        }
        if (fsdd->parsed()) {
            if (!fsdd_data.empty()) cfg.fsdd.data_dir = fsdd_data;
            if (fsdd_noise >= 0.0) cfg.fsdd.test_noise_sigma = fsdd_noise;
            if (fsdd_epochs > 0) cfg.fsdd.train.epochs = fsdd_epochs;
            return run_fsdd_cmd(cfg, fsdd_sweep);
        }
        if (ts->parsed()) {
            if (ts_mode == "online") {
                cfg.timeseries.train.mode = TrainMode::online;
                cfg.timeseries.train.epochs = 2;
            } else if (ts_mode == "offline") {
                cfg.timeseries.train.mode = TrainMode::offline;
            }
            return run_timeseries_cmd(cfg, ts_steps);
        }
        if (energy->parsed()) return run_energy_cmd(cfg, energy_task);
        if (sclc->parsed()) return run_sclc_cmd(cfg, sclc_input, sclc_bps, sclc_bps.empty());
        if (synth->parsed()) return run_synth_cmd(cfg, synth_dir, synth_takes);
        return run_selftest(cfg);
    } catch (const DatasetError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
