#include "memrc/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "memrc/rng.hpp"

namespace memrc {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const char* section,
                    std::initializer_list<std::string_view> allowed) {
    if (!j.is_object())
        throw ConfigError(std::string("config section is not an object: ") + section);
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const auto& key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("unknown config key: " + std::string(section) + "." +
                              item.key());
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_enum(const json& j, const char* key, const char* a, const char* b,
               bool& is_first) {
    if (!j.contains(key)) return;
    const std::string v = j.at(key).get<std::string>();
    if (v == a)
        is_first = true;
    else if (v == b)
        is_first = false;
    else
        throw ConfigError(std::string("invalid value for ") + key + ": " + v);
}

void parse_device(const json& j, VolatileParams& p) {
    reject_unknown(j, "device",
                   {"w_write_gain", "decay_factor", "g_off", "g_on", "v_read",
                    "v_write", "pulse_width", "c2c_sigma", "d2d_sigma",
                    "averaging_runs"});
    read_field(j, "w_write_gain", p.w_write_gain);
    read_field(j, "decay_factor", p.decay_factor);
    read_field(j, "g_off", p.g_off);
    read_field(j, "g_on", p.g_on);
    read_field(j, "v_read", p.v_read);
    read_field(j, "v_write", p.v_write);
    read_field(j, "pulse_width", p.pulse_width);
    read_field(j, "c2c_sigma", p.c2c_sigma);
    read_field(j, "d2d_sigma", p.d2d_sigma);
    read_field(j, "averaging_runs", p.averaging_runs);
}

void parse_synapse(const json& j, const char* section, SynapseParams& p) {
    reject_unknown(j, section,
                   {"g_min", "g_max", "n_pot", "n_dep", "a_pot", "a_dep",
                    "c2c_sigma", "v_pot", "v_dep", "pulse_width"});
    read_field(j, "g_min", p.g_min);
    read_field(j, "g_max", p.g_max);
    read_field(j, "n_pot", p.n_pot);
    read_field(j, "n_dep", p.n_dep);
    read_field(j, "a_pot", p.a_pot);
    read_field(j, "a_dep", p.a_dep);
    read_field(j, "c2c_sigma", p.c2c_sigma);
    read_field(j, "v_pot", p.v_pot);
    read_field(j, "v_dep", p.v_dep);
    read_field(j, "pulse_width", p.pulse_width);
}

void parse_train(const json& j, const char* section, TrainConfig& t) {
    reject_unknown(j, section,
                   {"epochs", "batch_size", "mode", "loss", "noise_enabled",
                    "update_scope", "synapse"});
    read_field(j, "epochs", t.epochs);
    read_field(j, "batch_size", t.batch_size);
    bool flag = t.mode == TrainMode::offline;
    read_enum(j, "mode", "offline", "online", flag);
    t.mode = flag ? TrainMode::offline : TrainMode::online;
    flag = t.loss == Loss::mse;
    read_enum(j, "loss", "mse", "cross_entropy", flag);
    t.loss = flag ? Loss::mse : Loss::cross_entropy;
    read_field(j, "noise_enabled", t.noise_enabled);
    flag = t.update_scope == UpdateScope::all_layers;
    read_enum(j, "update_scope", "all_layers", "output_layer", flag);
    t.update_scope = flag ? UpdateScope::all_layers : UpdateScope::output_layer;
    if (j.contains("synapse"))
        parse_synapse(j.at("synapse"), (std::string(section) + ".synapse").c_str(), t.synapse);
}

void parse_mfcc(const json& j, MfccConfig& m) {
    reject_unknown(j, "mfcc",
                   {"frame_len", "hop", "n_mel", "n_coeff", "pre_emphasis", "fmin",
                    "fmax", "log_floor"});
    read_field(j, "frame_len", m.frame_len);
    read_field(j, "hop", m.hop);
    read_field(j, "n_mel", m.n_mel);
    read_field(j, "n_coeff", m.n_coeff);
    read_field(j, "pre_emphasis", m.pre_emphasis);
    read_field(j, "fmin", m.fmin);
    read_field(j, "fmax", m.fmax);
    read_field(j, "log_floor", m.log_floor);
}

void parse_fsdd(const json& j, FsddExperimentConfig& f) {
    reject_unknown(j, "fsdd",
                   {"data_dir", "train_fraction", "num_nodes", "mask_density",
                    "frame_pooling", "test_noise_sigma", "train"});
    read_field(j, "data_dir", f.data_dir);
    read_field(j, "train_fraction", f.train_fraction);
    std::uint64_t nodes = f.num_nodes;
    read_field(j, "num_nodes", nodes);
    f.num_nodes = nodes;
    read_field(j, "mask_density", f.mask_density);
    bool flag = f.frame_pooling == Pooling::mean;
    read_enum(j, "frame_pooling", "mean", "last", flag);
    f.frame_pooling = flag ? Pooling::mean : Pooling::last;
    read_field(j, "test_noise_sigma", f.test_noise_sigma);
    if (j.contains("train")) parse_train(j.at("train"), "fsdd.train", f.train);
}

void parse_timeseries(const json& j, TimeSeriesExperimentConfig& t) {
    reject_unknown(j, "timeseries",
                   {"length", "washout", "series_seed", "num_nodes", "pooling",
                    "train_fraction", "standardize_targets", "decoder_hidden",
                    "train"});
    std::uint64_t v = t.series.length;
    read_field(j, "length", v);
    t.series.length = v;
    v = t.series.washout;
    read_field(j, "washout", v);
    t.series.washout = v;
    read_field(j, "series_seed", t.series.seed);
    v = t.num_nodes;
    read_field(j, "num_nodes", v);
    t.num_nodes = v;
    bool flag = t.pooling == ReadPooling::all_reads;
    read_enum(j, "pooling", "all_reads", "last_read", flag);
    t.pooling = flag ? ReadPooling::all_reads : ReadPooling::last_read;
    read_field(j, "train_fraction", t.train_fraction);
    read_field(j, "standardize_targets", t.standardize_targets);
    read_field(j, "decoder_hidden", t.decoder_hidden);
    if (j.contains("train")) parse_train(j.at("train"), "timeseries.train", t.train);
}

void parse_energy(const json& j, EnergyConfig& e) {
    reject_unknown(j, "energy",
                   {"pulse_voltage", "device_current", "pulse_width", "ops_per_epoch",
                    "epoch_time", "power_per_memristor"});
    read_field(j, "pulse_voltage", e.pulse_voltage);
    read_field(j, "device_current", e.device_current);
    read_field(j, "pulse_width", e.pulse_width);
    read_field(j, "ops_per_epoch", e.ops_per_epoch);
    read_field(j, "epoch_time", e.epoch_time);
    read_field(j, "power_per_memristor", e.power_per_memristor);
}

json device_to_json(const VolatileParams& p) {
    return {{"w_write_gain", p.w_write_gain}, {"decay_factor", p.decay_factor},
            {"g_off", p.g_off},               {"g_on", p.g_on},
            {"v_read", p.v_read},             {"v_write", p.v_write},
            {"pulse_width", p.pulse_width},   {"c2c_sigma", p.c2c_sigma},
            {"d2d_sigma", p.d2d_sigma},       {"averaging_runs", p.averaging_runs}};
}

json synapse_to_json(const SynapseParams& p) {
    return {{"g_min", p.g_min},   {"g_max", p.g_max},   {"n_pot", p.n_pot},
            {"n_dep", p.n_dep},   {"a_pot", p.a_pot},   {"a_dep", p.a_dep},
            {"c2c_sigma", p.c2c_sigma}, {"v_pot", p.v_pot}, {"v_dep", p.v_dep},
            {"pulse_width", p.pulse_width}};
}

json train_to_json(const TrainConfig& t) {
    return {{"epochs", t.epochs},
            {"batch_size", t.batch_size},
            {"mode", t.mode == TrainMode::offline ? "offline" : "online"},
            {"loss", t.loss == Loss::mse ? "mse" : "cross_entropy"},
            {"noise_enabled", t.noise_enabled},
            {"update_scope",
             t.update_scope == UpdateScope::all_layers ? "all_layers" : "output_layer"},
            {"synapse", synapse_to_json(t.synapse)}};
}

json mfcc_to_json(const MfccConfig& m) {
    return {{"frame_len", m.frame_len}, {"hop", m.hop},
            {"n_mel", m.n_mel},         {"n_coeff", m.n_coeff},
            {"pre_emphasis", m.pre_emphasis}, {"fmin", m.fmin},
            {"fmax", m.fmax},           {"log_floor", m.log_floor}};
}

}  // namespace

HarnessConfig parse_config_text(const std::string& text) {
    HarnessConfig cfg;
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (trimmed.empty()) return cfg;

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j, "<root>",
                   {"seed", "out_dir", "device", "mfcc", "fsdd", "timeseries",
                    "energy", "states"});
    read_field(j, "seed", cfg.seed);
    read_field(j, "out_dir", cfg.out_dir);
    if (j.contains("device")) {
        parse_device(j.at("device"), cfg.fsdd.device);
        parse_device(j.at("device"), cfg.timeseries.device);
    }
    if (j.contains("mfcc")) parse_mfcc(j.at("mfcc"), cfg.fsdd.mfcc);
    if (j.contains("fsdd")) parse_fsdd(j.at("fsdd"), cfg.fsdd);
    if (j.contains("timeseries")) parse_timeseries(j.at("timeseries"), cfg.timeseries);
    if (j.contains("energy")) parse_energy(j.at("energy"), cfg.energy);
    if (j.contains("states")) {
        reject_unknown(j.at("states"), "states", {"device_id", "noise"});
        read_field(j.at("states"), "device_id", cfg.states.device_id);
        read_field(j.at("states"), "noise", cfg.states.noise);
    }
    apply_seed(cfg, cfg.seed);
    return cfg;
}

HarnessConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_json_text(const HarnessConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["device"] = device_to_json(cfg.fsdd.device);
    j["mfcc"] = mfcc_to_json(cfg.fsdd.mfcc);
    j["fsdd"] = {{"data_dir", cfg.fsdd.data_dir},
                 {"train_fraction", cfg.fsdd.train_fraction},
                 {"num_nodes", cfg.fsdd.num_nodes},
                 {"mask_density", cfg.fsdd.mask_density},
                 {"frame_pooling",
                  cfg.fsdd.frame_pooling == Pooling::mean ? "mean" : "last"},
                 {"test_noise_sigma", cfg.fsdd.test_noise_sigma},
                 {"train", train_to_json(cfg.fsdd.train)}};
    j["timeseries"] = {
        {"length", cfg.timeseries.series.length},
        {"washout", cfg.timeseries.series.washout},
        {"series_seed", cfg.timeseries.series.seed},
        {"num_nodes", cfg.timeseries.num_nodes},
        {"pooling",
         cfg.timeseries.pooling == ReadPooling::all_reads ? "all_reads" : "last_read"},
        {"train_fraction", cfg.timeseries.train_fraction},
        {"standardize_targets", cfg.timeseries.standardize_targets},
        {"decoder_hidden", cfg.timeseries.decoder_hidden},
        {"train", train_to_json(cfg.timeseries.train)}};
    j["energy"] = {{"pulse_voltage", cfg.energy.pulse_voltage},
                   {"device_current", cfg.energy.device_current},
                   {"pulse_width", cfg.energy.pulse_width},
                   {"ops_per_epoch", cfg.energy.ops_per_epoch},
                   {"epoch_time", cfg.energy.epoch_time},
                   {"power_per_memristor", cfg.energy.power_per_memristor}};
    j["states"] = {{"device_id", cfg.states.device_id}, {"noise", cfg.states.noise}};
    return j.dump(2) + "\n";
}

std::uint64_t config_hash(const HarnessConfig& cfg) {
    return fnv1a(config_to_json_text(cfg));
}

void apply_seed(HarnessConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.fsdd.root_seed = seed;
    cfg.timeseries.root_seed = seed;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write artifact: " + path);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + path);
    }
    fs::rename(tmp, target);
}

std::string artifact_stamp(std::uint64_t hash, std::uint64_t seed) {
    std::ostringstream out;
    out << "# config_hash=" << std::hex << hash << std::dec << " seed=" << seed
        << " version=" << kVersion << "\n";
    return out.str();
}

namespace {
std::string fmt(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}
}  // namespace

std::string states_csv(const StateLookup& table, std::uint64_t hash,
                       std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "code,read1,read2,read3,read4\n";
    for (int code = 0; code < 16; ++code) {
        out << code;
        for (int r = 0; r < 4; ++r) out << ',' << fmt(table[code][static_cast<std::size_t>(r)]);
        out << "\n";
    }
    return out.str();
}

std::string confusion_csv(const MetricsReport& m, std::uint64_t hash,
                          std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "true_class";
    for (std::size_t c = 0; c < m.confusion.size(); ++c) out << ",pred_" << c;
    out << "\n";
    for (std::size_t r = 0; r < m.confusion.size(); ++r) {
        out << r;
        for (const int v : m.confusion[r]) out << ',' << v;
        out << "\n";
    }
    return out.str();
}

std::string accuracy_csv(const FsddResult& r, std::uint64_t hash, std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "epoch,train_loss,train_accuracy,test_accuracy\n";
    for (std::size_t e = 0; e < r.history.size(); ++e) {
        out << (e + 1) << ',' << fmt(r.history[e].loss) << ','
            << fmt(r.history[e].accuracy) << ',';
        out << (e < r.test_accuracy.size() ? fmt(r.test_accuracy[e]) : "");
        out << "\n";
    }
    return out.str();
}

std::string prediction_csv(const TimeSeriesResult& r, std::uint64_t hash,
                           std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "k,y_true,y_pred\n";
    for (std::size_t i = 0; i < r.test_k.size(); ++i)
        out << r.test_k[i] << ',' << fmt(r.test_y[i]) << ',' << fmt(r.test_yhat[i])
            << "\n";
    return out.str();
}

std::string noise_sweep_csv(const std::vector<double>& sigmas,
                            const std::vector<double>& mean_acc, std::uint64_t hash,
                            std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "sigma,mean_accuracy\n";
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        out << fmt(sigmas[i]) << ',' << fmt(mean_acc[i]) << "\n";
    return out.str();
}

std::string pd_cycle_csv(const PdStats& stats, std::uint64_t hash, std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed) << "pulse,mean_conductance,rel_std,rel_sem\n";
    for (std::size_t i = 0; i < stats.mean.size(); ++i)
        out << (i + 1) << ',' << fmt(stats.mean[i]) << ',' << fmt(stats.rel_std[i])
            << ',' << fmt(stats.rel_sem[i]) << "\n";
    return out.str();
}

std::string region_fits_csv(const std::vector<RegionFit>& fits, std::uint64_t hash,
                            std::uint64_t seed) {
    std::ostringstream out;
    out << artifact_stamp(hash, seed)
        << "v_lo,v_hi,slope,intercept_log10_a,r_squared,classification\n";
    for (const auto& f : fits)
        out << fmt(f.v_lo) << ',' << fmt(f.v_hi) << ',' << fmt(f.slope) << ','
            << fmt(f.intercept) << ',' << fmt(f.r_squared) << ','
            << to_string(f.classification) << "\n";
    return out.str();
}

std::string metrics_json(const MetricsReport& m, std::uint64_t hash,
                         std::uint64_t seed) {
    json j;
    std::ostringstream hex;
    hex << std::hex << hash;
    j["config_hash"] = hex.str();
    j["seed"] = seed;
    j["version"] = kVersion;
    j["accuracy"] = m.accuracy;
    j["wer"] = m.wer;
    if (m.nrmse_defined)
        j["nrmse"] = m.nrmse;
    else
        j["nrmse"] = nullptr;
    j["nrmse_defined"] = m.nrmse_defined;
    if (!m.confusion.empty()) {
        j["confusion"] = m.confusion;
        json prec = json::array(), rec = json::array();
        for (const double v : m.per_class_precision)
            prec.push_back(std::isnan(v) ? json(nullptr) : json(v));
        for (const double v : m.per_class_recall)
            rec.push_back(std::isnan(v) ? json(nullptr) : json(v));
        j["per_class_precision"] = prec;
        j["per_class_recall"] = rec;
    }
    return j.dump(2) + "\n";
}

IvTrace load_iv_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read iv csv: " + path);
    IvTrace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string v, i, branch;
        std::getline(row, v, ',');
        std::getline(row, i, ',');
        std::getline(row, branch, ',');
        try {
            trace.points.push_back({std::stod(v), std::stod(i)});
            if (!branch.empty()) trace.branch = branch;
        } catch (const std::exception&) {
            // header or stray text row
        }
    }
    return trace;
}

}  // namespace memrc
