#include "fedqnn/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "fedqnn/errors.hpp"
#include "fedqnn/rng.hpp"

namespace fedqnn::cli {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> errs;
    const bool known_dataset = dataset == "iris" || dataset == "breast_cancer" ||
                               dataset == "dna" ||
                               dataset.rfind("csv:", 0) == 0;
    if (!known_dataset) {
        errs.push_back("dataset must be iris, breast_cancer, dna or csv:<path>");
    }
    if (num_qubits < 1 || num_qubits > sim::kMaxQubits) {
        errs.push_back("num_qubits must be in [1, 20]");
    }
    if (num_layers < 1) errs.push_back("num_layers must be >= 1");
    if (num_clients < 1) errs.push_back("num_clients must be >= 1");
    if (max_iterations < 1) errs.push_back("max_iterations must be >= 1");
    if (local_iterations < 1) errs.push_back("local_iterations must be >= 1");
    if (learning_rate <= 0.0) errs.push_back("learning_rate must be > 0");
    if (test_fraction <= 0.0 || test_fraction >= 1.0) {
        errs.push_back("test_fraction must be in (0, 1)");
    }
    if (num_features_to_use < 1 || num_features_to_use > num_qubits) {
        errs.push_back("num_features_to_use must be in [1, num_qubits]");
    }
    if (num_data_points < 0) errs.push_back("num_data_points must be >= 0");
    if (trials < 1) errs.push_back("trials must be >= 1");
    if (aggregation != "fedavg_unweighted" && aggregation != "fedavg_weighted") {
        errs.push_back("aggregation must be fedavg_unweighted or fedavg_weighted");
    }
    if (multiclass_strategy != "multi_readout" &&
        multiclass_strategy != "one_vs_rest") {
        errs.push_back("multiclass_strategy must be multi_readout or one_vs_rest");
    }
    if (transport != "in_process" && transport != "loopback") {
        errs.push_back("transport must be in_process or loopback");
    }
    if (dna_samples < 2 || dna_samples % 2 != 0) {
        errs.push_back("dna_samples must be even and >= 2");
    }
    return errs;
}

std::string ExperimentConfig::resolved_text() const {
    std::ostringstream out;
    out << "dataset = " << dataset << '\n'
        << "csv_label_column = " << csv_label_column << '\n'
        << "num_qubits = " << num_qubits << '\n'
        << "num_layers = " << num_layers << '\n'
        << "num_clients = " << num_clients << '\n'
        << "max_iterations = " << max_iterations << '\n'
        << "local_iterations = " << local_iterations << '\n'
        << "learning_rate = " << fmt_double(learning_rate) << '\n'
        << "test_fraction = " << fmt_double(test_fraction) << '\n'
        << "num_features_to_use = " << num_features_to_use << '\n'
        << "num_data_points = " << num_data_points << '\n'
        << "trials = " << trials << '\n'
        << "seed = " << seed << '\n'
        << "aggregation = " << aggregation << '\n'
        << "multiclass_strategy = " << multiclass_strategy << '\n'
        << "transport = " << transport << '\n'
        << "dna_samples = " << dna_samples << '\n'
        << "data_dir = " << data_dir << '\n';
    return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
    // FNV-1a 64-bit.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void ExperimentConfig::apply_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must be key=value: " + kv);
    }
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(kv.substr(0, eq));
    const std::string value = trim(kv.substr(eq + 1));
    try {
        if (key == "dataset") dataset = value;
        else if (key == "csv_label_column") csv_label_column = value;
        else if (key == "num_qubits") num_qubits = std::stoi(value);
        else if (key == "num_layers") num_layers = std::stoi(value);
        else if (key == "num_clients") num_clients = std::stoi(value);
        else if (key == "max_iterations") max_iterations = std::stoi(value);
        else if (key == "local_iterations") local_iterations = std::stoi(value);
        else if (key == "learning_rate") learning_rate = std::stod(value);
        else if (key == "test_fraction") test_fraction = std::stod(value);
        else if (key == "num_features_to_use") num_features_to_use = std::stoi(value);
        else if (key == "num_data_points") num_data_points = std::stoi(value);
        else if (key == "trials") trials = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else if (key == "aggregation") aggregation = value;
        else if (key == "multiclass_strategy") multiclass_strategy = value;
        else if (key == "transport") transport = value;
        else if (key == "dna_samples") dna_samples = std::stoi(value);
        else if (key == "data_dir") data_dir = value;
        else throw ConfigError("unknown config key: " + key);
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("bad value for " + key + ": " + value);
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.resize(hash_pos);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        try {
            config.apply_override(line);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return config;
}

namespace {

data::Dataset load_dataset(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    if (config.dataset == "iris") {
        return data::load_csv((fs::path(config.data_dir) / "iris.csv").string(),
                              {"species", "iris"})
            .dataset;
    }
    if (config.dataset == "breast_cancer") {
        return data::load_csv(
                   (fs::path(config.data_dir) / "breast_cancer.csv").string(),
                   {"class", "breast_cancer"})
            .dataset;
    }
    if (config.dataset == "dna") {
        return data::generate_dna(config.dna_samples, config.seed).dataset;
    }
    const std::string path = config.dataset.substr(4);
    return data::load_csv(path, {config.csv_label_column, path}).dataset;
}

data::Dataset subsample(const data::Dataset& ds, int target,
                        std::uint64_t seed) {
    if (target == 0 || static_cast<std::size_t>(target) >= ds.size()) return ds;
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed ^ 0x5b5aULL);
    rng.shuffle(order);
    data::Dataset out;
    out.name = ds.name;
    out.num_classes = ds.num_classes;
    out.class_names = ds.class_names;
    out.feature_names = ds.feature_names;
    for (int i = 0; i < target; ++i) {
        out.features.push_back(ds.features[order[i]]);
        out.labels.push_back(ds.labels[order[i]]);
    }
    out.validate();
    return out;
}

std::vector<double> encode_target(int label, int num_outputs) {
    if (num_outputs == 1) return {static_cast<double>(label)};
    std::vector<double> t(num_outputs, 0.0);
    t[label] = 1.0;
    return t;
}

std::vector<double> pad_features(const std::vector<double>& row,
                                 int num_qubits) {
    if (static_cast<int>(row.size()) == num_qubits) return row;
    std::vector<double> padded(row);
    padded.resize(num_qubits, 0.0);  // RX(0) = identity on unused qubits
    return padded;
}

struct TrialSetup {
    qnn::CircuitSpec spec;
    std::vector<fed::ClientHandle> clients;
    fed::EvalSet eval;
    int num_classes = 0;
};

TrialSetup prepare_trial(const ExperimentConfig& config,
                         const data::Dataset& full, std::uint64_t trial_seed,
                         int num_outputs_override = 0) {
    const auto split = data::split_and_partition(
        full, config.test_fraction, config.num_clients, trial_seed);
    const auto scaled = data::select_and_scale(full, config.num_features_to_use,
                                               split.train_indices);
    const data::Dataset& ds = scaled.dataset;

    TrialSetup setup;
    setup.num_classes = ds.num_classes;
    const int num_outputs = num_outputs_override
                                ? num_outputs_override
                                : (ds.num_classes > 2 ? ds.num_classes : 1);
    setup.spec.num_qubits = config.num_qubits;
    setup.spec.num_layers = config.num_layers;
    setup.spec.readout_qubits.clear();
    for (int c = 0; c < num_outputs; ++c) setup.spec.readout_qubits.push_back(c);
    setup.spec.validate();

    for (std::size_t k = 0; k < split.client_shards.size(); ++k) {
        fed::ClientHandle client;
        client.id = static_cast<std::uint32_t>(k);
        for (std::size_t idx : split.client_shards[k]) {
            client.data.features.push_back(
                pad_features(ds.features[idx], config.num_qubits));
            client.data.targets.push_back(
                encode_target(ds.labels[idx], num_outputs));
        }
        setup.clients.push_back(std::move(client));
    }
    for (std::size_t idx : split.test_indices) {
        setup.eval.features.push_back(
            pad_features(ds.features[idx], config.num_qubits));
        setup.eval.labels.push_back(ds.labels[idx]);
        setup.eval.targets.push_back(encode_target(ds.labels[idx], num_outputs));
    }
    return setup;
}

qnn::ParameterVector random_init(int num_params, std::uint64_t trial_seed) {
    Rng rng(trial_seed + 0x9e3779b97f4a7c15ULL);
    qnn::ParameterVector params(num_params);
    for (double& p : params) p = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    return params;
}

std::unique_ptr<fed::Transport> make_transport(const ExperimentConfig& config) {
    if (config.transport == "loopback") {
        return std::make_unique<fed::LoopbackTransport>();
    }
    return std::make_unique<fed::InProcessTransport>();
}

fed::ServerConfig make_server_config(const ExperimentConfig& config) {
    fed::ServerConfig server;
    server.weighted_average = config.aggregation == "fedavg_weighted";
    server.local_iterations = config.local_iterations;
    server.adam.step_size = config.learning_rate;
    return server;
}

TrialOutput run_trial_multi_readout(const ExperimentConfig& config,
                                    const data::Dataset& full, int trial) {
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial);
    TrialSetup setup = prepare_trial(config, full, trial_seed);
    const fed::ServerConfig server = make_server_config(config);
    auto transport = make_transport(config);

    fed::GlobalModel global;
    global.params = random_init(setup.spec.num_params(), trial_seed);
    global.round = 0;

    TrialOutput out;
    out.log.trial = trial;
    for (int round = 1; round <= config.max_iterations; ++round) {
        auto [next, metrics] = fed::run_round(global, setup.clients, setup.spec,
                                              *transport, setup.eval, server);
        global = std::move(next);
        out.log.records.push_back({round, metrics.accuracy, metrics.loss});
    }
    out.final_params = global.params;

    std::vector<int> predictions;
    predictions.reserve(setup.eval.features.size());
    for (const auto& row : setup.eval.features) {
        predictions.push_back(
            qnn::decide_label(qnn::forward(setup.spec, global.params, row)));
    }
    out.final_report = metrics::classification_report(
        predictions, setup.eval.labels, setup.num_classes);
    return out;
}

// One-vs-rest: one binary head per class, each trained as its own federated
// model; per-round evaluation combines the heads by argmax of their scores.
TrialOutput run_trial_one_vs_rest(const ExperimentConfig& config,
                                  const data::Dataset& full, int trial) {
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial);
    TrialSetup setup = prepare_trial(config, full, trial_seed, 1);
    const int num_classes = setup.num_classes;
    const fed::ServerConfig server = make_server_config(config);

    // Rebuild binary targets per head from the shared shards.
    std::vector<std::vector<qnn::ParameterVector>> per_round_params(
        num_classes);  // [head][round] -> params
    for (int head = 0; head < num_classes; ++head) {
        // Targets were encoded with the raw label; re-encode as head-vs-rest.
        std::vector<fed::ClientHandle> head_clients = setup.clients;
        for (auto& client : head_clients) {
            for (auto& t : client.data.targets) {
                t[0] = (static_cast<int>(t[0]) == head) ? 1.0 : 0.0;
            }
        }
        fed::EvalSet head_eval = setup.eval;
        for (std::size_t i = 0; i < head_eval.targets.size(); ++i) {
            head_eval.targets[i][0] = (head_eval.labels[i] == head) ? 1.0 : 0.0;
        }

        auto transport = make_transport(config);
        fed::GlobalModel global;
        global.params = random_init(setup.spec.num_params(),
                                    trial_seed + 1000003ULL * (head + 1));
        global.round = 0;
        per_round_params[head].reserve(config.max_iterations);
        for (int round = 1; round <= config.max_iterations; ++round) {
            auto [next, unused] = fed::run_round(global, head_clients, setup.spec,
                                                 *transport, head_eval, server);
            global = std::move(next);
            per_round_params[head].push_back(global.params);
        }
    }

    TrialOutput out;
    out.log.trial = trial;
    std::vector<int> predictions;
    for (int round = 1; round <= config.max_iterations; ++round) {
        int correct = 0;
        double loss_sum = 0.0;
        predictions.clear();
        for (std::size_t i = 0; i < setup.eval.features.size(); ++i) {
            std::vector<double> scores(num_classes);
            for (int head = 0; head < num_classes; ++head) {
                scores[head] = qnn::forward(setup.spec,
                                            per_round_params[head][round - 1],
                                            setup.eval.features[i])[0];
            }
            const int pred = qnn::decide_label(scores);
            predictions.push_back(pred);
            if (pred == setup.eval.labels[i]) ++correct;
            for (int head = 0; head < num_classes; ++head) {
                const double y = setup.eval.labels[i] == head ? 1.0 : 0.0;
                const double d = y - scores[head];
                loss_sum += d * d / num_classes;
            }
        }
        const double n = static_cast<double>(setup.eval.features.size());
        out.log.records.push_back({round, correct / n, loss_sum / n});
    }
    for (int head = 0; head < num_classes; ++head) {
        const auto& final_params = per_round_params[head].back();
        out.final_params.insert(out.final_params.end(), final_params.begin(),
                                final_params.end());
    }
    out.final_report = metrics::classification_report(
        predictions, setup.eval.labels, setup.num_classes);
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto errs = config.validate();
    if (!errs.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    data::Dataset full = load_dataset(config);
    full = subsample(full, config.num_data_points, config.seed);

    const bool one_vs_rest =
        config.multiclass_strategy == "one_vs_rest" && full.num_classes > 2;

    ExperimentResult result;
    result.class_names = full.class_names;
    for (int trial = 0; trial < config.trials; ++trial) {
        result.trials.push_back(one_vs_rest
                                    ? run_trial_one_vs_rest(config, full, trial)
                                    : run_trial_multi_readout(config, full, trial));
    }

    std::vector<metrics::TrajectoryLog> logs;
    logs.reserve(result.trials.size());
    for (const auto& t : result.trials) logs.push_back(t.log);
    result.mean_curve = metrics::aggregate_trials(logs);
    return result;
}

double mean_final_accuracy(const ExperimentResult& result) {
    double sum = 0.0;
    for (const auto& t : result.trials) sum += t.log.records.back().accuracy;
    return sum / static_cast<double>(result.trials.size());
}

std::string write_results(const ExperimentResult& result,
                          const ExperimentConfig& config,
                          const std::string& run_root) {
    namespace fs = std::filesystem;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    std::string dataset_tag = config.dataset;
    std::replace(dataset_tag.begin(), dataset_tag.end(), '/', '_');
    std::replace(dataset_tag.begin(), dataset_tag.end(), ':', '_');
    const fs::path dir = fs::path(run_root) /
                         (dataset_tag + "-" + hash_hex + "-seed" +
                          std::to_string(config.seed));
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "config.txt");
        out << config.resolved_text();
    }
    {
        std::ofstream out(dir / "trajectory.csv");
        out << "trial,round,accuracy,loss\n";
        for (const auto& t : result.trials) {
            for (const auto& r : t.log.records) {
                out << t.log.trial << ',' << r.round << ','
                    << fmt_double(r.accuracy) << ',' << fmt_double(r.loss)
                    << '\n';
            }
        }
    }
    {
        std::ofstream out(dir / "mean_curve.csv");
        out << "round,mean_accuracy,std_accuracy,mean_loss\n";
        for (std::size_t r = 0; r < result.mean_curve.rounds.size(); ++r) {
            out << result.mean_curve.rounds[r] << ','
                << fmt_double(result.mean_curve.mean_accuracy[r]) << ','
                << fmt_double(result.mean_curve.std_accuracy[r]) << ','
                << fmt_double(result.mean_curve.mean_loss[r]) << '\n';
        }
    }
    {
        nlohmann::ordered_json j;
        j["config_hash"] = hash_hex;
        j["mean_final_accuracy"] = mean_final_accuracy(result);
        nlohmann::ordered_json trials = nlohmann::ordered_json::array();
        for (const auto& t : result.trials) {
            trials.push_back(nlohmann::ordered_json::parse(
                metrics::to_json(t.final_report, result.class_names)));
        }
        j["trials"] = trials;
        std::ofstream out(dir / "report.json");
        out << j.dump(2) << '\n';
    }
    return dir.string();
}

std::vector<SweepRow> sweep_clients(const ExperimentConfig& config,
                                    const std::vector<int>& client_counts) {
    if (client_counts.empty()) {
        throw ConfigError("sweep: at least one client count required");
    }
    std::set<int> seen;
    for (int k : client_counts) {
        if (k < 1) throw ConfigError("sweep: client counts must be >= 1");
        if (!seen.insert(k).second) {
            throw ConfigError("sweep: duplicate client count " +
                              std::to_string(k));
        }
    }
    std::vector<SweepRow> rows;
    for (int k : client_counts) {
        ExperimentConfig variant = config;
        variant.num_clients = k;
        const auto result = run_experiment(variant);
        rows.push_back({k, mean_final_accuracy(result)});
    }
    return rows;
}

}  // namespace fedqnn::cli
