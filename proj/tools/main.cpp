#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fedqnn/dataset.hpp"
#include "fedqnn/errors.hpp"
#include "fedqnn/experiment.hpp"

namespace {

using fedqnn::cli::ExperimentConfig;

std::string run_root() {
    const char* env = std::getenv("FEDQNN_RUN_ROOT");
    return env ? env : "runs";
}

ExperimentConfig build_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
    ExperimentConfig config;
    if (!config_path.empty()) {
        config = ExperimentConfig::from_file(config_path);
    }
    for (const auto& kv : overrides) {
        config.apply_override(kv);
    }
    return config;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides) {
    const ExperimentConfig config = build_config(config_path, overrides);
    const auto result = fedqnn::cli::run_experiment(config);
    const std::string dir =
        fedqnn::cli::write_results(result, config, run_root());
    std::printf("run directory: %s\n", dir.c_str());
    std::printf("mean final accuracy: %.4f\n",
                fedqnn::cli::mean_final_accuracy(result));
    return 0;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& overrides,
              std::vector<int> counts, const std::string& out_path) {
    const ExperimentConfig config = build_config(config_path, overrides);
    if (counts.empty()) counts = {1, 2, 3, 4, 5};
    const auto rows = fedqnn::cli::sweep_clients(config, counts);

    std::ostringstream csv;
    csv << "num_clients,mean_final_accuracy\n";
    for (const auto& row : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", row.mean_final_accuracy);
        csv << row.num_clients << ',' << buf << '\n';
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw fedqnn::ConfigError("cannot write " + out_path);
        out << csv.str();
    }
    std::cout << csv.str();
    return 0;
}

int cmd_gen_dna(int num_samples, std::uint64_t seed,
                const std::string& out_path) {
    const auto result = fedqnn::data::generate_dna(num_samples, seed);
    fedqnn::data::write_csv(result.dataset, out_path);
    std::printf("wrote %d samples to %s\n", num_samples, out_path.c_str());
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const auto path = std::filesystem::path(run_dir) / "report.json";
    std::ifstream in(path);
    if (!in) {
        throw fedqnn::ConfigError("no report.json under " + run_dir);
    }
    const auto j = nlohmann::json::parse(in);
    std::printf("mean final accuracy: %.4f over %zu trial(s)\n",
                j["mean_final_accuracy"].get<double>(), j["trials"].size());
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated quantum neural network experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<int> counts;
    std::string out_path;
    int num_samples = 200;
    std::uint64_t seed = 0;
    std::string run_dir;

    auto add_config_opts = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "key = value config file");
        cmd->add_option("-s,--set", overrides,
                        "config override, key=value (repeatable)");
    };

    auto* run = app.add_subcommand("run", "Run a federated training experiment");
    add_config_opts(run);

    auto* sweep = app.add_subcommand(
        "sweep-clients", "Re-run the experiment across client counts");
    add_config_opts(sweep);
    sweep->add_option("-k,--clients", counts, "client counts (default 1..5)");
    sweep->add_option("-o,--out", out_path, "CSV output path");

    auto* gen = app.add_subcommand("gen-dna", "Write the synthetic DNA dataset");
    gen->add_option("-n,--num-samples", num_samples, "sample count (even)");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("-o,--out", out_path, "output CSV path")->required();

    auto* report = app.add_subcommand("report", "Print a run's report.json");
    report->add_option("run_dir", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, overrides);
        if (sweep->parsed())
            return cmd_sweep(config_path, overrides, counts, out_path);
        if (gen->parsed()) return cmd_gen_dna(num_samples, seed, out_path);
        if (report->parsed()) return cmd_report(run_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
