#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedqnn/dataset.hpp"
#include "fedqnn/federation.hpp"
#include "fedqnn/metrics.hpp"

namespace fedqnn::cli {

// Resolved experiment inputs. Field names follow the orchestration loop's
// input block (max_iterations, num_clients, num_features_to_use, ...).
struct ExperimentConfig {
    std::string dataset = "iris";  // iris | breast_cancer | dna | csv:<path>
    std::string csv_label_column = "label";
    int num_qubits = 4;
    int num_layers = 4;
    int num_clients = 3;
    int max_iterations = 100;  // federated rounds
    int local_iterations = 1;  // full-batch Adam steps per client per round
    double learning_rate = 0.1;
    double test_fraction = 0.2;
    int num_features_to_use = 4;
    int num_data_points = 0;  // 0 = use the whole dataset
    int trials = 10;
    std::uint64_t seed = 0;
    std::string aggregation = "fedavg_unweighted";  // | fedavg_weighted
    std::string multiclass_strategy = "multi_readout";  // | one_vs_rest
    std::string transport = "in_process";  // | loopback
    int dna_samples = 200;
    std::string data_dir = "data";

    // Empty when valid; otherwise one message per violated constraint.
    std::vector<std::string> validate() const;

    // Fully expanded key = value listing; the reproducibility anchor.
    std::string resolved_text() const;
    std::uint64_t hash() const;  // FNV-1a of resolved_text()

    static ExperimentConfig from_file(const std::string& path);
    void apply_override(const std::string& key_equals_value);
};

struct TrialOutput {
    metrics::TrajectoryLog log;
    qnn::ParameterVector final_params;
    metrics::ClassificationReport final_report;
};

struct ExperimentResult {
    std::vector<TrialOutput> trials;
    metrics::MeanCurve mean_curve;
    std::vector<std::string> class_names;
};

// Full run: per trial, load -> split -> scale -> federated rounds with
// evaluation after every aggregation. Deterministic for a fixed resolved
// config.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Mean final-round accuracy across trials.
double mean_final_accuracy(const ExperimentResult& result);

// Writes config.txt, trajectory.csv, mean_curve.csv and report.json under a
// directory named from the config hash and seed; returns that directory.
std::string write_results(const ExperimentResult& result,
                          const ExperimentConfig& config,
                          const std::string& run_root);

struct SweepRow {
    int num_clients = 0;
    double mean_final_accuracy = 0.0;
};

// run_experiment once per client count, shared base seed.
std::vector<SweepRow> sweep_clients(const ExperimentConfig& config,
                                    const std::vector<int>& client_counts);

}  // namespace fedqnn::cli
