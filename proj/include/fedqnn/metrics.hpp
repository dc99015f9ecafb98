#pragma once

#include <span>
#include <string>
#include <vector>

namespace fedqnn::metrics {

struct PerClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long support = 0;
};

struct ClassificationReport {
    std::vector<std::vector<long>> confusion;  // confusion[label][prediction]
    std::vector<PerClassScores> per_class;
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    long total = 0;
};

// Macro-averaged precision/recall/F1 (unweighted mean over classes). A class
// with precision + recall == 0 contributes f1 = 0.
ClassificationReport classification_report(std::span<const int> predictions,
                                           std::span<const int> labels,
                                           int num_classes);

// Same report computed from an existing confusion matrix.
ClassificationReport report_from_confusion(
    const std::vector<std::vector<long>>& confusion);

std::string to_json(const ClassificationReport& report,
                    std::span<const std::string> class_names);

struct TrajectoryRecord {
    int round = 0;
    double accuracy = 0.0;
    double loss = 0.0;
};

struct TrajectoryLog {
    int trial = 0;
    std::vector<TrajectoryRecord> records;  // rounds strictly increasing
};

struct MeanCurve {
    std::vector<int> rounds;
    std::vector<double> mean_accuracy;
    std::vector<double> std_accuracy;  // sample standard deviation
    std::vector<double> mean_loss;
};

// Per-round mean and sample standard deviation of accuracy across trials.
// All logs must cover the same round grid.
MeanCurve aggregate_trials(std::span<const TrajectoryLog> logs);

}  // namespace fedqnn::metrics
