#include "fedqnn/metrics.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::metrics {

ClassificationReport report_from_confusion(
    const std::vector<std::vector<long>>& confusion) {
    const int c = static_cast<int>(confusion.size());
    ClassificationReport report;
    report.confusion = confusion;
    report.per_class.resize(c);

    long total = 0, correct = 0;
    for (int i = 0; i < c; ++i) {
        for (int j = 0; j < c; ++j) total += confusion[i][j];
        correct += confusion[i][i];
    }
    if (total == 0) throw ArgumentError("empty confusion matrix");
    report.total = total;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(total);

    for (int k = 0; k < c; ++k) {
        long tp = confusion[k][k];
        long predicted = 0, actual = 0;
        for (int i = 0; i < c; ++i) {
            predicted += confusion[i][k];
            actual += confusion[k][i];
        }
        PerClassScores& s = report.per_class[k];
        s.support = actual;
        s.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
        s.recall = actual > 0 ? static_cast<double>(tp) / actual : 0.0;
        s.f1 = (s.precision + s.recall > 0.0)
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
        report.macro_precision += s.precision;
        report.macro_recall += s.recall;
        report.macro_f1 += s.f1;
    }
    report.macro_precision /= c;
    report.macro_recall /= c;
    report.macro_f1 /= c;
    return report;
}

ClassificationReport classification_report(std::span<const int> predictions,
                                           std::span<const int> labels,
                                           int num_classes) {
    if (predictions.empty() || predictions.size() != labels.size()) {
        throw ArgumentError("classification_report: bad input lengths");
    }
    std::vector<std::vector<long>> confusion(
        num_classes, std::vector<long>(num_classes, 0));
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] < 0 || predictions[i] >= num_classes ||
            labels[i] < 0 || labels[i] >= num_classes) {
            throw ArgumentError("class index out of range at sample " +
                                std::to_string(i));
        }
        ++confusion[labels[i]][predictions[i]];
    }
    return report_from_confusion(confusion);
}

std::string to_json(const ClassificationReport& report,
                    std::span<const std::string> class_names) {
    nlohmann::ordered_json j;
    j["accuracy"] = report.accuracy;
    j["macro_precision"] = report.macro_precision;
    j["macro_recall"] = report.macro_recall;
    j["macro_f1"] = report.macro_f1;
    j["total"] = report.total;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < report.per_class.size(); ++k) {
        const std::string name = k < class_names.size()
                                     ? class_names[k]
                                     : "class_" + std::to_string(k);
        per_class[name] = {{"precision", report.per_class[k].precision},
                           {"recall", report.per_class[k].recall},
                           {"f1", report.per_class[k].f1},
                           {"support", report.per_class[k].support}};
    }
    j["per_class"] = per_class;
    j["confusion"] = report.confusion;
    return j.dump(2);
}

MeanCurve aggregate_trials(std::span<const TrajectoryLog> logs) {
    if (logs.empty()) throw ArgumentError("aggregate_trials: no logs");
    const auto& grid = logs.front().records;
    for (const auto& log : logs) {
        if (log.records.size() != grid.size()) {
            throw ArgumentError("aggregate_trials: mismatched round grids");
        }
        for (std::size_t r = 0; r < grid.size(); ++r) {
            if (log.records[r].round != grid[r].round) {
                throw ArgumentError("aggregate_trials: mismatched round grids");
            }
        }
    }

    MeanCurve curve;
    const double n = static_cast<double>(logs.size());
    for (std::size_t r = 0; r < grid.size(); ++r) {
        double acc_sum = 0.0, loss_sum = 0.0;
        for (const auto& log : logs) {
            acc_sum += log.records[r].accuracy;
            loss_sum += log.records[r].loss;
        }
        const double mean = acc_sum / n;
        double sq = 0.0;
        for (const auto& log : logs) {
            const double d = log.records[r].accuracy - mean;
            sq += d * d;
        }
        curve.rounds.push_back(grid[r].round);
        curve.mean_accuracy.push_back(mean);
        curve.std_accuracy.push_back(logs.size() > 1 ? std::sqrt(sq / (n - 1.0))
                                                     : 0.0);
        curve.mean_loss.push_back(loss_sum / n);
    }
    return curve;
}

}  // namespace fedqnn::metrics
