#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fedqnn::data {

struct Dataset {
    std::vector<std::vector<double>> features;  // N x m
    std::vector<int> labels;                    // in [0, num_classes)
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::string name;
    int num_classes = 0;

    std::size_t size() const { return features.size(); }
    std::size_t num_features() const {
        return features.empty() ? 0 : features.front().size();
    }
    void validate() const;  // finite features, every class with >= 2 samples
};

struct CsvSchema {
    std::string label_column;
    std::string dataset_name;
};

struct IngestReport {
    int rows_total = 0;
    int rows_dropped_missing = 0;
};

struct LoadResult {
    Dataset dataset;
    IngestReport report;
};

// Header + comma-separated UTF-8. Numeric columns parse as doubles; columns
// with any non-numeric entry are nominal and integer-encoded by sorted
// category name. Rows containing missing values ("?" or empty) are dropped
// and counted. A row with the wrong field count aborts with its line number.
LoadResult load_csv(const std::string& path, const CsvSchema& schema);

struct DnaOptions {
    double mutation_prob = 0.15;
    // Test hook: when set, the background is this fixed base instead of
    // uniform random (e.g. 'G' to make planted motifs visible verbatim).
    char forced_background = '\0';
};

inline constexpr int kDnaSequenceLength = 57;
inline constexpr int kDnaMotifPosition = 30;
inline constexpr const char* kDnaMotif = "TATAAT";

struct DnaResult {
    Dataset dataset;
    std::vector<std::string> sequences;  // parallel to dataset rows
};

// Balanced promoter / non-promoter generator. Promoters carry the TATAAT
// motif planted at a fixed position with per-base mutation; features are the
// four base fractions of the sequence. Deterministic given the seed.
DnaResult generate_dna(int num_samples, std::uint64_t seed,
                       const DnaOptions& options = {});

struct ScalingResult {
    Dataset dataset;                 // selected columns, scaled to [0, pi]
    std::vector<int> selected_columns;
    std::vector<std::pair<double, double>> fit_ranges;  // per selected column
    std::vector<std::string> warnings;
};

// Keep the `num_features` columns with the highest variance over the rows in
// `fit_indices` (ties break toward the lower column index), min-max scale
// each to [0, pi] using only those rows' extrema, and clip everything else
// into range. A constant column maps to pi/2 with a warning.
ScalingResult select_and_scale(const Dataset& ds, int num_features,
                               const std::vector<std::size_t>& fit_indices);

// Convenience: fit on all rows.
ScalingResult select_and_scale(const Dataset& ds, int num_features);

struct DatasetSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::vector<std::vector<std::size_t>> client_shards;  // partition of train
};

// Stratified train/test split followed by a seeded shuffle of the training
// indices dealt round-robin into K shards (IID, sizes differ by <= 1).
DatasetSplit split_and_partition(const Dataset& ds, double test_fraction,
                                 int num_clients, std::uint64_t seed);

// Write a dataset in the same CSV schema load_csv reads.
void write_csv(const Dataset& ds, const std::string& path);

}  // namespace fedqnn::data
