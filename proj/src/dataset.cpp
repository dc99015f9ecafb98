#include "fedqnn/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fedqnn/errors.hpp"
#include "fedqnn/rng.hpp"

namespace fedqnn::data {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

bool parse_double(const std::string& cell, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(cell, &pos);
        return pos == cell.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

void Dataset::validate() const {
    std::vector<int> counts(num_classes, 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (double v : features[i]) {
            if (!std::isfinite(v)) {
                throw IngestionError("non-finite feature value in dataset '" +
                                     name + "'");
            }
        }
        if (labels[i] < 0 || labels[i] >= num_classes) {
            throw IngestionError("label out of range in dataset '" + name + "'");
        }
        ++counts[labels[i]];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[c] < 2) {
            throw IngestionError("class " + std::to_string(c) + " of '" + name +
                                 "' has fewer than 2 samples");
        }
    }
}

LoadResult load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestionError(path + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    const auto label_it =
        std::find(header.begin(), header.end(), schema.label_column);
    if (label_it == header.end()) {
        throw IngestionError(path + ": label column '" + schema.label_column +
                             "' not found in header");
    }
    const std::size_t label_col =
        static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::vector<std::string>> rows;
    IngestReport report;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw IngestionError(path + ": line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(cells.size()));
        }
        ++report.rows_total;
        const bool missing = std::any_of(cells.begin(), cells.end(), is_missing);
        if (missing) {
            ++report.rows_dropped_missing;
            continue;
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) {
        throw IngestionError(path + ": no usable rows");
    }

    // Column typing: numeric unless any value refuses to parse.
    const std::size_t num_cols = header.size();
    std::vector<bool> nominal(num_cols, false);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < num_cols; ++c) {
            double unused;
            if (!nominal[c] && !parse_double(row[c], unused)) nominal[c] = true;
        }
    }
    std::vector<std::map<std::string, int>> codes(num_cols);
    for (std::size_t c = 0; c < num_cols; ++c) {
        if (!nominal[c] && c != label_col) continue;
        std::map<std::string, int> cats;
        for (const auto& row : rows) cats.emplace(row[c], 0);
        int next = 0;
        for (auto& [_, code] : cats) code = next++;  // sorted category order
        codes[c] = std::move(cats);
    }

    Dataset ds;
    ds.name = schema.dataset_name.empty() ? path : schema.dataset_name;
    ds.num_classes = static_cast<int>(codes[label_col].size());
    for (const auto& [cat, _] : codes[label_col]) ds.class_names.push_back(cat);
    for (std::size_t c = 0; c < num_cols; ++c) {
        if (c != label_col) ds.feature_names.push_back(header[c]);
    }
    for (const auto& row : rows) {
        std::vector<double> feats;
        feats.reserve(num_cols - 1);
        for (std::size_t c = 0; c < num_cols; ++c) {
            if (c == label_col) continue;
            if (nominal[c]) {
                feats.push_back(codes[c].at(row[c]));
            } else {
                double v;
                parse_double(row[c], v);
                feats.push_back(v);
            }
        }
        ds.features.push_back(std::move(feats));
        ds.labels.push_back(codes[label_col].at(row[label_col]));
    }
    ds.validate();
    return {std::move(ds), report};
}

DnaResult generate_dna(int num_samples, std::uint64_t seed,
                       const DnaOptions& options) {
    if (num_samples < 2 || num_samples % 2 != 0) {
        throw ArgumentError("generate_dna: num_samples must be even and >= 2");
    }
    static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
    Rng rng(seed);

    // Non-promoter background is uniform; promoter background is AT-rich
    // (promoter regions skew toward A/T), which puts the class signal into
    // the base-composition features on top of the planted motif.
    auto background_base = [&](int label) -> char {
        if (options.forced_background != '\0') return options.forced_background;
        if (label == 0) return kBases[rng.uniform_index(4)];
        const double u = rng.uniform();
        if (u < 0.34) return 'A';
        if (u < 0.50) return 'C';
        if (u < 0.66) return 'G';
        return 'T';
    };

    DnaResult result;
    Dataset& ds = result.dataset;
    ds.name = "dna";
    ds.num_classes = 2;
    ds.class_names = {"non-promoter", "promoter"};
    ds.feature_names = {"a_frac", "c_frac", "g_frac", "t_frac"};

    const std::string motif = kDnaMotif;
    for (int i = 0; i < num_samples; ++i) {
        const int label = (i % 2 == 0) ? 1 : 0;  // alternate: exact balance
        std::string seq(kDnaSequenceLength, 'A');
        for (char& b : seq) b = background_base(label);
        if (label == 1) {
            for (std::size_t j = 0; j < motif.size(); ++j) {
                // Each motif base independently mutated to a random base.
                if (rng.uniform() < options.mutation_prob) {
                    seq[kDnaMotifPosition + j] = kBases[rng.uniform_index(4)];
                } else {
                    seq[kDnaMotifPosition + j] = motif[j];
                }
            }
        }
        std::array<int, 4> counts{0, 0, 0, 0};
        for (char b : seq) {
            switch (b) {
                case 'A': ++counts[0]; break;
                case 'C': ++counts[1]; break;
                case 'G': ++counts[2]; break;
                default: ++counts[3]; break;
            }
        }
        std::vector<double> feats(4);
        for (int k = 0; k < 4; ++k) {
            feats[k] = static_cast<double>(counts[k]) / kDnaSequenceLength;
        }
        ds.features.push_back(std::move(feats));
        ds.labels.push_back(label);
        result.sequences.push_back(std::move(seq));
    }
    ds.validate();
    return result;
}

ScalingResult select_and_scale(const Dataset& ds, int num_features,
                               const std::vector<std::size_t>& fit_indices) {
    const int m = static_cast<int>(ds.num_features());
    if (num_features < 1 || num_features > m) {
        throw ArgumentError("num_features_to_use must be in [1, " +
                            std::to_string(m) + "]");
    }
    if (fit_indices.empty()) {
        throw ArgumentError("select_and_scale: empty fit index set");
    }

    // One-pass mean then variance over the fit rows, per column.
    std::vector<double> mean(m, 0.0), var(m, 0.0);
    for (std::size_t idx : fit_indices) {
        for (int c = 0; c < m; ++c) mean[c] += ds.features[idx][c];
    }
    const double n = static_cast<double>(fit_indices.size());
    for (double& v : mean) v /= n;
    for (std::size_t idx : fit_indices) {
        for (int c = 0; c < m; ++c) {
            const double d = ds.features[idx][c] - mean[c];
            var[c] += d * d;
        }
    }
    for (double& v : var) v /= n;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return var[a] > var[b]; });
    std::vector<int> selected(order.begin(), order.begin() + num_features);
    std::sort(selected.begin(), selected.end());

    ScalingResult result;
    result.selected_columns = selected;
    for (int c : selected) {
        double lo = ds.features[fit_indices.front()][c];
        double hi = lo;
        for (std::size_t idx : fit_indices) {
            lo = std::min(lo, ds.features[idx][c]);
            hi = std::max(hi, ds.features[idx][c]);
        }
        result.fit_ranges.emplace_back(lo, hi);
        if (lo == hi) {
            result.warnings.push_back("column '" + ds.feature_names[c] +
                                      "' is constant on the fit rows; mapping to pi/2");
        }
    }

    Dataset out;
    out.name = ds.name;
    out.num_classes = ds.num_classes;
    out.class_names = ds.class_names;
    out.labels = ds.labels;
    for (int c : selected) out.feature_names.push_back(ds.feature_names[c]);
    out.features.reserve(ds.size());
    for (const auto& row : ds.features) {
        std::vector<double> scaled(selected.size());
        for (std::size_t k = 0; k < selected.size(); ++k) {
            const auto [lo, hi] = result.fit_ranges[k];
            if (lo == hi) {
                scaled[k] = kPi / 2.0;
            } else {
                const double t = (row[selected[k]] - lo) / (hi - lo);
                scaled[k] = std::clamp(t, 0.0, 1.0) * kPi;
            }
        }
        out.features.push_back(std::move(scaled));
    }
    result.dataset = std::move(out);
    return result;
}

ScalingResult select_and_scale(const Dataset& ds, int num_features) {
    std::vector<std::size_t> all(ds.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return select_and_scale(ds, num_features, all);
}

DatasetSplit split_and_partition(const Dataset& ds, double test_fraction,
                                 int num_clients, std::uint64_t seed) {
    if (num_clients < 1) {
        throw ConfigError("num_clients must be >= 1");
    }
    if (test_fraction <= 0.0 || test_fraction >= 1.0) {
        throw ConfigError("test_fraction must be in (0, 1)");
    }
    ds.validate();
    Rng rng(seed);

    std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        by_class[ds.labels[i]].push_back(i);
    }

    DatasetSplit split;
    for (auto& members : by_class) {
        rng.shuffle(members);
        const auto test_count = static_cast<std::size_t>(
            std::lround(test_fraction * static_cast<double>(members.size())));
        for (std::size_t k = 0; k < members.size(); ++k) {
            (k < test_count ? split.test_indices : split.train_indices)
                .push_back(members[k]);
        }
    }
    std::sort(split.test_indices.begin(), split.test_indices.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());

    if (split.train_indices.size() < static_cast<std::size_t>(num_clients)) {
        throw ConfigError("not enough training samples for " +
                          std::to_string(num_clients) + " clients");
    }

    std::vector<std::size_t> dealt = split.train_indices;
    rng.shuffle(dealt);
    split.client_shards.assign(num_clients, {});
    for (std::size_t k = 0; k < dealt.size(); ++k) {
        split.client_shards[k % num_clients].push_back(dealt[k]);
    }
    for (const auto& shard : split.client_shards) {
        if (shard.empty()) {
            throw ConfigError("client shard would be empty");
        }
    }
    return split;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IngestionError("cannot write " + path);
    }
    for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
        out << ds.feature_names[c] << ',';
    }
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.features[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << ds.class_names[ds.labels[i]] << '\n';
    }
}

}  // namespace fedqnn::data
