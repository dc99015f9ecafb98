#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fedqnn/qnn.hpp"

namespace fedqnn::training {

struct AdamConfig {
    double step_size = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;
    AdamConfig config;

    static AdamState fresh(std::size_t num_params, AdamConfig config = {});
};

struct LossReport {
    double mse = 0.0;
    int num_samples = 0;
};

// Mean squared error over all samples; multi-output inputs are flattened so
// the mean runs over every (sample, output) pair.
LossReport mse_loss(std::span<const double> predictions,
                    std::span<const double> labels);

// One Adam update with bias correction. Inputs are left untouched; the new
// state and parameters are returned.
std::pair<AdamState, qnn::ParameterVector> adam_step(
    const AdamState& state, std::span<const double> params,
    std::span<const double> gradient);

// One client's shard: scaled feature rows plus per-readout regression targets
// (binary label or one-hot row).
struct LocalDataset {
    std::vector<std::vector<double>> features;
    std::vector<std::vector<double>> targets;

    std::size_t size() const { return features.size(); }
};

struct TrainResult {
    qnn::ParameterVector params;
    std::vector<LossReport> trajectory;  // one entry per iteration
};

// Full-batch local training: per iteration, the gradient is the mean of the
// per-sample parameter-shift gradients, applied through Adam. Deterministic
// for fixed inputs.
TrainResult train_local(const LocalDataset& data, const qnn::CircuitSpec& spec,
                        const qnn::ParameterVector& params,
                        const AdamConfig& adam, int iterations);

}  // namespace fedqnn::training
