#include "fedqnn/training.hpp"

#include <cmath>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::training {

AdamState AdamState::fresh(std::size_t num_params, AdamConfig config) {
    AdamState state;
    state.first_moment.assign(num_params, 0.0);
    state.second_moment.assign(num_params, 0.0);
    state.step_count = 0;
    state.config = config;
    return state;
}

LossReport mse_loss(std::span<const double> predictions,
                    std::span<const double> labels) {
    if (predictions.empty()) {
        throw ArgumentError("mse_loss: empty input");
    }
    if (predictions.size() != labels.size()) {
        throw ArgumentError("mse_loss: length mismatch (" +
                            std::to_string(predictions.size()) + " vs " +
                            std::to_string(labels.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = labels[i] - predictions[i];
        sum += d * d;
    }
    return {sum / static_cast<double>(predictions.size()),
            static_cast<int>(predictions.size())};
}

std::pair<AdamState, qnn::ParameterVector> adam_step(
    const AdamState& state, std::span<const double> params,
    std::span<const double> gradient) {
    const std::size_t p = params.size();
    if (state.first_moment.size() != p || gradient.size() != p) {
        throw ArgumentError("adam_step: dimension mismatch");
    }
    for (double g : gradient) {
        if (!std::isfinite(g)) {
            throw NumericError("adam_step: non-finite gradient component");
        }
    }
    AdamState next = state;
    next.step_count = state.step_count + 1;
    const AdamConfig& c = state.config;
    const double bc1 = 1.0 - std::pow(c.beta1, next.step_count);
    const double bc2 = 1.0 - std::pow(c.beta2, next.step_count);

    qnn::ParameterVector updated(params.begin(), params.end());
    for (std::size_t i = 0; i < p; ++i) {
        next.first_moment[i] =
            c.beta1 * state.first_moment[i] + (1.0 - c.beta1) * gradient[i];
        next.second_moment[i] = c.beta2 * state.second_moment[i] +
                                (1.0 - c.beta2) * gradient[i] * gradient[i];
        const double m_hat = next.first_moment[i] / bc1;
        const double v_hat = next.second_moment[i] / bc2;
        updated[i] -= c.step_size * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
    return {std::move(next), std::move(updated)};
}

TrainResult train_local(const LocalDataset& data, const qnn::CircuitSpec& spec,
                        const qnn::ParameterVector& params,
                        const AdamConfig& adam, int iterations) {
    if (data.size() == 0) {
        throw ConfigError("train_local: empty client dataset");
    }
    if (data.targets.size() != data.features.size()) {
        throw ConfigError("train_local: feature/target row count mismatch");
    }
    if (iterations < 1) {
        throw ConfigError("train_local: iterations must be >= 1");
    }

    TrainResult result;
    result.params = params;
    result.trajectory.reserve(iterations);
    AdamState state = AdamState::fresh(params.size(), adam);
    const double n = static_cast<double>(data.size());

    for (int it = 0; it < iterations; ++it) {
        qnn::ParameterVector grad(params.size(), 0.0);
        double loss_sum = 0.0;
        for (std::size_t s = 0; s < data.size(); ++s) {
            const auto sample_grad = qnn::parameter_shift_grad(
                spec, result.params, data.features[s], data.targets[s]);
            for (std::size_t j = 0; j < grad.size(); ++j) {
                grad[j] += sample_grad[j];
            }
            loss_sum += qnn::sample_loss(spec, result.params, data.features[s],
                                         data.targets[s]);
        }
        for (double& g : grad) g /= n;
        result.trajectory.push_back({loss_sum / n, static_cast<int>(data.size())});
        auto [next_state, next_params] = adam_step(state, result.params, grad);
        state = std::move(next_state);
        result.params = std::move(next_params);
    }
    return result;
}

}  // namespace fedqnn::training
