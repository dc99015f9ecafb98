#include "fedqnn/qnn.hpp"

#include <cmath>
#include <set>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::qnn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFeatureSlack = 1e-9;
}  // namespace

void CircuitSpec::validate() const {
    if (num_qubits < 1 || num_qubits > sim::kMaxQubits) {
        throw ConfigError("num_qubits out of range: " +
                          std::to_string(num_qubits));
    }
    if (num_layers < 1) {
        throw ConfigError("num_layers must be >= 1");
    }
    if (readout_qubits.empty()) {
        throw ConfigError("at least one readout qubit required");
    }
    std::set<int> seen;
    for (int q : readout_qubits) {
        if (q < 0 || q >= num_qubits) {
            throw ConfigError("readout qubit " + std::to_string(q) +
                              " out of range");
        }
        if (!seen.insert(q).second) {
            throw ConfigError("duplicate readout qubit " + std::to_string(q));
        }
    }
}

sim::Statevector angle_embed(std::span<const double> features) {
    const int n = static_cast<int>(features.size());
    for (double x : features) {
        if (!std::isfinite(x) || x < -kFeatureSlack || x > kPi + kFeatureSlack) {
            throw ArgumentError("feature value " + std::to_string(x) +
                                " outside [0, pi]");
        }
    }
    sim::Statevector state(n);
    for (int q = 0; q < n; ++q) {
        sim::apply_gate(state, sim::Gate::rx(q, features[q]));
    }
    return state;
}

std::vector<sim::Gate> build_ansatz(const CircuitSpec& spec,
                                    std::span<const double> params) {
    spec.validate();
    if (static_cast<int>(params.size()) != spec.num_params()) {
        throw ConfigError("expected " + std::to_string(spec.num_params()) +
                          " parameters, got " + std::to_string(params.size()));
    }
    const int n = spec.num_qubits;
    std::vector<sim::Gate> gates;
    gates.reserve(static_cast<std::size_t>(n) * (1 + 2 * spec.num_layers));
    for (int q = 0; q < n; ++q) {
        gates.push_back(sim::Gate::h(q));
    }
    for (int layer = 0; layer < spec.num_layers; ++layer) {
        for (int q = 0; q < n; ++q) {
            gates.push_back(sim::Gate::ry(q, params[layer * n + q]));
        }
        if (n > 1) {
            for (int q = 0; q < n; ++q) {
                gates.push_back(sim::Gate::cnot(q, (q + 1) % n));
            }
        }
    }
    return gates;
}

std::vector<double> readout_expectations(const CircuitSpec& spec,
                                         std::span<const double> params,
                                         std::span<const double> features) {
    if (static_cast<int>(features.size()) != spec.num_qubits) {
        throw ConfigError("feature length " + std::to_string(features.size()) +
                          " != num_qubits " + std::to_string(spec.num_qubits));
    }
    sim::Statevector state = angle_embed(features);
    for (const auto& gate : build_ansatz(spec, params)) {
        sim::apply_gate(state, gate);
    }
    std::vector<double> out;
    out.reserve(spec.readout_qubits.size());
    for (int q : spec.readout_qubits) {
        out.push_back(sim::expectation(state, sim::Observable::z(q)));
    }
    return out;
}

std::vector<double> forward(const CircuitSpec& spec,
                            std::span<const double> params,
                            std::span<const double> features) {
    std::vector<double> out = readout_expectations(spec, params, features);
    for (double& z : out) z = (1.0 - z) / 2.0;
    return out;
}

int decide_label(std::span<const double> scores) {
    if (scores.empty()) throw ArgumentError("empty score vector");
    if (scores.size() == 1) {
        return scores[0] >= 0.5 ? 1 : 0;
    }
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = static_cast<int>(c);
    }
    return best;
}

double sample_loss(const CircuitSpec& spec, std::span<const double> params,
                   std::span<const double> features,
                   std::span<const double> targets) {
    const std::vector<double> p = forward(spec, params, features);
    if (targets.size() != p.size()) {
        throw ArgumentError("target length does not match readout count");
    }
    double loss = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double d = targets[c] - p[c];
        loss += d * d;
    }
    return loss / static_cast<double>(p.size());
}

ParameterVector parameter_shift_grad(const CircuitSpec& spec,
                                     std::span<const double> params,
                                     std::span<const double> features,
                                     std::span<const double> targets) {
    const std::size_t num_outputs = spec.readout_qubits.size();
    if (targets.size() != num_outputs) {
        throw ArgumentError("target length does not match readout count");
    }
    const std::vector<double> p = forward(spec, params, features);

    ParameterVector grad(params.size(), 0.0);
    ParameterVector shifted(params.begin(), params.end());
    for (std::size_t j = 0; j < params.size(); ++j) {
        shifted[j] = params[j] + kPi / 2.0;
        const auto z_plus = readout_expectations(spec, shifted, features);
        shifted[j] = params[j] - kPi / 2.0;
        const auto z_minus = readout_expectations(spec, shifted, features);
        shifted[j] = params[j];

        double g = 0.0;
        for (std::size_t c = 0; c < num_outputs; ++c) {
            const double dz = (z_plus[c] - z_minus[c]) / 2.0;
            const double dp = -0.5 * dz;
            g += 2.0 * (p[c] - targets[c]) * dp;
        }
        grad[j] = g / static_cast<double>(num_outputs);
    }
    return grad;
}

}  // namespace fedqnn::qnn
