#pragma once

#include <span>
#include <vector>

#include "fedqnn/statevector.hpp"

namespace fedqnn::qnn {

// Trainable rotation angles, one per (layer, qubit).
using ParameterVector = std::vector<double>;

// Ansatz shape. One initial Hadamard wall, then num_layers repetitions of a
// RY wall followed by a CNOT ring (q -> (q+1) mod n, skipped when n == 1).
// num_layers * num_qubits parameters total.
struct CircuitSpec {
    int num_qubits = 4;
    int num_layers = 4;
    std::vector<int> readout_qubits = {0};

    int num_params() const { return num_layers * num_qubits; }
    void validate() const;
};

// Classical features already scaled into [0, pi], one per qubit; encoded as
// RX(x_q) on qubit q of |0...0>.
sim::Statevector angle_embed(std::span<const double> features);

std::vector<sim::Gate> build_ansatz(const CircuitSpec& spec,
                                    std::span<const double> params);

// Raw readout <Z_c> per readout qubit after embedding + ansatz.
std::vector<double> readout_expectations(const CircuitSpec& spec,
                                         std::span<const double> params,
                                         std::span<const double> features);

// Class scores p_c = (1 - <Z_c>) / 2, each in [0, 1].
std::vector<double> forward(const CircuitSpec& spec,
                            std::span<const double> params,
                            std::span<const double> features);

// Decision rule: single output -> threshold 0.5, ties to class 1;
// multiple outputs -> argmax, ties to the lowest class index.
int decide_label(std::span<const double> scores);

// Gradient of the per-sample squared-error loss
//   L = (1/C) * sum_c (target_c - p_c)^2
// with respect to every ansatz parameter, via the parameter-shift rule
// (exact for RY-generated gates) chain-ruled through p = (1 - <Z>)/2.
ParameterVector parameter_shift_grad(const CircuitSpec& spec,
                                     std::span<const double> params,
                                     std::span<const double> features,
                                     std::span<const double> targets);

// The same per-sample loss the gradient differentiates.
double sample_loss(const CircuitSpec& spec, std::span<const double> params,
                   std::span<const double> features,
                   std::span<const double> targets);

}  // namespace fedqnn::qnn
