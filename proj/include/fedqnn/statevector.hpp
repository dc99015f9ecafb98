#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fedqnn::sim {

using cdouble = std::complex<double>;

// Qubit ordering convention: qubit 0 is the MOST significant bit of the
// basis-state index. For n qubits, basis index b has
//   bit(q) = (b >> (n - 1 - q)) & 1.
// Tests pin this convention; do not change it silently.

constexpr int kMaxQubits = 20;

class Statevector {
  public:
    // |00...0>
    explicit Statevector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const cdouble> amplitudes() const { return amps_; }
    std::span<cdouble> amplitudes() { return amps_; }
    cdouble amplitude(std::size_t basis) const { return amps_[basis]; }

    double norm_squared() const;

    // Bit of qubit `q` in basis index `basis` under the MSB-first convention.
    int bit(std::size_t basis, int q) const {
        return static_cast<int>((basis >> (num_qubits_ - 1 - q)) & 1u);
    }

  private:
    int num_qubits_;
    std::vector<cdouble> amps_;
};

Statevector init_zero_state(int num_qubits);

enum class GateKind { H, X, Y, RX, RY, CNOT };

struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;  // CNOT only
    double angle = 0.0;  // RX/RY only

    static Gate h(int q) { return {GateKind::H, q}; }
    static Gate x(int q) { return {GateKind::X, q}; }
    static Gate y(int q) { return {GateKind::Y, q}; }
    static Gate rx(int q, double theta) { return {GateKind::RX, q, -1, theta}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, q, -1, theta}; }
    static Gate cnot(int control, int target) {
        return {GateKind::CNOT, target, control};
    }

    bool is_two_qubit() const { return kind == GateKind::CNOT; }
    bool is_parameterized() const {
        return kind == GateKind::RX || kind == GateKind::RY;
    }

    // Row-major 2x2 matrix of a single-qubit gate.
    // RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2) (half-angle convention).
    std::array<cdouble, 4> matrix2() const;
};

// Pauli observable on a single qubit. Only Z is needed for readout, but the
// enumeration leaves room for more.
enum class PauliKind { Z };

struct Observable {
    PauliKind kind = PauliKind::Z;
    int qubit = 0;

    static Observable z(int q) { return {PauliKind::Z, q}; }
};

// In-place strided kernel: O(2^n) per single-qubit gate, no matrix build.
void apply_gate(Statevector& state, const Gate& gate);

// <psi| Z_q |psi>; imaginary residue is identically zero for Pauli-Z.
double expectation(const Statevector& state, const Observable& obs);

// Verification path: builds the full 2^n x 2^n unitary from Kronecker
// products, multiplies the gates together and applies the product once.
// Restricted to small registers; used by tests as an independent oracle.
Statevector dense_oracle_apply(const Statevector& state,
                               std::span<const Gate> circuit);

}  // namespace fedqnn::sim
