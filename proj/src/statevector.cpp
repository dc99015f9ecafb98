#include "fedqnn/statevector.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::sim {

namespace {

constexpr cdouble kI{0.0, 1.0};

void check_qubit(int q, int n, const char* what) {
    if (q < 0 || q >= n) {
        throw ArgumentError(std::string(what) + " qubit index " +
                            std::to_string(q) + " out of range for " +
                            std::to_string(n) + " qubits");
    }
}

}  // namespace

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw ConfigError("num_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(num_qubits));
    }
    amps_.assign(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
    amps_[0] = cdouble{1.0, 0.0};
}

double Statevector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

Statevector init_zero_state(int num_qubits) { return Statevector(num_qubits); }

std::array<cdouble, 4> Gate::matrix2() const {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::H:
            return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -kI, kI, 0.0};
        case GateKind::RX: {
            const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
            return {cdouble{c, 0.0}, -kI * s, -kI * s, cdouble{c, 0.0}};
        }
        case GateKind::RY: {
            const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
            return {cdouble{c, 0.0}, cdouble{-s, 0.0}, cdouble{s, 0.0},
                    cdouble{c, 0.0}};
        }
        case GateKind::CNOT:
            throw ArgumentError("CNOT has no 2x2 matrix");
    }
    throw ArgumentError("unknown gate kind");
}

void apply_gate(Statevector& state, const Gate& gate) {
    const int n = state.num_qubits();
    const std::size_t dim = state.dim();
    auto amps = state.amplitudes();

    if (gate.is_two_qubit()) {
        check_qubit(gate.control, n, "control");
        check_qubit(gate.target, n, "target");
        if (gate.control == gate.target) {
            throw ArgumentError("CNOT control and target must differ");
        }
        const std::size_t cmask = std::size_t{1} << (n - 1 - gate.control);
        const std::size_t tmask = std::size_t{1} << (n - 1 - gate.target);
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) && !(i & tmask)) {
                std::swap(amps[i], amps[i | tmask]);
            }
        }
        return;
    }

    check_qubit(gate.target, n, "target");
    const auto m = gate.matrix2();
    const std::size_t stride = std::size_t{1} << (n - 1 - gate.target);
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cdouble a0 = amps[i0];
            const cdouble a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

double expectation(const Statevector& state, const Observable& obs) {
    check_qubit(obs.qubit, state.num_qubits(), "observable");
    const std::size_t mask =
        std::size_t{1} << (state.num_qubits() - 1 - obs.qubit);
    double value = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(amps[i]);
        value += (i & mask) ? -p : p;
    }
    return value;
}

namespace {

using Matrix = Eigen::MatrixXcd;

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

// I^(2^q) (x) m (x) I^(2^(n-q-1)) under the MSB-first qubit convention.
Matrix embed_single(const std::array<cdouble, 4>& m, int q, int n) {
    Matrix g(2, 2);
    g << m[0], m[1], m[2], m[3];
    const auto left = Matrix::Identity(1 << q, 1 << q);
    const auto right = Matrix::Identity(1 << (n - q - 1), 1 << (n - q - 1));
    return kron(kron(left, g), right);
}

Matrix full_unitary(const Gate& gate, int n) {
    if (!gate.is_two_qubit()) {
        return embed_single(gate.matrix2(), gate.target, n);
    }
    // CNOT = P0_c (x) I + P1_c (x) X_t, assembled from Kronecker embeddings.
    const std::array<cdouble, 4> p0{1.0, 0.0, 0.0, 0.0};
    const std::array<cdouble, 4> p1{0.0, 0.0, 0.0, 1.0};
    const std::array<cdouble, 4> x{0.0, 1.0, 1.0, 0.0};
    return embed_single(p0, gate.control, n) +
           embed_single(p1, gate.control, n) * embed_single(x, gate.target, n);
}

}  // namespace

Statevector dense_oracle_apply(const Statevector& state,
                               std::span<const Gate> circuit) {
    const int n = state.num_qubits();
    if (state.dim() > (std::size_t{1} << 10)) {
        throw ArgumentError("dense oracle limited to 10 qubits");
    }
    Matrix u = Matrix::Identity(state.dim(), state.dim());
    for (const auto& gate : circuit) {
        u = full_unitary(gate, n) * u;
    }
    Eigen::VectorXcd psi(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) psi(i) = state.amplitude(i);
    Eigen::VectorXcd out = u * psi;
    Statevector result(n);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        result.amplitudes()[i] = out(i);
    }
    return result;
}

}  // namespace fedqnn::sim
