#include <doctest.h>

#include <cmath>

#include "fedqnn/errors.hpp"
#include "fedqnn/statevector.hpp"
#include "test_helpers.hpp"

using namespace fedqnn;
using sim::Gate;
using sim::Observable;
using sim::Statevector;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("zero state initialization") {
    const auto one = sim::init_zero_state(1);
    CHECK(one.dim() == 2);
    CHECK(one.amplitude(0) == sim::cdouble{1.0, 0.0});
    CHECK(one.amplitude(1) == sim::cdouble{0.0, 0.0});

    const auto two = sim::init_zero_state(2);
    CHECK(two.dim() == 4);
    CHECK(two.amplitude(0).real() == 1.0);
    for (std::size_t i = 1; i < 4; ++i) CHECK(two.amplitude(i) == sim::cdouble{});

    const auto four = sim::init_zero_state(4);
    CHECK(four.dim() == 16);
    CHECK(four.amplitude(0).real() == 1.0);

    CHECK_THROWS_AS(sim::init_zero_state(0), ConfigError);
    CHECK_THROWS_AS(sim::init_zero_state(21), ConfigError);
}

TEST_CASE("hadamard on |0>") {
    Statevector s(1);
    sim::apply_gate(s, Gate::h(0));
    CHECK(std::abs(s.amplitude(0) - sim::cdouble{kInvSqrt2, 0.0}) < 1e-15);
    CHECK(std::abs(s.amplitude(1) - sim::cdouble{kInvSqrt2, 0.0}) < 1e-15);
}

TEST_CASE("RX(pi)|0> = -i|1>") {
    Statevector s(1);
    sim::apply_gate(s, Gate::rx(0, 3.14159265358979323846));
    CHECK(std::abs(s.amplitude(0)) < 1e-15);
    CHECK(std::abs(s.amplitude(1) - sim::cdouble{0.0, -1.0}) < 1e-15);
}

TEST_CASE("gate matrices are unitary") {
    const Gate gates[] = {Gate::h(0), Gate::x(0), Gate::y(0), Gate::rx(0, 0.7),
                          Gate::ry(0, -2.1)};
    for (const auto& g : gates) {
        const auto m = g.matrix2();
        // G^dag G entries
        const auto conj = [](sim::cdouble z) { return std::conj(z); };
        const sim::cdouble d00 = conj(m[0]) * m[0] + conj(m[2]) * m[2];
        const sim::cdouble d01 = conj(m[0]) * m[1] + conj(m[2]) * m[3];
        const sim::cdouble d11 = conj(m[1]) * m[1] + conj(m[3]) * m[3];
        CHECK(std::abs(d00 - 1.0) < 1e-12);
        CHECK(std::abs(d01) < 1e-12);
        CHECK(std::abs(d11 - 1.0) < 1e-12);
    }
}

TEST_CASE("invalid qubit indices rejected") {
    Statevector s(2);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::h(2)), ArgumentError);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::h(-1)), ArgumentError);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::cnot(0, 0)), ArgumentError);
    CHECK_THROWS_AS(sim::expectation(s, Observable::z(5)), ArgumentError);
}

TEST_CASE("qubit 0 is the most significant bit") {
    // X on qubit 0 of a 2-qubit register must populate index 2 (binary 10),
    // not index 1.
    Statevector s(2);
    sim::apply_gate(s, Gate::x(0));
    CHECK(std::abs(s.amplitude(2) - sim::cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(s.amplitude(1)) < 1e-15);

    // CNOT with control 0 flips the last bit only when index bit 0 is set.
    sim::apply_gate(s, Gate::cnot(0, 1));
    CHECK(std::abs(s.amplitude(3) - sim::cdouble{1.0, 0.0}) < 1e-15);
}

TEST_CASE("Z expectations") {
    Statevector zero(1);
    CHECK(sim::expectation(zero, Observable::z(0)) == doctest::Approx(1.0));

    Statevector plus(1);
    sim::apply_gate(plus, Gate::h(0));
    CHECK(std::abs(sim::expectation(plus, Observable::z(0))) < 1e-12);

    Rng rng(1234);
    for (int rep = 0; rep < 20; ++rep) {
        const auto state = test::random_state(rng, 4);
        // Dense oracle for <psi|Z_2|psi>: explicit 16x16 diagonal sign matrix.
        double expected = 0.0;
        for (std::size_t i = 0; i < state.dim(); ++i) {
            const double sign = (i >> 1) & 1 ? -1.0 : 1.0;  // qubit 2 of 4
            expected += sign * std::norm(state.amplitude(i));
        }
        CHECK(sim::expectation(state, Observable::z(2)) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("dense oracle basics") {
    Statevector s(2);
    sim::apply_gate(s, Gate::ry(0, 0.3));
    const auto same = sim::dense_oracle_apply(s, {});
    CHECK(test::max_amplitude_diff(s, same) == 0.0);

    Statevector zero(1);
    const std::vector<Gate> hh = {Gate::h(0), Gate::h(0)};
    const auto back = sim::dense_oracle_apply(zero, hh);
    CHECK(std::abs(back.amplitude(0) - sim::cdouble{1.0, 0.0}) < 1e-12);

    CHECK_THROWS_AS(sim::dense_oracle_apply(Statevector(11), {}), ArgumentError);
}

TEST_CASE("strided kernels match the dense oracle on random circuits") {
    Rng rng(777);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform_index(3));
        const auto circuit = test::random_circuit(rng, n, 10);
        Statevector strided(n);
        for (const auto& g : circuit) sim::apply_gate(strided, g);
        const auto dense = sim::dense_oracle_apply(Statevector(n), circuit);
        CHECK(test::max_amplitude_diff(strided, dense) < 1e-10);
        CHECK(std::abs(strided.norm_squared() - 1.0) < 1e-10);
    }
}

TEST_CASE("involutions: H, X, CNOT applied twice") {
    Rng rng(42);
    for (int rep = 0; rep < 25; ++rep) {
        const auto original = test::random_state(rng, 3);
        for (const Gate& g : {Gate::h(1), Gate::x(2), Gate::cnot(0, 2)}) {
            auto s = original;
            sim::apply_gate(s, g);
            sim::apply_gate(s, g);
            CHECK(test::max_amplitude_diff(s, original) < 1e-12);
        }
    }
}

TEST_CASE("RY(a) RY(b) == RY(a+b)") {
    Rng rng(99);
    for (int rep = 0; rep < 25; ++rep) {
        const double a = rng.uniform(-3.0, 3.0);
        const double b = rng.uniform(-3.0, 3.0);
        const auto base = test::random_state(rng, 2);
        auto two_steps = base;
        sim::apply_gate(two_steps, Gate::ry(1, a));
        sim::apply_gate(two_steps, Gate::ry(1, b));
        auto one_step = base;
        sim::apply_gate(one_step, Gate::ry(1, a + b));
        CHECK(test::max_amplitude_diff(two_steps, one_step) < 1e-12);
    }
}

TEST_CASE("Z expectation stays within [-1, 1]") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const auto state = test::random_state(rng, 3);
        const double z =
            sim::expectation(state, Observable::z(rng.uniform_index(3)));
        CHECK(z >= -1.0 - 1e-12);
        CHECK(z <= 1.0 + 1e-12);
    }
}
