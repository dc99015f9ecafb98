#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fedqnn/density.hpp"
#include "fedqnn/errors.hpp"
#include "fedqnn/rng.hpp"

using namespace fedqnn;
using fed::DensityMatrix;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

MatrixXcd random_density_entries(Rng& rng, int dim) {
    MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            a(r, c) = {rng.normal(), rng.normal()};
        }
    }
    MatrixXcd rho = a * a.adjoint();  // Hermitian PSD by construction
    rho /= rho.trace().real();
    return rho;
}

DensityMatrix random_density(Rng& rng, int dim) {
    return DensityMatrix(random_density_entries(rng, dim));
}

void check_invariants(const DensityMatrix& rho) {
    const auto& m = rho.entries();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <
          DensityMatrix::kHermitianTol);
    CHECK(std::abs(m.trace().real() - 1.0) < DensityMatrix::kTraceTol);
    CHECK(rho.min_eigenvalue() >= -DensityMatrix::kPsdTol);
}

// Independent projected-gradient minimizer of sum_i ||rho - rho_i||_F^2,
// kept deliberately naive: fixed small step, many iterations.
MatrixXcd pgd_frobenius_mean(const std::vector<DensityMatrix>& states) {
    const int dim = static_cast<int>(states[0].dim());
    MatrixXcd rho = MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    const double step = 0.02;
    for (int it = 0; it < 20000; ++it) {
        MatrixXcd grad = MatrixXcd::Zero(dim, dim);
        for (const auto& s : states) grad += 2.0 * (rho - s.entries());
        rho = fed::project_to_density(rho - step * grad).entries();
    }
    return rho;
}

}  // namespace

TEST_CASE("constructor validates invariants") {
    MatrixXcd ok(2, 2);
    ok << 0.5, 0.0, 0.0, 0.5;
    CHECK_NOTHROW(DensityMatrix{ok});

    MatrixXcd not_hermitian(2, 2);
    not_hermitian << 0.5, 0.3, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix{not_hermitian}, ArgumentError);

    MatrixXcd bad_trace(2, 2);
    bad_trace << 0.7, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, ArgumentError);

    MatrixXcd negative(2, 2);
    negative << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityMatrix{negative}, ArgumentError);
}

TEST_CASE("pure state projector") {
    VectorXcd psi(2);
    psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(psi);
    check_invariants(rho);
    CHECK(std::abs(rho.entries()(0, 1).real() - 0.5) < 1e-12);
    // rank one: rho^2 == rho
    CHECK((rho.entries() * rho.entries() - rho.entries()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("projection repairs drifted matrices") {
    MatrixXcd drifted(2, 2);
    drifted << 1.1, std::complex<double>(0.0, 0.2),
        std::complex<double>(0.0, -0.2), -0.05;
    const auto rho = fed::project_to_density(drifted);
    check_invariants(rho);

    Rng rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        MatrixXcd noise(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) noise(r, c) = {rng.normal(), rng.normal()};
        check_invariants(fed::project_to_density(noise + noise.adjoint()));
    }

    // Projection is idempotent on valid inputs.
    const auto valid = random_density(rng, 4);
    const auto again = fed::project_to_density(valid.entries());
    CHECK((again.entries() - valid.entries()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("riemannian average of copies returns the input") {
    Rng rng(31);
    const auto rho = random_density(rng, 2);
    const std::vector<DensityMatrix> states(4, rho);
    const auto avg = fed::riemannian_average(states);
    CHECK((avg.entries() - rho.entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("riemannian average of |0><0| and |1><1|") {
    VectorXcd zero(2), one(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    const std::vector<DensityMatrix> states{DensityMatrix::pure(zero),
                                            DensityMatrix::pure(one)};
    const auto avg = fed::riemannian_average(states);
    MatrixXcd expected(2, 2);
    expected << 0.5, 0.0, 0.0, 0.5;
    CHECK((avg.entries() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("riemannian average matches projected-gradient oracle") {
    Rng rng(77);
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(random_density(rng, 2));
    const auto avg = fed::riemannian_average(states);
    const auto oracle = pgd_frobenius_mean(states);
    CHECK((avg.entries() - oracle).cwiseAbs().maxCoeff() < 1e-6);
    check_invariants(avg);
}

TEST_CASE("riemannian average rejects dimension mismatch") {
    Rng rng(5);
    std::vector<DensityMatrix> states{random_density(rng, 2),
                                      random_density(rng, 4)};
    CHECK_THROWS_AS(fed::riemannian_average(states), ArgumentError);
    CHECK_THROWS_AS(fed::riemannian_average({}), ArgumentError);
}

TEST_CASE("schatten norms of known matrices") {
    MatrixXcd identity = MatrixXcd::Identity(2, 2);
    CHECK(fed::schatten_norm(identity, 1.0) == doctest::Approx(2.0));
    CHECK(fed::schatten_norm(identity, 2.0) ==
          doctest::Approx(std::sqrt(2.0)));

    MatrixXcd diag(2, 2);
    diag << 3.0, 0.0, 0.0, -4.0;  // singular values 3 and 4
    CHECK(fed::schatten_norm(diag, 1.0) == doctest::Approx(7.0));
    CHECK(fed::schatten_norm(diag, 2.0) == doctest::Approx(5.0));

    // q=2 equals the Frobenius norm on random matrices.
    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
        MatrixXcd m(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = {rng.normal(), rng.normal()};
        CHECK(fed::schatten_norm(m, 2.0) == doctest::Approx(m.norm()).epsilon(1e-10));
    }
}

TEST_CASE("schatten q=2 average equals the riemannian mean") {
    Rng rng(91);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<DensityMatrix> states;
        for (int i = 0; i < 2 + rep; ++i) states.push_back(random_density(rng, 2));
        const auto hs = fed::riemannian_average(states);
        const auto sch = fed::schatten_average(states, 2.0);
        CHECK((hs.entries() - sch.entries()).cwiseAbs().maxCoeff() < 1e-6);
        check_invariants(sch);
    }
}

TEST_CASE("schatten average of a single matrix is that matrix") {
    Rng rng(17);
    const auto rho = random_density(rng, 2);
    for (double q : {1.0, 2.0}) {
        const auto avg = fed::schatten_average(std::vector<DensityMatrix>{rho}, q);
        CHECK((avg.entries() - rho.entries()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("schatten q=1 pair objective matches a diagonal grid oracle") {
    VectorXcd zero(2), one(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    const std::vector<DensityMatrix> states{DensityMatrix::pure(zero),
                                            DensityMatrix::pure(one)};
    const auto avg = fed::schatten_average(states, 1.0);
    check_invariants(avg);

    auto objective = [&](const MatrixXcd& rho) {
        double total = 0.0;
        for (const auto& s : states) {
            const double d = fed::schatten_norm(rho - s.entries(), 1.0);
            total += d * d;
        }
        return total;
    };

    // Brute-force over diagonal candidates diag(p, 1-p); by symmetry the
    // minimizer of the pair objective is diagonal.
    double best = 1e300;
    for (int k = 0; k <= 10000; ++k) {
        const double p = k / 10000.0;
        MatrixXcd cand(2, 2);
        cand << p, 0.0, 0.0, 1.0 - p;
        best = std::min(best, objective(cand));
    }
    CHECK(objective(avg.entries()) <= best + 1e-6);
}

TEST_CASE("schatten average rejects unsupported q") {
    Rng rng(3);
    const std::vector<DensityMatrix> states{random_density(rng, 2)};
    CHECK_THROWS_AS(fed::schatten_average(states, 3.0), ArgumentError);
    CHECK_THROWS_AS(fed::schatten_average(states, 0.5), ArgumentError);
    CHECK_THROWS_AS(fed::schatten_average({}, 2.0), ArgumentError);
}

TEST_CASE("averages preserve invariants on two-qubit inputs") {
    Rng rng(404);
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 4; ++i) states.push_back(random_density(rng, 4));
    check_invariants(fed::riemannian_average(states));
    check_invariants(fed::schatten_average(states, 2.0));
    check_invariants(fed::schatten_average(states, 1.0));
}
