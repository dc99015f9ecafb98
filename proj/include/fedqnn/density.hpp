#pragma once

#include <Eigen/Dense>
#include <span>

namespace fedqnn::fed {

// Hermitian, positive-semidefinite, trace-1 complex matrix. Construction and
// every averaging operation re-validate the invariants.
class DensityMatrix {
  public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPsdTol = 1e-9;

    // Validates the three invariants; throws ArgumentError on violation.
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    // Pure state |psi><psi| from a normalized amplitude vector.
    static DensityMatrix pure(const Eigen::VectorXcd& psi);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }

    double min_eigenvalue() const;

  private:
    Eigen::MatrixXcd entries_;
};

// Nearest density matrix to an arbitrary (near-Hermitian) input: hermitize,
// clip negative eigenvalues at zero, renormalize the trace to 1.
DensityMatrix project_to_density(const Eigen::MatrixXcd& m);

enum class DistanceMetric { HilbertSchmidt };

// Minimizer of sum_i d^2(rho, rho_i) over the density-matrix set. For the
// Hilbert-Schmidt metric this is the arithmetic mean in closed form,
// re-projected to absorb numerical drift.
DensityMatrix riemannian_average(std::span<const DensityMatrix> states,
                                 DistanceMetric metric = DistanceMetric::HilbertSchmidt);

// Schatten q-norm (sum of q-th powers of singular values)^(1/q).
double schatten_norm(const Eigen::MatrixXcd& m, double q);

// Minimizer of sum_i ||rho - rho_i||_q^2 over the density-matrix set, found
// by projected gradient/subgradient descent. Supports q in {1, 2}; for q = 2
// the objective is the squared-Frobenius sum, so the result matches
// riemannian_average within solver tolerance.
DensityMatrix schatten_average(std::span<const DensityMatrix> states, double q);

}  // namespace fedqnn::fed
