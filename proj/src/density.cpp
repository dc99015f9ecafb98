#include "fedqnn/density.hpp"

#include <cmath>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::fed {

namespace {

void check_same_dims(std::span<const DensityMatrix> states) {
    if (states.empty()) {
        throw ArgumentError("no density matrices to average");
    }
    const auto d = states.front().dim();
    for (const auto& s : states) {
        if (s.dim() != d) {
            throw ArgumentError("density matrix dimension mismatch");
        }
    }
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw ArgumentError("density matrix must be square and nonempty");
    }
    const double herm_err =
        (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err >= kHermitianTol) {
        throw ArgumentError("matrix not Hermitian (max deviation " +
                            std::to_string(herm_err) + ")");
    }
    const double trace_err = std::abs(entries_.trace().real() - 1.0) +
                             std::abs(entries_.trace().imag());
    if (trace_err >= kTraceTol) {
        throw ArgumentError("matrix trace not 1");
    }
    if (min_eigenvalue() < -kPsdTol) {
        throw ArgumentError("matrix not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > 1e-10) {
        throw ArgumentError("pure-state vector must be normalized");
    }
    return DensityMatrix(psi * psi.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix project_to_density(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ArgumentError("projection input must be square and nonempty");
    }
    const Eigen::MatrixXcd h = hermitize(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
    const double total = evals.sum();
    if (total <= 0.0) {
        throw ArgumentError("projection input has no positive spectral weight");
    }
    evals /= total;
    const Eigen::MatrixXcd out = solver.eigenvectors() *
                                 evals.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                                 solver.eigenvectors().adjoint();
    return DensityMatrix(hermitize(out));
}

DensityMatrix riemannian_average(std::span<const DensityMatrix> states,
                                 DistanceMetric metric) {
    check_same_dims(states);
    switch (metric) {
        case DistanceMetric::HilbertSchmidt: {
            Eigen::MatrixXcd sum =
                Eigen::MatrixXcd::Zero(states.front().dim(), states.front().dim());
            for (const auto& s : states) sum += s.entries();
            sum /= static_cast<double>(states.size());
            return project_to_density(sum);
        }
    }
    throw ArgumentError("unsupported metric");
}

double schatten_norm(const Eigen::MatrixXcd& m, double q) {
    if (q < 1.0) throw ArgumentError("Schatten norm requires q >= 1");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        sum += std::pow(svd.singularValues()(i), q);
    }
    return std::pow(sum, 1.0 / q);
}

namespace {

// Gradient of ||A||_q^2 for Hermitian A. q=2: 2A. q=1: 2||A||_1 * U sign(L) U^+
// (a subgradient where A is singular).
Eigen::MatrixXcd norm_sq_subgradient(const Eigen::MatrixXcd& a, double q) {
    if (q == 2.0) return 2.0 * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    Eigen::VectorXd signs(solver.eigenvalues().size());
    double trace_norm = 0.0;
    for (Eigen::Index i = 0; i < signs.size(); ++i) {
        const double ev = solver.eigenvalues()(i);
        signs(i) = (ev > 0.0) - (ev < 0.0);
        trace_norm += std::abs(ev);
    }
    const Eigen::MatrixXcd sign_matrix =
        solver.eigenvectors() *
        signs.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
        solver.eigenvectors().adjoint();
    return 2.0 * trace_norm * sign_matrix;
}

double objective(const Eigen::MatrixXcd& rho,
                 std::span<const DensityMatrix> states, double q) {
    double total = 0.0;
    for (const auto& s : states) {
        const double d = schatten_norm(rho - s.entries(), q);
        total += d * d;
    }
    return total;
}

}  // namespace

DensityMatrix schatten_average(std::span<const DensityMatrix> states, double q) {
    check_same_dims(states);
    if (q != 1.0 && q != 2.0) {
        throw ArgumentError("schatten_average supports q in {1, 2} only");
    }
    if (states.size() == 1) return states.front();

    // Start from the maximally mixed state; project after every step.
    const Eigen::Index d = states.front().dim();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d, d) /
                           static_cast<double>(d);
    const double base_step = 0.5 / static_cast<double>(states.size());
    double best_obj = objective(rho, states, q);
    Eigen::MatrixXcd best = rho;

    for (int it = 1; it <= 4000; ++it) {
        Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(d, d);
        for (const auto& s : states) {
            grad += norm_sq_subgradient(rho - s.entries(), q);
        }
        const double step = (q == 2.0)
                                ? base_step
                                : base_step / std::sqrt(static_cast<double>(it));
        rho = project_to_density(rho - step * grad).entries();
        const double obj = objective(rho, states, q);
        if (obj < best_obj - 1e-14) {
            best_obj = obj;
            best = rho;
        } else if (q == 2.0 && std::abs(obj - best_obj) < 1e-16 && it > 50) {
            break;
        }
    }
    return DensityMatrix(best);
}

}  // namespace fedqnn::fed
