#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"
#include "fuzzyadapt/objective.hpp"

namespace fuzzyadapt {

/// The m smallest generalized eigenpairs of a p = phi * b_reg p.
/// Columns of p are b_reg-orthonormal; phi is non-decreasing. deficient
/// counts trailing directions whose pencil mass lies almost entirely in
/// the epsilon regularizer (requested dimension beyond the numerical
/// rank of b).
struct EigenSolution {
    Eigen::MatrixXd p;
    Eigen::VectorXd phi;
    int deficient = 0;
};

/// Regularizer added to b so the pencil is symmetric-definite.
inline double pencil_epsilon(const Eigen::MatrixXd& b) {
    const double tr = b.trace();
    if (tr > 0.0) return 1e-9 * tr / static_cast<double>(b.rows());
    return 1e-9;
}

/// Solves a p = phi (b + eps I) p for the m smallest phi. The definite
/// matrix a is the factorized side: the routine solves
/// b_reg q = psi a q for the m largest psi and maps phi = 1/psi, which
/// never factorizes the possibly singular b. Eigenvector signs follow the
/// largest-magnitude-entry-positive rule so results are reproducible.
inline EigenSolution generalized_eig_smallest(const ObjectivePair& pair, int m,
                                              std::optional<double> epsilon = std::nullopt) {
    const Eigen::Index dim = pair.a.rows();
    if (pair.a.cols() != dim || pair.b.rows() != dim || pair.b.cols() != dim)
        throw InputError("generalized_eig_smallest: pencil matrices must be square and equal-sized");
    if (m < 1 || m > dim)
        throw InputError("generalized_eig_smallest: requested dimension " + std::to_string(m)
                         + " out of range [1, " + std::to_string(dim) + "]");

    const double eps = epsilon.value_or(pencil_epsilon(pair.b));
    Eigen::MatrixXd b_reg = pair.b + eps * Eigen::MatrixXd::Identity(dim, dim);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(b_reg, pair.a);
    if (solver.info() != Eigen::Success) {
        const double min_eig =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(pair.a, Eigen::EigenvaluesOnly)
                .eigenvalues()
                .minCoeff();
        throw NumericError("generalized_eig_smallest: factorization failed; matrix is not "
                           "numerically definite (minimum eigenvalue estimate "
                           + std::to_string(min_eig) + ")");
    }

    // psi ascending; the largest psi are the smallest phi = 1/psi
    const Eigen::VectorXd psi = solver.eigenvalues();
    const Eigen::MatrixXd q = solver.eigenvectors();  // q^T a q = I

    const double psi_floor = 16.0 * eps * std::max(1.0, psi.cwiseAbs().maxCoeff());

    EigenSolution out;
    out.p.resize(dim, m);
    out.phi.resize(m);
    for (int i = 0; i < m; ++i) {
        const Eigen::Index src = dim - 1 - i;
        const double ps = psi(src);
        Eigen::VectorXd vec = q.col(src);
        const double mass = vec.dot(b_reg * vec);  // equals ps up to roundoff
        if (mass > 0.0) vec /= std::sqrt(mass);
        if (ps <= psi_floor) ++out.deficient;
        out.phi(i) = 1.0 / ps;

        Eigen::Index arg = 0;
        for (Eigen::Index r = 1; r < dim; ++r)
            if (std::abs(vec(r)) > std::abs(vec(arg))) arg = r;
        if (vec(arg) < 0.0) vec = -vec;
        out.p.col(i) = vec;
    }
    return out;
}

/// Ratio Tr(p^T a p) / Tr(p^T b_reg p); at an eigenvector of the pencil
/// this is its eigenvalue, and it is invariant to rescaling p.
inline double objective_value(const ObjectivePair& pair, const Eigen::MatrixXd& p,
                              std::optional<double> epsilon = std::nullopt) {
    if (p.rows() != pair.a.rows())
        throw InputError("objective_value: projection rows do not match the pencil dimension");
    const double eps = epsilon.value_or(pencil_epsilon(pair.b));
    const double num = (p.transpose() * pair.a * p).trace();
    const double den = (p.transpose() * pair.b * p).trace() + eps * p.squaredNorm();
    if (den == 0.0) throw NumericError("objective_value: zero denominator");
    return num / den;
}

}  // namespace fuzzyadapt
