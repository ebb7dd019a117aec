#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// Projects rows onto the m leading principal directions of the centered
/// data. Component signs follow the largest-magnitude-entry-positive rule.
inline Eigen::MatrixXd pca_project(const Eigen::MatrixXd& features, int m) {
    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (m < 1 || m > std::min(n, d))
        throw InputError("pca_project: requested dimension " + std::to_string(m)
                         + " out of range [1, " + std::to_string(std::min(n, d)) + "]");

    const Eigen::RowVectorXd mean = features.colwise().mean();
    const Eigen::MatrixXd centered = features.rowwise() - mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw NumericError("pca_project: eigendecomposition failed");

    Eigen::MatrixXd basis(d, m);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - i);  // descending variance
        Eigen::Index arg = 0;
        for (Eigen::Index r = 1; r < d; ++r)
            if (std::abs(v(r)) > std::abs(v(arg))) arg = r;
        if (v(arg) < 0.0) v = -v;
        basis.col(i) = v;
    }
    return centered * basis;
}

}  // namespace fuzzyadapt
