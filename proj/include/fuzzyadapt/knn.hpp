#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// 1-nearest-neighbor by squared Euclidean distance; rows are examples.
/// Equidistant neighbors resolve to the lowest training-row index.
inline std::vector<int> knn1_predict(const Eigen::MatrixXd& train,
                                     const std::vector<int>& train_labels,
                                     const Eigen::MatrixXd& test) {
    if (train.rows() < 1) throw InputError("knn1_predict: empty training set");
    if (static_cast<Eigen::Index>(train_labels.size()) != train.rows())
        throw InputError("knn1_predict: label count does not match training rows");
    if (test.cols() != train.cols())
        throw InputError("knn1_predict: feature dimension mismatch");

    const Eigen::VectorXd train_sq = train.rowwise().squaredNorm();
    const Eigen::MatrixXd cross = test * train.transpose();  // n_test x n_train

    std::vector<int> out(static_cast<std::size_t>(test.rows()));
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
        Eigen::Index best = 0;
        double best_d2 = train_sq(0) - 2.0 * cross(i, 0);
        for (Eigen::Index j = 1; j < train.rows(); ++j) {
            const double d2 = train_sq(j) - 2.0 * cross(i, j);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = j;
            }
        }
        out[static_cast<std::size_t>(i)] = train_labels[static_cast<std::size_t>(best)];
    }
    return out;
}

}  // namespace fuzzyadapt
