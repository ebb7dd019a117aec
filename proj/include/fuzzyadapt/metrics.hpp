#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// Fraction of positions where the two sequences agree.
template <typename T>
double evaluate(const std::vector<T>& predicted, const std::vector<T>& truth) {
    if (predicted.empty()) throw InputError("evaluate: empty input");
    if (predicted.size() != truth.size())
        throw InputError("evaluate: length mismatch (" + std::to_string(predicted.size()) + " vs "
                         + std::to_string(truth.size()) + ")");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

struct MmdEstimate {
    double marginal = 0.0;
    double conditional = 0.0;
};

/// Direct mean-difference estimates on already-transformed data (rows are
/// examples): marginal is the squared distance of the domain means,
/// conditional sums squared distances of class means over classes present
/// in both label sequences. This is the independent oracle the coefficient
/// matrices are checked against.
inline MmdEstimate empirical_mmd(const Eigen::MatrixXd& z_s, const Eigen::MatrixXd& z_t,
                                 const std::vector<int>* source_labels = nullptr,
                                 const std::vector<int>* target_labels = nullptr) {
    if (z_s.cols() != z_t.cols()) throw InputError("empirical_mmd: dimension mismatch");

    MmdEstimate out;
    const Eigen::RowVectorXd mean_s = z_s.colwise().mean();
    const Eigen::RowVectorXd mean_t = z_t.colwise().mean();
    out.marginal = (mean_s - mean_t).squaredNorm();

    if (source_labels && target_labels) {
        if (static_cast<Eigen::Index>(source_labels->size()) != z_s.rows()
            || static_cast<Eigen::Index>(target_labels->size()) != z_t.rows())
            throw InputError("empirical_mmd: label lengths do not match row counts");
        const int c_hi = std::max(
            source_labels->empty() ? -1 : *std::max_element(source_labels->begin(), source_labels->end()),
            target_labels->empty() ? -1 : *std::max_element(target_labels->begin(), target_labels->end()));
        for (int c = 0; c <= c_hi; ++c) {
            Eigen::RowVectorXd ms = Eigen::RowVectorXd::Zero(z_s.cols());
            Eigen::RowVectorXd mt = Eigen::RowVectorXd::Zero(z_s.cols());
            int ns = 0, nt = 0;
            for (Eigen::Index i = 0; i < z_s.rows(); ++i)
                if ((*source_labels)[static_cast<std::size_t>(i)] == c) { ms += z_s.row(i); ++ns; }
            for (Eigen::Index i = 0; i < z_t.rows(); ++i)
                if ((*target_labels)[static_cast<std::size_t>(i)] == c) { mt += z_t.row(i); ++nt; }
            if (ns == 0 || nt == 0) continue;
            out.conditional += (ms / ns - mt / nt).squaredNorm();
        }
    }
    return out;
}

}  // namespace fuzzyadapt
