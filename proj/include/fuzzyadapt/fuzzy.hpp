#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fuzzyadapt/dataset.hpp"
#include "fuzzyadapt/errors.hpp"
#include "fuzzyadapt/varpart.hpp"

namespace fuzzyadapt {

/// Gaussian membership exp(-(x-c)^2 / (2*delta)). delta acts as a
/// variance-like width, not its square root.
inline double membership(double x, double c, double delta) {
    if (!(delta > 0.0)) throw InputError("membership: width must be positive");
    const double diff = x - c;
    return std::exp(-(diff * diff) / (2.0 * delta));
}

struct FiringLevels {
    Eigen::VectorXd raw;         // product of per-dimension memberships
    Eigen::VectorXd normalized;  // raw / sum(raw), sums to 1
};

/// Per-rule activation and its normalization. The products are evaluated
/// in log space with a max shift so high-dimensional inputs cannot
/// underflow every rule to zero; the result equals the direct formula.
inline FiringLevels firing_levels(const Eigen::VectorXd& x, const AntecedentParams& params) {
    const int k = params.rules();
    const int d = params.dims();
    if (x.size() != d) throw InputError("firing_levels: input dimension mismatch");

    Eigen::VectorXd log_raw(k);
    for (int r = 0; r < k; ++r) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            const double diff = x(i) - params.centers(r, i);
            acc -= diff * diff / (2.0 * params.widths(r, i));
        }
        log_raw(r) = acc;
    }

    FiringLevels out;
    out.raw = log_raw.array().exp();

    const double shift = log_raw.maxCoeff();
    Eigen::VectorXd shifted = (log_raw.array() - shift).exp();
    const double total = shifted.sum();
    if (total > 0.0 && std::isfinite(total)) {
        out.normalized = shifted / total;
    } else {
        // unreachable with finite inputs; kept as a guard
        out.normalized = Eigen::VectorXd::Constant(k, 1.0 / k);
    }
    return out;
}

/// Antecedent feature map: concatenation over rules of
/// normalized_firing[k] * [1, x^T]^T, rule-major with the bias first.
/// Output length K*(d+1).
inline Eigen::VectorXd fuzzy_map(const Eigen::VectorXd& x, const AntecedentParams& params) {
    const int k = params.rules();
    const int d = params.dims();
    const Eigen::VectorXd w = firing_levels(x, params).normalized;
    Eigen::VectorXd out(k * (d + 1));
    for (int r = 0; r < k; ++r) {
        out(r * (d + 1)) = w(r);
        out.segment(r * (d + 1) + 1, d) = w(r) * x;
    }
    return out;
}

/// Mapped data, one column per example; K*(d+1) x n. For every column the
/// bias rows sum to exactly one normalized firing distribution.
struct FuzzyDesignMatrix {
    Eigen::MatrixXd data;
    int rules = 0;
    int dims = 0;

    Eigen::Index count() const { return data.cols(); }
};

inline FuzzyDesignMatrix design_matrix(const Eigen::MatrixXd& features,
                                       const AntecedentParams& params) {
    if (static_cast<int>(features.cols()) != params.dims())
        throw InputError("design_matrix: feature dimension " + std::to_string(features.cols())
                         + " does not match antecedents (" + std::to_string(params.dims()) + ")");
    FuzzyDesignMatrix g;
    g.rules = params.rules();
    g.dims = params.dims();
    g.data.resize(params.rules() * (params.dims() + 1), features.rows());
    for (Eigen::Index j = 0; j < features.rows(); ++j)
        g.data.col(j) = fuzzy_map(features.row(j).transpose(), params);
    return g;
}

inline FuzzyDesignMatrix design_matrix(const Dataset& dataset, const AntecedentParams& params) {
    return design_matrix(dataset.features, params);
}

}  // namespace fuzzyadapt
