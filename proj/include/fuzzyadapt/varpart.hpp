#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// Per-rule Gaussian membership parameters for one domain: rule centers
/// and variance-like kernel widths, both K x d. Widths are strictly
/// positive (scaled into [1, 10]).
struct AntecedentParams {
    Eigen::MatrixXd centers;
    Eigen::MatrixXd widths;

    int rules() const { return static_cast<int>(centers.rows()); }
    int dims() const { return static_cast<int>(centers.cols()); }
};

struct VarPartResult {
    Eigen::MatrixXd centers;      // K x d cluster means
    std::vector<int> assignment;  // length n, cluster index per row
};

/// Deterministic divisive clustering. Repeatedly splits the cluster with
/// the largest within-cluster SSE at the mean of its highest-variance
/// dimension until K clusters exist. Ties pick the lowest index. A
/// cluster of identical points is split in half by stable input order;
/// a singleton that must split duplicates its center into an empty
/// cluster. Identical inputs always give identical outputs.
inline VarPartResult var_part(const Eigen::MatrixXd& features, int k) {
    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (k < 1) throw InputError("var_part: cluster count must be >= 1, got " + std::to_string(k));
    if (k > n)
        throw InputError("var_part: cluster count " + std::to_string(k)
                         + " exceeds the number of rows " + std::to_string(n));
    if (!features.allFinite()) throw InputError("var_part: features contain a non-finite value");

    struct Cluster {
        std::vector<int> members;   // ascending input order
        Eigen::RowVectorXd center;  // mean, kept valid for empty clusters too
        double sse = 0.0;
    };

    auto refresh = [&](Cluster& c) {
        if (c.members.empty()) {
            c.sse = 0.0;  // center stays inherited from the parent
            return;
        }
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
        for (int i : c.members) mean += features.row(i);
        mean /= static_cast<double>(c.members.size());
        double sse = 0.0;
        for (int i : c.members) sse += (features.row(i) - mean).squaredNorm();
        c.center = mean;
        c.sse = sse;
    };

    std::vector<Cluster> clusters(1);
    clusters[0].members.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) clusters[0].members[static_cast<std::size_t>(i)] = static_cast<int>(i);
    refresh(clusters[0]);

    while (static_cast<int>(clusters.size()) < k) {
        std::size_t pick = 0;
        for (std::size_t j = 1; j < clusters.size(); ++j)
            if (clusters[j].sse > clusters[pick].sse) pick = j;

        Cluster& parent = clusters[pick];
        Cluster child1, child2;
        child1.center = parent.center;
        child2.center = parent.center;

        if (parent.sse > 0.0) {
            // variance per dimension, split at the mean of the widest one
            Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(d);
            for (int i : parent.members)
                var += (features.row(i) - parent.center).array().square().matrix();
            Eigen::Index dp = 0;
            for (Eigen::Index p = 1; p < d; ++p)
                if (var(p) > var(dp)) dp = p;
            const double mu = parent.center(dp);
            for (int i : parent.members)
                (features(i, dp) <= mu ? child1 : child2).members.push_back(i);
        } else if (parent.members.size() >= 2) {
            // duplicate points: split in half by stable input order
            const std::size_t half = (parent.members.size() + 1) / 2;
            child1.members.assign(parent.members.begin(),
                                  parent.members.begin() + static_cast<std::ptrdiff_t>(half));
            child2.members.assign(parent.members.begin() + static_cast<std::ptrdiff_t>(half),
                                  parent.members.end());
        } else {
            // forced split of a singleton or empty cluster: keep the
            // members, emit an empty sibling with the same center
            child1.members = parent.members;
        }

        refresh(child1);
        refresh(child2);
        clusters[pick] = std::move(child1);
        clusters.push_back(std::move(child2));
    }

    VarPartResult out;
    out.centers.resize(k, d);
    out.assignment.assign(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < k; ++j) {
        out.centers.row(j) = clusters[static_cast<std::size_t>(j)].center;
        for (int i : clusters[static_cast<std::size_t>(j)].members)
            out.assignment[static_cast<std::size_t>(i)] = j;
    }
    return out;
}

/// Raw width per rule and dimension is the sum of squared deviations of
/// every example (not just the rule's cluster) from the rule center.
/// Each dimension's K raw widths are then mapped affinely onto [1, 10];
/// a dimension whose raw widths coincide maps to the midpoint 5.5.
inline Eigen::MatrixXd kernel_widths(const Eigen::MatrixXd& features,
                                     const Eigen::MatrixXd& centers) {
    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    const Eigen::Index k = centers.rows();
    if (n < 2) throw InputError("kernel_widths: need at least 2 examples");
    if (centers.cols() != d) throw InputError("kernel_widths: center/feature dimension mismatch");
    if (!centers.allFinite()) throw InputError("kernel_widths: centers contain a non-finite value");

    Eigen::MatrixXd raw(k, d);
    for (Eigen::Index r = 0; r < k; ++r)
        raw.row(r) = (features.rowwise() - centers.row(r)).array().square().colwise().sum();

    Eigen::MatrixXd scaled(k, d);
    for (Eigen::Index p = 0; p < d; ++p) {
        const double lo = raw.col(p).minCoeff();
        const double hi = raw.col(p).maxCoeff();
        if (hi == lo) {
            scaled.col(p).setConstant(5.5);
        } else {
            scaled.col(p) = 1.0 + 9.0 * (raw.col(p).array() - lo) / (hi - lo);
        }
    }
    return scaled;
}

/// Var-Part centers plus scaled kernel widths for one domain.
inline AntecedentParams learn_antecedents(const Eigen::MatrixXd& features, int k) {
    AntecedentParams params;
    params.centers = var_part(features, k).centers;
    params.widths = kernel_widths(features, params.centers);
    return params;
}

}  // namespace fuzzyadapt
