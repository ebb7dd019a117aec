#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/dataset.hpp"
#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

namespace detail {

// Box-Muller over mt19937. std::normal_distribution is implementation
// defined, so the stream is spelled out to keep outputs identical on
// every platform.
class GaussianStream {
public:
    explicit GaussianStream(std::uint32_t seed) : gen_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform01() {
        // strictly inside (0,1) so log() stays finite
        return (static_cast<double>(gen_()) + 0.5) * (1.0 / 4294967296.0);
    }

    std::mt19937 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace detail

/// Two-class, two-dimensional domain-shift generator: unit-variance
/// Gaussian blobs at (-2.5, 0) and (+2.5, 0). The target is a fresh draw
/// from the same blobs, rotated about its own centroid and translated.
/// Target ground truth rides in the pair's side channel. Pure function of
/// its arguments: the same seed reproduces the pair bit for bit.
inline DomainPair make_synthetic_shift(std::uint32_t seed, int n_per_class,
                                       const Eigen::Vector2d& shift,
                                       double rotation_angle) {
    if (n_per_class < 1)
        throw InputError("n_per_class must be positive, got " + std::to_string(n_per_class));

    constexpr double kHalfGap = 2.5;
    const Eigen::Vector2d class_means[2] = {{-kHalfGap, 0.0}, {kHalfGap, 0.0}};

    detail::GaussianStream rng(seed);
    auto draw_domain = [&](Eigen::MatrixXd& x, std::vector<std::string>& y) {
        x.resize(2 * n_per_class, 2);
        y.clear();
        y.reserve(static_cast<std::size_t>(2 * n_per_class));
        Eigen::Index row = 0;
        for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < n_per_class; ++i, ++row) {
                x(row, 0) = class_means[c].x() + rng.next();
                x(row, 1) = class_means[c].y() + rng.next();
                y.push_back(std::to_string(c));
            }
        }
    };

    DomainPair pair;
    std::vector<std::string> source_labels, target_labels;
    draw_domain(pair.source.features, source_labels);
    draw_domain(pair.target.features, target_labels);

    const Eigen::RowVector2d centroid = pair.target.features.colwise().mean();
    Eigen::Matrix2d rot;
    rot << std::cos(rotation_angle), -std::sin(rotation_angle),
           std::sin(rotation_angle),  std::cos(rotation_angle);
    pair.target.features =
        ((pair.target.features.rowwise() - centroid) * rot.transpose()).rowwise()
        + (centroid + shift.transpose());

    pair.source.labels = std::move(source_labels);
    pair.source.feature_names = default_feature_names(2);
    pair.target.feature_names = default_feature_names(2);
    pair.target_truth = std::move(target_labels);
    return pair;
}

}  // namespace fuzzyadapt
