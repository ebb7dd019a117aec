#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// A feature matrix (rows are examples) with an optional label per row.
/// Labels are opaque strings; class ids are assigned by LabelEncoder.
struct Dataset {
    Eigen::MatrixXd features;                          // n x d
    std::optional<std::vector<std::string>> labels;    // length n when present
    std::vector<std::string> feature_names;            // length d (defaults f1..fd)

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index dims() const { return features.cols(); }
    bool labeled() const { return labels.has_value(); }
};

inline std::vector<std::string> default_feature_names(Eigen::Index d, const std::string& prefix = "f") {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) names.push_back(prefix + std::to_string(i + 1));
    return names;
}

inline void validate_dataset(const Dataset& ds, const std::string& name = "dataset") {
    if (ds.rows() < 1 || ds.dims() < 1)
        throw InputError(name + ": needs at least one row and one feature column");
    if (!ds.features.allFinite())
        throw InputError(name + ": features contain a non-finite value");
    if (ds.labels && static_cast<Eigen::Index>(ds.labels->size()) != ds.rows())
        throw InputError(name + ": label count does not match row count");
}

/// Labeled source + unlabeled target. Target ground truth, when present,
/// is carried for evaluation only and is never read by fit().
struct DomainPair {
    Dataset source;
    Dataset target;
    std::optional<std::vector<std::string>> target_truth;
};

inline void validate_pair(const DomainPair& pair) {
    validate_dataset(pair.source, "source");
    validate_dataset(pair.target, "target");
    if (pair.source.dims() != pair.target.dims())
        throw InputError("source and target feature dimensions differ ("
                         + std::to_string(pair.source.dims()) + " vs "
                         + std::to_string(pair.target.dims()) + ")");
}

enum class StandardizeMode { PerDomain, Pooled };

inline std::string to_string(StandardizeMode m) {
    return m == StandardizeMode::PerDomain ? "per-domain" : "pooled";
}

inline StandardizeMode standardize_mode_from_string(const std::string& s) {
    if (s == "per-domain") return StandardizeMode::PerDomain;
    if (s == "pooled") return StandardizeMode::Pooled;
    throw InputError("unknown standardize mode '" + s + "' (expected per-domain or pooled)");
}

/// Per-feature z-scoring transform. Population standard deviation;
/// columns whose std falls below a relative floor are centered only.
struct Scaler {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd std_dev;

    static Scaler fit(const Eigen::MatrixXd& x) {
        Scaler s;
        const double n = static_cast<double>(x.rows());
        s.mean = x.colwise().mean();
        Eigen::RowVectorXd var =
            (x.rowwise() - s.mean).array().square().colwise().sum() / n;
        s.std_dev = var.array().sqrt();
        return s;
    }

    bool degenerate(Eigen::Index col) const {
        return std_dev(col) < 1e-12 * (1.0 + std::abs(mean(col)));
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        if (x.cols() != mean.cols())
            throw InputError("scaler dimension mismatch");
        Eigen::MatrixXd out = x.rowwise() - mean;
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            if (!degenerate(j)) out.col(j) /= std_dev(j);
        }
        return out;
    }
};

struct StandardizedPair {
    DomainPair pair;
    Scaler source_scaler;
    Scaler target_scaler;  // equals source_scaler in pooled mode
};

inline StandardizedPair standardize_with_scalers(const DomainPair& in,
                                                 StandardizeMode mode = StandardizeMode::PerDomain) {
    validate_pair(in);
    StandardizedPair out;
    if (mode == StandardizeMode::PerDomain) {
        out.source_scaler = Scaler::fit(in.source.features);
        out.target_scaler = Scaler::fit(in.target.features);
    } else {
        Eigen::MatrixXd stacked(in.source.rows() + in.target.rows(), in.source.dims());
        stacked << in.source.features, in.target.features;
        out.source_scaler = Scaler::fit(stacked);
        out.target_scaler = out.source_scaler;
    }
    out.pair = in;
    out.pair.source.features = out.source_scaler.apply(in.source.features);
    out.pair.target.features = out.target_scaler.apply(in.target.features);
    return out;
}

/// Returns a new pair with each domain z-scored; inputs are untouched.
inline DomainPair standardize(const DomainPair& in,
                              StandardizeMode mode = StandardizeMode::PerDomain) {
    return standardize_with_scalers(in, mode).pair;
}

/// Maps opaque label strings to dense class ids 0..C-1 in order of first
/// appearance in the source labels, so class indexing is deterministic.
class LabelEncoder {
public:
    LabelEncoder() = default;

    static LabelEncoder from(const std::vector<std::string>& labels) {
        LabelEncoder enc;
        for (const auto& l : labels) {
            if (enc.index_.emplace(l, static_cast<int>(enc.classes_.size())).second)
                enc.classes_.push_back(l);
        }
        return enc;
    }

    int encode(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw InputError("unknown class label '" + label + "'");
        return it->second;
    }

    std::vector<int> encode(const std::vector<std::string>& labels) const {
        std::vector<int> out;
        out.reserve(labels.size());
        for (const auto& l : labels) out.push_back(encode(l));
        return out;
    }

    const std::string& decode(int id) const {
        if (id < 0 || id >= static_cast<int>(classes_.size()))
            throw InputError("class id " + std::to_string(id) + " out of range");
        return classes_[static_cast<std::size_t>(id)];
    }

    std::vector<std::string> decode(const std::vector<int>& ids) const {
        std::vector<std::string> out;
        out.reserve(ids.size());
        for (int id : ids) out.push_back(decode(id));
        return out;
    }

    int size() const { return static_cast<int>(classes_.size()); }
    const std::vector<std::string>& classes() const { return classes_; }

private:
    std::vector<std::string> classes_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace fuzzyadapt
