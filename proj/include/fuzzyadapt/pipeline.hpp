#pragma once

#include <atomic>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/dataset.hpp"
#include "fuzzyadapt/errors.hpp"
#include "fuzzyadapt/fuzzy.hpp"
#include "fuzzyadapt/knn.hpp"
#include "fuzzyadapt/metrics.hpp"
#include "fuzzyadapt/objective.hpp"
#include "fuzzyadapt/solver.hpp"
#include "fuzzyadapt/varpart.hpp"

namespace fuzzyadapt {

struct AdaptationConfig {
    int rules = 3;          // fuzzy rule count K
    int dim = 20;           // feature-space dimension m
    double alpha = 0.1;     // 2-norm regularization
    double beta = 0.01;     // discriminant terms
    double lambda = 0.01;   // target variance term
    int iters = 5;          // joint adaptation iterations T
    StandardizeMode standardize = StandardizeMode::PerDomain;

    void validate(Eigen::Index d) const {
        if (rules < 1) throw InputError("config: rules must be >= 1");
        const int limit = rules * (static_cast<int>(d) + 1);
        if (dim < 1 || dim > limit)
            throw InputError("config: dim must lie in [1, " + std::to_string(limit)
                             + "] for rules=" + std::to_string(rules) + ", d=" + std::to_string(d));
        if (!(alpha > 0.0)) throw InputError("config: alpha must satisfy alpha > 0");
        if (beta < 0.0) throw InputError("config: beta must be >= 0");
        if (lambda < 0.0) throw InputError("config: lambda must be >= 0");
        if (iters < 1) throw InputError("config: iters must be >= 1");
    }
};

struct IterationDiagnostics {
    double objective = 0.0;       // ratio value at the solved projection
    double mmd_marginal = 0.0;    // on transformed data
    double mmd_conditional = 0.0; // on transformed data, current pseudo-labels
    int pseudo_label_changes = 0;
    int active_classes = 0;       // classes present in both domains this pass
};

enum class Domain { Source, Target };

/// Everything needed to transform new examples from either domain:
/// per-domain antecedents and scalers, the shared consequent projection,
/// and the training configuration. Immutable after fit.
struct AdaptationModel {
    AntecedentParams source_antecedents;
    AntecedentParams target_antecedents;
    Eigen::MatrixXd projection;  // K(d+1) x m
    AdaptationConfig config;
    Scaler source_scaler;
    Scaler target_scaler;
    std::vector<std::string> classes;             // encoder order
    std::vector<std::string> target_predictions;  // final pseudo-labels
    std::vector<IterationDiagnostics> diagnostics;
};

/// Maps a dataset into the learned feature space: standardize with the
/// stored scaler, apply the domain's fuzzy map, project. Returns n x m.
inline Eigen::MatrixXd transform(const AdaptationModel& model, const Dataset& dataset,
                                 Domain domain) {
    const AntecedentParams& ante =
        domain == Domain::Source ? model.source_antecedents : model.target_antecedents;
    const Scaler& scaler = domain == Domain::Source ? model.source_scaler : model.target_scaler;
    if (dataset.dims() != ante.dims())
        throw InputError("transform: dataset dimension " + std::to_string(dataset.dims())
                         + " does not match model (" + std::to_string(ante.dims()) + ")");
    const Eigen::MatrixXd standardized = scaler.apply(dataset.features);
    const FuzzyDesignMatrix g = design_matrix(standardized, ante);
    return (model.projection.transpose() * g.data).transpose();
}

/// Full training loop: antecedents via deterministic clustering, fuzzy
/// design matrices, then T rounds of distribution matching where the
/// projection is re-solved and the target pseudo-labels are refreshed by
/// a 1NN classifier in the current feature space.
inline AdaptationModel fit(const DomainPair& pair, const AdaptationConfig& config) {
    validate_pair(pair);
    if (!pair.source.labeled()) throw InputError("fit: source dataset must be labeled");
    config.validate(pair.source.dims());

    AdaptationModel model;
    model.config = config;

    StandardizedPair std_pair = standardize_with_scalers(pair, config.standardize);
    model.source_scaler = std_pair.source_scaler;
    model.target_scaler = std_pair.target_scaler;
    const Eigen::MatrixXd& xs = std_pair.pair.source.features;
    const Eigen::MatrixXd& xt = std_pair.pair.target.features;

    LabelEncoder encoder = LabelEncoder::from(*pair.source.labels);
    if (encoder.size() < 2) throw InputError("fit: source must contain at least two classes");
    model.classes = encoder.classes();
    const std::vector<int> ys = encoder.encode(*pair.source.labels);

    model.source_antecedents = learn_antecedents(xs, config.rules);
    model.target_antecedents = learn_antecedents(xt, config.rules);

    const FuzzyDesignMatrix gs = design_matrix(xs, model.source_antecedents);
    const FuzzyDesignMatrix gt = design_matrix(xt, model.target_antecedents);
    Eigen::MatrixXd gx(gs.data.rows(), gs.data.cols() + gt.data.cols());
    gx << gs.data, gt.data;

    const int n_s = static_cast<int>(xs.rows());
    const int n_t = static_cast<int>(xt.rows());

    // initial pseudo-labels: 1NN on the standardized raw features
    std::vector<int> pseudo = knn1_predict(xs, ys, xt);

    // loop constants: the marginal coefficients and the source scatters
    const MmdMatrix marginal = mmd_marginal_matrix(n_s, n_t);
    const ScatterSet scatter = compute_scatters(gs.data, ys, n_t);

    model.diagnostics.reserve(static_cast<std::size_t>(config.iters));
    for (int t = 0; t < config.iters; ++t) {
        std::vector<MmdMatrix> conditionals;
        for (int c = 0; c < encoder.size(); ++c) {
            if (auto mc = mmd_conditional_matrix(ys, pseudo, c)) conditionals.push_back(std::move(*mc));
        }

        const ObjectivePair objective = assemble_objective(
            gx, gt.data, marginal, conditionals, scatter, config.alpha, config.beta, config.lambda);
        const EigenSolution solution = generalized_eig_smallest(objective, config.dim);
        model.projection = solution.p;

        const Eigen::MatrixXd zs = (model.projection.transpose() * gs.data).transpose();
        const Eigen::MatrixXd zt = (model.projection.transpose() * gt.data).transpose();
        const std::vector<int> updated = knn1_predict(zs, ys, zt);

        IterationDiagnostics diag;
        diag.objective = objective_value(objective, model.projection);
        const MmdEstimate mmd = empirical_mmd(zs, zt, &ys, &updated);
        diag.mmd_marginal = mmd.marginal;
        diag.mmd_conditional = mmd.conditional;
        int changes = 0;
        for (std::size_t i = 0; i < updated.size(); ++i)
            if (updated[i] != pseudo[i]) ++changes;
        diag.pseudo_label_changes = changes;
        std::set<int> present(updated.begin(), updated.end());
        int active = 0;
        for (int c = 0; c < encoder.size(); ++c)
            if (present.count(c)) ++active;
        diag.active_classes = active;
        model.diagnostics.push_back(diag);

        pseudo = updated;
    }

    model.target_predictions = encoder.decode(pseudo);
    return model;
}

struct Baselines {
    double knn_raw = 0.0;
    double knn_pca = 0.0;
};

/// Reference accuracies on the standardized pair: plain 1NN, and 1NN
/// after a joint PCA projection of both domains.
inline Baselines compute_baselines(const DomainPair& pair, const std::vector<std::string>& truth,
                                   StandardizeMode mode, int pca_dim) {
    DomainPair std_pair = standardize(pair, mode);
    LabelEncoder encoder = LabelEncoder::from(*pair.source.labels);
    const std::vector<int> ys = encoder.encode(*pair.source.labels);
    const std::vector<int> yt = encoder.encode(truth);

    Baselines out;
    out.knn_raw = evaluate(knn1_predict(std_pair.source.features, ys, std_pair.target.features), yt);

    const Eigen::Index n_s = std_pair.source.rows();
    Eigen::MatrixXd stacked(n_s + std_pair.target.rows(), std_pair.source.dims());
    stacked << std_pair.source.features, std_pair.target.features;
    const int m = std::min<int>(pca_dim, static_cast<int>(std::min(stacked.rows(), stacked.cols())));
    const Eigen::MatrixXd projected = pca_project(stacked, std::max(1, m));
    out.knn_pca = evaluate(
        knn1_predict(projected.topRows(n_s), ys, projected.bottomRows(std_pair.target.rows())), yt);
    return out;
}

struct GridSpec {
    std::vector<int> rules{3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> dims{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> alphas{0.01, 0.1, 1.0, 10.0, 100.0};
    std::vector<double> betas{0.01, 0.1, 1.0, 10.0, 100.0};
    std::vector<double> lambdas{0.01, 0.1, 1.0, 10.0, 100.0};
    int iters = 5;
    StandardizeMode standardize = StandardizeMode::PerDomain;
};

struct GridResult {
    AdaptationConfig config;
    double objective = 0.0;              // final-iteration ratio value
    std::optional<double> accuracy;      // vs ground truth when available
};

/// Enumerates the grid in canonical order (rules, dim, alpha, beta,
/// lambda). Dimensions above K(d+1) are dropped; if none survive for a
/// rule count, K(d+1) itself is used. Runs are independent, so jobs > 1
/// splits them across threads without changing any result.
inline std::vector<GridResult> grid_search(const DomainPair& pair, const GridSpec& spec,
                                           const std::optional<std::vector<std::string>>& truth,
                                           int jobs = 1) {
    std::vector<AdaptationConfig> configs;
    const int d = static_cast<int>(pair.source.dims());
    for (int k : spec.rules) {
        std::vector<int> dims;
        for (int m : spec.dims)
            if (m >= 1 && m <= k * (d + 1)) dims.push_back(m);
        if (dims.empty()) dims.push_back(k * (d + 1));
        for (int m : dims)
            for (double a : spec.alphas)
                for (double b : spec.betas)
                    for (double l : spec.lambdas) {
                        AdaptationConfig cfg;
                        cfg.rules = k;
                        cfg.dim = m;
                        cfg.alpha = a;
                        cfg.beta = b;
                        cfg.lambda = l;
                        cfg.iters = spec.iters;
                        cfg.standardize = spec.standardize;
                        configs.push_back(cfg);
                    }
    }

    std::vector<GridResult> results(configs.size());
    auto run_one = [&](std::size_t i) {
        GridResult r;
        r.config = configs[i];
        const AdaptationModel model = fit(pair, configs[i]);
        r.objective = model.diagnostics.back().objective;
        if (truth) r.accuracy = evaluate(model.target_predictions, *truth);
        results[i] = std::move(r);
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1))
                run_one(i);
        };
        std::vector<std::thread> pool;
        const int count = std::min<int>(jobs, static_cast<int>(configs.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

/// Best grid entry: highest accuracy when ground truth was supplied,
/// otherwise lowest final objective. Ties keep the earliest (canonical)
/// configuration.
inline std::size_t best_grid_index(const std::vector<GridResult>& results) {
    if (results.empty()) throw InputError("best_grid_index: empty grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].accuracy.has_value()) {
            if (*results[i].accuracy > *results[best].accuracy) best = i;
        } else if (results[i].objective < results[best].objective) {
            best = i;
        }
    }
    return best;
}

}  // namespace fuzzyadapt
