#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

/// Coefficient matrix of an empirical squared mean discrepancy over the
/// stacked source+target sample: symmetric, PSD, rows sum to zero.
struct MmdMatrix {
    enum class Kind { Marginal, Conditional };
    Eigen::MatrixXd data;  // (n_s + n_t) x (n_s + n_t)
    Kind kind = Kind::Marginal;
    int class_id = -1;  // meaningful for Kind::Conditional
};

/// Marginal coefficient matrix: 1/n_s^2 on the source block, 1/n_t^2 on
/// the target block, -1/(n_s n_t) across.
inline MmdMatrix mmd_marginal_matrix(int n_s, int n_t) {
    if (n_s < 1 || n_t < 1) throw InputError("mmd_marginal_matrix: sample counts must be positive");
    const int n = n_s + n_t;
    MmdMatrix m;
    m.kind = MmdMatrix::Kind::Marginal;
    m.data.setZero(n, n);
    m.data.topLeftCorner(n_s, n_s).setConstant(1.0 / (static_cast<double>(n_s) * n_s));
    m.data.bottomRightCorner(n_t, n_t).setConstant(1.0 / (static_cast<double>(n_t) * n_t));
    m.data.topRightCorner(n_s, n_t).setConstant(-1.0 / (static_cast<double>(n_s) * n_t));
    m.data.bottomLeftCorner(n_t, n_s).setConstant(-1.0 / (static_cast<double>(n_s) * n_t));
    return m;
}

/// Class-conditional coefficient matrix over class-c members, with the
/// cross-domain entries negative so that the quadratic form equals the
/// squared distance of class means. Returns nullopt when the class is
/// absent from either side; the caller simply omits that class.
inline std::optional<MmdMatrix> mmd_conditional_matrix(const std::vector<int>& source_labels,
                                                       const std::vector<int>& target_pseudo,
                                                       int cls) {
    std::vector<int> s_idx, t_idx;
    for (std::size_t i = 0; i < source_labels.size(); ++i)
        if (source_labels[i] == cls) s_idx.push_back(static_cast<int>(i));
    const int n_s = static_cast<int>(source_labels.size());
    for (std::size_t j = 0; j < target_pseudo.size(); ++j)
        if (target_pseudo[j] == cls) t_idx.push_back(n_s + static_cast<int>(j));
    if (s_idx.empty() || t_idx.empty()) return std::nullopt;

    const int n = n_s + static_cast<int>(target_pseudo.size());
    const double ns_c = static_cast<double>(s_idx.size());
    const double nt_c = static_cast<double>(t_idx.size());

    MmdMatrix m;
    m.kind = MmdMatrix::Kind::Conditional;
    m.class_id = cls;
    m.data.setZero(n, n);
    for (int a : s_idx)
        for (int b : s_idx) m.data(a, b) = 1.0 / (ns_c * ns_c);
    for (int a : t_idx)
        for (int b : t_idx) m.data(a, b) = 1.0 / (nt_c * nt_c);
    for (int a : s_idx)
        for (int b : t_idx) {
            m.data(a, b) = -1.0 / (ns_c * nt_c);
            m.data(b, a) = -1.0 / (ns_c * nt_c);
        }
    return m;
}

/// H = I - (1/n) 1 1^T; idempotent column-centering projector.
inline Eigen::MatrixXd centering_matrix(int n) {
    if (n < 1) throw InputError("centering_matrix: size must be >= 1");
    return Eigen::MatrixXd::Identity(n, n)
         - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

struct BetweenScatter {
    Eigen::MatrixXd matrix;
    bool single_class = false;  // set when only one class is present
};

/// sum_c n_c (m_c - m)(m_c - m)^T over the columns of g grouped by label.
inline BetweenScatter between_scatter(const Eigen::MatrixXd& g, const std::vector<int>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != g.cols())
        throw InputError("between_scatter: label count does not match column count");
    const int c_max = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());

    BetweenScatter out;
    out.matrix.setZero(g.rows(), g.rows());
    const Eigen::VectorXd grand = g.rowwise().mean();
    int present = 0;
    for (int c = 0; c <= c_max; ++c) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(g.rows());
        int count = 0;
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == c) {
                mean += g.col(static_cast<Eigen::Index>(j));
                ++count;
            }
        if (count == 0) continue;
        ++present;
        mean /= static_cast<double>(count);
        const Eigen::VectorXd diff = mean - grand;
        out.matrix.noalias() += static_cast<double>(count) * diff * diff.transpose();
    }
    if (present < 2) {
        out.matrix.setZero();
        out.single_class = true;
    }
    return out;
}

/// sum_c G_c H_c G_c^T with per-class centering.
inline Eigen::MatrixXd within_scatter(const Eigen::MatrixXd& g, const std::vector<int>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != g.cols())
        throw InputError("within_scatter: label count does not match column count");
    const int c_max = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.rows(), g.rows());
    for (int c = 0; c <= c_max; ++c) {
        std::vector<Eigen::Index> idx;
        for (std::size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == c) idx.push_back(static_cast<Eigen::Index>(j));
        if (idx.empty()) continue;
        Eigen::MatrixXd gc(g.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) gc.col(static_cast<Eigen::Index>(j)) = g.col(idx[j]);
        const Eigen::MatrixXd hc = centering_matrix(static_cast<int>(idx.size()));
        out.noalias() += gc * hc * gc.transpose();
    }
    return out;
}

/// Scatter statistics of the source design matrix plus the target
/// centering projector.
struct ScatterSet {
    Eigen::MatrixXd s_b;
    Eigen::MatrixXd s_w;
    Eigen::MatrixXd h_t;
    bool single_class = false;
};

inline ScatterSet compute_scatters(const Eigen::MatrixXd& g_s, const std::vector<int>& labels,
                                   int n_t) {
    ScatterSet set;
    BetweenScatter b = between_scatter(g_s, labels);
    set.s_b = std::move(b.matrix);
    set.single_class = b.single_class;
    set.s_w = within_scatter(g_s, labels);
    set.h_t = centering_matrix(n_t);
    return set;
}

/// The assembled matrix pencil of the optimization:
///   a = G_X (M + sum_c M_c) G_X^T + alpha I + beta S_w
///   b = lambda G_T H_T G_T^T + beta S_b
/// both explicitly symmetrized.
struct ObjectivePair {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
};

inline ObjectivePair assemble_objective(const Eigen::MatrixXd& g_x, const Eigen::MatrixXd& g_t,
                                        const MmdMatrix& marginal,
                                        const std::vector<MmdMatrix>& conditionals,
                                        const ScatterSet& scatter, double alpha, double beta,
                                        double lambda) {
    const Eigen::Index dim = g_x.rows();
    if (marginal.data.rows() != g_x.cols())
        throw InputError("assemble_objective: MMD matrix size does not match G_X columns");
    if (scatter.h_t.rows() != g_t.cols())
        throw InputError("assemble_objective: centering matrix size does not match G_T columns");
    if (scatter.s_w.rows() != dim || scatter.s_b.rows() != dim)
        throw InputError("assemble_objective: scatter dimension does not match G_X rows");
    if (alpha < 0.0 || beta < 0.0 || lambda < 0.0)
        throw InputError("assemble_objective: trade-off parameters must be non-negative");

    Eigen::MatrixXd m_sum = marginal.data;
    for (const MmdMatrix& mc : conditionals) {
        if (mc.data.rows() != m_sum.rows())
            throw InputError("assemble_objective: conditional MMD matrix size mismatch");
        m_sum += mc.data;
    }

    ObjectivePair pair;
    pair.alpha = alpha;
    pair.beta = beta;
    pair.lambda = lambda;

    Eigen::MatrixXd a = g_x * m_sum * g_x.transpose();
    a += alpha * Eigen::MatrixXd::Identity(dim, dim);
    a += beta * scatter.s_w;
    pair.a = 0.5 * (a + a.transpose());

    Eigen::MatrixXd b = lambda * (g_t * scatter.h_t * g_t.transpose());
    b += beta * scatter.s_b;
    pair.b = 0.5 * (b + b.transpose());
    return pair;
}

}  // namespace fuzzyadapt
