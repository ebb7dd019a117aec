#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "fuzzyadapt/errors.hpp"
#include "fuzzyadapt/pipeline.hpp"

namespace fuzzyadapt {

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw InputError("model file: expected a non-empty matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols)
            throw InputError("model file: ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

inline nlohmann::json vector_to_json(const Eigen::RowVectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline Eigen::RowVectorXd vector_from_json(const nlohmann::json& j) {
    Eigen::RowVectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

}  // namespace detail

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const AdaptationModel& model) {
    nlohmann::json j;
    j["format"] = "fuzzyadapt-model";
    j["format_version"] = kModelFormatVersion;
    j["config"] = {
        {"rules", model.config.rules},
        {"dim", model.config.dim},
        {"alpha", model.config.alpha},
        {"beta", model.config.beta},
        {"lambda", model.config.lambda},
        {"iters", model.config.iters},
        {"standardize", to_string(model.config.standardize)},
    };
    j["classes"] = model.classes;
    j["source_scaler"] = {{"mean", detail::vector_to_json(model.source_scaler.mean)},
                          {"std", detail::vector_to_json(model.source_scaler.std_dev)}};
    j["target_scaler"] = {{"mean", detail::vector_to_json(model.target_scaler.mean)},
                          {"std", detail::vector_to_json(model.target_scaler.std_dev)}};
    j["source_antecedents"] = {{"centers", detail::matrix_to_json(model.source_antecedents.centers)},
                               {"widths", detail::matrix_to_json(model.source_antecedents.widths)}};
    j["target_antecedents"] = {{"centers", detail::matrix_to_json(model.target_antecedents.centers)},
                               {"widths", detail::matrix_to_json(model.target_antecedents.widths)}};
    j["projection"] = detail::matrix_to_json(model.projection);
    j["target_predictions"] = model.target_predictions;
    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : model.diagnostics) {
        diags.push_back({{"objective", d.objective},
                         {"mmd_marginal", d.mmd_marginal},
                         {"mmd_conditional", d.mmd_conditional},
                         {"pseudo_label_changes", d.pseudo_label_changes},
                         {"active_classes", d.active_classes}});
    }
    j["diagnostics"] = std::move(diags);
    return j;
}

inline AdaptationModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != "fuzzyadapt-model")
        throw InputError("model file: unrecognized format");
    if (!j.contains("format_version") || j["format_version"].get<int>() != kModelFormatVersion)
        throw InputError("model file: unsupported format version");

    AdaptationModel model;
    const auto& cfg = j.at("config");
    model.config.rules = cfg.at("rules").get<int>();
    model.config.dim = cfg.at("dim").get<int>();
    model.config.alpha = cfg.at("alpha").get<double>();
    model.config.beta = cfg.at("beta").get<double>();
    model.config.lambda = cfg.at("lambda").get<double>();
    model.config.iters = cfg.at("iters").get<int>();
    model.config.standardize = standardize_mode_from_string(cfg.at("standardize").get<std::string>());

    model.classes = j.at("classes").get<std::vector<std::string>>();
    model.source_scaler.mean = detail::vector_from_json(j.at("source_scaler").at("mean"));
    model.source_scaler.std_dev = detail::vector_from_json(j.at("source_scaler").at("std"));
    model.target_scaler.mean = detail::vector_from_json(j.at("target_scaler").at("mean"));
    model.target_scaler.std_dev = detail::vector_from_json(j.at("target_scaler").at("std"));
    model.source_antecedents.centers = detail::matrix_from_json(j.at("source_antecedents").at("centers"));
    model.source_antecedents.widths = detail::matrix_from_json(j.at("source_antecedents").at("widths"));
    model.target_antecedents.centers = detail::matrix_from_json(j.at("target_antecedents").at("centers"));
    model.target_antecedents.widths = detail::matrix_from_json(j.at("target_antecedents").at("widths"));
    model.projection = detail::matrix_from_json(j.at("projection"));
    model.target_predictions = j.at("target_predictions").get<std::vector<std::string>>();
    for (const auto& d : j.at("diagnostics")) {
        IterationDiagnostics diag;
        diag.objective = d.at("objective").get<double>();
        diag.mmd_marginal = d.at("mmd_marginal").get<double>();
        diag.mmd_conditional = d.at("mmd_conditional").get<double>();
        diag.pseudo_label_changes = d.at("pseudo_label_changes").get<int>();
        diag.active_classes = d.at("active_classes").get<int>();
        model.diagnostics.push_back(diag);
    }
    return model;
}

/// Writes the model as versioned JSON. Doubles use the shortest exact
/// representation, so save/load/transform is bit-identical.
inline void save_model(const std::string& path, const AdaptationModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write model file '" + path + "'");
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw InputError("failed while writing model file '" + path + "'");
}

inline AdaptationModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace fuzzyadapt
