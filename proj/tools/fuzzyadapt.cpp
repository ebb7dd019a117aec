// Batch command line for the fuzzyadapt library: synthetic pair
// generation, model fitting (single config or grid), feature-space
// export, and 1NN evaluation. Reports are JSON with stable field names;
// every numeric field except timings_ms reproduces exactly on re-runs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fuzzyadapt/fuzzyadapt.hpp"

namespace fa = fuzzyadapt;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

long long ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
}

bool header_has_column(const std::string& path, const std::string& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fa::InputError("cannot open file '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    for (const auto& field : fa::detail::split_csv_line(header))
        if (fa::detail::trim(field) == column) return true;
    return false;
}

// Loads with the label column when the file has one, else as features only.
fa::Dataset load_soft(const std::string& path, const std::string& label_column) {
    if (header_has_column(path, label_column)) return fa::load_dataset(path, label_column);
    return fa::load_dataset(path);
}

json config_to_json(const fa::AdaptationConfig& cfg) {
    return {{"rules", cfg.rules},       {"dim", cfg.dim},
            {"alpha", cfg.alpha},       {"beta", cfg.beta},
            {"lambda", cfg.lambda},     {"iters", cfg.iters},
            {"standardize", fa::to_string(cfg.standardize)}};
}

json diagnostics_to_json(const std::vector<fa::IterationDiagnostics>& diags) {
    json arr = json::array();
    for (std::size_t i = 0; i < diags.size(); ++i) {
        arr.push_back({{"iteration", i + 1},
                       {"objective", diags[i].objective},
                       {"mmd_marginal", diags[i].mmd_marginal},
                       {"mmd_conditional", diags[i].mmd_conditional},
                       {"pseudo_label_changes", diags[i].pseudo_label_changes},
                       {"active_classes", diags[i].active_classes}});
    }
    return arr;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fa::InputError("cannot write file '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw fa::InputError("failed while writing '" + path + "'");
}

struct FitFlags {
    std::string source_path, target_path, truth_path;
    std::string label_column = "label";
    std::string out_path = "model.json";
    std::string report_path;
    fa::AdaptationConfig config;
    std::string standardize = "per-domain";
    bool grid = false;
    std::vector<int> grid_rules, grid_dims;
    std::vector<double> grid_alphas, grid_betas, grid_lambdas;
    int jobs = 1;
};

void add_config_flags(CLI::App* cmd, FitFlags& f) {
    cmd->add_option("--rules", f.config.rules, "Fuzzy rule count K");
    cmd->add_option("--dim", f.config.dim, "Feature-space dimension m");
    cmd->add_option("--alpha", f.config.alpha, "2-norm regularization weight");
    cmd->add_option("--beta", f.config.beta, "Discriminant term weight");
    cmd->add_option("--lambda", f.config.lambda, "Target variance term weight");
    cmd->add_option("--iters", f.config.iters, "Adaptation iterations T");
    cmd->add_option("--standardize", f.standardize, "per-domain or pooled")
        ->check(CLI::IsMember({"per-domain", "pooled"}));
    cmd->add_flag("--grid", f.grid, "Sweep the parameter grids and keep the best configuration");
    cmd->add_option("--grid-rules", f.grid_rules, "Override the rule grid")->delimiter(',');
    cmd->add_option("--grid-dims", f.grid_dims, "Override the dimension grid")->delimiter(',');
    cmd->add_option("--grid-alphas", f.grid_alphas, "Override the alpha grid")->delimiter(',');
    cmd->add_option("--grid-betas", f.grid_betas, "Override the beta grid")->delimiter(',');
    cmd->add_option("--grid-lambdas", f.grid_lambdas, "Override the lambda grid")->delimiter(',');
    cmd->add_option("--jobs", f.jobs, "Parallel grid workers");
}

struct LoadedPair {
    fa::DomainPair pair;
    std::optional<std::vector<std::string>> truth;
};

LoadedPair load_pair(const FitFlags& f) {
    LoadedPair lp;
    lp.pair.source = fa::load_dataset(f.source_path, f.label_column);
    fa::Dataset target = load_soft(f.target_path, f.label_column);
    if (target.labels) {
        lp.truth = std::move(*target.labels);  // evaluation side channel only
        target.labels.reset();
    }
    lp.pair.target = std::move(target);
    if (!f.truth_path.empty()) lp.truth = fa::load_labels(f.truth_path, f.label_column);
    if (lp.truth && lp.truth->size() != static_cast<std::size_t>(lp.pair.target.rows()))
        throw fa::InputError("ground truth length does not match target rows");
    return lp;
}

fa::GridSpec make_grid_spec(const FitFlags& f, const fa::AdaptationConfig& base) {
    fa::GridSpec spec;
    if (!f.grid_rules.empty()) spec.rules = f.grid_rules;
    if (!f.grid_dims.empty()) spec.dims = f.grid_dims;
    if (!f.grid_alphas.empty()) spec.alphas = f.grid_alphas;
    if (!f.grid_betas.empty()) spec.betas = f.grid_betas;
    if (!f.grid_lambdas.empty()) spec.lambdas = f.grid_lambdas;
    spec.iters = base.iters;
    spec.standardize = base.standardize;
    return spec;
}

int run_fit(FitFlags& f) {
    const auto t0 = Clock::now();
    f.config.standardize = fa::standardize_mode_from_string(f.standardize);
    std::string report_path = f.report_path;
    if (report_path.empty()) {
        report_path = f.out_path;
        const auto dot = report_path.rfind(".json");
        if (dot != std::string::npos && dot == report_path.size() - 5)
            report_path.resize(dot);
        report_path += ".report.json";
    }

    LoadedPair lp = load_pair(f);
    const auto t_loaded = Clock::now();

    json report;
    report["command"] = "fit";
    report["source_file"] = f.source_path;
    report["target_file"] = f.target_path;

    fa::AdaptationConfig chosen = f.config;
    if (f.grid) {
        const fa::GridSpec spec = make_grid_spec(f, f.config);
        const auto results = fa::grid_search(lp.pair, spec, lp.truth, f.jobs);
        json grid = json::array();
        for (const auto& r : results) {
            json entry = {{"config", config_to_json(r.config)}, {"objective", r.objective}};
            if (r.accuracy) entry["target_accuracy"] = *r.accuracy;
            grid.push_back(std::move(entry));
        }
        const std::size_t best = fa::best_grid_index(results);
        report["grid"] = std::move(grid);
        report["grid_selection"] = lp.truth ? "target-accuracy" : "objective";
        chosen = results[best].config;
    }

    const fa::AdaptationModel model = fa::fit(lp.pair, chosen);
    fa::save_model(f.out_path, model);
    const auto t_fitted = Clock::now();

    report["config"] = config_to_json(chosen);
    report["data"] = {{"source_rows", lp.pair.source.rows()},
                      {"target_rows", lp.pair.target.rows()},
                      {"features", lp.pair.source.dims()},
                      {"classes", model.classes.size()}};
    report["iterations"] = diagnostics_to_json(model.diagnostics);
    report["model_file"] = f.out_path;

    if (lp.truth) {
        report["target_accuracy"] = fa::evaluate(model.target_predictions, *lp.truth);
        const int pca_dim = std::min<int>(chosen.dim, static_cast<int>(lp.pair.source.dims()));
        const fa::Baselines base =
            fa::compute_baselines(lp.pair, *lp.truth, chosen.standardize, pca_dim);
        report["baselines"] = {{"knn_raw_accuracy", base.knn_raw},
                               {"knn_pca_accuracy", base.knn_pca}};
    }

    report["timings_ms"] = {{"load", ms_since(t0) - ms_since(t_loaded)},
                            {"fit", ms_since(t_loaded) - ms_since(t_fitted)},
                            {"total", ms_since(t0)}};
    write_json(report_path, report);
    std::cout << "model: " << f.out_path << "\nreport: " << report_path << '\n';
    return 0;
}

int run_synth(std::uint32_t seed, int n_per_class, std::vector<double> shift, double rotation,
              const std::string& out_dir) {
    if (shift.size() != 2) throw fa::InputError("--shift expects two values, e.g. 3,0");
    std::filesystem::create_directories(out_dir);
    const fa::DomainPair pair =
        fa::make_synthetic_shift(seed, n_per_class, {shift[0], shift[1]}, rotation);
    fa::save_dataset(out_dir + "/source.csv", pair.source);
    fa::save_dataset(out_dir + "/target.csv", pair.target);
    fa::save_labels(out_dir + "/target_truth.csv", *pair.target_truth);
    std::cout << "wrote " << out_dir << "/source.csv, target.csv, target_truth.csv\n";
    return 0;
}

int run_transform(const std::string& model_path, const std::string& data_path,
                  const std::string& domain, const std::string& label_column,
                  const std::string& out_path) {
    const fa::AdaptationModel model = fa::load_model(model_path);
    const fa::Dataset data = load_soft(data_path, label_column);
    const fa::Domain dom = domain == "source" ? fa::Domain::Source : fa::Domain::Target;
    const Eigen::MatrixXd z = fa::transform(model, data, dom);
    fa::Dataset out;
    out.features = z;
    out.feature_names = fa::default_feature_names(z.cols(), "z");
    fa::save_dataset(out_path, out);
    std::cout << "wrote " << out_path << " (" << z.rows() << " x " << z.cols() << ")\n";
    return 0;
}

int run_eval(const std::string& train_path, const std::string& train_labels_path,
             const std::string& test_path, const std::string& truth_path,
             const std::string& label_column, const std::string& out_path) {
    const fa::Dataset train = fa::load_dataset(train_path);
    const std::vector<std::string> train_labels = fa::load_labels(train_labels_path, label_column);
    const fa::Dataset test = fa::load_dataset(test_path);
    const std::vector<std::string> truth = fa::load_labels(truth_path, label_column);
    if (train_labels.size() != static_cast<std::size_t>(train.rows()))
        throw fa::InputError("training label count does not match training rows");

    fa::LabelEncoder encoder = fa::LabelEncoder::from(train_labels);
    const std::vector<int> predictions =
        fa::knn1_predict(train.features, encoder.encode(train_labels), test.features);
    const double accuracy = fa::evaluate(encoder.decode(predictions), truth);

    json j = {{"command", "eval"},
              {"accuracy", accuracy},
              {"count", test.rows()},
              {"train_rows", train.rows()}};
    if (!out_path.empty()) write_json(out_path, j);
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_bench(const std::string& dir, std::vector<std::string> domains, FitFlags& f,
              const std::string& out_path) {
    if (domains.size() < 2) throw fa::InputError("--domains needs at least two names");
    f.config.standardize = fa::standardize_mode_from_string(f.standardize);

    json tasks = json::array();
    double total = 0.0;
    int count = 0;
    for (const auto& src : domains) {
        for (const auto& tgt : domains) {
            if (src == tgt) continue;
            FitFlags task = f;
            task.source_path = dir + "/" + src + ".csv";
            task.target_path = dir + "/" + tgt + ".csv";
            LoadedPair lp = load_pair(task);
            if (!lp.truth)
                throw fa::InputError("bench: target file for '" + tgt + "' carries no labels");

            fa::AdaptationConfig chosen = f.config;
            if (f.grid) {
                const fa::GridSpec spec = make_grid_spec(f, f.config);
                const auto results = fa::grid_search(lp.pair, spec, lp.truth, f.jobs);
                chosen = results[fa::best_grid_index(results)].config;
            }
            const fa::AdaptationModel model = fa::fit(lp.pair, chosen);
            const double acc = fa::evaluate(model.target_predictions, *lp.truth);
            total += acc;
            ++count;
            tasks.push_back({{"task", src + "->" + tgt},
                             {"accuracy", acc},
                             {"config", config_to_json(chosen)}});
            std::cout << src << "->" << tgt << ": " << acc << '\n';
        }
    }
    json j = {{"command", "bench"},
              {"tasks", std::move(tasks)},
              {"average_accuracy", total / count}};
    if (!out_path.empty()) write_json(out_path, j);
    std::cout << "average: " << (total / count) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer representation learning with TSK fuzzy systems"};
    app.require_subcommand(1);

    // synth
    std::uint32_t seed = 7;
    int n_per_class = 100;
    std::vector<double> shift{3.0, 0.0};
    double rotation = 0.5;
    std::string synth_out = "synth";
    auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic domain pair");
    synth->add_option("--seed", seed, "Generator seed");
    synth->add_option("--n-per-class", n_per_class, "Examples per class and domain");
    synth->add_option("--shift", shift, "Target translation, e.g. 3,0")->delimiter(',');
    synth->add_option("--rotation", rotation, "Target rotation about its centroid (radians)");
    synth->add_option("--out", synth_out, "Output directory");

    // fit
    FitFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "Fit an adaptation model");
    fit_cmd->add_option("--source", fit_flags.source_path, "Labeled source CSV")->required();
    fit_cmd->add_option("--target", fit_flags.target_path, "Target CSV")->required();
    fit_cmd->add_option("--truth", fit_flags.truth_path,
                        "Target ground truth CSV (evaluation only)");
    fit_cmd->add_option("--label-column", fit_flags.label_column, "Label column name");
    fit_cmd->add_option("--out", fit_flags.out_path, "Model output path");
    fit_cmd->add_option("--report", fit_flags.report_path, "Report output path");
    add_config_flags(fit_cmd, fit_flags);

    // transform
    std::string model_path, data_path, domain = "target", transform_out = "transformed.csv";
    std::string transform_label_column = "label";
    auto* transform_cmd = app.add_subcommand("transform", "Map a dataset into the learned space");
    transform_cmd->add_option("--model", model_path, "Model file from fit")->required();
    transform_cmd->add_option("--data", data_path, "Input CSV")->required();
    transform_cmd->add_option("--domain", domain, "Which antecedents to use")
        ->check(CLI::IsMember({"source", "target"}));
    transform_cmd->add_option("--label-column", transform_label_column,
                              "Label column to ignore if present");
    transform_cmd->add_option("--out", transform_out, "Output CSV");

    // eval
    std::string eval_train, eval_train_labels, eval_test, eval_truth, eval_out;
    std::string eval_label_column = "label";
    auto* eval_cmd = app.add_subcommand("eval", "1NN accuracy of features against ground truth");
    eval_cmd->add_option("--train", eval_train, "Training feature CSV")->required();
    eval_cmd->add_option("--train-labels", eval_train_labels, "CSV holding the training labels")
        ->required();
    eval_cmd->add_option("--test", eval_test, "Test feature CSV")->required();
    eval_cmd->add_option("--truth", eval_truth, "Ground truth CSV")->required();
    eval_cmd->add_option("--label-column", eval_label_column, "Label column name");
    eval_cmd->add_option("--out", eval_out, "Optional JSON output path");

    // bench
    FitFlags bench_flags;
    std::string bench_dir, bench_out;
    std::vector<std::string> bench_domains;
    auto* bench_cmd = app.add_subcommand("bench", "Run every ordered domain pair in a directory");
    bench_cmd->add_option("--dir", bench_dir, "Directory with <domain>.csv files")->required();
    bench_cmd->add_option("--domains", bench_domains, "Comma-separated domain names")
        ->required()
        ->delimiter(',');
    bench_cmd->add_option("--label-column", bench_flags.label_column, "Label column name");
    bench_cmd->add_option("--out", bench_out, "Report output path");
    add_config_flags(bench_cmd, bench_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: input: " << e.what() << '\n';
        return 2;
    }

    try {
        if (synth->parsed()) return run_synth(seed, n_per_class, shift, rotation, synth_out);
        if (fit_cmd->parsed()) return run_fit(fit_flags);
        if (transform_cmd->parsed())
            return run_transform(model_path, data_path, domain, transform_label_column,
                                 transform_out);
        if (eval_cmd->parsed())
            return run_eval(eval_train, eval_train_labels, eval_test, eval_truth,
                            eval_label_column, eval_out);
        if (bench_cmd->parsed()) return run_bench(bench_dir, bench_domains, bench_flags, bench_out);
    } catch (const fa::InputError& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return 2;
    } catch (const fa::NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
