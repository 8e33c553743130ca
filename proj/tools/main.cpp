#include "edpmc/config.hpp"
#include "edpmc/csv.hpp"
#include "edpmc/experiment.hpp"
#include "edpmc/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace edpmc;

namespace {

std::vector<GroundMotionRecord> load_record_dir(const fs::path& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw DataError("no .csv records found in '" + dir.string() + "'");
    std::vector<GroundMotionRecord> records;
    records.reserve(paths.size());
    for (const auto& p : paths) records.push_back(read_record(p));
    return records;
}

ModalPeriods parse_periods(const std::string& csv) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string field;
    while (std::getline(stream, field, ',')) values.push_back(std::stod(field));
    if (values.size() != 5) throw DataError("--periods needs exactly 5 comma-separated values");
    ModalPeriods periods;
    for (int i = 0; i < 5; ++i) periods[i] = values[static_cast<std::size_t>(i)];
    return periods;
}

VectorXd parse_vector(const std::string& csv) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string field;
    while (std::getline(stream, field, ',')) values.push_back(std::stod(field));
    return Eigen::Map<VectorXd>(values.data(), static_cast<Index>(values.size()));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-completion estimation of structural demand matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 20;
    std::string config_path;
    std::string out_path;
    app.add_option("--seed", seed, "master seed; all randomness derives from it");
    app.add_option("--config", config_path, "experiment JSON config file");
    app.add_option("--out", out_path, "output file or directory");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "draw LHS/Halton/Sobol/uniform points");
    std::string scheme = "lhs";
    Index count = 10, dims = 2;
    cmd_sample->add_option("--scheme", scheme, "lhs|halton|sobol|uniform");
    cmd_sample->add_option("--count", count, "number of points")->required();
    cmd_sample->add_option("--dims", dims, "dimensions")->required();

    // synth-gm
    auto* cmd_synth = app.add_subcommand("synth-gm", "synthesize a ground-motion suite");
    int gm_count = 100;
    cmd_synth->add_option("--count", gm_count, "suite size");

    // features
    auto* cmd_features = app.add_subcommand("features", "extract the 31-IM table");
    std::string records_dir, periods_csv, model_path;
    cmd_features->add_option("--records", records_dir, "directory of record CSVs")->required();
    cmd_features->add_option("--periods", periods_csv, "5 modal periods (comma separated)");
    cmd_features->add_option("--model", model_path, "model JSON (periods from its nominal modes)");

    // sample-materials
    auto* cmd_materials = app.add_subcommand("sample-materials", "LHS-Gaussian material table");
    int mat_count = 10;
    std::string cov_csv, materials_model_path;
    cmd_materials->add_option("--count", mat_count, "sample count");
    cmd_materials->add_option("--cov", cov_csv, "cov ratios, one per parameter (comma separated)");
    cmd_materials->add_option("--model", materials_model_path, "model JSON (story count)");

    // simulate
    auto* cmd_simulate = app.add_subcommand("simulate", "run the full simulation cross product");
    std::string sim_records_dir, materials_path, sim_model_path;
    int threads = 0;
    cmd_simulate->add_option("--records", sim_records_dir, "directory of record CSVs")
        ->required();
    cmd_simulate->add_option("--materials", materials_path, "material table CSV")->required();
    cmd_simulate->add_option("--model", sim_model_path, "model JSON");
    cmd_simulate->add_option("--threads", threads, "worker threads (0 = hardware)");

    // cluster
    auto* cmd_cluster = app.add_subcommand("cluster", "k-medoids on standardized features");
    std::string features_path, distance_name = "euclidean";
    Index k = 0;
    cmd_cluster->add_option("--features", features_path, "feature table CSV")->required();
    cmd_cluster->add_option("--k", k, "cluster count (0 = max(2, round(N/10)))");
    cmd_cluster->add_option("--distance", distance_name, "euclidean|manhattan");

    // complete
    auto* cmd_complete = app.add_subcommand("complete", "ALS low-rank completion");
    std::string matrix_path, mask_path;
    CompletionConfig completion;
    cmd_complete->add_option("--matrix", matrix_path, "EDP matrix CSV")->required();
    cmd_complete->add_option("--mask", mask_path, "observation mask CSV")->required();
    cmd_complete->add_option("--rank", completion.rank, "factorization rank");
    cmd_complete->add_option("--lambda", completion.lambda, "ridge weight");
    cmd_complete->add_option("--tolerance", completion.tolerance, "objective tolerance");
    cmd_complete->add_option("--sweeps", completion.max_sweeps, "max ALS sweeps");
    cmd_complete->add_option("--restarts", completion.restarts, "seeded restarts");

    // regress
    auto* cmd_regress = app.add_subcommand("regress", "feature regression estimate");
    std::string reg_matrix_path, reg_mask_path, gm_features_path, material_features_path;
    std::string model_name = "kernel_ridge_rbf", ensemble_with;
    RegressionConfig regression;
    cmd_regress->add_option("--matrix", reg_matrix_path, "EDP matrix CSV")->required();
    cmd_regress->add_option("--mask", reg_mask_path, "observation mask CSV")->required();
    cmd_regress->add_option("--gm-features", gm_features_path, "N x 31 IM table CSV")
        ->required();
    cmd_regress->add_option("--material-features", material_features_path, "M x P table CSV")
        ->required();
    cmd_regress->add_option("--model-type", model_name, "linear_ridge|kernel_ridge_rbf");
    cmd_regress->add_option("--lambda", regression.lambda, "ridge weight");
    cmd_regress->add_option("--bandwidth", regression.bandwidth, "RBF bandwidth (0 = median)");
    cmd_regress->add_option("--ensemble-with", ensemble_with,
                            "estimate CSV to average with (writes ensemble.csv)");

    // experiment
    auto* cmd_experiment = app.add_subcommand("experiment", "full CR x method x trial sweep");
    int trials_override = -1;
    int experiment_threads = 0;
    cmd_experiment->add_option("--trials", trials_override, "override trial count");
    cmd_experiment->add_option("--threads", experiment_threads, "worker threads (0 = hardware)");

    // report
    auto* cmd_report = app.add_subcommand("report", "summaries and charts from a tidy CSV");
    std::string tidy_path;
    cmd_report->add_option("--tidy", tidy_path, "errors_tidy.csv from a previous run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_sample->parsed()) {
            if (out_path.empty()) throw DataError("sample: --out is required");
            SamplerConfig config{scheme_from_string(scheme), count, dims, seed};
            write_table(draw_samples(config), out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (cmd_synth->parsed()) {
            if (out_path.empty()) throw DataError("synth-gm: --out is required");
            fs::create_directories(out_path);
            for (Index i = 0; i < gm_count; ++i) {
                char id[16];
                std::snprintf(id, sizeof id, "gm%03ld", static_cast<long>(i + 1));
                const auto record = synth_record(suite_record_params(seed, i), id);
                write_record(record, fs::path(out_path) / (std::string(id) + ".csv"));
            }
            std::cout << "wrote " << gm_count << " records to " << out_path << "\n";
        } else if (cmd_features->parsed()) {
            if (out_path.empty()) throw DataError("features: --out is required");
            const auto records = load_record_dir(records_dir);
            ModalPeriods periods;
            if (!periods_csv.empty()) {
                periods = parse_periods(periods_csv);
            } else {
                const StructureModel model = model_path.empty()
                                                 ? default_structure()
                                                 : structure_model_from_json_file(model_path);
                periods = first_five_periods(model, MaterialSample::nominal(model.stories()));
            }
            write_features(im_feature_table(records, periods), out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (cmd_materials->parsed()) {
            if (out_path.empty()) throw DataError("sample-materials: --out is required");
            const StructureModel model =
                materials_model_path.empty() ? default_structure()
                                             : structure_model_from_json_file(materials_model_path);
            const auto nominal = MaterialSample::nominal(model.stories());
            const VectorXd cov = cov_csv.empty() ? default_material_cov(model.stories())
                                                 : parse_vector(cov_csv);
            write_features(sample_materials(nominal, cov, mat_count, seed), out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (cmd_simulate->parsed()) {
            if (out_path.empty()) throw DataError("simulate: --out is required");
            const StructureModel model = sim_model_path.empty()
                                             ? default_structure()
                                             : structure_model_from_json_file(sim_model_path);
            const auto records = load_record_dir(sim_records_dir);
            const auto materials = read_features(materials_path);
            auto [top, shear] = build_edp_matrices(records, materials, model, {}, threads);
            fs::create_directories(out_path);
            write_edp_matrix(top, fs::path(out_path) / "top_displacement.csv");
            write_edp_matrix(shear, fs::path(out_path) / "base_shear.csv");
            std::cout << "wrote EDP matrices to " << out_path << "\n";
        } else if (cmd_cluster->parsed()) {
            if (out_path.empty()) throw DataError("cluster: --out is required");
            const auto features = read_features(features_path);
            if (k == 0)
                k = std::max<Index>(2, std::lround(static_cast<double>(features.rows()) / 10.0));
            const auto assignment =
                kmedoids(standardize(features), k, distance_from_string(distance_name), seed);
            std::ofstream out(out_path);
            if (!out) throw DataError("cannot write '" + out_path + "'");
            out << "row_id,label,is_medoid\n";
            for (Index i = 0; i < assignment.size(); ++i) {
                const Index label = assignment.labels[static_cast<std::size_t>(i)];
                const bool medoid =
                    assignment.medoid_indices[static_cast<std::size_t>(label)] == i;
                out << features.row_ids()[static_cast<std::size_t>(i)] << ',' << label << ','
                    << (medoid ? 1 : 0) << '\n';
            }
            std::cout << "wrote " << out_path << " (cost " << assignment.cost << ")\n";
        } else if (cmd_complete->parsed()) {
            if (out_path.empty()) throw DataError("complete: --out is required");
            const auto matrix = read_edp_matrix(matrix_path);
            const auto mask = read_mask(mask_path);
            completion.seed = seed;
            const auto result = als_complete(matrix, mask, completion);
            fs::create_directories(out_path);
            write_edp_matrix(EdpMatrix(matrix.kind(), result.estimate, matrix.row_ids(),
                                       matrix.col_ids()),
                             fs::path(out_path) / "estimate.csv");
            {
                std::ofstream trace(fs::path(out_path) / "trace.csv");
                trace << "sweep,objective\n";
                for (std::size_t s = 0; s < result.objective_trace.size(); ++s)
                    trace << s << ',' << format_full_precision(result.objective_trace[s])
                          << '\n';
            }
            nlohmann::json meta{{"rank", completion.rank},
                                {"lambda", completion.lambda},
                                {"tolerance", completion.tolerance},
                                {"max_sweeps", completion.max_sweeps},
                                {"restarts", completion.restarts},
                                {"seed", completion.seed},
                                {"normalization_scale", result.scale},
                                {"normalization", "observed-entry RMS, scale only"}};
            write_text(fs::path(out_path) / "metadata.json", meta.dump(2) + "\n");
            std::cout << "wrote estimate to " << out_path << "\n";
        } else if (cmd_regress->parsed()) {
            if (out_path.empty()) throw DataError("regress: --out is required");
            const auto matrix = read_edp_matrix(reg_matrix_path);
            const auto mask = read_mask(reg_mask_path);
            const auto gm = read_features(gm_features_path);
            const auto materials = read_features(material_features_path);
            regression.model = regression_model_from_string(model_name);
            RegressionInfo info;
            const MatrixXd estimate =
                fit_predict(gm, materials, matrix, mask, regression, &info);
            fs::create_directories(out_path);
            write_edp_matrix(EdpMatrix(matrix.kind(), estimate, matrix.row_ids(),
                                       matrix.col_ids()),
                             fs::path(out_path) / "estimate.csv");
            nlohmann::json meta{{"model", to_string(regression.model)},
                                {"lambda", regression.lambda},
                                {"bandwidth_used", info.bandwidth},
                                {"target_mean", info.target_mean},
                                {"target_std", info.target_std},
                                {"training_cells", info.training_cells},
                                {"feature_standardization", "per-dimension z-score"}};
            write_text(fs::path(out_path) / "metadata.json", meta.dump(2) + "\n");
            if (!ensemble_with.empty()) {
                const auto other = read_edp_matrix(ensemble_with);
                write_edp_matrix(EdpMatrix(matrix.kind(), ensemble(other.values(), estimate),
                                           matrix.row_ids(), matrix.col_ids()),
                                 fs::path(out_path) / "ensemble.csv");
            }
            std::cout << "wrote estimate to " << out_path << "\n";
        } else if (cmd_experiment->parsed()) {
            if (out_path.empty()) throw DataError("experiment: --out is required");
            ExperimentConfig config;
            if (!config_path.empty()) config = experiment_config_from_json_file(config_path);
            if (app.count("--seed") > 0) config.master_seed = seed;
            if (trials_override > 0) config.trials = trials_override;
            if (experiment_threads > 0) config.threads = experiment_threads;

            std::cout << "building dataset (" << config.n_records << " records x "
                      << config.n_materials << " materials)...\n";
            const auto dataset = build_dataset(config);
            fs::create_directories(out_path);
            write_edp_matrix(dataset.top_displacement,
                             fs::path(out_path) / "top_displacement.csv");
            write_edp_matrix(dataset.base_shear, fs::path(out_path) / "base_shear.csv");
            write_features(dataset.gm_features, fs::path(out_path) / "gm_features.csv");
            write_features(dataset.material_features,
                           fs::path(out_path) / "material_features.csv");

            std::cout << "running " << config.cr_grid.size() << " CRs x " << config.trials
                      << " trials x " << config.methods.size() << " methods...\n";
            const auto report = run_experiment(config, dataset);
            emit_report(report, out_path);
            std::cout << "report written to " << out_path << " (fingerprint "
                      << report.fingerprint << ")\n";
        } else if (cmd_report->parsed()) {
            if (out_path.empty()) throw DataError("report: --out is required");
            std::ifstream in(tidy_path);
            if (!in) throw DataError("cannot open '" + tidy_path + "'");
            std::string line;
            std::getline(in, line);  // header
            ErrorReport report;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::stringstream s(line);
                std::string edp, method, cr, trial, error;
                std::getline(s, edp, ',');
                std::getline(s, method, ',');
                std::getline(s, cr, ',');
                std::getline(s, trial, ',');
                std::getline(s, error, ',');
                report.raw.push_back({edp_kind_from_string(edp),
                                      mask_method_from_string(method), std::stod(cr),
                                      std::stoi(trial), std::stod(error)});
            }
            if (report.raw.empty()) throw DataError("tidy CSV holds no rows");
            // Rebuild summary rows in first-appearance order.
            for (const auto& r : report.raw) {
                auto it = std::find_if(report.summary.begin(), report.summary.end(),
                                       [&](const SummaryRow& row) {
                                           return row.edp == r.edp && row.method == r.method &&
                                                  row.cr == r.cr;
                                       });
                if (it == report.summary.end()) {
                    report.summary.push_back({r.edp, r.method, r.cr, 0, 0.0, 0.0,
                                              std::numeric_limits<double>::infinity(),
                                              -std::numeric_limits<double>::infinity()});
                    it = report.summary.end() - 1;
                }
                ++it->trials;
                it->mean += r.error;  // accumulated; normalized below
                it->min = std::min(it->min, r.error);
                it->max = std::max(it->max, r.error);
            }
            for (auto& row : report.summary) {
                const double sum = row.mean;
                row.mean = sum / row.trials;
                double ss = 0.0;
                for (const auto& r : report.raw)
                    if (r.edp == row.edp && r.method == row.method && r.cr == row.cr)
                        ss += (r.error - row.mean) * (r.error - row.mean);
                row.std_dev = row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) : 0.0;
            }
            report.fingerprint = "recomputed-from-tidy";
            emit_report(report, out_path);
            std::cout << "report written to " << out_path << "\n";
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
