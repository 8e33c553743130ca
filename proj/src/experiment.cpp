#include "edpmc/experiment.hpp"

#include "edpmc/metrics.hpp"
#include "edpmc/parallel.hpp"
#include "edpmc/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace edpmc {

std::string to_string(MaskMethod method) {
    switch (method) {
        case MaskMethod::Uniform: return "uniform";
        case MaskMethod::Stratified: return "stratified";
        case MaskMethod::StratifiedRegression: return "stratified_regression";
    }
    throw DataError("unknown MaskMethod");
}

MaskMethod mask_method_from_string(const std::string& tag) {
    if (tag == "uniform") return MaskMethod::Uniform;
    if (tag == "stratified") return MaskMethod::Stratified;
    if (tag == "stratified_regression") return MaskMethod::StratifiedRegression;
    throw DataError("unknown method '" + tag + "'");
}

void ExperimentConfig::validate() const {
    if (n_records < 2 || n_materials < 2)
        throw DataError("ExperimentConfig: needs >= 2 records and >= 2 material samples");
    if (cr_grid.empty()) throw DataError("ExperimentConfig: empty CR grid");
    for (double cr : cr_grid)
        if (!(cr > 0.0) || cr > 1.0)
            throw DataError("ExperimentConfig: CR values must lie in (0, 1]");
    if (trials < 1) throw DataError("ExperimentConfig: trials must be >= 1");
    if (methods.empty()) throw DataError("ExperimentConfig: methods must be non-empty");
    completion.validate();
    regression.validate();
}

Index ExperimentConfig::effective_k() const {
    if (cluster_k > 0) return cluster_k;
    return std::max<Index>(2, std::lround(static_cast<double>(n_records) / 10.0));
}

const StructureModel& ExperimentConfig::effective_model() const {
    static const StructureModel fallback = default_structure();
    return model ? *model : fallback;
}

VectorXd default_material_cov(Index n_stories) {
    VectorXd cov(6 + 2 * n_stories);
    cov[0] = 0.05;  // mass scale
    cov[1] = 0.12;  // stiffness scale
    cov[2] = 0.12;  // strength scale
    cov[3] = 0.25;  // post-yield ratio
    cov[4] = 0.20;  // damping ratio
    cov.segment(5, n_stories).setConstant(0.08);              // per-story stiffness
    cov.segment(5 + n_stories, n_stories).setConstant(0.08);  // per-story strength
    cov[5 + 2 * n_stories] = 0.10;                            // roof mass
    return cov;
}

GmSynthParams suite_record_params(std::uint64_t master_seed, Index index) {
    auto engine = make_engine(derive_seed(master_seed, 0x6e0u, index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GmSynthParams params;
    params.dt = 0.01;
    params.seed = derive_seed(master_seed, 0x6e1u, index);
    const double archetype = unit(engine);
    auto in_range = [&](double lo, double hi) { return lo + (hi - lo) * unit(engine); };
    if (archetype < 0.5) {
        // Common: frequent, moderate shaking.
        params.duration = in_range(15.0, 25.0);
        params.filter_freq = in_range(2.0, 5.0);
        params.target_pga = in_range(0.8, 2.5);
    } else if (archetype < 0.8) {
        // Moderate events, lower frequency content.
        params.duration = in_range(10.0, 20.0);
        params.filter_freq = in_range(1.0, 3.0);
        params.target_pga = in_range(2.0, 5.0);
    } else {
        // Rare severe: strong low-frequency shaking, drives yielding.
        params.duration = in_range(8.0, 15.0);
        params.filter_freq = in_range(0.7, 2.0);
        params.target_pga = in_range(4.5, 9.0);
    }
    params.filter_damping = in_range(0.4, 0.7);
    params.peak_fraction = in_range(0.2, 0.4);
    params.shape_exponent = in_range(1.5, 3.0);
    return params;
}

Dataset build_dataset(const ExperimentConfig& config) {
    config.validate();
    const StructureModel& model = config.effective_model();
    const Index n_stories = model.stories();

    std::vector<GroundMotionRecord> records;
    records.reserve(static_cast<std::size_t>(config.n_records));
    for (Index i = 0; i < config.n_records; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "gm%03ld", static_cast<long>(i + 1));
        records.push_back(synth_record(suite_record_params(config.master_seed, i), id));
    }

    const ModalPeriods periods = first_five_periods(model, MaterialSample::nominal(n_stories));
    FeatureTable gm_features = im_feature_table(records, periods);

    const VectorXd cov = config.material_cov.size() > 0 ? config.material_cov
                                                        : default_material_cov(n_stories);
    FeatureTable materials = sample_materials(MaterialSample::nominal(n_stories), cov,
                                              config.n_materials,
                                              derive_seed(config.master_seed, 0x3a8u));

    auto [top_disp, base_shear] =
        build_edp_matrices(records, materials, model, {}, config.threads);

    return Dataset{std::move(records), std::move(gm_features), std::move(materials),
                   std::move(top_disp), std::move(base_shear), periods};
}

namespace {

struct TrialOutcome {
    // error[edp][method], indexed as in the config's method list
    std::vector<double> top_disp_errors;
    std::vector<double> base_shear_errors;
};

}  // namespace

double ErrorReport::mean_error(EdpKind edp, MaskMethod method, double cr) const {
    for (const auto& row : summary)
        if (row.edp == edp && row.method == method && row.cr == cr) return row.mean;
    throw DataError("ErrorReport: no summary row for the requested combination");
}

ErrorReport run_experiment(const ExperimentConfig& config, const Dataset& dataset) {
    config.validate();
    const Index n = dataset.top_displacement.rows();
    const Index m = dataset.top_displacement.cols();
    if (n != config.n_records || m != config.n_materials)
        throw DataError("run_experiment: dataset does not match the configuration");

    ErrorReport report;
    report.fingerprint = config_fingerprint(config);
    report.clusters = kmedoids(standardize(dataset.gm_features), config.effective_k(),
                               config.cluster_distance);
    const auto sizes = report.clusters.cluster_sizes();
    for (double cr : config.cr_grid)
        report.quotas_per_cr.push_back(stratified_quotas(sizes, observation_budget(n, cr)));

    const bool wants_stratified =
        std::find(config.methods.begin(), config.methods.end(), MaskMethod::Stratified) !=
            config.methods.end() ||
        std::find(config.methods.begin(), config.methods.end(),
                  MaskMethod::StratifiedRegression) != config.methods.end();
    const bool wants_uniform =
        std::find(config.methods.begin(), config.methods.end(), MaskMethod::Uniform) !=
        config.methods.end();
    (void)wants_uniform;

    const std::size_t n_cr = config.cr_grid.size();
    const Index n_work = static_cast<Index>(n_cr) * config.trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n_work));

    auto run_trial = [&](Index work) {
        const std::size_t cr_index = static_cast<std::size_t>(work) / config.trials;
        const int trial = static_cast<int>(work % config.trials);
        const double cr = config.cr_grid[cr_index];
        try {
            std::optional<ObservationMask> uniform;
            std::optional<ObservationMask> stratified;
            if (wants_uniform)
                uniform = uniform_mask(
                    n, m, cr, derive_seed(config.master_seed, 0x111u, cr_index, trial));
            if (wants_stratified)
                stratified = stratified_mask(
                    report.clusters, m, cr,
                    derive_seed(config.master_seed, 0x222u, cr_index, trial));

            TrialOutcome& outcome = outcomes[static_cast<std::size_t>(work)];
            outcome.top_disp_errors.resize(config.methods.size());
            outcome.base_shear_errors.resize(config.methods.size());

            for (int edp_index = 0; edp_index < 2; ++edp_index) {
                const EdpMatrix& truth =
                    edp_index == 0 ? dataset.top_displacement : dataset.base_shear;
                auto& slot =
                    edp_index == 0 ? outcome.top_disp_errors : outcome.base_shear_errors;

                std::optional<MatrixXd> uniform_estimate;
                std::optional<MatrixXd> stratified_estimate;
                auto completed = [&](const ObservationMask& mask,
                                     unsigned stream) -> MatrixXd {
                    CompletionConfig cc = config.completion;
                    cc.seed = derive_seed(config.master_seed, stream, cr_index, trial,
                                          edp_index);
                    return als_complete(truth, mask, cc).estimate;
                };

                for (std::size_t method_index = 0; method_index < config.methods.size();
                     ++method_index) {
                    const MaskMethod method = config.methods[method_index];
                    double error = 0.0;
                    if (method == MaskMethod::Uniform) {
                        if (!uniform_estimate)
                            uniform_estimate = completed(*uniform, 0x333u);
                        error = masked_relative_error(truth, *uniform_estimate, *uniform);
                    } else {
                        if (!stratified_estimate)
                            stratified_estimate = completed(*stratified, 0x444u);
                        if (method == MaskMethod::Stratified) {
                            error = masked_relative_error(truth, *stratified_estimate,
                                                          *stratified);
                        } else {
                            const MatrixXd regressed =
                                fit_predict(dataset.gm_features, dataset.material_features,
                                            truth, *stratified, config.regression);
                            const MatrixXd combined =
                                ensemble(*stratified_estimate, regressed);
                            error = masked_relative_error(truth, combined, *stratified);
                        }
                    }
                    slot[method_index] = error;
                }
            }
        } catch (const std::exception& error) {
            throw DataError("trial failed (cr=" + std::to_string(cr) + ", trial=" +
                            std::to_string(trial + 1) + "): " + error.what());
        }
    };
    parallel_for(n_work, config.threads, run_trial);

    // Deterministic assembly: edp x method x cr x trial.
    for (int edp_index = 0; edp_index < 2; ++edp_index) {
        const EdpKind edp = edp_index == 0 ? EdpKind::TopDisplacement : EdpKind::BaseShear;
        for (std::size_t method_index = 0; method_index < config.methods.size();
             ++method_index) {
            for (std::size_t cr_index = 0; cr_index < n_cr; ++cr_index) {
                const double cr = config.cr_grid[cr_index];
                SummaryRow row{edp, config.methods[method_index], cr, config.trials,
                               0.0, 0.0, std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};
                std::vector<double> errors(static_cast<std::size_t>(config.trials));
                for (int trial = 0; trial < config.trials; ++trial) {
                    const auto& outcome = outcomes[cr_index * config.trials +
                                                   static_cast<std::size_t>(trial)];
                    const double error = edp_index == 0
                                             ? outcome.top_disp_errors[method_index]
                                             : outcome.base_shear_errors[method_index];
                    report.raw.push_back(
                        {edp, config.methods[method_index], cr, trial + 1, error});
                    errors[static_cast<std::size_t>(trial)] = error;
                    row.min = std::min(row.min, error);
                    row.max = std::max(row.max, error);
                }
                double sum = 0.0;
                for (double e : errors) sum += e;
                row.mean = sum / config.trials;
                double ss = 0.0;
                for (double e : errors) ss += (e - row.mean) * (e - row.mean);
                row.std_dev = config.trials > 1 ? std::sqrt(ss / (config.trials - 1)) : 0.0;
                report.summary.push_back(row);
            }
        }
    }
    return report;
}

}  // namespace edpmc
