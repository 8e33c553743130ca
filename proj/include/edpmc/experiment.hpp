#pragma once

#include "edpmc/als.hpp"
#include "edpmc/ground_motion.hpp"
#include "edpmc/intensity_measures.hpp"
#include "edpmc/kmedoids.hpp"
#include "edpmc/masking.hpp"
#include "edpmc/newmark.hpp"
#include "edpmc/regression.hpp"
#include "edpmc/structure.hpp"

#include <filesystem>
#include <optional>

namespace edpmc {

enum class MaskMethod { Uniform, Stratified, StratifiedRegression };

std::string to_string(MaskMethod method);
MaskMethod mask_method_from_string(const std::string& tag);

struct ExperimentConfig {
    int n_records = 100;
    int n_materials = 10;
    std::vector<double> cr_grid{0.1, 0.2, 0.3, 0.4, 0.5};
    int trials = 50;
    std::vector<MaskMethod> methods{MaskMethod::Uniform, MaskMethod::Stratified,
                                    MaskMethod::StratifiedRegression};
    std::uint64_t master_seed = 20u;
    CompletionConfig completion;
    RegressionConfig regression;
    Index cluster_k = 0;  // 0 -> max(2, round(N/10))
    Distance cluster_distance = Distance::Euclidean;
    VectorXd material_cov;  // empty -> default_material_cov()
    std::optional<StructureModel> model;  // nullopt -> default_structure()
    int threads = 0;  // 0 -> hardware concurrency

    void validate() const;
    Index effective_k() const;
    const StructureModel& effective_model() const;
};

// Coefficient-of-variation defaults per material parameter (18 entries for
// the six-story model).
VectorXd default_material_cov(Index n_stories);

struct Dataset {
    std::vector<GroundMotionRecord> records;
    FeatureTable gm_features;        // N x 31
    FeatureTable material_features;  // M x P
    EdpMatrix top_displacement;
    EdpMatrix base_shear;
    ModalPeriods modal_periods;
};

// Draws per-record synthesis parameters from three hazard archetypes
// (common / moderate / rare-severe, weighted 5:3:2) so the suite carries
// genuine cluster structure, extracts the IM table, samples materials and
// runs the full N x M simulation cross product. Deterministic per seed.
Dataset build_dataset(const ExperimentConfig& config);

// Record-synthesis parameters for suite member `index` (also used by the
// synth-gm CLI so standalone suites match the experiment's).
GmSynthParams suite_record_params(std::uint64_t master_seed, Index index);

struct TrialRecord {
    EdpKind edp;
    MaskMethod method;
    double cr;
    int trial;
    double error;
};

struct SummaryRow {
    EdpKind edp;
    MaskMethod method;
    double cr;
    int trials;
    double mean;
    double std_dev;  // sample standard deviation (0 for a single trial)
    double min;
    double max;
};

struct ErrorReport {
    std::vector<TrialRecord> raw;
    std::vector<SummaryRow> summary;
    std::string fingerprint;        // master seed + config hash
    ClusterAssignment clusters;     // ground-motion clustering used for masks
    std::vector<std::vector<long>> quotas_per_cr;  // audit of the min-1 rule

    double mean_error(EdpKind edp, MaskMethod method, double cr) const;
};

// For each (EDP, CR, trial): Uniform gets its own mask; Stratified and
// StratifiedRegression share one stratified mask (and completion estimate),
// isolating the contribution of the regression ensemble. Trial seeds derive
// from the master seed; a failed trial aborts with (method, cr, trial)
// provenance.
ErrorReport run_experiment(const ExperimentConfig& config, const Dataset& dataset);

// Writes errors_tidy.csv, errors_summary.csv, cluster_audit.csv,
// run_info.txt and one SVG error chart per EDP kind.
void emit_report(const ErrorReport& report, const std::filesystem::path& out_dir);

// SVG line chart: mean error (log scale) vs CR, one series per method with
// error bars. Returns the SVG document.
std::string render_error_chart(const ErrorReport& report, EdpKind edp);

std::string config_fingerprint(const ExperimentConfig& config);

}  // namespace edpmc
