#pragma once

#include "edpmc/types.hpp"

#include <cstdint>

namespace edpmc {

// Multi-story shear building: lumped story masses, one lateral spring per
// story, fixed base.
class StructureModel {
  public:
    StructureModel(VectorXd masses, VectorXd stiffnesses, VectorXd yield_drifts,
                   double story_height);

    Index stories() const { return masses_.size(); }
    const VectorXd& masses() const { return masses_; }
    const VectorXd& stiffnesses() const { return stiffnesses_; }
    const VectorXd& yield_drifts() const { return yield_drifts_; }
    double story_height() const { return story_height_; }
    double total_height() const { return story_height_ * static_cast<double>(stories()); }

  private:
    VectorXd masses_;        // kg
    VectorXd stiffnesses_;   // N/m
    VectorXd yield_drifts_;  // m (infinity = elastic story)
    double story_height_;    // m
};

// Six-story nominal model used throughout the experiments.
StructureModel default_structure();

// One realization of the material/damping parameter vector. For an n-story
// model P = 6 + 2n: five global scales named below, per-story stiffness and
// strength multipliers, and a roof-mass multiplier (head-structure mass
// uncertainty). n = 6 gives the default table width P = 18.
struct MaterialSample {
    double mass_scale = 1.0;
    double stiffness_scale = 1.0;
    double strength_scale = 1.0;
    double post_yield_ratio = 0.05;
    double damping_ratio = 0.05;
    VectorXd story_stiffness_mult;  // n entries
    VectorXd story_strength_mult;   // n entries
    double roof_mass_mult = 1.0;

    static MaterialSample nominal(Index n_stories);
    static MaterialSample from_vector(const Eigen::Ref<const VectorXd>& params,
                                      Index n_stories);
    VectorXd to_vector() const;
    void validate() const;
};

std::vector<std::string> material_param_names(Index n_stories);

// Effective (materialized) diagonal masses and initial story stiffnesses /
// yield forces after applying a sample to the nominal model.
struct EffectiveProperties {
    VectorXd masses;        // kg
    VectorXd stiffnesses;   // N/m
    VectorXd yield_forces;  // N
};
EffectiveProperties apply_material(const StructureModel& model, const MaterialSample& material);

// Undamped periods of the initial-stiffness model, sorted descending.
VectorXd modal_periods(const StructureModel& model, const MaterialSample& material);

// First five periods (requires n_stories >= 5).
Eigen::Matrix<double, 5, 1> first_five_periods(const StructureModel& model,
                                               const MaterialSample& material);

// LHS in (0,1)^P mapped through the Gaussian inverse CDF with mean nominal
// and std cov*nominal, then truncated below at 5% of nominal.
FeatureTable sample_materials(const MaterialSample& nominal,
                              const Eigen::Ref<const VectorXd>& cov, Index count,
                              std::uint64_t seed);

MaterialSample material_from_row(const FeatureTable& table, Index row, Index n_stories);

}  // namespace edpmc
