#include "edpmc/structure.hpp"

#include "edpmc/sampling.hpp"
#include "edpmc/seeding.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace edpmc {

StructureModel::StructureModel(VectorXd masses, VectorXd stiffnesses, VectorXd yield_drifts,
                               double story_height)
    : masses_(std::move(masses)), stiffnesses_(std::move(stiffnesses)),
      yield_drifts_(std::move(yield_drifts)), story_height_(story_height) {
    const Index n = masses_.size();
    if (n < 2) throw DataError("StructureModel: needs at least 2 stories");
    if (stiffnesses_.size() != n || yield_drifts_.size() != n)
        throw DataError("StructureModel: per-story arrays must all have one entry per story");
    if ((masses_.array() <= 0.0).any() || (stiffnesses_.array() <= 0.0).any())
        throw DataError("StructureModel: masses and stiffnesses must be positive");
    if ((yield_drifts_.array() <= 0.0).any())
        throw DataError("StructureModel: yield drifts must be positive");
    if (!(story_height_ > 0.0)) throw DataError("StructureModel: story height must be positive");
}

StructureModel default_structure() {
    const Index n = 6;
    VectorXd masses = VectorXd::Constant(n, 2.5e5);        // kg per story
    VectorXd stiffnesses(n);
    for (Index i = 0; i < n; ++i)                          // mild taper toward the top
        stiffnesses[i] = 2.6e8 * (1.0 - 0.25 * static_cast<double>(i) / static_cast<double>(n - 1));
    VectorXd yield_drifts = VectorXd::Constant(n, 0.02);   // m
    return StructureModel(std::move(masses), std::move(stiffnesses), std::move(yield_drifts), 3.0);
}

MaterialSample MaterialSample::nominal(Index n_stories) {
    MaterialSample sample;
    sample.story_stiffness_mult = VectorXd::Ones(n_stories);
    sample.story_strength_mult = VectorXd::Ones(n_stories);
    return sample;
}

void MaterialSample::validate() const {
    if (!(mass_scale > 0.0) || !(stiffness_scale > 0.0) || !(strength_scale > 0.0) ||
        !(roof_mass_mult > 0.0))
        throw DataError("MaterialSample: scales must be positive");
    if (!(post_yield_ratio >= 0.0) || post_yield_ratio >= 1.0)
        throw DataError("MaterialSample: post-yield ratio must lie in [0, 1)");
    if (!(damping_ratio > 0.0) || damping_ratio >= 0.2)
        throw DataError("MaterialSample: damping ratio must lie in (0, 0.2)");
    if (story_stiffness_mult.size() != story_strength_mult.size() ||
        story_stiffness_mult.size() < 1)
        throw DataError("MaterialSample: per-story multiplier lengths disagree");
    if ((story_stiffness_mult.array() <= 0.0).any() ||
        (story_strength_mult.array() <= 0.0).any())
        throw DataError("MaterialSample: per-story multipliers must be positive");
}

VectorXd MaterialSample::to_vector() const {
    const Index n = story_stiffness_mult.size();
    VectorXd v(6 + 2 * n);
    v[0] = mass_scale;
    v[1] = stiffness_scale;
    v[2] = strength_scale;
    v[3] = post_yield_ratio;
    v[4] = damping_ratio;
    v.segment(5, n) = story_stiffness_mult;
    v.segment(5 + n, n) = story_strength_mult;
    v[5 + 2 * n] = roof_mass_mult;
    return v;
}

MaterialSample MaterialSample::from_vector(const Eigen::Ref<const VectorXd>& params,
                                           Index n_stories) {
    if (params.size() != 6 + 2 * n_stories)
        throw DataError("MaterialSample: expected " + std::to_string(6 + 2 * n_stories) +
                        " parameters for " + std::to_string(n_stories) + " stories, got " +
                        std::to_string(params.size()));
    MaterialSample sample;
    sample.mass_scale = params[0];
    sample.stiffness_scale = params[1];
    sample.strength_scale = params[2];
    sample.post_yield_ratio = params[3];
    sample.damping_ratio = params[4];
    sample.story_stiffness_mult = params.segment(5, n_stories);
    sample.story_strength_mult = params.segment(5 + n_stories, n_stories);
    sample.roof_mass_mult = params[5 + 2 * n_stories];
    sample.validate();
    return sample;
}

std::vector<std::string> material_param_names(Index n_stories) {
    std::vector<std::string> names = {"mass_scale", "stiffness_scale", "strength_scale",
                                      "post_yield_ratio", "damping_ratio"};
    for (Index i = 0; i < n_stories; ++i)
        names.push_back("k_mult_story" + std::to_string(i + 1));
    for (Index i = 0; i < n_stories; ++i)
        names.push_back("fy_mult_story" + std::to_string(i + 1));
    names.push_back("roof_mass_mult");
    return names;
}

EffectiveProperties apply_material(const StructureModel& model, const MaterialSample& material) {
    material.validate();
    if (material.story_stiffness_mult.size() != model.stories())
        throw DataError("apply_material: per-story multipliers do not match story count");
    EffectiveProperties props;
    props.masses = model.masses() * material.mass_scale;
    props.masses[model.stories() - 1] *= material.roof_mass_mult;
    props.stiffnesses = model.stiffnesses().cwiseProduct(material.story_stiffness_mult) *
                        material.stiffness_scale;
    // Yield force anchored to the nominal spring: fy = k_nom * d_y, scaled by
    // the strength knobs only, so strength and stiffness vary independently.
    props.yield_forces = model.stiffnesses().cwiseProduct(model.yield_drifts())
                             .cwiseProduct(material.story_strength_mult) *
                         material.strength_scale;
    return props;
}

VectorXd modal_periods(const StructureModel& model, const MaterialSample& material) {
    const auto props = apply_material(model, material);
    const Index n = model.stories();
    MatrixXd stiffness = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        stiffness(i, i) += props.stiffnesses[i];
        if (i + 1 < n) {
            stiffness(i, i) += props.stiffnesses[i + 1];
            stiffness(i, i + 1) -= props.stiffnesses[i + 1];
            stiffness(i + 1, i) -= props.stiffnesses[i + 1];
        }
    }
    const VectorXd inv_sqrt_m = props.masses.array().rsqrt();
    const MatrixXd reduced = inv_sqrt_m.asDiagonal() * stiffness * inv_sqrt_m.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(reduced);
    if (solver.info() != Eigen::Success)
        throw DataError("modal_periods: eigen-solution failed on degenerate stiffness");
    VectorXd periods(n);
    for (Index i = 0; i < n; ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (!(lambda > 0.0))
            throw DataError("modal_periods: non-positive eigenvalue, stiffness is degenerate");
        periods[i] = 2.0 * M_PI / std::sqrt(lambda);  // ascending lambda -> descending T
    }
    return periods;
}

Eigen::Matrix<double, 5, 1> first_five_periods(const StructureModel& model,
                                               const MaterialSample& material) {
    if (model.stories() < 5)
        throw DataError("first_five_periods: needs at least 5 stories");
    return modal_periods(model, material).head<5>();
}

FeatureTable sample_materials(const MaterialSample& nominal,
                              const Eigen::Ref<const VectorXd>& cov, Index count,
                              std::uint64_t seed) {
    nominal.validate();
    const VectorXd centre = nominal.to_vector();
    const Index p = centre.size();
    if (cov.size() != p)
        throw DataError("sample_materials: cov needs one entry per parameter");
    if ((cov.array() < 0.0).any())
        throw DataError("sample_materials: cov ratios must be >= 0");
    if (count < 1) throw DataError("sample_materials: count must be >= 1");

    SamplerConfig config;
    config.scheme = Scheme::LatinHypercube;
    config.count = count;
    config.dims = p;
    config.seed = derive_seed(seed, 0x3a7u);
    MatrixXd u = lhs_sample(config);
    // LHS points lie in [0, 1); nudge exact zeros inside the open interval.
    u = u.cwiseMax(1e-15);

    MatrixXd samples = gaussian_transform(u, centre, cov.cwiseProduct(centre));
    const VectorXd floor = 0.05 * centre;
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < count; ++i) samples(i, j) = std::max(samples(i, j), floor[j]);

    const Index n_stories = nominal.story_stiffness_mult.size();
    std::vector<std::string> row_ids(count);
    for (Index i = 0; i < count; ++i) row_ids[static_cast<std::size_t>(i)] = "mat" + std::to_string(i + 1);
    return FeatureTable(FeatureAxis::Material, std::move(samples),
                        material_param_names(n_stories), std::move(row_ids));
}

MaterialSample material_from_row(const FeatureTable& table, Index row, Index n_stories) {
    if (row < 0 || row >= table.rows())
        throw DataError("material_from_row: row out of range");
    return MaterialSample::from_vector(table.values().row(row).transpose(), n_stories);
}

}  // namespace edpmc
