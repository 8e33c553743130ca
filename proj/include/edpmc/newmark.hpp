#pragma once

#include "edpmc/ground_motion.hpp"
#include "edpmc/structure.hpp"
#include "edpmc/types.hpp"

#include <functional>
#include <utility>

namespace edpmc {

// Thrown on Newton non-convergence; carries the offending step index.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EdpPair {
    double max_top_disp = 0.0;    // m
    double max_base_shear = 0.0;  // N
    bool collapsed = false;
};

struct NewmarkOptions {
    double newton_rel_tol = 1e-8;
    int max_newton_iter = 30;
    // a1 multiplies the current tangent stiffness; false falls back to the
    // initial stiffness.
    bool tangent_stiffness_damping = true;
    double collapse_height_factor = 1e3;
    // Test hook: nonzero initial displacements (free-vibration checks).
    VectorXd initial_displacement;
};

// Per-step observer payload (references stay valid only during the call).
struct SimStep {
    Index step;
    double time;
    double ground_accel;
    const VectorXd& displacement;
    const VectorXd& velocity;
    const VectorXd& acceleration;
    const VectorXd& story_force;  // committed restoring force per story
    double base_shear;            // story-1 spring + story-1 damper force
};
using StepObserver = std::function<void(const SimStep&)>;

// Implicit Newmark (gamma = 1/2, beta = 1/4) with Newton iteration per step;
// story shears follow bilinear kinematic-hardening hysteresis; Rayleigh
// damping C = a0*M + a1*K with a0, a1 anchored to the nominal model's first
// two modes at the sampled damping ratio.
EdpPair newmark_nonlinear(const StructureModel& model, const MaterialSample& material,
                          const GroundMotionRecord& record,
                          const NewmarkOptions& options = {},
                          const StepObserver& observer = {});

// Full extended-cloud cross product: every record against every material row.
// Cells run independently (optionally in parallel) and merge by index.
std::pair<EdpMatrix, EdpMatrix> build_edp_matrices(
    const std::vector<GroundMotionRecord>& records, const FeatureTable& materials,
    const StructureModel& model, const NewmarkOptions& options = {}, int threads = 1);

// Linear-elastic SDOF under base acceleration, same integrator; returns the
// peak absolute relative displacement.
double sdof_peak_displacement(const Eigen::Ref<const VectorXd>& accel, double dt,
                              double period, double damping);

// Trajectory variant used by oracle tests.
VectorXd sdof_displacement_history(const Eigen::Ref<const VectorXd>& accel, double dt,
                                   double period, double damping);

}  // namespace edpmc
