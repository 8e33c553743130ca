#pragma once

#include "edpmc/ground_motion.hpp"
#include "edpmc/types.hpp"

namespace edpmc {

// Pseudo-spectral ordinates per period: Sd = max |relative displacement|,
// PSv = omega * Sd, PSa = omega^2 * Sd.
struct SpectralOrdinates {
    VectorXd periods;  // s
    VectorXd psa;      // m/s^2
    VectorXd psv;      // m/s
    VectorXd sd;       // m
};

// Linear-elastic single-mass oscillator response at each period (Newmark
// average acceleration). Periods shorter than 4*dt are rejected.
SpectralOrdinates response_spectrum(const GroundMotionRecord& record,
                                    const Eigen::Ref<const VectorXd>& periods,
                                    double damping);

}  // namespace edpmc
