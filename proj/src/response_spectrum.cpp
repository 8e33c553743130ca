#include "edpmc/response_spectrum.hpp"

#include "edpmc/newmark.hpp"

#include <cmath>

namespace edpmc {

SpectralOrdinates response_spectrum(const GroundMotionRecord& record,
                                    const Eigen::Ref<const VectorXd>& periods,
                                    double damping) {
    if (damping < 0.0 || damping > 0.5)
        throw DataError("response_spectrum: damping must lie in [0, 0.5]");
    SpectralOrdinates spectrum;
    spectrum.periods = periods;
    const Index n = periods.size();
    spectrum.psa.resize(n);
    spectrum.psv.resize(n);
    spectrum.sd.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double period = periods[i];
        const double sd = sdof_peak_displacement(record.accel(), record.dt(), period, damping);
        const double omega = 2.0 * M_PI / period;
        spectrum.sd[i] = sd;
        spectrum.psv[i] = omega * sd;
        spectrum.psa[i] = omega * omega * sd;
    }
    return spectrum;
}

}  // namespace edpmc
