#pragma once

#include "edpmc/types.hpp"

#include <cstdint>
#include <filesystem>

namespace edpmc {

// Uniformly sampled ground acceleration time series in m/s^2.
class GroundMotionRecord {
  public:
    GroundMotionRecord(std::string id, double dt, VectorXd accel);

    const std::string& id() const { return id_; }
    double dt() const { return dt_; }
    const VectorXd& accel() const { return accel_; }
    Index samples() const { return accel_.size(); }
    double duration() const { return dt_ * static_cast<double>(accel_.size() - 1); }
    double pga() const { return accel_.cwiseAbs().maxCoeff(); }

  private:
    std::string id_;
    double dt_;
    VectorXd accel_;
};

// Synthesis recipe: seeded Gaussian noise shaped by a second-order band-pass
// filter, an amplitude envelope peaking at peak_fraction * duration, and a
// final rescale to the target PGA.
struct GmSynthParams {
    double duration = 20.0;        // s
    double dt = 0.01;              // s
    double peak_fraction = 0.25;   // envelope peak time / duration
    double shape_exponent = 2.0;   // envelope rise/decay sharpness
    double filter_freq = 2.5;      // Hz, band-pass centre
    double filter_damping = 0.6;   // band-pass width parameter
    double target_pga = 2.0;       // m/s^2
    std::uint64_t seed = 0;

    void validate() const;
};

GroundMotionRecord synth_record(const GmSynthParams& params, const std::string& id);

struct MotionSeries {
    VectorXd velocity;      // m/s
    VectorXd displacement;  // m
};

// Trapezoidal cumulative integration with zero initial conditions; the
// acceleration is mean-detrended first (baseline correction).
MotionSeries integrate_record(const GroundMotionRecord& record);

// Two-column CSV (time s, accel m/s^2); the loader checks dt uniformity to
// 1e-9 s and takes the id from the file stem.
GroundMotionRecord read_record(const std::filesystem::path& path);
void write_record(const GroundMotionRecord& record, const std::filesystem::path& path);

}  // namespace edpmc
