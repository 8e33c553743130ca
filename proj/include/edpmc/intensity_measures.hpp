#pragma once

#include "edpmc/ground_motion.hpp"
#include "edpmc/types.hpp"

#include <array>

namespace edpmc {

inline constexpr int kImCount = 31;
inline constexpr double kGravity = 9.80665;  // m/s^2

using ImVector = Eigen::Matrix<double, kImCount, 1>;
using ModalPeriods = Eigen::Matrix<double, 5, 1>;

// Fixed feature schema for the N x 31 ground-motion side table:
//   1-3   PGA, PGV, PGD
//   4-6   RMS acceleration / velocity / displacement
//   7     Arias intensity  I_A = pi/(2g) * integral a^2 dt
//   8     significant duration D5-95 (Arias buildup 5% -> 95%)
//   9     CAV  = integral |a| dt
//   10    CAD  = integral |v| dt
//   11-15 PSa at the five modal periods (5% damping)
//   16-20 PSv at the five modal periods
//   21-25 Sd at the five modal periods
//   26    acceleration spectrum intensity: integral PSa dT, T in [0.1, 0.5]
//   27    velocity spectrum intensity:     integral PSv dT, T in [0.1, 2.5]
//   28    displacement spectrum intensity: integral Sd  dT, T in [0.1, 2.5]
//   29    effective peak acceleration: mean PSa over [0.1, 0.5] / 2.5
//   30    effective peak velocity:     mean PSv over [0.8, 1.2] / 2.5
//   31    mean period (zero-crossing based)
const std::array<std::string, kImCount>& im_names();

ImVector extract_ims(const GroundMotionRecord& record, const ModalPeriods& modal_periods);

// N x 31 side table for a record suite.
FeatureTable im_feature_table(const std::vector<GroundMotionRecord>& records,
                              const ModalPeriods& modal_periods);

}  // namespace edpmc
