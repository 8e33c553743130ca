#include "edpmc/intensity_measures.hpp"

#include "edpmc/response_spectrum.hpp"

#include <cmath>

namespace edpmc {

namespace {

constexpr double kSpectralDamping = 0.05;
constexpr double kBandStep = 0.05;    // s, spectral grid spacing
constexpr double kBandLow = 0.1;      // s
constexpr double kBandHigh = 2.5;     // s
constexpr double kAsiHigh = 0.5;      // s
constexpr double kEpvLow = 0.8;       // s
constexpr double kEpvHigh = 1.2;      // s

double trapezoid(const Eigen::Ref<const VectorXd>& y, double dx) {
    double sum = 0.0;
    for (Index i = 1; i < y.size(); ++i) sum += 0.5 * dx * (y[i - 1] + y[i]);
    return sum;
}

double rms(const Eigen::Ref<const VectorXd>& y, double dt, double duration) {
    if (duration <= 0.0) return 0.0;
    return std::sqrt(trapezoid(y.cwiseAbs2(), dt) / duration);
}

// First time the cumulative profile crosses `target`, linearly interpolated.
double crossing_time(const VectorXd& cumulative, double dt, double target) {
    for (Index i = 1; i < cumulative.size(); ++i) {
        if (cumulative[i] >= target) {
            const double lo = cumulative[i - 1];
            const double hi = cumulative[i];
            const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
            return (static_cast<double>(i - 1) + frac) * dt;
        }
    }
    return static_cast<double>(cumulative.size() - 1) * dt;
}

}  // namespace

const std::array<std::string, kImCount>& im_names() {
    static const std::array<std::string, kImCount> names = [] {
        std::array<std::string, kImCount> n;
        int i = 0;
        n[i++] = "pga";
        n[i++] = "pgv";
        n[i++] = "pgd";
        n[i++] = "rms_accel";
        n[i++] = "rms_vel";
        n[i++] = "rms_disp";
        n[i++] = "arias_intensity";
        n[i++] = "sig_duration_d5_95";
        n[i++] = "cav";
        n[i++] = "cad";
        for (int m = 1; m <= 5; ++m) n[i++] = "psa_mode" + std::to_string(m);
        for (int m = 1; m <= 5; ++m) n[i++] = "psv_mode" + std::to_string(m);
        for (int m = 1; m <= 5; ++m) n[i++] = "sd_mode" + std::to_string(m);
        n[i++] = "asi";
        n[i++] = "vsi";
        n[i++] = "dsi";
        n[i++] = "epa";
        n[i++] = "epv";
        n[i++] = "mean_period";
        return n;
    }();
    return names;
}

ImVector extract_ims(const GroundMotionRecord& record, const ModalPeriods& modal_periods) {
    if ((modal_periods.array() <= 0.0).any())
        throw DataError("extract_ims: modal periods must be positive");

    const VectorXd& accel = record.accel();
    const double dt = record.dt();
    const double duration = record.duration();
    const MotionSeries motion = integrate_record(record);

    ImVector im;
    int idx = 0;
    im[idx++] = record.pga();
    im[idx++] = motion.velocity.cwiseAbs().maxCoeff();
    im[idx++] = motion.displacement.cwiseAbs().maxCoeff();
    im[idx++] = rms(accel, dt, duration);
    im[idx++] = rms(motion.velocity, dt, duration);
    im[idx++] = rms(motion.displacement, dt, duration);

    // Arias intensity and its buildup profile.
    VectorXd arias_cum(accel.size());
    arias_cum[0] = 0.0;
    for (Index i = 1; i < accel.size(); ++i)
        arias_cum[i] = arias_cum[i - 1] +
                       0.5 * dt * (accel[i - 1] * accel[i - 1] + accel[i] * accel[i]);
    const double arias = M_PI / (2.0 * kGravity) * arias_cum[accel.size() - 1];
    im[idx++] = arias;
    if (arias_cum[accel.size() - 1] > 0.0) {
        const double total = arias_cum[accel.size() - 1];
        im[idx++] = crossing_time(arias_cum, dt, 0.95 * total) -
                    crossing_time(arias_cum, dt, 0.05 * total);
    } else {
        im[idx++] = 0.0;
    }
    im[idx++] = trapezoid(accel.cwiseAbs(), dt);            // CAV
    im[idx++] = trapezoid(motion.velocity.cwiseAbs(), dt);  // CAD

    const SpectralOrdinates modal =
        response_spectrum(record, modal_periods, kSpectralDamping);
    for (int m = 0; m < 5; ++m) im[idx++] = modal.psa[m];
    for (int m = 0; m < 5; ++m) im[idx++] = modal.psv[m];
    for (int m = 0; m < 5; ++m) im[idx++] = modal.sd[m];

    // Band ordinates on a fixed 0.05 s grid over [0.1, 2.5] s.
    const Index n_band = static_cast<Index>(std::lround((kBandHigh - kBandLow) / kBandStep)) + 1;
    VectorXd band_periods(n_band);
    for (Index i = 0; i < n_band; ++i) band_periods[i] = kBandLow + kBandStep * static_cast<double>(i);
    const SpectralOrdinates band = response_spectrum(record, band_periods, kSpectralDamping);

    const Index n_asi = static_cast<Index>(std::lround((kAsiHigh - kBandLow) / kBandStep)) + 1;
    im[idx++] = trapezoid(band.psa.head(n_asi), kBandStep);  // ASI
    im[idx++] = trapezoid(band.psv, kBandStep);              // VSI
    im[idx++] = trapezoid(band.sd, kBandStep);               // DSI
    im[idx++] = band.psa.head(n_asi).mean() / 2.5;           // EPA

    const Index epv_first = static_cast<Index>(std::lround((kEpvLow - kBandLow) / kBandStep));
    const Index epv_count = static_cast<Index>(std::lround((kEpvHigh - kEpvLow) / kBandStep)) + 1;
    im[idx++] = band.psv.segment(epv_first, epv_count).mean() / 2.5;  // EPV

    // Mean period from zero crossings of the acceleration trace.
    long crossings = 0;
    for (Index i = 1; i < accel.size(); ++i)
        if ((accel[i - 1] < 0.0 && accel[i] > 0.0) || (accel[i - 1] > 0.0 && accel[i] < 0.0))
            ++crossings;
    im[idx++] = crossings > 0 ? 2.0 * duration / static_cast<double>(crossings) : 0.0;

    return im;
}

FeatureTable im_feature_table(const std::vector<GroundMotionRecord>& records,
                              const ModalPeriods& modal_periods) {
    if (records.empty()) throw DataError("im_feature_table: no records");
    MatrixXd values(static_cast<Index>(records.size()), kImCount);
    std::vector<std::string> row_ids;
    row_ids.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        values.row(static_cast<Index>(i)) = extract_ims(records[i], modal_periods).transpose();
        row_ids.push_back(records[i].id());
    }
    const auto& names = im_names();
    return FeatureTable(FeatureAxis::GroundMotion, std::move(values),
                        std::vector<std::string>(names.begin(), names.end()),
                        std::move(row_ids));
}

}  // namespace edpmc
