#include "edpmc/ground_motion.hpp"

#include "edpmc/csv.hpp"
#include "edpmc/seeding.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace edpmc {

GroundMotionRecord::GroundMotionRecord(std::string id, double dt, VectorXd accel)
    : id_(std::move(id)), dt_(dt), accel_(std::move(accel)) {
    if (accel_.size() < 2)
        throw DataError("GroundMotionRecord '" + id_ + "': needs at least 2 samples");
    if (!(dt_ > 0.0))
        throw DataError("GroundMotionRecord '" + id_ + "': dt must be positive");
    if (dt_ > 0.02 + 1e-12)
        throw DataError("GroundMotionRecord '" + id_ +
                        "': dt must be <= 0.02 s for spectral accuracy");
    if (!accel_.allFinite())
        throw DataError("GroundMotionRecord '" + id_ + "': non-finite acceleration sample");
}

void GmSynthParams::validate() const {
    if (!(duration > 0.0)) throw DataError("GmSynthParams: duration must be positive");
    if (!(dt > 0.0) || dt > 0.02) throw DataError("GmSynthParams: dt must lie in (0, 0.02]");
    if (!(peak_fraction > 0.0) || peak_fraction > 1.0)
        throw DataError("GmSynthParams: peak_fraction must lie in (0, 1]");
    if (!(shape_exponent > 0.0)) throw DataError("GmSynthParams: shape_exponent must be positive");
    if (!(filter_freq > 0.0)) throw DataError("GmSynthParams: filter_freq must be positive");
    if (!(filter_damping > 0.0) || filter_damping >= 1.0)
        throw DataError("GmSynthParams: filter_damping must lie in (0, 1)");
    if (target_pga < 0.0) throw DataError("GmSynthParams: target_pga must be >= 0");
}

GroundMotionRecord synth_record(const GmSynthParams& params, const std::string& id) {
    params.validate();
    const Index n = static_cast<Index>(std::floor(params.duration / params.dt)) + 1;

    auto engine = make_engine(derive_seed(params.seed, 0x96bu));
    std::normal_distribution<double> noise(0.0, 1.0);

    // Band-pass biquad: bilinear transform of H(s) = 2*z*w*s / (s^2 + 2*z*w*s + w^2).
    const double w = 2.0 * M_PI * params.filter_freq;
    const double z = params.filter_damping;
    const double k = 2.0 / params.dt;
    const double den = k * k + 2.0 * z * w * k + w * w;
    const double b0 = 2.0 * z * w * k / den;
    const double b2 = -b0;
    const double a1 = (2.0 * w * w - 2.0 * k * k) / den;
    const double a2 = (k * k - 2.0 * z * w * k + w * w) / den;

    VectorXd accel(n);
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    const double t_peak = params.peak_fraction * params.duration;
    const double gamma = params.shape_exponent;
    for (Index i = 0; i < n; ++i) {
        const double x0 = noise(engine);
        const double y0 = b0 * x0 + b2 * x2 - a1 * y1 - a2 * y2;
        x2 = x1;
        x1 = x0;
        y2 = y1;
        y1 = y0;

        const double t = static_cast<double>(i) * params.dt;
        const double r = t / t_peak;
        const double envelope = std::pow(r, gamma) * std::exp(gamma * (1.0 - r));
        accel[i] = envelope * y0;
    }

    const double peak = accel.cwiseAbs().maxCoeff();
    if (peak > 0.0)
        accel *= params.target_pga / peak;
    else
        accel.setZero();
    return GroundMotionRecord(id, params.dt, std::move(accel));
}

MotionSeries integrate_record(const GroundMotionRecord& record) {
    const VectorXd detrended = record.accel().array() - record.accel().mean();
    const double dt = record.dt();
    const Index n = detrended.size();
    MotionSeries series;
    series.velocity.setZero(n);
    series.displacement.setZero(n);
    for (Index i = 1; i < n; ++i)
        series.velocity[i] =
            series.velocity[i - 1] + 0.5 * dt * (detrended[i - 1] + detrended[i]);
    for (Index i = 1; i < n; ++i)
        series.displacement[i] =
            series.displacement[i - 1] + 0.5 * dt * (series.velocity[i - 1] + series.velocity[i]);
    return series;
}

GroundMotionRecord read_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("read_record: cannot open '" + path.string() + "'");
    std::vector<double> times, values;
    std::string line;
    Index line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
            continue;  // header row
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("read_record: row " + std::to_string(line_no) +
                            " is not a two-column line");
        try {
            times.push_back(std::stod(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw DataError("read_record: non-numeric cell at row " + std::to_string(line_no));
        }
    }
    if (times.size() < 2) throw DataError("read_record: '" + path.string() + "' holds < 2 samples");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9)
            throw DataError("read_record: non-uniform time step at row " + std::to_string(i + 1));
    VectorXd accel = Eigen::Map<VectorXd>(values.data(), static_cast<Index>(values.size()));
    return GroundMotionRecord(path.stem().string(), dt, std::move(accel));
}

void write_record(const GroundMotionRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_record: cannot write '" + path.string() + "'");
    out << "time_s,accel_ms2\n";
    for (Index i = 0; i < record.samples(); ++i)
        out << format_full_precision(static_cast<double>(i) * record.dt()) << ','
            << format_full_precision(record.accel()[i]) << '\n';
}

}  // namespace edpmc
