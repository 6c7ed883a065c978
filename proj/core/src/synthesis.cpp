#include "actm/synthesis.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace actm::synthesis {

void PositiveSpring::validate() const {
    if (!(stiffness > 0.0)) {
        throw ConfigError("spring stiffness must be positive");
    }
    if (!(preload >= 0.0)) {
        throw ConfigError("spring preload must be non-negative");
    }
}

double spring_torque(const PositiveSpring &spring, double theta) {
    return -spring.stiffness * (theta + spring.preload);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("line fit needs two or more paired samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("line fit needs two distinct abscissae");
    }
    LineFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

TorqueCurve::TorqueCurve(std::vector<TorqueSample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw DomainError("torque curve needs at least one sample");
    }
    std::sort(samples_.begin(), samples_.end(),
              [](const TorqueSample &a, const TorqueSample &b) { return a.theta < b.theta; });
    window_start_ = samples_.front().theta;
    window_end_ = samples_.back().theta;
}

TorqueCurve::TorqueCurve(std::vector<TorqueSample> samples, double window_start, double window_end)
    : TorqueCurve(std::move(samples)) {
    if (!(window_end >= window_start)) {
        throw DomainError("torque curve window is reversed");
    }
    window_start_ = window_start;
    window_end_ = window_end;
}

std::vector<double> TorqueCurve::thetas() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto &s : samples_) {
        out.push_back(s.theta);
    }
    return out;
}

std::vector<double> TorqueCurve::torques() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto &s : samples_) {
        out.push_back(s.torque);
    }
    return out;
}

std::vector<double> TorqueCurve::window_values(bool want_theta) const {
    // Window ends are matched with a small relative slack so that grids built
    // by accumulating steps still include their end points.
    const double slack = 1e-9 * std::max(1.0, std::abs(window_end_));
    std::vector<double> out;
    for (const auto &s : samples_) {
        if (s.theta >= window_start_ - slack && s.theta <= window_end_ + slack) {
            out.push_back(want_theta ? s.theta : s.torque);
        }
    }
    if (out.empty()) {
        throw RangeError("no torque samples inside the statistics window");
    }
    return out;
}

LineFit TorqueCurve::fit() const {
    const auto x = window_values(true);
    const auto y = window_values(false);
    return fit_line(x, y);
}

double TorqueCurve::mean() const {
    const auto y = window_values(false);
    double sum = 0.0;
    for (double v : y) {
        sum += v;
    }
    return sum / static_cast<double>(y.size());
}

double TorqueCurve::mean_theta() const {
    const auto x = window_values(true);
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    return sum / static_cast<double>(x.size());
}

double TorqueCurve::std_dev() const {
    const auto y = window_values(false);
    const double m = mean();
    double ss = 0.0;
    for (double v : y) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(y.size()));
}

double TorqueCurve::coefficient_of_variation() const {
    const double m = std::abs(mean());
    return m > 0.0 ? std_dev() / m : std::numeric_limits<double>::infinity();
}

double interpolate_force(const fem::ForceDeflectionCurve &curve, double chord) {
    const auto &s = curve.samples;
    if (s.empty()) {
        throw RangeError("empty force-deflection curve");
    }
    const double lo = s.front().chord;
    const double hi = s.back().chord;
    const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    if (chord < lo - slack || chord > hi + slack) {
        throw RangeError("chord " + std::to_string(chord) + " m outside the sampled range [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (s.size() == 1) {
        return s.front().axial_force;
    }
    auto it = std::lower_bound(s.begin(), s.end(), chord,
                               [](const fem::CurveSample &a, double c) { return a.chord < c; });
    if (it == s.begin()) {
        return s.front().axial_force;
    }
    if (it == s.end()) {
        return s.back().axial_force;
    }
    const auto &b = *it;
    const auto &a = *(it - 1);
    const double t = (chord - a.chord) / (b.chord - a.chord);
    return a.axial_force + t * (b.axial_force - a.axial_force);
}

TorqueCurve nsm_torque_curve(const fem::ForceDeflectionCurve &curve,
                             const geometry::CrankGeometry &geom,
                             std::span<const double> thetas, double window_start,
                             double window_end) {
    std::vector<TorqueSample> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        const double force = interpolate_force(curve, geometry::elastic_length(geom, theta));
        out.push_back({theta, geometry::crank_torque(geom, force, theta)});
    }
    return TorqueCurve(std::move(out), window_start, window_end);
}

TorqueCurve add_curves(const TorqueCurve &a, const TorqueCurve &b) {
    if (a.size() != b.size()) {
        throw GridMismatch("torque curves have different sample counts");
    }
    std::vector<TorqueSample> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ta = a.samples()[i].theta;
        const double tb = b.samples()[i].theta;
        if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) {
            throw GridMismatch("torque curves are sampled at different angles");
        }
        out.push_back({ta, a.samples()[i].torque + b.samples()[i].torque});
    }
    return TorqueCurve(std::move(out), a.window_start(), a.window_end());
}

TorqueCurve net_torque_curve(const TorqueCurve &nsm, const PositiveSpring &spring) {
    std::vector<TorqueSample> spring_samples;
    spring_samples.reserve(nsm.size());
    for (const auto &s : nsm.samples()) {
        spring_samples.push_back({s.theta, spring_torque(spring, s.theta)});
    }
    return add_curves(nsm, TorqueCurve(std::move(spring_samples), nsm.window_start(), nsm.window_end()));
}

double preload_for_target(double stiffness, const TorqueCurve &nsm, double target_torque) {
    if (!(stiffness > 0.0)) {
        throw DomainError("spring stiffness must be positive");
    }
    const double preload = (nsm.mean() - target_torque) / stiffness - nsm.mean_theta();
    if (preload < 0.0) {
        throw Infeasible("target torque needs a negative preload of " +
                         std::to_string(preload * 180.0 / std::numbers::pi) + " deg");
    }
    return preload;
}

fem::BeamDesign scale_section(const fem::BeamDesign &design, double force_scale) {
    if (!(force_scale > 0.0)) {
        throw DomainError("section scale must be positive");
    }
    fem::BeamDesign out = design;
    out.section.width *= force_scale;
    return out;
}

StressReport stress_check(const fem::ForceDeflectionCurve &curve, const fem::Material &material) {
    const double peak = curve.max_stress();
    return {peak, material.yield_strength - peak, peak < material.yield_strength};
}

void HandleCalibration::validate() const {
    if (!(ratio > 0.0)) {
        throw ConfigError("handle ratio must be positive");
    }
    if (!(open_preload >= 0.0)) {
        throw ConfigError("open-handle preload must be non-negative");
    }
}

GraspTorque handle_map(double handle_angle, const HandleCalibration &calibration,
                       double stiffness, const TorqueCurve &nsm) {
    const double preload = calibration.open_preload - calibration.ratio * handle_angle;
    const double torque = nsm.mean() - stiffness * (nsm.mean_theta() + preload);
    return {torque <= 0.0, torque};
}

std::vector<double> SynthesisConfig::window_angles() const {
    const int steps = static_cast<int>(std::llround(theta2 / window_step));
    if (steps < 1 || std::abs(steps * window_step - theta2) > 1e-9) {
        throw ConfigError("operating window must be a whole number of window steps");
    }
    return geometry::AngleSchedule(window_start(), window_end(), steps + 1).samples();
}

void SynthesisConfig::validate() const {
    if (!(theta2 > 0.0)) {
        throw ConfigError("theta2 must be positive");
    }
    if (!(theta1 >= 0.0)) {
        throw ConfigError("theta1 must be non-negative");
    }
    if (!(theta1 > 0.0 || theta2 < std::numbers::pi) || window_end() > std::numbers::pi) {
        throw ConfigError("operating window must stay inside (0, 180] deg");
    }
    if (!(stiffness > 0.0)) {
        throw ConfigError("spring stiffness must be positive");
    }
    if (!(window_step > 0.0)) {
        throw ConfigError("window step must be positive");
    }
    if (!(jaw_max > jaw_min)) {
        throw ConfigError("jaw limits are reversed");
    }
}

std::pair<double, double> relax_angles(const geometry::CrankGeometry &geom, double relaxed_length) {
    const double c = geometry::angle_for_length(geom, relaxed_length);
    return {-c, c};
}

TargetResult synthesize_target(const SynthesisConfig &config, const TorqueCurve &nsm,
                               double target_torque) {
    const double preload = preload_for_target(config.stiffness, nsm, target_torque);
    TorqueCurve net = net_torque_curve(nsm, {config.stiffness, preload});
    const double mean = net.mean();
    const double sd = net.std_dev();
    const bool opens = mean <= 0.0;
    return {target_torque, preload, net, mean, sd, net.coefficient_of_variation(), opens};
}

} // namespace actm::synthesis
