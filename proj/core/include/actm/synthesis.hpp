// Full mechanism assembly: a positive torsional spring with an adjustable
// preload superposed on the torque the compliant element puts on the crank.
//
// Sign convention: positive torque drives theta upward and closes the jaw.
// A tensioned element pulls the crank tip toward the anchor, so its torque
// is positive on (0, pi); the spring torque -k (theta + preload) opposes it.
#pragma once

#include "actm/beam_fem.hpp"
#include "actm/geometry.hpp"
#include "actm/units.hpp"

#include <span>
#include <utility>
#include <vector>

namespace actm::synthesis {

struct PositiveSpring {
    double stiffness;  // N·m/rad, > 0
    double preload;    // rad, >= 0

    void validate() const;
};

/// -k (theta + preload).
double spring_torque(const PositiveSpring &spring, double theta);

struct TorqueSample {
    double theta;   // rad
    double torque;  // N·m
};

struct LineFit {
    double slope;
    double intercept;
    double rms_residual;
};

/// Ordinary least squares of y on x. Needs at least two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Torque samples plus a statistics window. Statistics are recomputed from
/// the samples on every call.
class TorqueCurve {
public:
    /// Sorts by theta. The window defaults to the full sample range.
    explicit TorqueCurve(std::vector<TorqueSample> samples);
    TorqueCurve(std::vector<TorqueSample> samples, double window_start, double window_end);

    const std::vector<TorqueSample> &samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double window_start() const { return window_start_; }
    double window_end() const { return window_end_; }

    std::vector<double> thetas() const;
    std::vector<double> torques() const;

    /// Line fit over the samples inside the window.
    LineFit fit() const;
    double mean() const;
    /// Population standard deviation about the mean (RMS residual of a
    /// constant fit) over the window.
    double std_dev() const;
    /// std_dev / |mean|.
    double coefficient_of_variation() const;
    double mean_theta() const;

private:
    std::vector<double> window_values(bool want_theta) const;

    std::vector<TorqueSample> samples_;
    double window_start_;
    double window_end_;
};

/// Axial force at `chord`, linearly interpolated between FEM samples sorted by
/// ascending chord. Throws RangeError outside the sampled chord range.
double interpolate_force(const fem::ForceDeflectionCurve &curve, double chord);

/// T_NSM(theta) = crank_torque(F(L_S(theta)), theta) at each angle.
TorqueCurve nsm_torque_curve(const fem::ForceDeflectionCurve &curve,
                             const geometry::CrankGeometry &geom,
                             std::span<const double> thetas, double window_start,
                             double window_end);

/// Pointwise sum of two curves on the same theta grid (GridMismatch otherwise).
TorqueCurve add_curves(const TorqueCurve &a, const TorqueCurve &b);

/// nsm + spring torque sampled on the nsm grid; keeps the nsm window.
TorqueCurve net_torque_curve(const TorqueCurve &nsm, const PositiveSpring &spring);

/// Preload that makes the mean net torque over the window equal the target:
/// mean_net = mean_nsm - k (mean_theta + preload). Throws Infeasible when the
/// required preload is negative.
double preload_for_target(double stiffness, const TorqueCurve &nsm, double target_torque);

/// Design with its out-of-plane width multiplied by `force_scale`.
fem::BeamDesign scale_section(const fem::BeamDesign &design, double force_scale);

struct StressReport {
    double peak;    // Pa
    double margin;  // yield - peak, Pa
    bool pass;      // peak < yield
};

StressReport stress_check(const fem::ForceDeflectionCurve &curve, const fem::Material &material);

/// Linear tendon/pulley model: closing the handle by h unwinds the spring
/// preload, preload(h) = open_preload - ratio * h.
struct HandleCalibration {
    double ratio;         // preload angle per handle angle
    double open_preload;  // rad, preload with the handle fully open

    void validate() const;
};

struct GraspTorque {
    bool jaw_opens;  // net torque <= 0
    double torque;   // mean net torque over the window, N·m
};

GraspTorque handle_map(double handle_angle, const HandleCalibration &calibration,
                       double stiffness, const TorqueCurve &nsm);

struct SynthesisConfig {
    geometry::CrankGeometry geometry{0.012, 0.008};
    double stiffness = units::mNm_per_deg(0.3);  // N·m/rad
    double theta1 = units::deg(45.0);            // preload period
    double theta2 = units::deg(90.0);            // operating window
    double jaw_min = 0.0;
    double jaw_max = units::deg(90.0);
    double jaw_length = units::mm(20.0);  // metadata only
    double window_step = units::deg(15.0);

    double window_start() const { return theta1; }
    double window_end() const { return theta1 + theta2; }
    /// Window angles at window_step spacing, both ends included.
    std::vector<double> window_angles() const;

    /// Throws ConfigError when theta2 <= 0, theta1 < 0 or the window leaves (0, pi].
    void validate() const;
};

/// Crank angles at which a relaxed element of chord L0 is unstretched:
/// (A, C) = (-acos(...), +acos(...)) about B. Throws DomainError when L0 is
/// outside the crank's reach.
std::pair<double, double> relax_angles(const geometry::CrankGeometry &geom, double relaxed_length);

struct TargetResult {
    double target;     // N·m
    double preload;    // rad
    TorqueCurve net;
    double mean;       // N·m
    double std_dev;    // N·m
    double cv;
    bool jaw_opens;
};

/// Preload calibration plus the net curve for one commanded torque.
TargetResult synthesize_target(const SynthesisConfig &config, const TorqueCurve &nsm,
                               double target_torque);

} // namespace actm::synthesis
