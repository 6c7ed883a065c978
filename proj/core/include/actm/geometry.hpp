// Crank / elastic-element kinematics.
//
// The crank rotates about P with radius R. The elastic element runs from a
// fixed anchor O, at distance w from P, to the crank tip. theta = 0 puts the
// tip at B, collinear with O and P on the far side of P, so the element is
// longest there. All quantities are SI (metres, radians, newtons).
#pragma once

#include <vector>

namespace actm::geometry {

class CrankGeometry {
public:
    /// Throws DomainError unless w > R > 0.
    CrankGeometry(double offset_w, double radius_r);

    double w() const { return w_; }
    double r() const { return r_; }

    double min_length() const { return w_ - r_; }
    double max_length() const { return w_ + r_; }

private:
    double w_;
    double r_;
};

/// Uniform sampling grid between two angles, both ends inclusive.
class AngleSchedule {
public:
    AngleSchedule(double start, double end, int steps);

    double start() const { return start_; }
    double end() const { return end_; }
    int steps() const { return steps_; }

    double at(int i) const;
    std::vector<double> samples() const;

private:
    double start_;
    double end_;
    int steps_;
};

/// L_S(theta) = sqrt(w^2 + R^2 + 2 w R cos theta).
double elastic_length(const CrankGeometry &geom, double theta);

/// Inverse of elastic_length on [0, pi]. Throws DomainError when the length
/// is outside [w - R, w + R].
double angle_for_length(const CrankGeometry &geom, double length);

/// Torque on the crank from an axial element force (tension positive):
/// T = F w R sin(theta) / L_S(theta). Positive torque drives theta upward,
/// i.e. shortens the element.
double crank_torque(const CrankGeometry &geom, double axial_force, double theta);

/// d(torque)/d(force): the moment arm w R sin(theta) / L_S(theta).
double moment_arm(const CrankGeometry &geom, double theta);

/// delta(theta) = L_S(theta) - L0, positive when the element is stretched.
double element_deflection(const CrankGeometry &geom, double relaxed_length, double theta);

struct ForceSample {
    double theta;
    double force;
};

/// Axial force an element must carry so that the crank sees exactly
/// `target_torque` at each scheduled angle. Throws DomainError when a sample
/// has sin(theta) <= 0.
std::vector<ForceSample> target_force_profile(const CrankGeometry &geom,
                                              double target_torque,
                                              const AngleSchedule &schedule);

} // namespace actm::geometry
