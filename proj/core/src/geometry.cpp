#include "actm/geometry.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace actm::geometry {

CrankGeometry::CrankGeometry(double offset_w, double radius_r) : w_(offset_w), r_(radius_r) {
    if (!(r_ > 0.0) || !(w_ > 0.0)) {
        throw DomainError("crank geometry requires w > 0 and R > 0");
    }
    if (!(w_ > r_)) {
        throw DomainError("crank geometry requires w > R (anchor outside the crank circle)");
    }
}

AngleSchedule::AngleSchedule(double start, double end, int steps)
    : start_(start), end_(end), steps_(steps) {
    if (steps_ < 2) {
        throw DomainError("angle schedule needs at least 2 samples");
    }
    if (start_ == end_) {
        throw DomainError("angle schedule start and end coincide");
    }
}

double AngleSchedule::at(int i) const {
    if (i == steps_ - 1) {
        return end_;
    }
    return start_ + (end_ - start_) * static_cast<double>(i) / static_cast<double>(steps_ - 1);
}

std::vector<double> AngleSchedule::samples() const {
    std::vector<double> out(static_cast<std::size_t>(steps_));
    for (int i = 0; i < steps_; ++i) {
        out[static_cast<std::size_t>(i)] = at(i);
    }
    return out;
}

double elastic_length(const CrankGeometry &geom, double theta) {
    const double w = geom.w();
    const double r = geom.r();
    // w^2 + R^2 + 2wR cos = (w - R)^2 + 2wR (1 + cos); the second form keeps
    // the value positive near theta = pi.
    const double sq = (w - r) * (w - r) + 2.0 * w * r * (1.0 + std::cos(theta));
    return std::sqrt(std::max(sq, 0.0));
}

double angle_for_length(const CrankGeometry &geom, double length) {
    const double lo = geom.min_length();
    const double hi = geom.max_length();
    constexpr double slack = 1e-12;
    if (length < lo * (1.0 - slack) || length > hi * (1.0 + slack)) {
        throw DomainError("element length " + std::to_string(length) +
                          " m is not reachable by the crank");
    }
    const double w = geom.w();
    const double r = geom.r();
    const double c = (length * length - w * w - r * r) / (2.0 * w * r);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double moment_arm(const CrankGeometry &geom, double theta) {
    return geom.w() * geom.r() * std::sin(theta) / elastic_length(geom, theta);
}

double crank_torque(const CrankGeometry &geom, double axial_force, double theta) {
    return axial_force * moment_arm(geom, theta);
}

double element_deflection(const CrankGeometry &geom, double relaxed_length, double theta) {
    return elastic_length(geom, theta) - relaxed_length;
}

std::vector<ForceSample> target_force_profile(const CrankGeometry &geom,
                                              double target_torque,
                                              const AngleSchedule &schedule) {
    std::vector<ForceSample> out;
    out.reserve(static_cast<std::size_t>(schedule.steps()));
    for (double theta : schedule.samples()) {
        const double s = std::sin(theta);
        if (!(s > 0.0)) {
            throw DomainError("target force profile undefined where sin(theta) <= 0");
        }
        const double force =
            target_torque * elastic_length(geom, theta) / (geom.w() * geom.r() * s);
        out.push_back({theta, force});
    }
    return out;
}

} // namespace actm::geometry
