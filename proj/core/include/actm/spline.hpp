// Natural cubic parametric spline in the plane, parametrised by the
// cumulative chord length of its control polygon.
#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace actm::fem {

using Vec2 = Eigen::Vector2d;

class ParametricSpline {
public:
    /// Needs >= 2 points with non-zero distance between neighbours.
    explicit ParametricSpline(std::span<const Vec2> points);

    double parameter_end() const { return knots_.back(); }

    Vec2 point(double t) const;
    Vec2 tangent(double t) const;

    /// Arc length from parameter 0 to t.
    double arc_length(double t) const;
    double total_length() const { return cumulative_.back(); }

    /// Parameter whose arc length from the start equals s.
    double parameter_at_length(double s) const;

    /// n_segments + 1 points spaced equally in arc length, including both ends.
    std::vector<Vec2> resample(int n_segments) const;

private:
    std::size_t span_of(double t) const;
    double span_length(double t0, double t1) const;

    std::vector<double> knots_;
    std::vector<Vec2> values_;
    std::vector<Vec2> second_;     // second derivatives at the knots
    std::vector<double> cumulative_; // arc length at each knot
};

} // namespace actm::fem
