#include "actm/spline.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace actm::fem {
namespace {

// 7-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 7> kGaussX = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr std::array<double, 7> kGaussW = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

constexpr int kSubIntervals = 16;

} // namespace

ParametricSpline::ParametricSpline(std::span<const Vec2> points)
    : values_(points.begin(), points.end()) {
    const std::size_t n = values_.size();
    if (n < 2) {
        throw ShapeError("spline needs at least two points");
    }
    knots_.resize(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double d = (values_[i] - values_[i - 1]).norm();
        if (!(d > 0.0)) {
            throw ShapeError("spline control points must be distinct");
        }
        knots_[i] = knots_[i - 1] + d;
    }

    // Natural end conditions: zero second derivative at both ends. Interior
    // second derivatives come from the usual tridiagonal system (Thomas).
    second_.assign(n, Vec2::Zero());
    if (n > 2) {
        const std::size_t m = n - 2;
        std::vector<double> diag(m), upper(m), lower(m);
        std::vector<Vec2> rhs(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            const double h0 = knots_[i] - knots_[i - 1];
            const double h1 = knots_[i + 1] - knots_[i];
            lower[k] = h0;
            diag[k] = 2.0 * (h0 + h1);
            upper[k] = h1;
            rhs[k] = 6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
        }
        for (std::size_t k = 1; k < m; ++k) {
            const double f = lower[k] / diag[k - 1];
            diag[k] -= f * upper[k - 1];
            rhs[k] -= f * rhs[k - 1];
        }
        second_[m] = rhs[m - 1] / diag[m - 1];
        for (std::size_t k = m - 1; k-- > 0;) {
            second_[k + 1] = (rhs[k] - upper[k] * second_[k + 2]) / diag[k];
        }
    }

    cumulative_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cumulative_[i + 1] = cumulative_[i] + span_length(knots_[i], knots_[i + 1]);
    }
}

std::size_t ParametricSpline::span_of(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
    return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, knots_.size() - 2);
}

Vec2 ParametricSpline::point(double t) const {
    const std::size_t i = span_of(t);
    const double h = knots_[i + 1] - knots_[i];
    const double a = (knots_[i + 1] - t) / h;
    const double b = (t - knots_[i]) / h;
    return a * values_[i] + b * values_[i + 1] +
           ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * (h * h / 6.0);
}

Vec2 ParametricSpline::tangent(double t) const {
    const std::size_t i = span_of(t);
    const double h = knots_[i + 1] - knots_[i];
    const double a = (knots_[i + 1] - t) / h;
    const double b = (t - knots_[i]) / h;
    return (values_[i + 1] - values_[i]) / h +
           (-(3.0 * a * a - 1.0) * second_[i] + (3.0 * b * b - 1.0) * second_[i + 1]) * (h / 6.0);
}

double ParametricSpline::span_length(double t0, double t1) const {
    double total = 0.0;
    const double dt = (t1 - t0) / kSubIntervals;
    for (int s = 0; s < kSubIntervals; ++s) {
        const double a = t0 + s * dt;
        const double mid = a + 0.5 * dt;
        for (std::size_t g = 0; g < kGaussX.size(); ++g) {
            total += kGaussW[g] * 0.5 * dt * tangent(mid + 0.5 * dt * kGaussX[g]).norm();
        }
    }
    return total;
}

double ParametricSpline::arc_length(double t) const {
    t = std::clamp(t, 0.0, parameter_end());
    const std::size_t i = span_of(t);
    return cumulative_[i] + span_length(knots_[i], t);
}

double ParametricSpline::parameter_at_length(double s) const {
    if (s <= 0.0) {
        return 0.0;
    }
    if (s >= total_length()) {
        return parameter_end();
    }
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
    double lo = knots_[i];
    double hi = knots_[i + 1];
    double t = lo + (hi - lo) * (s - cumulative_[i]) / (cumulative_[i + 1] - cumulative_[i]);
    // Safeguarded Newton on s(t) - s = 0; ds/dt = |tangent|.
    for (int iter = 0; iter < 60; ++iter) {
        const double f = cumulative_[i] + span_length(knots_[i], t) - s;
        if (std::abs(f) < 1e-14 * total_length()) {
            break;
        }
        if (f > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        const double speed = tangent(t).norm();
        double next = speed > 0.0 ? t - f / speed : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    return t;
}

std::vector<Vec2> ParametricSpline::resample(int n_segments) const {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n_segments) + 1);
    const double total = total_length();
    out.push_back(values_.front());
    for (int k = 1; k < n_segments; ++k) {
        out.push_back(point(parameter_at_length(total * k / n_segments)));
    }
    out.push_back(values_.back());
    return out;
}

} // namespace actm::fem
