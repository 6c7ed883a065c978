#include "actm/nsm_problem.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace actm::nsm {

void NsmProblem::validate() const {
    section.validate();
    material.validate();
    if (!(window_end > window_start) || !(window_start > 0.0) || window_end > units::pi) {
        throw ConfigError("NSM window must satisfy 0 < start < end <= 180 deg");
    }
    if (window_samples < 3) {
        throw ConfigError("NSM window needs at least 3 samples");
    }
    if (!(sweep_start >= 0.0) || sweep_start > window_start) {
        throw ConfigError("sweep start must lie in [0, window start]");
    }
    if (n_elements < 8) {
        throw ConfigError("n_elements must be at least 8");
    }
    if (!box.contains(pin_start) || !box.contains(pin_end) || pin_start == pin_end) {
        throw ConfigError("pins must be distinct points inside the design box");
    }
}

fem::BeamDesign NsmProblem::design(const KeyPoints &points) const {
    return {points, section, material, box};
}

std::vector<double> NsmProblem::window_angles() const {
    return geometry::AngleSchedule(window_start, window_end, window_samples).samples();
}

std::vector<double> NsmProblem::sweep_chords() const {
    std::vector<double> chords;
    for (double theta : window_angles()) {
        chords.push_back(geometry::elastic_length(geometry, theta));
    }
    if (sweep_start < window_start) {
        // Pre-load period sampled at roughly the window spacing.
        const double step = (window_end - window_start) / (window_samples - 1);
        const int n = std::max(2, static_cast<int>(std::ceil((window_start - sweep_start) / step)) + 1);
        for (double theta : geometry::AngleSchedule(sweep_start, window_start, n).samples()) {
            chords.push_back(geometry::elastic_length(geometry, theta));
        }
    }
    return chords;
}

TorqueScore score_torque(std::span<const double> thetas, std::span<const double> torques,
                         std::optional<double> target_slope, double min_mean_torque) {
    TorqueScore s{};
    s.fit = synthesis::fit_line(thetas, torques);
    const double n = static_cast<double>(thetas.size());
    double mean_theta = 0.0;
    s.mean = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        mean_theta += thetas[i];
        s.mean += torques[i];
    }
    mean_theta /= n;
    s.mean /= n;

    if (target_slope) {
        // Best line with the slope pinned: intercept through the centroid.
        double ss = 0.0;
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const double r = torques[i] - s.mean - *target_slope * (thetas[i] - mean_theta);
            ss += r * r;
        }
        s.line_residual = std::sqrt(ss / n);
    } else {
        s.line_residual = s.fit.rms_residual;
    }
    s.shortfall = std::max(0.0, min_mean_torque - s.mean);

    if (!(s.fit.slope > 0.0)) {
        s.fitness = std::numeric_limits<double>::infinity();
    } else {
        s.fitness = std::hypot(s.line_residual, s.shortfall);
    }
    return s;
}

NsmEvaluation evaluate(const NsmProblem &problem, const KeyPoints &points) {
    const fem::BeamDesign design = problem.design(points);
    const fem::BeamModel model = fem::build_model(design, problem.n_elements);
    fem::ForceDeflectionCurve curve = fem::solve_chord_samples(model, problem.sweep_chords(), problem.solver);
    const auto angles = problem.window_angles();
    synthesis::TorqueCurve torque = synthesis::nsm_torque_curve(curve, problem.geometry, angles,
                                                                problem.window_start, problem.window_end);
    const auto th = torque.thetas();
    const auto tq = torque.torques();
    TorqueScore score = score_torque(th, tq, problem.target_slope, problem.min_mean_torque);
    const double peak = curve.max_stress();
    return {std::move(curve), std::move(torque), score, peak};
}

double fitness(const NsmProblem &problem, const KeyPoints &points) {
    try {
        const NsmEvaluation e = evaluate(problem, points);
        if (problem.stress_limit > 0.0 && e.peak_stress >= problem.stress_limit) {
            if (!(problem.stress_penalty > 0.0)) {
                return ga::kWorstFitness;
            }
            const double excess = e.peak_stress / problem.stress_limit - 1.0 + 1e-3;
            return std::hypot(e.score.fitness, problem.stress_penalty * excess);
        }
        return e.score.fitness;
    } catch (const std::exception &) {
        return ga::kWorstFitness;
    }
}

ga::Problem make_ga_problem(const NsmProblem &problem) {
    problem.validate();
    ga::Problem out;
    out.space = problem.search_space();
    out.fitness = [problem](const KeyPoints &p) { return fitness(problem, p); };
    out.satisfied = [problem](const ga::Chromosome &c) {
        if (!c.fitness || !std::isfinite(*c.fitness)) {
            return false;
        }
        try {
            const NsmEvaluation e = evaluate(problem, c.points);
            return e.score.shortfall == 0.0 &&
                   e.score.line_residual <= problem.satisfied_ratio * std::abs(e.score.mean);
        } catch (const std::exception &) {
            return false;
        }
    };
    return out;
}

} // namespace actm::nsm
