// The compliant-element design problem the GA solves: FEM the candidate
// shape over the crank's chord range, map the axial force to crank torque
// and score how well that torque follows a straight line over the
// operating window.
#pragma once

#include "actm/beam_fem.hpp"
#include "actm/ga.hpp"
#include "actm/geometry.hpp"
#include "actm/synthesis.hpp"
#include "actm/units.hpp"

#include <optional>
#include <span>
#include <vector>

namespace actm::nsm {

using fem::KeyPoints;
using fem::Vec2;

struct NsmProblem {
    geometry::CrankGeometry geometry{0.012, 0.008};
    fem::CrossSection section{0.002, 0.002};
    fem::Material material{3.45e9, 0.39, 106e6};
    fem::DesignBox box{0.030, 0.012};
    Vec2 pin_start{0.014, 0.0};
    Vec2 pin_end{0.016, 0.0};

    double window_start = units::deg(45.0);
    double window_end = units::deg(135.0);
    int window_samples = 19;
    /// The FEM sweep also covers crank angles down to this one (stress at
    /// the far-side position B is part of the design check).
    double sweep_start = 0.0;
    int n_elements = 40;
    fem::SolverOptions solver{};

    /// When set, the residual is measured about a line of this slope
    /// (N·m/rad) instead of the free least-squares slope.
    std::optional<double> target_slope;
    /// Mean torque over the window must reach this value (N·m); the
    /// shortfall is added to the residual.
    double min_mean_torque = 0.0;
    /// Peak stress over the sweep (Pa) at which a design counts as
    /// overstressed. Non-positive disables the check.
    double stress_limit = 0.0;
    /// Overstressed designs score hypot(fitness, stress_penalty * excess),
    /// excess = peak / stress_limit - 1 + 1e-3, so the search can still climb
    /// out of the overstressed region. Non-positive makes them the worst.
    double stress_penalty = 0.0;
    /// Stop rule for the GA: residual at most this fraction of mean |T|.
    double satisfied_ratio = 0.02;

    void validate() const;

    ga::SearchSpace search_space() const { return {box, pin_start, pin_end}; }
    fem::BeamDesign design(const KeyPoints &points) const;
    std::vector<double> window_angles() const;
    /// Chords the FEM must cover: the window plus the sweep down to sweep_start.
    std::vector<double> sweep_chords() const;
};

struct TorqueScore {
    double fitness;        // N·m, +inf when the slope gate rejects
    synthesis::LineFit fit;
    double line_residual;  // RMS about the free or pinned-slope line, N·m
    double shortfall;      // N·m
    double mean;           // N·m
};

/// Scores sampled window torques. The slope gate rejects a non-positive
/// fitted slope: the element has to supply the rising torque that cancels
/// the spring, which is what negative rotational stiffness means under the
/// library's sign convention.
TorqueScore score_torque(std::span<const double> thetas, std::span<const double> torques,
                         std::optional<double> target_slope, double min_mean_torque);

struct NsmEvaluation {
    fem::ForceDeflectionCurve curve;
    synthesis::TorqueCurve torque;
    TorqueScore score;
    double peak_stress;  // Pa over the whole sweep
};

/// Full evaluation. Throws ShapeError / NonConvergence / RangeError.
NsmEvaluation evaluate(const NsmProblem &problem, const KeyPoints &points);

/// GA fitness: evaluate(...).score.fitness with the stress rule applied, or
/// +inf on any failure.
double fitness(const NsmProblem &problem, const KeyPoints &points);

/// Search space, fitness and stop rule wired for ga::run.
ga::Problem make_ga_problem(const NsmProblem &problem);

} // namespace actm::nsm
