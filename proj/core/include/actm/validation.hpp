// FEM validation suite: analytic and self-convergence checks that the beam
// solver must pass before its curves are trusted.
#pragma once

#include "actm/beam_fem.hpp"
#include "actm/nsm_problem.hpp"

#include <string>
#include <vector>

namespace actm::validation {

/// Large-deflection cantilever with a tip force perpendicular to the
/// undeformed axis, from the elastica equation theta'' = -alpha cos(theta)
/// (alpha = P L^2 / EI) solved by RK4 shooting on theta'(0).
struct ElasticaTip {
    double transverse;  // v / L
    double axial;       // u / L (shortening)
    double rotation;    // rad
};

ElasticaTip elastica_cantilever(double alpha, int rk_steps = 4000);

struct Check {
    std::string name;
    double value;
    double reference;
    double error;      // relative
    double tolerance;  // relative
    bool pass;
    std::string note;  // failure reason when the check could not run
};

struct Report {
    std::vector<Check> checks;
    bool all_pass() const;
};

struct ValidationSettings {
    int n_elements = 40;
    double bar_strain = 1e-4;
    double cantilever_load = 2.0;  // PL^2/EI
    int cantilever_steps = 20;
    int energy_steps = 200;
};

/// Runs the axial bar, elastica cantilever, energy consistency and mesh
/// convergence (n -> 2n) checks. The last two use `points` under `problem`.
/// A check that throws is reported as failed with the exception text.
Report run_fem_validation(const nsm::NsmProblem &problem, const fem::KeyPoints &points,
                          const ValidationSettings &settings = {});

/// Straight beam of `length` along +x split into n elements.
fem::BeamModel straight_beam(double length, int n_elements, const fem::CrossSection &section,
                             const fem::Material &material);

} // namespace actm::validation
