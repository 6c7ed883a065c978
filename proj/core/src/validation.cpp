#include "actm/validation.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>

namespace actm::validation {
namespace {

// State (theta, theta', x, y) along s in [0, 1].
using State = std::array<double, 4>;

State integrate(double alpha, double kappa0, int steps) {
    State y{0.0, kappa0, 0.0, 0.0};
    const double h = 1.0 / steps;
    auto rhs = [alpha](const State &s) {
        return State{s[1], -alpha * std::cos(s[0]), std::cos(s[0]), std::sin(s[0])};
    };
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(y);
        State t;
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k1[j];
        const State k2 = rhs(t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k2[j];
        const State k3 = rhs(t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + h * k3[j];
        const State k4 = rhs(t);
        for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return y;
}

double relative(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

Check guarded(const std::string &name, double tolerance, const std::function<Check()> &body) {
    try {
        return body();
    } catch (const std::exception &e) {
        return {name, std::nan(""), std::nan(""), std::nan(""), tolerance, false, e.what()};
    }
}

} // namespace

ElasticaTip elastica_cantilever(double alpha, int rk_steps) {
    if (!(alpha > 0.0)) {
        throw DomainError("elastica load parameter must be positive");
    }
    // Free-end moment condition theta'(1) = 0; theta'(0) = alpha * (moment arm)
    // lies in (0, alpha]. Bisection on the end curvature.
    double lo = 0.0;
    double hi = alpha;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integrate(alpha, mid, rk_steps)[1] > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo < 1e-15 * alpha) {
            break;
        }
    }
    const State end = integrate(alpha, 0.5 * (lo + hi), rk_steps);
    return {end[3], 1.0 - end[2], end[0]};
}

bool Report::all_pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

fem::BeamModel straight_beam(double length, int n_elements, const fem::CrossSection &section,
                             const fem::Material &material) {
    if (n_elements < 1) {
        throw ShapeError("a beam needs at least one element");
    }
    std::vector<fem::Vec2> nodes;
    for (int i = 0; i <= n_elements; ++i) {
        nodes.emplace_back(length * i / n_elements, 0.0);
    }
    return fem::BeamModel(std::move(nodes), section, material);
}

Report run_fem_validation(const nsm::NsmProblem &problem, const fem::KeyPoints &points,
                          const ValidationSettings &settings) {
    Report report;
    const double length = problem.box.width;
    const int n = settings.n_elements;

    report.checks.push_back(guarded("axial bar force", 0.01, [&] {
        const auto model = straight_beam(length, n, problem.section, problem.material);
        const std::vector<double> chords{length, length * (1.0 + settings.bar_strain)};
        const auto curve = fem::solve_force_deflection(model, chords, problem.solver);
        const double ref = problem.material.youngs_modulus * problem.section.area() * settings.bar_strain;
        const double got = curve.samples.back().axial_force;
        const double err = relative(got, ref);
        return Check{"axial bar force", got, ref, err, 0.01, err <= 0.01, ""};
    }));

    report.checks.push_back(guarded("cantilever tip deflection", 0.02, [&] {
        const auto model = straight_beam(length, n, problem.section, problem.material);
        const double ei = problem.material.youngs_modulus * problem.section.second_moment();
        const double force = settings.cantilever_load * ei / (length * length);
        const auto tip = fem::solve_cantilever_tip_load(model, force, settings.cantilever_steps, problem.solver);
        const auto ref = elastica_cantilever(settings.cantilever_load);
        const double got = tip.transverse_tip_displacement / length;
        const double err = std::max(relative(got, ref.transverse),
                                    relative(-tip.axial_tip_displacement / length, ref.axial));
        return Check{"cantilever tip deflection", got, ref.transverse, err, 0.02, err <= 0.02, ""};
    }));

    report.checks.push_back(guarded("energy consistency", 0.01, [&] {
        const auto model = fem::build_model(problem.design(points), n);
        const double l0 = fem::natural_chord(model);
        const auto sweep = problem.sweep_chords();
        const double far = *std::max_element(sweep.begin(), sweep.end());
        std::vector<double> schedule;
        for (int i = 0; i <= settings.energy_steps; ++i) {
            schedule.push_back(l0 + (far - l0) * i / settings.energy_steps);
        }
        const auto curve = fem::solve_force_deflection(model, schedule, problem.solver);
        double work = 0.0;
        for (std::size_t i = 1; i < curve.samples.size(); ++i) {
            const auto &a = curve.samples[i - 1];
            const auto &b = curve.samples[i];
            work += 0.5 * (a.axial_force + b.axial_force) * (b.chord - a.chord);
        }
        const double energy = curve.samples.back().strain_energy;
        const double err = relative(work, energy);
        return Check{"energy consistency", work, energy, err, 0.01, err <= 0.01, ""};
    }));

    report.checks.push_back(guarded("mesh convergence", 0.01, [&] {
        const auto coarse = fem::solve_chord_samples(fem::build_model(problem.design(points), n),
                                                     problem.sweep_chords(), problem.solver);
        const auto fine = fem::solve_chord_samples(fem::build_model(problem.design(points), 2 * n),
                                                   problem.sweep_chords(), problem.solver);
        if (coarse.size() != fine.size()) {
            throw GridMismatch("mesh levels produced different sample grids");
        }
        double scale = 0.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) {
            scale = std::max(scale, std::abs(fine.samples[i].axial_force));
            diff = std::max(diff, std::abs(fine.samples[i].axial_force - coarse.samples[i].axial_force));
        }
        const double err = diff / std::max(scale, 1e-300);
        return Check{"mesh convergence", diff, scale, err, 0.01, err < 0.01, ""};
    }));

    return report;
}

} // namespace actm::validation
