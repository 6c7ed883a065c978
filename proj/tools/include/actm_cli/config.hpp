// Project configuration: one JSON document with unit-suffixed keys. Every
// section and key is optional and defaults to the prototype values; unknown
// keys are rejected.
#pragma once

#include "actm/beam_fem.hpp"
#include "actm/ga.hpp"
#include "actm/nsm_problem.hpp"
#include "actm/synthesis.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace actm::cli {

struct ProjectConfig {
    double w_mm = 12.0;
    double r_mm = 8.0;
    double k_mNm_per_deg = 0.3;

    double youngs_GPa = 3.45;
    double poisson = 0.39;
    double yield_MPa = 106.0;

    double box_width_mm = 30.0;
    double box_height_mm = 12.0;
    fem::Vec2 pin_start_mm{14.0, 0.0};
    fem::Vec2 pin_end_mm{16.0, 0.0};

    double thickness_mm = 2.0;
    double width_mm = 6.0;             // final section
    double search_width_mm = 2.0;      // section the GA works with

    double theta1_deg = 45.0;
    double theta2_deg = 90.0;
    double window_step_deg = 15.0;     // synthesis output grid
    int fitness_samples = 19;          // GA window samples
    double sweep_start_deg = 0.0;      // FEM/stress sweep starts here

    int n_elements = 40;
    fem::SolverOptions solver{};

    ga::GAConfig ga{};
    double fitness_threshold_mNm = 0.0;
    double satisfied_ratio = 0.02;
    bool surrogate = false;            // analytic test landscape instead of FEM

    std::vector<double> targets_mNm{10.0, 20.0, 30.0};
    double jaw_max_deg = 90.0;
    double jaw_length_mm = 20.0;
    double handle_ratio = 1.0;

    /// Design used by synthesize/sweep when the output directory has none.
    std::optional<fem::KeyPoints> design_mm;

    std::filesystem::path output_dir = "out";

    /// Throws ConfigError when any module invariant fails.
    void validate() const;

    geometry::CrankGeometry crank() const;
    fem::Material material() const;
    fem::DesignBox box() const;
    fem::CrossSection final_section() const;
    synthesis::SynthesisConfig synthesis() const;
    /// GA problem at the search section, with the slope and mean-torque
    /// requirements scaled from the final section.
    nsm::NsmProblem search_problem() const;
    /// Same problem at the final section (used for reporting and synthesis).
    nsm::NsmProblem final_problem() const;
};

/// Parses JSON text. Throws ConfigError with a diagnostic.
ProjectConfig parse_config(const std::string &text);
ProjectConfig load_config(const std::filesystem::path &path);

/// Key points in mm <-> metres.
fem::KeyPoints to_metres(const fem::KeyPoints &mm);
fem::KeyPoints to_millimetres(const fem::KeyPoints &m);

} // namespace actm::cli
