// Subcommand implementations. Each returns the process exit code:
// 0 success, 1 domain failure, 2 usage or configuration error. Progress and
// diagnostics go to `log`; results go to files under config.output_dir.
#pragma once

#include "actm_cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace actm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

int cmd_validate_fem(const ProjectConfig &config, std::ostream &log);
int cmd_optimize(const ProjectConfig &config, std::ostream &log);
int cmd_synthesize(const ProjectConfig &config, std::ostream &log);
/// parameter: one of w, R, k, width (mm, mm, mN·m/deg, mm).
int cmd_sweep(const ProjectConfig &config, const std::string &parameter,
              const std::vector<double> &values, std::ostream &log);

/// Design + section the synthesis commands work on: out/best_design.json if
/// present, otherwise the config's design. Throws ConfigError when neither
/// exists.
struct DesignSource {
    fem::KeyPoints points;  // metres
    fem::CrossSection section;
    std::string origin;
};
DesignSource load_design(const ProjectConfig &config);

struct DesignAnalysis {
    fem::ForceDeflectionCurve curve;  // pre-load period plus window
    synthesis::TorqueCurve nsm;       // window grid
    synthesis::StressReport stress;
};

/// FEM sweep of a design from sweep_start to the window end and its element
/// torque on the synthesis window grid.
DesignAnalysis analyse_design(const ProjectConfig &config, const fem::KeyPoints &points,
                              const fem::CrossSection &section);

/// Parses "10,20,30" style lists. Throws ConfigError.
std::vector<double> parse_list(const std::string &text);

} // namespace actm::cli
