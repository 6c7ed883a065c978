// CSV and report writers. Files use '.' decimals, a header row and the
// external units: degrees, mN·m, mm for lengths in designs, MPa in reports.
// Force-deflection CSVs keep SI columns (the column names say so).
#pragma once

#include "actm/beam_fem.hpp"
#include "actm/ga.hpp"
#include "actm/synthesis.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace actm::io {

/// Columns: chord_m, force_N, max_von_mises_Pa, converged
void write_force_curve_csv(std::ostream &out, const fem::ForceDeflectionCurve &curve);

/// Columns: generation, best_fitness, mean_fitness, evaluations
void write_history_csv(std::ostream &out, const std::vector<ga::GenerationStats> &history);

/// Columns: theta_deg, torque_mNm
void write_torque_csv(std::ostream &out, const synthesis::TorqueCurve &curve);

/// Parses a theta_deg, torque_mNm file back into SI samples.
std::vector<synthesis::TorqueSample> read_torque_csv(std::istream &in);

struct ReportRow {
    double target_mNm;
    double preload_deg;
    double mean_mNm;
    double std_mNm;
    double cv;
    double peak_stress_MPa;
    bool stress_pass;
    bool jaw_opens;
};

ReportRow make_report_row(const synthesis::TargetResult &result, const synthesis::StressReport &stress);

/// One "key: value" block per target, separated by blank lines.
void write_report(std::ostream &out, const std::vector<ReportRow> &rows);

/// Shortest round-trip decimal text for a double.
std::string format_number(double value);

} // namespace actm::io
