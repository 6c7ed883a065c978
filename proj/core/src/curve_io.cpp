#include "actm/curve_io.hpp"

#include "actm/errors.hpp"
#include "actm/units.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace actm::io {

std::string format_number(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_force_curve_csv(std::ostream &out, const fem::ForceDeflectionCurve &curve) {
    out << "chord_m,force_N,max_von_mises_Pa,converged\n";
    for (const auto &s : curve.samples) {
        out << format_number(s.chord) << ',' << format_number(s.axial_force) << ','
            << format_number(s.max_von_mises) << ',' << (s.converged ? 1 : 0) << '\n';
    }
}

void write_history_csv(std::ostream &out, const std::vector<ga::GenerationStats> &history) {
    out << "generation,best_fitness,mean_fitness,evaluations\n";
    for (const auto &h : history) {
        out << h.generation << ',' << format_number(h.best_fitness) << ','
            << format_number(h.mean_fitness) << ',' << h.evaluations << '\n';
    }
}

void write_torque_csv(std::ostream &out, const synthesis::TorqueCurve &curve) {
    out << "theta_deg,torque_mNm\n";
    for (const auto &s : curve.samples()) {
        out << format_number(units::to_deg(s.theta)) << ',' << format_number(units::to_mNm(s.torque))
            << '\n';
    }
}

std::vector<synthesis::TorqueSample> read_torque_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta_deg,torque_mNm", 0) != 0) {
        throw ConfigError("torque CSV must start with the header theta_deg,torque_mNm");
    }
    std::vector<synthesis::TorqueSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        double theta = 0.0, torque = 0.0;
        const char *end = line.data() + line.size();
        const auto r1 = std::from_chars(line.data(), line.data() + comma, theta);
        const auto r2 = comma == std::string::npos
                            ? std::from_chars_result{nullptr, std::errc::invalid_argument}
                            : std::from_chars(line.data() + comma + 1, end, torque);
        if (r1.ec != std::errc{} || r2.ec != std::errc{}) {
            throw ConfigError("malformed torque CSV row: " + line);
        }
        out.push_back({units::deg(theta), units::mNm(torque)});
    }
    return out;
}

ReportRow make_report_row(const synthesis::TargetResult &result, const synthesis::StressReport &stress) {
    return {units::to_mNm(result.target), units::to_deg(result.preload), units::to_mNm(result.mean),
            units::to_mNm(result.std_dev), result.cv, units::to_MPa(stress.peak), stress.pass,
            result.jaw_opens};
}

void write_report(std::ostream &out, const std::vector<ReportRow> &rows) {
    bool first = true;
    for (const auto &r : rows) {
        if (!first) {
            out << '\n';
        }
        first = false;
        out << "target_mNm: " << format_number(r.target_mNm) << '\n'
            << "preload_deg: " << format_number(r.preload_deg) << '\n'
            << "mean_mNm: " << format_number(r.mean_mNm) << '\n'
            << "std_mNm: " << format_number(r.std_mNm) << '\n'
            << "cv: " << format_number(r.cv) << '\n'
            << "peak_stress_MPa: " << format_number(r.peak_stress_MPa) << '\n'
            << "stress_pass: " << (r.stress_pass ? "true" : "false") << '\n'
            << "jaw: " << (r.jaw_opens ? "opens" : "closes") << '\n';
    }
}

} // namespace actm::io
