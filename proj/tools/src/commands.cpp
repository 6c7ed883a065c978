#include "actm_cli/commands.hpp"

#include "actm/curve_io.hpp"
#include "actm/errors.hpp"
#include "actm/units.hpp"
#include "actm/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace actm::cli {
namespace {

using nlohmann::ordered_json;

std::ofstream open_output(const ProjectConfig &config, const std::string &name) {
    std::filesystem::create_directories(config.output_dir);
    const auto path = config.output_dir / name;
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

// Maps exceptions to exit codes so every command reports the same way.
int guarded(std::ostream &log, const std::function<int()> &body) {
    try {
        return body();
    } catch (const ConfigError &e) {
        log << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        log << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::filesystem::filesystem_error &e) {
        log << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

ordered_json points_json(const fem::KeyPoints &points_m) {
    ordered_json arr = ordered_json::array();
    for (const auto &p : to_millimetres(points_m)) {
        arr.push_back({p.x(), p.y()});
    }
    return arr;
}

// Key points for the surrogate landscape: a smooth arch over the pins.
fem::KeyPoints surrogate_optimum(const nsm::NsmProblem &p) {
    fem::KeyPoints k;
    k[0] = p.pin_start;
    k[4] = p.pin_end;
    const double w = p.box.width;
    const double h = p.box.height;
    k[1] = fem::Vec2(0.25 * w, 0.5 * h);
    k[2] = fem::Vec2(0.5 * w, 0.8 * h);
    k[3] = fem::Vec2(0.75 * w, 0.5 * h);
    ga::sort_middle(k, (k[4] - k[0]).normalized());
    return k;
}

} // namespace

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item.substr(first), &used);
        } catch (const std::exception &) {
            throw ConfigError("not a number: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
            throw ConfigError("not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

DesignSource load_design(const ProjectConfig &config) {
    const auto path = config.output_dir / "best_design.json";
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        try {
            const auto doc = nlohmann::json::parse(in);
            const auto &pts = doc.at("key_points_mm");
            if (pts.size() != fem::kKeyPoints) {
                throw ConfigError(path.string() + ": key_points_mm needs 5 points");
            }
            fem::KeyPoints mm;
            for (std::size_t i = 0; i < fem::kKeyPoints; ++i) {
                mm[i] = fem::Vec2(pts.at(i).at(0).get<double>(), pts.at(i).at(1).get<double>());
            }
            const auto &sec = doc.at("section");
            fem::CrossSection section{units::mm(sec.at("thickness_mm").get<double>()),
                                      units::mm(sec.at("width_mm").get<double>())};
            section.validate();
            return {to_metres(mm), section, path.string()};
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(path.string() + ": " + e.what());
        } catch (const ShapeError &e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    if (config.design_mm) {
        return {to_metres(*config.design_mm), config.final_section(), "config design.key_points_mm"};
    }
    throw ConfigError("no design: run optimize first or set design.key_points_mm in the config");
}

DesignAnalysis analyse_design(const ProjectConfig &config, const fem::KeyPoints &points,
                              const fem::CrossSection &section) {
    if (config.n_elements < 8) {
        throw ConfigError("fem.n_elements must be at least 8");
    }
    const auto synth = config.synthesis();
    const auto geom = config.crank();
    fem::BeamDesign design{points, section, config.material(), config.box()};
    const auto model = fem::build_model(design, config.n_elements);

    const auto window = synth.window_angles();
    std::vector<double> chords;
    for (double theta : window) {
        chords.push_back(geometry::elastic_length(geom, theta));
    }
    const double start = units::deg(config.sweep_start_deg);
    if (start < synth.window_start()) {
        const int n = std::max(2, static_cast<int>(std::ceil((synth.window_start() - start) / synth.window_step)) + 1);
        for (double theta : geometry::AngleSchedule(start, synth.window_start(), n).samples()) {
            chords.push_back(geometry::elastic_length(geom, theta));
        }
    }
    auto curve = fem::solve_chord_samples(model, chords, config.solver);
    auto nsm = synthesis::nsm_torque_curve(curve, geom, window, synth.window_start(), synth.window_end());
    const auto stress = synthesis::stress_check(curve, config.material());
    return {std::move(curve), std::move(nsm), stress};
}

int cmd_validate_fem(const ProjectConfig &config, std::ostream &log) {
    return guarded(log, [&] {
        auto problem = config.final_problem();
        fem::KeyPoints points;
        if (config.design_mm) {
            points = to_metres(*config.design_mm);
            problem.pin_start = points.front();
            problem.pin_end = points.back();
        } else {
            points = surrogate_optimum(problem);
        }
        validation::ValidationSettings settings;
        settings.n_elements = config.n_elements;
        const auto report = validation::run_fem_validation(problem, points, settings);

        auto out = open_output(config, "validation.csv");
        out << "check,value,reference,relative_error,tolerance,pass\n";
        log << std::left << std::setw(28) << "check" << std::setw(14) << "rel. error"
            << std::setw(12) << "tolerance" << "result\n";
        for (const auto &c : report.checks) {
            out << c.name << ',' << io::format_number(c.value) << ',' << io::format_number(c.reference)
                << ',' << io::format_number(c.error) << ',' << io::format_number(c.tolerance) << ','
                << (c.pass ? 1 : 0) << '\n';
            std::ostringstream err;
            err << std::scientific << std::setprecision(3) << c.error;
            log << std::left << std::setw(28) << c.name << std::setw(14) << err.str() << std::setw(12)
                << io::format_number(c.tolerance) << (c.pass ? "pass" : "FAIL");
            if (!c.note.empty()) {
                log << " (" << c.note << ')';
            }
            log << '\n';
        }
        return report.all_pass() ? kExitOk : kExitDomain;
    });
}

int cmd_optimize(const ProjectConfig &config, std::ostream &log) {
    return guarded(log, [&] {
        if (config.n_elements < 8 && !config.surrogate) {
            throw ConfigError("fem.n_elements must be at least 8");
        }
        const auto search = config.search_problem();
        ga::GAConfig gac = config.ga;
        const double scale = config.search_width_mm / config.width_mm;
        ga::Problem problem;
        if (config.surrogate) {
            problem = ga::quadratic_surrogate(search.search_space(), surrogate_optimum(search));
            gac.fitness_threshold = config.fitness_threshold_mNm;
        } else {
            problem = nsm::make_ga_problem(search);
            gac.fitness_threshold = units::mNm(config.fitness_threshold_mNm) * scale;
        }
        const auto result = ga::run(gac, problem);

        {
            auto out = open_output(config, "ga_history.csv");
            io::write_history_csv(out, result.history);
        }
        ordered_json doc;
        doc["key_points_mm"] = points_json(result.best.points);
        doc["section"] = {{"thickness_mm", config.thickness_mm}, {"width_mm", config.width_mm}};
        doc["material"] = {{"E_GPa", config.youngs_GPa}, {"poisson", config.poisson}, {"yield_MPa", config.yield_MPa}};
        doc["box"] = {{"width_mm", config.box_width_mm}, {"height_mm", config.box_height_mm}};
        doc["generations"] = result.history.size();
        doc["stop_rule_met"] = result.satisfied;
        if (config.surrogate) {
            doc["surrogate_fitness"] = *result.best.fitness;
        } else {
            const auto final_problem = config.final_problem();
            const auto eval = nsm::evaluate(final_problem, result.best.points);
            doc["fitness_mNm"] = units::to_mNm(eval.score.fitness);
            doc["line_residual_mNm"] = units::to_mNm(eval.score.line_residual);
            doc["nsm_mean_mNm"] = units::to_mNm(eval.score.mean);
            doc["nsm_slope_mNm_per_deg"] = units::to_mNm_per_deg(eval.score.fit.slope);
            doc["rotational_stiffness_mNm_per_deg"] = -units::to_mNm_per_deg(eval.score.fit.slope);
            doc["peak_stress_MPa"] = units::to_MPa(eval.peak_stress);
            auto curve_out = open_output(config, "nsm_curve.csv");
            io::write_torque_csv(curve_out, eval.torque);
            auto force_out = open_output(config, "force_curve.csv");
            io::write_force_curve_csv(force_out, eval.curve);
            log << "element torque slope " << units::to_mNm_per_deg(eval.score.fit.slope)
                << " mNm/deg (rotational stiffness " << -units::to_mNm_per_deg(eval.score.fit.slope)
                << "), residual " << units::to_mNm(eval.score.line_residual) << " mNm, mean "
                << units::to_mNm(eval.score.mean) << " mNm, peak stress "
                << units::to_MPa(eval.peak_stress) << " MPa\n";
        }
        auto out = open_output(config, "best_design.json");
        out << doc.dump(2) << '\n';
        log << "generations " << result.history.size() << ", evaluations "
            << result.history.back().evaluations << ", best search-section fitness "
            << units::to_mNm(*result.best.fitness) << " mNm\n";
        return kExitOk;
    });
}

int cmd_synthesize(const ProjectConfig &config, std::ostream &log) {
    return guarded(log, [&] {
        const auto source = load_design(config);
        log << "design from " << source.origin << '\n';
        const auto analysis = analyse_design(config, source.points, source.section);
        const auto synth = config.synthesis();
        {
            auto out = open_output(config, "nsm_window.csv");
            io::write_torque_csv(out, analysis.nsm);
        }
        std::vector<io::ReportRow> rows;
        bool all_ok = true;
        for (double target : config.targets_mNm) {
            try {
                const auto r = synthesis::synthesize_target(synth, analysis.nsm, units::mNm(target));
                std::ostringstream name;
                name << "curve_" << io::format_number(target) << "mNm.csv";
                auto out = open_output(config, name.str());
                io::write_torque_csv(out, r.net);
                rows.push_back(io::make_report_row(r, analysis.stress));
                log << "target " << target << " mNm: preload " << units::to_deg(r.preload) << " deg, mean "
                    << units::to_mNm(r.mean) << " mNm, std " << units::to_mNm(r.std_dev) << " mNm, cv "
                    << r.cv << (r.jaw_opens ? " (jaw opens)" : "") << '\n';
            } catch (const Infeasible &e) {
                all_ok = false;
                log << "target " << target << " mNm infeasible: " << e.what() << '\n';
            }
        }
        auto report = open_output(config, "report.txt");
        io::write_report(report, rows);
        log << "peak stress " << units::to_MPa(analysis.stress.peak) << " MPa (yield "
            << config.yield_MPa << " MPa): " << (analysis.stress.pass ? "pass" : "FAIL") << '\n';
        return all_ok ? kExitOk : kExitDomain;
    });
}

int cmd_sweep(const ProjectConfig &config, const std::string &parameter,
              const std::vector<double> &values, std::ostream &log) {
    return guarded(log, [&] {
        static const std::vector<std::string> known{"w", "R", "k", "width"};
        if (std::find(known.begin(), known.end(), parameter) == known.end()) {
            throw ConfigError("unknown sweep parameter '" + parameter + "' (use w, R, k or width)");
        }
        if (values.empty()) {
            throw ConfigError("sweep range is empty");
        }
        const auto source = load_design(config);
        const double target = config.targets_mNm.front();
        auto out = open_output(config, "sweep_" + parameter + ".csv");
        out << "parameter,value,target_mNm,nsm_mean_mNm,preload_deg,mean_mNm,std_mNm,cv,peak_stress_MPa,"
               "stress_pass,feasible\n";
        for (double v : values) {
            ProjectConfig c = config;
            fem::CrossSection section = source.section;
            if (parameter == "w") {
                c.w_mm = v;
            } else if (parameter == "R") {
                c.r_mm = v;
            } else if (parameter == "k") {
                c.k_mNm_per_deg = v;
            } else {
                section.width = units::mm(v);
            }
            c.validate();
            out << parameter << ',' << io::format_number(v) << ',' << io::format_number(target) << ',';
            try {
                const auto analysis = analyse_design(c, source.points, section);
                const auto r = synthesis::synthesize_target(c.synthesis(), analysis.nsm, units::mNm(target));
                out << io::format_number(units::to_mNm(analysis.nsm.mean())) << ','
                    << io::format_number(units::to_deg(r.preload)) << ','
                    << io::format_number(units::to_mNm(r.mean)) << ','
                    << io::format_number(units::to_mNm(r.std_dev)) << ',' << io::format_number(r.cv) << ','
                    << io::format_number(units::to_MPa(analysis.stress.peak)) << ','
                    << (analysis.stress.pass ? 1 : 0) << ",1\n";
            } catch (const Error &e) {
                if (dynamic_cast<const ConfigError *>(&e)) {
                    throw;
                }
                out << "nan,nan,nan,nan,nan,nan,0,0\n";
                log << parameter << " = " << v << ": " << e.what() << '\n';
            }
        }
        log << "wrote " << values.size() << " rows to " << (config.output_dir / ("sweep_" + parameter + ".csv")).string()
            << '\n';
        return kExitOk;
    });
}

} // namespace actm::cli
