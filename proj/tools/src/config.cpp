#include "actm_cli/config.hpp"

#include "actm/errors.hpp"
#include "actm/units.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace actm::cli {
namespace {

using nlohmann::json;

// Reads keys out of one JSON object and remembers which ones were used so
// the leftovers can be reported as unknown.
class Section {
public:
    Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError(path_ + " must be a JSON object");
        }
    }

    template <class T>
    void read(const char *key, T &out) {
        used_.insert(key);
        if (!node_.contains(key)) {
            return;
        }
        try {
            out = node_.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    void read_point(const char *key, fem::Vec2 &out) {
        std::vector<double> xy;
        read(key, xy);
        if (node_.contains(key)) {
            if (xy.size() != 2) {
                throw ConfigError(path_ + "." + key + " must be [x, y]");
            }
            out = fem::Vec2(xy[0], xy[1]);
        }
    }

    std::optional<Section> child(const char *key) {
        used_.insert(key);
        if (!node_.contains(key)) {
            return std::nullopt;
        }
        return Section(node_.at(key), path_ + "." + key);
    }

    const json &raw(const char *key) {
        used_.insert(key);
        return node_.at(key);
    }
    bool has(const char *key) const { return node_.contains(key); }

    void finish() const {
        for (const auto &item : node_.items()) {
            if (!used_.count(item.key())) {
                throw ConfigError("unknown key " + path_ + "." + item.key());
            }
        }
    }

private:
    const json &node_;
    std::string path_;
    std::set<std::string> used_;
};

} // namespace

ProjectConfig parse_config(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ProjectConfig c;
    Section root(doc, "config");

    if (auto s = root.child("geometry")) {
        s->read("w_mm", c.w_mm);
        s->read("R_mm", c.r_mm);
        s->finish();
    }
    if (auto s = root.child("spring")) {
        s->read("k_mNm_per_deg", c.k_mNm_per_deg);
        s->read("handle_ratio", c.handle_ratio);
        s->finish();
    }
    if (auto s = root.child("material")) {
        s->read("E_GPa", c.youngs_GPa);
        s->read("poisson", c.poisson);
        s->read("yield_MPa", c.yield_MPa);
        s->finish();
    }
    if (auto s = root.child("box")) {
        s->read("width_mm", c.box_width_mm);
        s->read("height_mm", c.box_height_mm);
        s->read_point("pin_start_mm", c.pin_start_mm);
        s->read_point("pin_end_mm", c.pin_end_mm);
        s->finish();
    }
    if (auto s = root.child("section")) {
        s->read("thickness_mm", c.thickness_mm);
        s->read("width_mm", c.width_mm);
        s->read("search_width_mm", c.search_width_mm);
        s->finish();
    }
    if (auto s = root.child("angles")) {
        s->read("theta1_deg", c.theta1_deg);
        s->read("theta2_deg", c.theta2_deg);
        s->read("window_step_deg", c.window_step_deg);
        s->read("fitness_samples", c.fitness_samples);
        s->read("sweep_start_deg", c.sweep_start_deg);
        s->read("jaw_max_deg", c.jaw_max_deg);
        s->read("jaw_length_mm", c.jaw_length_mm);
        s->finish();
    }
    if (auto s = root.child("fem")) {
        s->read("n_elements", c.n_elements);
        s->read("max_iterations", c.solver.max_iterations);
        s->read("max_bisections", c.solver.max_bisections);
        s->read("tolerance_factor", c.solver.tolerance_factor);
        s->read("max_increment_fraction", c.solver.max_increment_fraction);
        s->finish();
    }
    if (auto s = root.child("ga")) {
        s->read("population_size", c.ga.population_size);
        s->read("crossover_probability", c.ga.crossover_probability);
        s->read("mutation_mu", c.ga.mutation_mu);
        s->read("mutation_sigma", c.ga.mutation_sigma);
        s->read("cull_fraction", c.ga.cull_fraction);
        s->read("max_generations", c.ga.max_generations);
        s->read("fitness_threshold_mNm", c.fitness_threshold_mNm);
        s->read("satisfied_ratio", c.satisfied_ratio);
        s->read("seed", c.ga.rng_seed);
        s->read("fitness_epsilon", c.ga.fitness_epsilon);
        s->read("threads", c.ga.threads);
        s->read("surrogate", c.surrogate);
        s->finish();
    }
    if (auto s = root.child("synthesis")) {
        s->read("targets_mNm", c.targets_mNm);
        s->finish();
    }
    if (auto s = root.child("design")) {
        std::vector<std::vector<double>> pts;
        s->read("key_points_mm", pts);
        if (s->has("key_points_mm")) {
            if (pts.size() != fem::kKeyPoints) {
                throw ConfigError("config.design.key_points_mm needs exactly 5 points");
            }
            fem::KeyPoints kp;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (pts[i].size() != 2) {
                    throw ConfigError("config.design.key_points_mm entries must be [x, y]");
                }
                kp[i] = fem::Vec2(pts[i][0], pts[i][1]);
            }
            c.design_mm = kp;
        }
        s->finish();
    }
    std::string out_dir;
    root.read("output_dir", out_dir);
    if (!out_dir.empty()) {
        c.output_dir = out_dir;
    }
    root.finish();

    c.validate();
    return c;
}

ProjectConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void ProjectConfig::validate() const {
    crank();
    material().validate();
    final_section().validate();
    fem::CrossSection{units::mm(thickness_mm), units::mm(search_width_mm)}.validate();
    synthesis().validate();
    ga.validate();
    if (!(k_mNm_per_deg > 0.0)) {
        throw ConfigError("spring.k_mNm_per_deg must be positive");
    }
    if (!(box_width_mm > 0.0 && box_height_mm > 0.0)) {
        throw ConfigError("box dimensions must be positive");
    }
    if (!(handle_ratio > 0.0)) {
        throw ConfigError("spring.handle_ratio must be positive");
    }
    if (targets_mNm.empty()) {
        throw ConfigError("synthesis.targets_mNm must not be empty");
    }
    if (!(sweep_start_deg >= 0.0 && sweep_start_deg <= theta1_deg)) {
        throw ConfigError("angles.sweep_start_deg must lie in [0, theta1_deg]");
    }
    // n_elements is checked by the commands that mesh a design, so that
    // validate-fem can report a too-coarse mesh as a failed check.
    if (n_elements < 1) {
        throw ConfigError("fem.n_elements must be positive");
    }
    if (fitness_samples < 3) {
        throw ConfigError("angles.fitness_samples must be at least 3");
    }
    const auto b = box();
    if (!b.contains(units::mm(1.0) * pin_start_mm) || !b.contains(units::mm(1.0) * pin_end_mm) ||
        pin_start_mm == pin_end_mm) {
        throw ConfigError("pins must be distinct points inside the design box");
    }
}

geometry::CrankGeometry ProjectConfig::crank() const {
    try {
        return {units::mm(w_mm), units::mm(r_mm)};
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
}

fem::Material ProjectConfig::material() const {
    return {units::GPa(youngs_GPa), poisson, units::MPa(yield_MPa)};
}

fem::DesignBox ProjectConfig::box() const {
    return {units::mm(box_width_mm), units::mm(box_height_mm)};
}

fem::CrossSection ProjectConfig::final_section() const {
    return {units::mm(thickness_mm), units::mm(width_mm)};
}

synthesis::SynthesisConfig ProjectConfig::synthesis() const {
    synthesis::SynthesisConfig s;
    s.geometry = crank();
    s.stiffness = units::mNm_per_deg(k_mNm_per_deg);
    s.theta1 = units::deg(theta1_deg);
    s.theta2 = units::deg(theta2_deg);
    s.jaw_max = units::deg(jaw_max_deg);
    s.jaw_length = units::mm(jaw_length_mm);
    s.window_step = units::deg(window_step_deg);
    return s;
}

nsm::NsmProblem ProjectConfig::final_problem() const {
    nsm::NsmProblem p;
    p.geometry = crank();
    p.section = final_section();
    p.material = material();
    p.box = box();
    p.pin_start = units::mm(1.0) * pin_start_mm;
    p.pin_end = units::mm(1.0) * pin_end_mm;
    p.window_start = units::deg(theta1_deg);
    p.window_end = units::deg(theta1_deg + theta2_deg);
    p.window_samples = fitness_samples;
    p.sweep_start = units::deg(sweep_start_deg);
    p.n_elements = n_elements;
    p.solver = solver;
    const double k = units::mNm_per_deg(k_mNm_per_deg);
    p.target_slope = k;
    // Mean element torque that lets the largest target be reached with a
    // non-negative preload.
    const double max_target = *std::max_element(targets_mNm.begin(), targets_mNm.end());
    const double mean_theta = 0.5 * (p.window_start + p.window_end);
    p.min_mean_torque = units::mNm(max_target) + k * mean_theta;
    p.stress_limit = units::MPa(yield_MPa);
    // A 10% overstress costs as much as a 10% torque shortfall.
    p.stress_penalty = p.min_mean_torque;
    p.satisfied_ratio = satisfied_ratio;
    return p;
}

nsm::NsmProblem ProjectConfig::search_problem() const {
    nsm::NsmProblem p = final_problem();
    const double ratio = search_width_mm / width_mm;
    p.section.width = units::mm(search_width_mm);
    *p.target_slope *= ratio;
    p.min_mean_torque *= ratio;
    p.stress_penalty *= ratio;
    return p;
}

fem::KeyPoints to_metres(const fem::KeyPoints &mm) {
    fem::KeyPoints out;
    for (std::size_t i = 0; i < mm.size(); ++i) {
        out[i] = units::mm(1.0) * mm[i];
    }
    return out;
}

fem::KeyPoints to_millimetres(const fem::KeyPoints &m) {
    fem::KeyPoints out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i] = units::to_mm(1.0) * m[i];
    }
    return out;
}

} // namespace actm::cli
