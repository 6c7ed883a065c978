#include "actm/beam_fem.hpp"

#include "actm/errors.hpp"

#include <Eigen/Geometry>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace actm::fem {

void Material::validate() const {
    if (!(youngs_modulus > 0.0)) {
        throw ShapeError("Young's modulus must be positive");
    }
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) {
        throw ShapeError("Poisson's ratio must lie in [0, 0.5)");
    }
    if (!(yield_strength > 0.0)) {
        throw ShapeError("yield strength must be positive");
    }
}

void CrossSection::validate() const {
    if (!(thickness > 0.0) || !(width > 0.0)) {
        throw ShapeError("cross-section dimensions must be positive");
    }
}

bool DesignBox::contains(const Vec2 &p, double tol) const {
    return p.x() >= -tol && p.x() <= width + tol && p.y() >= -tol && p.y() <= height + tol;
}

Vec2 DesignBox::clamp(const Vec2 &p) const {
    return {std::clamp(p.x(), 0.0, width), std::clamp(p.y(), 0.0, height)};
}

Vec2 BeamDesign::chord_axis() const {
    const Vec2 d = key_points.back() - key_points.front();
    const double len = d.norm();
    if (!(len > 0.0)) {
        throw ShapeError("pins coincide");
    }
    return d / len;
}

void BeamDesign::validate() const {
    section.validate();
    material.validate();
    if (!(box.width > 0.0) || !(box.height > 0.0)) {
        throw ShapeError("design box must have positive size");
    }
    for (std::size_t i = 0; i < kKeyPoints; ++i) {
        if (!key_points[i].allFinite() || !box.contains(key_points[i])) {
            throw ShapeError("key point " + std::to_string(i + 1) + " lies outside the design box");
        }
        if (i > 0 && !((key_points[i] - key_points[i - 1]).norm() > 1e-12)) {
            throw ShapeError("key points " + std::to_string(i) + " and " + std::to_string(i + 1) +
                             " coincide");
        }
    }
    const Vec2 axis = chord_axis();
    for (std::size_t i = 2; i + 1 < kKeyPoints; ++i) {
        if (!(key_points[i].dot(axis) > key_points[i - 1].dot(axis))) {
            throw ShapeError("middle key points must be ordered along the chord axis");
        }
    }
}

BeamModel::BeamModel(std::vector<Vec2> nodes, CrossSection section, Material material)
    : nodes_(std::move(nodes)), section_(section), material_(material) {
    if (nodes_.size() < 2) {
        throw ShapeError("a beam model needs at least one element");
    }
    section_.validate();
    material_.validate();
    lengths_.reserve(nodes_.size() - 1);
    angles_.reserve(nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        const Vec2 d = nodes_[i + 1] - nodes_[i];
        const double len = d.norm();
        if (!(len > 0.0)) {
            throw ShapeError("zero-length element " + std::to_string(i));
        }
        lengths_.push_back(len);
        angles_.push_back(std::atan2(d.y(), d.x()));
    }
}

double BeamModel::total_length() const {
    double total = 0.0;
    for (double l : lengths_) {
        total += l;
    }
    return total;
}

BeamModel BeamModel::rotated(double angle) const {
    const Eigen::Rotation2Dd rot(angle);
    std::vector<Vec2> out;
    out.reserve(nodes_.size());
    for (const Vec2 &p : nodes_) {
        out.push_back(nodes_.front() + rot * (p - nodes_.front()));
    }
    return BeamModel(std::move(out), section_, material_);
}

BeamModel BeamModel::with_section(const CrossSection &section) const {
    return BeamModel(nodes_, section, material_);
}

BeamModel build_model(const BeamDesign &design, int n_elements) {
    if (n_elements < 8) {
        throw ShapeError("n_elements must be at least 8");
    }
    design.validate();
    const ParametricSpline spline(design.key_points);
    return BeamModel(spline.resample(n_elements), design.section, design.material);
}

double natural_chord(const BeamModel &model) {
    return (model.nodes().back() - model.nodes().front()).norm();
}

double ForceDeflectionCurve::max_stress() const {
    double peak = 0.0;
    for (const auto &s : samples) {
        peak = std::max(peak, s.max_von_mises);
    }
    return peak;
}

namespace {

using Triplet = Eigen::Triplet<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_near(double angle, double reference) {
    return angle + kTwoPi * std::round((reference - angle) / kTwoPi);
}

struct Evaluation {
    Vector internal;
    std::vector<Triplet> tangent;
    double energy = 0.0;
    double max_stress = 0.0;
};

// Corotational 2-node Euler-Bernoulli beam assembly (Crisfield / Battini).
class Corotational {
public:
    explicit Corotational(const BeamModel &model)
        : model_(model),
          ea_(model.material().youngs_modulus * model.section().area()),
          ei_(model.material().youngs_modulus * model.section().second_moment()) {}

    int ndof() const { return 3 * static_cast<int>(model_.nodes().size()); }
    double axial_rigidity() const { return ea_; }

    Evaluation evaluate(const Vector &u, bool with_tangent) const {
        Evaluation ev;
        ev.internal = Vector::Zero(ndof());
        if (with_tangent) {
            ev.tangent.reserve(static_cast<std::size_t>(model_.n_elements()) * 36);
        }
        const auto &nodes = model_.nodes();
        const double area = model_.section().area();
        const double fiber_over_i = model_.section().extreme_fiber() / model_.section().second_moment();

        for (int e = 0; e < model_.n_elements(); ++e) {
            const int a = 3 * e;
            const int b = 3 * (e + 1);
            const double l0 = model_.element_length(e);
            const double beta0 = model_.element_angle(e);
            const Vec2 x1 = nodes[static_cast<std::size_t>(e)] + Vec2(u[a], u[a + 1]);
            const Vec2 x2 = nodes[static_cast<std::size_t>(e) + 1] + Vec2(u[b], u[b + 1]);
            const Vec2 d = x2 - x1;
            const double len = d.norm();
            const double c = d.x() / len;
            const double s = d.y() / len;
            const double c0 = std::cos(beta0);
            const double s0 = std::sin(beta0);
            const double th1 = u[a + 2];
            const double th2 = u[b + 2];
            const double alpha = wrap_near(std::atan2(c0 * s - s0 * c, c0 * c + s0 * s), 0.5 * (th1 + th2));
            const double t1 = th1 - alpha;
            const double t2 = th2 - alpha;
            const double ul = (len * len - l0 * l0) / (len + l0);

            const double n = ea_ / l0 * ul;
            const double m1 = ei_ / l0 * (4.0 * t1 + 2.0 * t2);
            const double m2 = ei_ / l0 * (2.0 * t1 + 4.0 * t2);

            Vec6 r;
            r << -c, -s, 0.0, c, s, 0.0;
            Vec6 z;
            z << s, -c, 0.0, -s, c, 0.0;
            Vec6 b1 = -z / len;
            b1[2] += 1.0;
            Vec6 b2 = -z / len;
            b2[5] += 1.0;

            const Vec6 f = r * n + b1 * m1 + b2 * m2;
            for (int k = 0; k < 3; ++k) {
                ev.internal[a + k] += f[k];
                ev.internal[b + k] += f[3 + k];
            }

            ev.energy += 0.5 * ea_ * ul * ul / l0 + 2.0 * ei_ / l0 * (t1 * t1 + t1 * t2 + t2 * t2);
            ev.max_stress = std::max(ev.max_stress,
                                     std::abs(n) / area + std::max(std::abs(m1), std::abs(m2)) * fiber_over_i);

            if (with_tangent) {
                const double kax = ea_ / l0;
                const double kb = ei_ / l0;
                Mat6 k = kax * r * r.transpose() +
                         kb * (4.0 * b1 * b1.transpose() + 2.0 * b1 * b2.transpose() +
                               2.0 * b2 * b1.transpose() + 4.0 * b2 * b2.transpose()) +
                         (n / len) * z * z.transpose() +
                         ((m1 + m2) / (len * len)) * (r * z.transpose() + z * r.transpose());
                for (int i = 0; i < 6; ++i) {
                    const int gi = i < 3 ? a + i : b + i - 3;
                    for (int j = 0; j < 6; ++j) {
                        const int gj = j < 3 ? a + j : b + j - 3;
                        ev.tangent.emplace_back(gi, gj, k(i, j));
                    }
                }
            }
        }
        return ev;
    }

private:
    const BeamModel &model_;
    double ea_;
    double ei_;
};

// Incremental-iterative driver over a scalar path parameter lambda. At each
// lambda the fixed DOFs take prescribed(lambda) and the free DOFs carry
// external(lambda).
class PathSolver {
public:
    using Prescribed = std::function<Vector(double)>;
    using External = std::function<Vector(double)>;

    PathSolver(const BeamModel &model, std::vector<int> fixed, Prescribed prescribed,
               External external, const SolverOptions &options)
        : assembly_(model), fixed_(std::move(fixed)), prescribed_(std::move(prescribed)),
          external_(std::move(external)), options_(options),
          tolerance_(options.tolerance_factor * assembly_.axial_rigidity()) {
        const int n = assembly_.ndof();
        map_.assign(static_cast<std::size_t>(n), -1);
        for (int d : fixed_) {
            map_[static_cast<std::size_t>(d)] = -2;
        }
        for (int d = 0; d < n; ++d) {
            if (map_[static_cast<std::size_t>(d)] == -1) {
                map_[static_cast<std::size_t>(d)] = static_cast<int>(free_.size());
                free_.push_back(d);
            }
        }
        u_ = Vector::Zero(n);
    }

    const Vector &displacements() const { return u_; }
    const Corotational &assembly() const { return assembly_; }

    /// Advances from lambda0 to lambda1 with bisection; throws on failure.
    void advance(double lambda0, double lambda1, std::size_t step_index, int depth = 0) {
        const Vector backup = u_;
        if (try_increment(lambda1)) {
            return;
        }
        u_ = backup;
        if (depth >= options_.max_bisections) {
            throw NonConvergence(step_index, "Newton failed to converge at step " +
                                                 std::to_string(step_index) + " after " +
                                                 std::to_string(options_.max_bisections) +
                                                 " bisections");
        }
        const double mid = 0.5 * (lambda0 + lambda1);
        advance(lambda0, mid, step_index, depth + 1);
        advance(mid, lambda1, step_index, depth + 1);
    }

private:
    bool factorize(const std::vector<Triplet> &tangent) {
        std::vector<Triplet> reduced;
        reduced.reserve(tangent.size());
        for (const auto &t : tangent) {
            const int i = map_[static_cast<std::size_t>(t.row())];
            const int j = map_[static_cast<std::size_t>(t.col())];
            if (i >= 0 && j >= 0) {
                reduced.emplace_back(i, j, t.value());
            }
        }
        const auto nf = static_cast<Eigen::Index>(free_.size());
        SparseMatrix k(nf, nf);
        k.setFromTriplets(reduced.begin(), reduced.end());
        if (!analyzed_) {
            lu_.analyzePattern(k);
            analyzed_ = true;
        }
        lu_.factorize(k);
        return lu_.info() == Eigen::Success;
    }

    Vector free_part(const Vector &full) const {
        Vector out(static_cast<Eigen::Index>(free_.size()));
        for (std::size_t i = 0; i < free_.size(); ++i) {
            out[static_cast<Eigen::Index>(i)] = full[free_[i]];
        }
        return out;
    }

    void add_free(const Vector &delta) {
        for (std::size_t i = 0; i < free_.size(); ++i) {
            u_[free_[i]] += delta[static_cast<Eigen::Index>(i)];
        }
    }

    bool try_increment(double lambda1) {
        const Vector target = prescribed_(lambda1);
        const Vector ext = external_(lambda1);

        // Tangent predictor: K_ff du_f = f_ext - f_int - K_fp dp.
        {
            Evaluation ev = assembly_.evaluate(u_, true);
            Vector dp = Vector::Zero(assembly_.ndof());
            for (std::size_t i = 0; i < fixed_.size(); ++i) {
                dp[fixed_[i]] = target[static_cast<Eigen::Index>(i)] - u_[fixed_[i]];
            }
            Vector rhs_full = ext - ev.internal;
            for (const auto &t : ev.tangent) {
                if (map_[static_cast<std::size_t>(t.col())] == -2) {
                    rhs_full[t.row()] -= t.value() * dp[t.col()];
                }
            }
            if (!factorize(ev.tangent)) {
                return false;
            }
            const Vector du = lu_.solve(free_part(rhs_full));
            if (!du.allFinite()) {
                return false;
            }
            add_free(du);
            for (std::size_t i = 0; i < fixed_.size(); ++i) {
                u_[fixed_[i]] = target[static_cast<Eigen::Index>(i)];
            }
        }

        for (int it = 0; it < options_.max_iterations; ++it) {
            Evaluation ev = assembly_.evaluate(u_, true);
            const Vector residual = free_part(ev.internal - ext);
            const double norm = residual.norm();
            if (!std::isfinite(norm)) {
                return false;
            }
            if (!factorize(ev.tangent)) {
                return false;
            }
            const Vector du = lu_.solve(-residual);
            if (!du.allFinite()) {
                return false;
            }
            add_free(du);
            // The correction computed from a residual already below tolerance
            // is applied once more; Newton's quadratic rate takes the residual
            // to round-off, which keeps results frame-independent.
            if (norm <= tolerance_) {
                return true;
            }
        }
        return false;
    }

    Corotational assembly_;
    std::vector<int> fixed_;
    std::vector<int> free_;
    std::vector<int> map_;
    Prescribed prescribed_;
    External external_;
    SolverOptions options_;
    double tolerance_;
    Vector u_;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

CurveSample record(const PathSolver &solver, const BeamModel &model, double chord) {
    const Evaluation ev = solver.assembly().evaluate(solver.displacements(), false);
    const int last = 3 * model.n_elements();
    const Vec2 start(ev.internal[0], ev.internal[1]);
    const Vec2 end(ev.internal[last], ev.internal[last + 1]);
    const Vec2 axis = (model.nodes().back() - model.nodes().front()).normalized();
    return CurveSample{chord, end.dot(axis), ev.max_stress, true, ev.energy, start, end};
}

} // namespace

ForceDeflectionCurve solve_force_deflection(const BeamModel &model,
                                            std::span<const double> chord_schedule,
                                            const SolverOptions &options) {
    const double l0 = natural_chord(model);
    if (chord_schedule.empty()) {
        throw RangeError("chord schedule is empty");
    }
    if (std::abs(chord_schedule.front() - l0) > 1e-9 * l0) {
        throw RangeError("chord schedule must start at the natural chord");
    }
    for (std::size_t i = 1; i < chord_schedule.size(); ++i) {
        if (!(chord_schedule[i] > 0.0)) {
            throw RangeError("chord lengths must be positive");
        }
        const double step = chord_schedule[i] - chord_schedule[i - 1];
        const double first = chord_schedule.size() > 1 ? chord_schedule[1] - chord_schedule[0] : step;
        if (!(step * first > 0.0)) {
            throw RangeError("chord schedule must be strictly monotone");
        }
    }

    const int last = 3 * model.n_elements();
    const Vec2 axis = (model.nodes().back() - model.nodes().front()) / l0;
    const int ndof = 3 * (model.n_elements() + 1);

    // lambda is the chord length itself.
    PathSolver solver(
        model, {0, 1, last, last + 1},
        [&](double chord) {
            const Vec2 disp = axis * (chord - l0);
            Vector p(4);
            p << 0.0, 0.0, disp.x(), disp.y();
            return p;
        },
        [ndof](double) { return Vector::Zero(ndof); }, options);

    const double max_increment = options.max_increment_fraction * model.total_length();
    ForceDeflectionCurve curve;
    curve.samples.reserve(chord_schedule.size());
    curve.samples.push_back(record(solver, model, l0));
    double current = l0;
    for (std::size_t k = 1; k < chord_schedule.size(); ++k) {
        const double target = chord_schedule[k];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(target - current) / max_increment)));
        for (int p = 1; p <= pieces; ++p) {
            const double from = current + (target - current) * (p - 1) / pieces;
            const double to = p == pieces ? target : current + (target - current) * p / pieces;
            solver.advance(from, to, k);
        }
        current = target;
        curve.samples.push_back(record(solver, model, target));
    }
    return curve;
}

ForceDeflectionCurve solve_chord_samples(const BeamModel &model, std::vector<double> chords,
                                         const SolverOptions &options) {
    const double l0 = natural_chord(model);
    const double same = 1e-12 * l0;
    std::vector<double> shorter{l0};
    std::vector<double> longer{l0};
    std::sort(chords.begin(), chords.end());
    for (auto it = chords.rbegin(); it != chords.rend(); ++it) {
        if (*it < l0 - same && *it < shorter.back() - same) {
            shorter.push_back(*it);
        }
    }
    for (double c : chords) {
        if (c > l0 + same && c > longer.back() + same) {
            longer.push_back(c);
        }
    }

    ForceDeflectionCurve out;
    if (shorter.size() > 1) {
        auto part = solve_force_deflection(model, shorter, options);
        out.samples.assign(part.samples.rbegin(), part.samples.rend());
    }
    if (longer.size() > 1) {
        auto part = solve_force_deflection(model, longer, options);
        if (out.samples.empty()) {
            out.samples = std::move(part.samples);
        } else {
            out.samples.insert(out.samples.end(), part.samples.begin() + 1, part.samples.end());
        }
    }
    if (out.samples.empty()) {
        const double only = l0;
        out = solve_force_deflection(model, std::span<const double>(&only, 1), options);
    }
    return out;
}

CantileverResult solve_cantilever_tip_load(const BeamModel &model, double tip_force,
                                           int load_steps, const SolverOptions &options) {
    if (load_steps < 1) {
        throw RangeError("load_steps must be positive");
    }
    const int last = 3 * model.n_elements();
    const int ndof = last + 3;
    const Vec2 axis = (model.nodes().back() - model.nodes().front()).normalized();
    const Vec2 normal(-axis.y(), axis.x());

    PathSolver solver(
        model, {0, 1, 2}, [](double) { return Vector::Zero(3); },
        [&](double lambda) {
            Vector f = Vector::Zero(ndof);
            f[last] = lambda * tip_force * normal.x();
            f[last + 1] = lambda * tip_force * normal.y();
            return f;
        },
        options);

    for (int s = 1; s <= load_steps; ++s) {
        solver.advance(static_cast<double>(s - 1) / load_steps, static_cast<double>(s) / load_steps,
                       static_cast<std::size_t>(s));
    }
    const Vector &u = solver.displacements();
    const Vec2 tip(u[last], u[last + 1]);
    return CantileverResult{tip.dot(axis), tip.dot(normal), u[last + 2]};
}

} // namespace actm::fem
