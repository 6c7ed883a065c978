// Geometrically nonlinear planar beam FEM for the compliant element.
//
// The centreline is a natural cubic spline through five key points,
// resampled into equal-arc-length 2-node corotational Euler-Bernoulli
// elements (three DOFs per node: ux, uy, rotation). The main analysis is a
// displacement-controlled sweep of a pinned-pinned beam: the first pin stays
// put, the second is moved along the chord direction, and the reaction along
// the chord (tension positive) is recorded at each scheduled chord length.
#pragma once

#include "actm/spline.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace actm::fem {

struct Material {
    double youngs_modulus;  // Pa
    double poisson_ratio;   // stored for the material card; unused by beam theory
    double yield_strength;  // Pa

    /// Throws ShapeError on E <= 0, nu outside [0, 0.5), yield <= 0.
    void validate() const;
};

struct CrossSection {
    double thickness;  // in-plane (bending) dimension, m
    double width;      // out-of-plane dimension, m

    double area() const { return thickness * width; }
    double second_moment() const { return width * thickness * thickness * thickness / 12.0; }
    double extreme_fiber() const { return 0.5 * thickness; }

    void validate() const;
};

/// Axis-aligned design region [0, width] x [0, height] in box-local metres.
struct DesignBox {
    double width;
    double height;

    bool contains(const Vec2 &p, double tol = 1e-12) const;
    Vec2 clamp(const Vec2 &p) const;
};

inline constexpr std::size_t kKeyPoints = 5;
using KeyPoints = std::array<Vec2, kKeyPoints>;

struct BeamDesign {
    KeyPoints key_points;  // box-local; first and last are the pins
    CrossSection section;
    Material material;
    DesignBox box;

    /// Unit vector from the first pin to the last.
    Vec2 chord_axis() const;

    /// Throws ShapeError unless: every key point is inside the box, neighbours
    /// are distinct, and the three middle points are strictly increasing along
    /// the chord axis.
    void validate() const;
};

class BeamModel {
public:
    /// Builds from an explicit node chain (no key-point checks).
    BeamModel(std::vector<Vec2> nodes, CrossSection section, Material material);

    const std::vector<Vec2> &nodes() const { return nodes_; }
    const CrossSection &section() const { return section_; }
    const Material &material() const { return material_; }

    int n_elements() const { return static_cast<int>(nodes_.size()) - 1; }
    double element_length(int e) const { return lengths_[static_cast<std::size_t>(e)]; }
    double element_angle(int e) const { return angles_[static_cast<std::size_t>(e)]; }
    double total_length() const;

    /// Same beam rigidly rotated by `angle` about the first node.
    BeamModel rotated(double angle) const;
    /// Same beam with a different cross-section.
    BeamModel with_section(const CrossSection &section) const;

private:
    std::vector<Vec2> nodes_;
    std::vector<double> lengths_;
    std::vector<double> angles_;
    CrossSection section_;
    Material material_;
};

/// Spline-interpolates the key points and discretises into n_elements
/// equal-arc-length elements. Throws ShapeError on invalid designs or
/// n_elements < 8.
BeamModel build_model(const BeamDesign &design, int n_elements);

/// Distance between the two pins in the stress-free configuration.
double natural_chord(const BeamModel &model);

struct SolverOptions {
    int max_iterations = 50;
    int max_bisections = 5;
    /// Residual tolerance is tolerance_factor * E * A.
    double tolerance_factor = 1e-8;
    /// Internal increments are at most this fraction of the arc length.
    double max_increment_fraction = 0.01;
};

struct CurveSample {
    double chord;            // m
    double axial_force;      // N, tension positive
    double max_von_mises;    // Pa, |N/A| + |M| c / I over all elements
    bool converged;
    double strain_energy;    // J
    Vec2 start_reaction;     // N, force applied by the first pin
    Vec2 end_reaction;       // N, force applied by the moving pin
};

struct ForceDeflectionCurve {
    std::vector<CurveSample> samples;

    std::size_t size() const { return samples.size(); }
    double max_stress() const;
};

/// Displacement-controlled sweep. The schedule must start at the natural
/// chord and be strictly monotone. Throws NonConvergence(step) when Newton
/// fails after all bisections.
ForceDeflectionCurve solve_force_deflection(const BeamModel &model,
                                            std::span<const double> chord_schedule,
                                            const SolverOptions &options = {});

/// Covers the chord lengths in `chords` (any order): sweeps outward from the
/// natural chord in each needed direction and returns the merged samples
/// sorted by ascending chord. The natural-chord sample is included.
ForceDeflectionCurve solve_chord_samples(const BeamModel &model, std::vector<double> chords,
                                         const SolverOptions &options = {});

struct CantileverResult {
    double axial_tip_displacement;       // along the original beam axis, m
    double transverse_tip_displacement;  // along the load, m
    double tip_rotation;                 // rad
};

/// Clamped at the first node, a follower-free tip force perpendicular to the
/// (straight) reference axis, applied in `load_steps` equal increments.
CantileverResult solve_cantilever_tip_load(const BeamModel &model, double tip_force,
                                           int load_steps, const SolverOptions &options = {});

} // namespace actm::fem
