#include "actm/beam_fem.hpp"
#include "actm/errors.hpp"
#include "actm/geometry.hpp"
#include "actm/synthesis.hpp"
#include "actm/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace actm;
using namespace actm::synthesis;
using units::deg;
using units::mm;
using units::mNm;

namespace {

const geometry::CrankGeometry kCrank{mm(12), mm(8)};
const double kK = units::mNm_per_deg(0.3);

fem::CurveSample sample(double chord, double force, double stress = 0.0) {
    return {chord, force, stress, true, 0.0, fem::Vec2::Zero(), fem::Vec2::Zero()};
}

// Piecewise-linear force over the crank's chord range.
fem::ForceDeflectionCurve synthetic_curve() {
    fem::ForceDeflectionCurve c;
    for (double chord_mm : {4.0, 8.0, 11.0, 14.0, 17.0, 20.0}) {
        c.samples.push_back(sample(mm(chord_mm), 0.5 * chord_mm - 2.0 + 0.05 * chord_mm * chord_mm));
    }
    return c;
}

// Independent torque: z-component of r x F with the crank pivot at the origin,
// anchor O at (-w, 0) and the crank tip at R (cos t, sin t).
double cross_product_torque(double force, double theta) {
    const double tx = kCrank.r() * std::cos(theta), ty = kCrank.r() * std::sin(theta);
    const double dx = -kCrank.w() - tx, dy = -ty;
    const double len = std::hypot(dx, dy);
    return tx * (force * dy / len) - ty * (force * dx / len);
}

double hand_interpolate(const fem::ForceDeflectionCurve &c, double chord) {
    for (std::size_t i = 1; i < c.size(); ++i) {
        const auto &a = c.samples[i - 1], &b = c.samples[i];
        if (chord <= b.chord) {
            return a.axial_force + (b.axial_force - a.axial_force) * (chord - a.chord) / (b.chord - a.chord);
        }
    }
    return c.samples.back().axial_force;
}

TorqueCurve linear_curve(double slope, double intercept) {
    std::vector<TorqueSample> s;
    for (int i = 0; i <= 6; ++i) {
        const double t = deg(45.0 + 15.0 * i);
        s.push_back({t, intercept + slope * t});
    }
    return TorqueCurve(s, deg(45), deg(135));
}

} // namespace

TEST(Spring, Examples) {
    EXPECT_NEAR(spring_torque({kK, 0.0}, deg(45)), mNm(-13.5), 1e-15);
    EXPECT_EQ(spring_torque({kK, deg(20)}, -deg(20)), 0.0);
    for (double t : {0.0, 0.7, 2.0}) {
        EXPECT_NEAR(spring_torque({kK, deg(30)}, t) - spring_torque({kK, deg(10)}, t), -kK * deg(20), 1e-15);
    }
    EXPECT_THROW((PositiveSpring{0.0, 0.0}.validate()), ConfigError);
    EXPECT_THROW((PositiveSpring{kK, -0.1}.validate()), ConfigError);
}

TEST(FitLine, SatisfiesNormalEquationsAndIsMinimal) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 12; ++i) {
            x.push_back(0.1 * i + 0.01 * u(rng));
            y.push_back(3.0 * x.back() + u(rng));
        }
        const auto fit = fit_line(x, y);
        double sr = 0.0, sxr = 0.0;
        auto sse = [&](double a, double b) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                s += (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
            }
            return s;
        };
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            sr += r;
            sxr += x[i] * r;
        }
        EXPECT_NEAR(sr, 0.0, 1e-10);
        EXPECT_NEAR(sxr, 0.0, 1e-10);
        const double best = sse(fit.intercept, fit.slope);
        EXPECT_NEAR(std::sqrt(best / x.size()), fit.rms_residual, 1e-12);
        for (double da : {-1e-3, 1e-3}) {
            for (double db : {-1e-3, 0.0, 1e-3}) {
                EXPECT_GE(sse(fit.intercept + da, fit.slope + db), best);
            }
        }
    }
    EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
    EXPECT_THROW(fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), DomainError);
}

TEST(FitLine, NoisyResidualBoundedByNoiseAmplitude) {
    std::mt19937_64 rng(8);
    const double eps = mNm(0.5);
    std::uniform_real_distribution<double> noise(-eps, eps);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 19; ++i) {
            x.push_back(deg(45 + 5.0 * i));
            y.push_back(mNm(20) + kK * x.back() + noise(rng));
        }
        EXPECT_LE(fit_line(x, y).rms_residual, eps);
    }
}

TEST(TorqueCurve, SortsAndComputesWindowStatistics) {
    TorqueCurve c({{deg(90), 3.0}, {deg(30), 100.0}, {deg(60), 1.0}, {deg(120), 5.0}}, deg(60), deg(120));
    EXPECT_EQ(c.samples().front().theta, deg(30));
    EXPECT_NEAR(c.mean(), 3.0, 1e-15);
    EXPECT_NEAR(c.std_dev(), std::sqrt(8.0 / 3.0), 1e-15);
    EXPECT_NEAR(c.coefficient_of_variation(), std::sqrt(8.0 / 3.0) / 3.0, 1e-15);
    EXPECT_NEAR(c.mean_theta(), deg(90), 1e-15);
    EXPECT_NEAR(c.fit().slope, 4.0 / deg(60), 1e-12);
    EXPECT_THROW(TorqueCurve({{0.1, 1.0}}, 0.5, 0.6).mean(), RangeError);
    EXPECT_THROW(TorqueCurve({{0.1, 1.0}}, 0.6, 0.5), DomainError);
}

TEST(NsmTorqueCurve, MatchesHandComposition) {
    const auto curve = synthetic_curve();
    const auto thetas = geometry::AngleSchedule(0.0, deg(135), 28).samples();
    const auto t = nsm_torque_curve(curve, kCrank, thetas, deg(45), deg(135));
    for (const auto &s : t.samples()) {
        const double f = hand_interpolate(curve, geometry::elastic_length(kCrank, s.theta));
        const double ref = cross_product_torque(f, s.theta);
        EXPECT_NEAR(s.torque, ref, 1e-12 * std::max(1e-3, std::abs(ref)));
    }
    EXPECT_EQ(t.samples().front().torque, 0.0);  // sin 0
}

TEST(NsmTorqueCurve, ZeroAtRelaxAngleAndRangeChecked) {
    fem::ForceDeflectionCurve c;
    c.samples = {sample(mm(8), -1.0), sample(mm(14), 0.0), sample(mm(20), 2.0)};
    const double relax = geometry::angle_for_length(kCrank, mm(14));
    const std::vector<double> at{relax};
    EXPECT_NEAR(nsm_torque_curve(c, kCrank, at, relax, relax).samples()[0].torque, 0.0, 1e-15);
    fem::ForceDeflectionCurve narrow;
    narrow.samples = {sample(mm(12), 0.0), sample(mm(16), 1.0)};
    const std::vector<double> far{deg(10)};
    EXPECT_THROW(nsm_torque_curve(narrow, kCrank, far, 0, 1), RangeError);
}

TEST(NetTorqueCurve, ExactCancellationGivesConstant) {
    const auto nsm = linear_curve(kK, mNm(40));
    const auto net = net_torque_curve(nsm, {kK, deg(10)});
    EXPECT_NEAR(net.std_dev(), 0.0, 1e-15);
    EXPECT_NEAR(net.mean(), mNm(40) - kK * deg(10), 1e-15);
}

TEST(NetTorqueCurve, SuperpositionOfPreload) {
    TorqueCurve nsm({{deg(45), 0.02}, {deg(60), 0.031}, {deg(75), 0.027}, {deg(90), 0.05}}, deg(45), deg(90));
    const auto base = net_torque_curve(nsm, {kK, 0.0});
    const auto shifted = net_torque_curve(nsm, {kK, deg(17)});
    for (std::size_t i = 0; i < nsm.size(); ++i) {
        const double diff = shifted.samples()[i].torque - base.samples()[i].torque;
        EXPECT_NEAR(diff, -kK * deg(17), 1e-12 * kK * deg(17));
    }
    EXPECT_NEAR(shifted.std_dev(), base.std_dev(), 1e-15);
}

TEST(AddCurves, GridMismatch) {
    TorqueCurve a({{0.1, 1.0}, {0.2, 1.0}});
    TorqueCurve b({{0.1, 1.0}, {0.3, 1.0}});
    TorqueCurve c({{0.1, 1.0}});
    EXPECT_THROW(add_curves(a, b), GridMismatch);
    EXPECT_THROW(add_curves(a, c), GridMismatch);
}

TEST(PreloadForTarget, Examples) {
    const auto nsm = linear_curve(kK * 0.9, mNm(60));
    const double boundary = nsm.mean() - kK * nsm.mean_theta();
    EXPECT_NEAR(preload_for_target(kK, nsm, boundary), 0.0, 1e-12);
    const double p1 = preload_for_target(kK, nsm, mNm(10));
    const double p2 = preload_for_target(kK, nsm, mNm(10) + kK * deg(1));
    EXPECT_NEAR(p1 - p2, deg(1), 1e-12);
    EXPECT_THROW(preload_for_target(kK, nsm, boundary + mNm(1)), Infeasible);
    EXPECT_THROW(preload_for_target(0.0, nsm, 0.0), DomainError);

    double previous = std::numeric_limits<double>::infinity();
    for (double target : {10.0, 20.0, 30.0}) {
        const double p = preload_for_target(kK, nsm, mNm(target));
        EXPECT_LT(p, previous);
        previous = p;
        EXPECT_NEAR(net_torque_curve(nsm, {kK, p}).mean(), mNm(target), 1e-12);
    }
}

TEST(ScaleSection, ForcesScaleStressUnchanged) {
    const fem::KeyPoints k{fem::Vec2(mm(11), 0), fem::Vec2(mm(2), mm(7)), fem::Vec2(mm(15), mm(12)),
                           fem::Vec2(mm(28), mm(7)), fem::Vec2(mm(19), 0)};
    const fem::BeamDesign d{k, {mm(2), mm(2)}, {3.45e9, 0.39, 106e6}, {mm(30), mm(12)}};
    EXPECT_EQ(scale_section(d, 1.0).section.width, d.section.width);
    const auto scaled = scale_section(d, 3.0);
    EXPECT_NEAR(scaled.section.width, mm(6), 1e-15);
    EXPECT_THROW(scale_section(d, 0.0), DomainError);

    const auto m1 = fem::build_model(d, 40);
    const auto m3 = fem::build_model(scaled, 40);
    const std::vector<double> chords{mm(9), mm(14), mm(18)};
    const auto c1 = fem::solve_chord_samples(m1, chords);
    const auto c3 = fem::solve_chord_samples(m3, chords);
    ASSERT_EQ(c1.size(), c3.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
        const double f = c1.samples[i].axial_force;
        EXPECT_NEAR(c3.samples[i].axial_force, 3.0 * f, 1e-9 * std::abs(3.0 * f) + 1e-12);
    }
    EXPECT_NEAR(c3.max_stress(), c1.max_stress(), 1e-9 * c1.max_stress());
}

TEST(StressCheck, Boundaries) {
    const fem::Material pla{3.45e9, 0.39, 106e6};
    fem::ForceDeflectionCurve c;
    c.samples = {sample(0.01, 0.0, 10e6), sample(0.02, 1.0, 69e6)};
    auto r = stress_check(c, pla);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.margin, 37e6, 1e-6);
    c.samples[1].max_von_mises = 106e6;
    EXPECT_FALSE(stress_check(c, pla).pass);
    c.samples = {sample(0.01, 0.0, 0.0)};
    r = stress_check(c, pla);
    EXPECT_EQ(r.peak, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(HandleMap, OpenMonotoneAndRoundTrip) {
    const auto nsm = linear_curve(kK * 0.9, mNm(60));
    const double p20 = preload_for_target(kK, nsm, mNm(20));
    const HandleCalibration cal{1.0, p20 + deg(30)};
    EXPECT_NEAR(handle_map(deg(30), cal, kK, nsm).torque, mNm(20), 1e-12);
    const HandleCalibration wide{1.0, preload_for_target(kK, nsm, mNm(5)) + deg(40)};
    EXPECT_TRUE(handle_map(0.0, wide, kK, nsm).jaw_opens);
    double previous = -1.0;
    for (double h = 0; h <= 40; h += 5) {
        const double t = handle_map(deg(h), wide, kK, nsm).torque;
        EXPECT_GT(t, previous);
        previous = t;
    }
    EXPECT_FALSE(handle_map(deg(40), wide, kK, nsm).jaw_opens);
    EXPECT_THROW((HandleCalibration{0.0, 1.0}.validate()), ConfigError);
}

TEST(SynthesisConfig, WindowAndValidation) {
    SynthesisConfig cfg;
    const auto w = cfg.window_angles();
    ASSERT_EQ(w.size(), 7u);
    EXPECT_NEAR(w.front(), deg(45), 1e-15);
    EXPECT_NEAR(w.back(), deg(135), 1e-12);
    cfg.theta2 = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.theta2 = deg(150);
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.theta2 = deg(80);
    EXPECT_THROW(cfg.window_angles(), ConfigError);
}

TEST(RelaxAngles, InvertElasticLength) {
    const auto [a, c] = relax_angles(kCrank, geometry::elastic_length(kCrank, deg(45)));
    EXPECT_NEAR(a, -deg(45), 1e-12);
    EXPECT_NEAR(c, deg(45), 1e-12);
    EXPECT_THROW(relax_angles(kCrank, mm(25)), DomainError);
}

TEST(SynthesizeTarget, HitsTargetsExactly) {
    SynthesisConfig cfg;
    const auto nsm = linear_curve(kK * 1.1, mNm(70));
    for (double target : {10.0, 20.0, 30.0}) {
        const auto r = synthesize_target(cfg, nsm, mNm(target));
        EXPECT_NEAR(r.mean, mNm(target), 1e-12);
        EXPECT_NEAR(r.std_dev, r.net.std_dev(), 0.0);
        EXPECT_NEAR(r.cv, r.std_dev / r.mean, 1e-15);
        EXPECT_FALSE(r.jaw_opens);
    }
}
