#include "actm/errors.hpp"
#include "actm/geometry.hpp"
#include "actm/nsm_problem.hpp"
#include "actm/synthesis.hpp"
#include "actm/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace actm;
using namespace actm::nsm;
using units::deg;
using units::mm;
using units::mNm;

namespace {

const double kK = units::mNm_per_deg(0.3);

std::vector<double> window() { return geometry::AngleSchedule(deg(45), deg(135), 19).samples(); }

KeyPoints loop_points() {
    return {Vec2(mm(11), 0), Vec2(mm(2), mm(7)), Vec2(mm(15), mm(12)), Vec2(mm(28), mm(7)), Vec2(mm(19), 0)};
}

} // namespace

TEST(ScoreTorque, ForceProfileForConstantNetTorqueScoresZero) {
    // Element force chosen so that element + spring gives exactly 10 mN·m:
    // F = (T0 + k (theta + p)) / moment_arm, sampled at the window chords.
    const geometry::CrankGeometry crank{mm(12), mm(8)};
    const double preload = deg(20);
    fem::ForceDeflectionCurve curve;
    const auto th = window();
    for (auto it = th.rbegin(); it != th.rend(); ++it) {
        const double f = (mNm(10) + kK * (*it + preload)) / geometry::moment_arm(crank, *it);
        curve.samples.push_back({geometry::elastic_length(crank, *it), f, 0.0, true, 0.0, Vec2::Zero(), Vec2::Zero()});
    }
    const auto t = synthesis::nsm_torque_curve(curve, crank, th, deg(45), deg(135));
    const auto s = score_torque(t.thetas(), t.torques(), std::nullopt, 0.0);
    EXPECT_NEAR(s.line_residual, 0.0, 1e-15);
    EXPECT_NEAR(s.fit.slope, kK, 1e-12);
    const auto pinned = score_torque(t.thetas(), t.torques(), kK, 0.0);
    EXPECT_NEAR(pinned.fitness, 0.0, 1e-15);
    const auto net = synthesis::net_torque_curve(t, {kK, preload});
    EXPECT_NEAR(net.std_dev(), 0.0, 1e-15);
    EXPECT_NEAR(net.mean(), mNm(10), 1e-15);
}

TEST(ScoreTorque, SlopeGateRejectsFallingTorque) {
    const auto th = window();
    std::vector<double> falling;
    for (double t : th) {
        falling.push_back(mNm(50) - kK * t);
    }
    EXPECT_TRUE(std::isinf(score_torque(th, falling, std::nullopt, 0.0).fitness));
    EXPECT_TRUE(std::isinf(score_torque(th, falling, kK, 0.0).fitness));
}

TEST(ScoreTorque, NoiseBoundsResidual) {
    std::mt19937_64 rng(12);
    const double eps = mNm(0.4);
    std::uniform_real_distribution<double> noise(-eps, eps);
    const auto th = window();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> tq;
        for (double t : th) {
            tq.push_back(mNm(30) + kK * t + noise(rng));
        }
        const auto free = score_torque(th, tq, std::nullopt, 0.0);
        const auto pinned = score_torque(th, tq, kK, 0.0);
        EXPECT_LE(free.line_residual, eps);
        EXPECT_LE(pinned.line_residual, eps);
        EXPECT_GE(pinned.line_residual, free.line_residual);
    }
}

TEST(ScoreTorque, PinnedSlopeAndShortfall) {
    const auto th = window();
    std::vector<double> tq;
    for (double t : th) {
        tq.push_back(2.0 * kK * t);
    }
    const auto s = score_torque(th, tq, kK, mNm(100));
    double mt = 0.0, mq = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        mt += th[i] / th.size();
        mq += tq[i] / th.size();
    }
    double ss = 0.0;
    for (double t : th) {
        ss += (kK * (t - mt)) * (kK * (t - mt));
    }
    EXPECT_NEAR(s.line_residual, std::sqrt(ss / th.size()), 1e-15);
    EXPECT_NEAR(s.mean, mq, 1e-15);
    EXPECT_NEAR(s.shortfall, mNm(100) - mq, 1e-15);
    EXPECT_NEAR(s.fitness, std::hypot(s.line_residual, s.shortfall), 1e-15);
    EXPECT_EQ(score_torque(th, tq, kK, 0.0).shortfall, 0.0);
}

TEST(NsmProblem, ValidationAndSweepChords) {
    NsmProblem p;
    EXPECT_NO_THROW(p.validate());
    const auto chords = p.sweep_chords();
    EXPECT_NEAR(*std::max_element(chords.begin(), chords.end()), mm(20), 1e-12);
    EXPECT_NEAR(*std::min_element(chords.begin(), chords.end()),
                geometry::elastic_length(p.geometry, deg(135)), 1e-12);
    auto bad = p;
    bad.window_samples = 2;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = p;
    bad.pin_end = p.pin_start;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = p;
    bad.sweep_start = deg(60);
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = p;
    bad.n_elements = 4;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(NsmProblem, EvaluateAgreesWithFitnessAndStressGate) {
    NsmProblem p;
    const auto e = evaluate(p, loop_points());
    EXPECT_EQ(e.torque.size(), 19u);
    EXPECT_DOUBLE_EQ(fitness(p, loop_points()), e.score.fitness);
    EXPECT_GT(e.peak_stress, 0.0);
    p.stress_limit = 0.5 * e.peak_stress;
    EXPECT_TRUE(std::isinf(fitness(p, loop_points())));
    KeyPoints outside = loop_points();
    outside[2] = Vec2(mm(15), mm(40));
    EXPECT_TRUE(std::isinf(fitness(NsmProblem{}, outside)));
}

TEST(NsmProblem, SatisfiedRuleUsesRatioOfMean) {
    // Long loop between close pins: tensioned over the whole window.
    NsmProblem p;
    p.pin_start = Vec2(mm(14), 0);
    p.pin_end = Vec2(mm(16), 0);
    const KeyPoints k{p.pin_start, Vec2(mm(0.058), mm(7.514)), Vec2(mm(2.636), mm(10.841)),
                      Vec2(mm(29.783), mm(6.546)), p.pin_end};
    const auto e = evaluate(p, k);
    ASSERT_TRUE(std::isfinite(e.score.fitness));
    ga::Chromosome c{k, e.score.fitness};
    p.satisfied_ratio = 1.01 * e.score.line_residual / std::abs(e.score.mean);
    EXPECT_TRUE(make_ga_problem(p).satisfied(c));
    p.satisfied_ratio = 0.99 * e.score.line_residual / std::abs(e.score.mean);
    EXPECT_FALSE(make_ga_problem(p).satisfied(c));
}
