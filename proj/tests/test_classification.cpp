#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "polydyn/classification.hpp"
#include "polydyn/coefficient_modes.hpp"
#include "polydyn/root_tracking.hpp"

using namespace polydyn;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// the full exponent multiset of an N-particle system with identical quadruples
CVec repeated(const std::array<Complex, 4>& quad, std::size_t copies) {
    CVec out;
    for (std::size_t m = 0; m < copies; ++m) out.insert(out.end(), quad.begin(), quad.end());
    return out;
}

}  // namespace

TEST_CASE("classify_modes: reference exponent sets") {
    SECTION("all oscillatory with integer frequencies") {
        const BehaviorClass c = classify_modes(repeated({-kI, kI, 2.0 * kI, 3.0 * kI}, 2));
        CHECK(c.kind == BehaviorKind::Isochronous);
        REQUIRE(c.period.has_value());
        CHECK(std::abs(*c.period - 2.0 * kPi) < 1e-9);
    }
    SECTION("oscillatory pair plus decaying modes") {
        const BehaviorClass c = classify_modes(repeated({-kI, kI, -1.0, -2.0}, 2));
        CHECK(c.kind == BehaviorKind::AsymptoticallyIsochronous);
        REQUIRE(c.period.has_value());
        CHECK(std::abs(*c.period - 2.0 * kPi) < 1e-9);
    }
    SECTION("incommensurable undamped frequencies") {
        const BehaviorClass c = classify_modes(repeated({-kI, kPi * kI, -1.0, -2.0}, 2));
        CHECK(c.kind == BehaviorKind::AsymptoticallyMultiplyPeriodic);
        CHECK_FALSE(c.period.has_value());
    }
    SECTION("any growing mode means scattering") {
        const BehaviorClass c = classify_modes(
            repeated({Complex(0.04, 0.0), Complex(0.062, 1.0), Complex(0.08, 0.3),
                      Complex(0.04, 0.1)},
                     2));
        CHECK(c.kind == BehaviorKind::ScatteringCapable);
    }
    SECTION("all decaying modes converge to the origin") {
        const BehaviorClass c = classify_modes(repeated({-1.0, -2.0, Complex(-0.5, 1.0),
                                                         Complex(-0.5, -1.0)}, 2));
        CHECK(c.kind == BehaviorKind::ConvergingToOrigin);
    }
    SECTION("undamped incommensurable frequencies stay confined") {
        const BehaviorClass c = classify_modes(repeated({kI, -kI, kPi * kI, -kPi * kI}, 2));
        CHECK(c.kind == BehaviorKind::Confined);
    }
    SECTION("fundamental frequency is the common divisor") {
        const BehaviorClass c = classify_modes(repeated({2.0 * kI, -2.0 * kI, 4.0 * kI,
                                                         6.0 * kI}, 1));
        REQUIRE(c.period.has_value());
        CHECK(std::abs(*c.period - kPi) < 1e-9);  // common frequency 2
    }
    SECTION("half-integer ratios are commensurable through the denominator cap") {
        const BehaviorClass c =
            classify_modes(repeated({1.5 * kI, -kI, 2.0 * kI, 3.0 * kI}, 1));
        CHECK(c.kind == BehaviorKind::Isochronous);
        REQUIRE(c.period.has_value());
        CHECK(std::abs(*c.period - 4.0 * kPi) < 1e-9);  // common frequency 1/2
    }
}

TEST_CASE("classify_modes: only the exponent multiset matters") {
    std::mt19937 rng(61);
    CVec lambdas = repeated({-kI, kI, 2.0 * kI, 3.0 * kI}, 3);
    const BehaviorClass base = classify_modes(lambdas);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(lambdas.begin(), lambdas.end(), rng);
        const BehaviorClass shuffled = classify_modes(lambdas);
        CHECK(shuffled.kind == base.kind);
        REQUIRE(shuffled.period.has_value());
        CHECK(std::abs(*shuffled.period - *base.period) < 1e-12);
    }
}

TEST_CASE("detect_period: constant trajectory has period 1*T") {
    Trajectory traj;
    const std::size_t samples = 65;
    for (std::size_t j = 0; j < samples; ++j) {
        traj.times.push_back(double(j) * 0.25);
        traj.z.push_back(CVec{Complex(1.0, 2.0), Complex(-1.0, 0.5)});
    }
    traj.perm_log.assign(samples - 1, identity_permutation(2));
    const PeriodDetection det = detect_period(traj, 4.0, 3);
    REQUIRE(det.z.size() == 2);
    CHECK(det.z[0] == 1);
    CHECK(det.z[1] == 1);
    CHECK(det.w.empty());
}

TEST_CASE("detect_period: particles exchanging each period need 2T") {
    // zeros of z^2 - e^{it}: the pair swaps after 2*pi, returning after 4*pi
    ModeSpec spec(2);
    spec[0] = CoefficientMode{{kI, -kI, 2.0 * kI, 3.0 * kI}, {0.0, 0.0, 0.0, 0.0}};
    spec[1] = CoefficientMode{{kI, -kI, 2.0 * kI, 3.0 * kI}, {-1.0, 0.0, 0.0, 0.0}};
    const CVec z0{1.0, -1.0};
    const double period = 2.0 * kPi;
    const Trajectory traj = zero_trajectory(spec, 0.0, 5.0 * period, period / 128.0, &z0);
    const PeriodDetection det = detect_period(traj, period, 4);
    REQUIRE(det.z.size() == 2);
    CHECK(det.z[0] == 2);
    CHECK(det.z[1] == 2);
    // detected p implies every multiple k*p within range also closes up
    const std::size_t shift = 2 * 128;
    for (std::size_t mult = 1; mult <= 2; ++mult) {
        double sup = 0.0;
        for (std::size_t j = 0; j + mult * shift < traj.z.size(); ++j)
            for (std::size_t i = 0; i < 2; ++i)
                sup = std::max(sup,
                               std::abs(traj.z[j + mult * shift][i] - traj.z[j][i]));
        CHECK(sup <= 1e-6 * 2.0);
    }
}

TEST_CASE("detect_period: coefficient paths themselves are T-periodic") {
    const CoeffParams params{{5.0 * kI, 5.0, 5.0 * kI, 6.0}, {5.0 * kI, 5.0, 5.0 * kI, 6.0}};
    const CVec z0{1.0 + kI, 5.0 + kI};
    const ModeSpec spec = fit_modes(params, z0, CVec{1.0, 1.0}, CVec{1.0, -kI}, CVec{kI, 1.0});
    std::mt19937 rng(62);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = u(rng);
        for (std::size_t m = 0; m < 2; ++m) {
            const Complex a = eval_coefficient(spec, m, t);
            const Complex b = eval_coefficient(spec, m, t + 2.0 * kPi);
            CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("detect_period: argument validation") {
    Trajectory traj;
    for (std::size_t j = 0; j < 17; ++j) {
        traj.times.push_back(double(j));
        traj.z.push_back(CVec{Complex(0.0)});
    }
    CHECK_THROWS_AS(detect_period(traj, 10.0, 2), ArgumentError);   // span too short
    CHECK_THROWS_AS(detect_period(traj, 2.5, 2), ArgumentError);    // grid misaligned
    CHECK_THROWS_AS(detect_period(traj, 2.0, 0), ArgumentError);    // bad max_p
    CHECK_NOTHROW(detect_period(traj, 2.0, 2));
}
