#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "polydyn/identities.hpp"
#include "polydyn/root_tracking.hpp"
#include "support/symbolic_paths.hpp"

using namespace polydyn;
using testsupport::ExpSum;
using testsupport::PolyPath;

namespace {

CVec random_distinct(std::mt19937& rng, std::size_t n, double box = 2.0, double min_sep = 0.15) {
    std::uniform_real_distribution<double> u(-box, box);
    CVec z;
    while (z.size() < n) {
        const Complex cand(u(rng), u(rng));
        bool far = true;
        for (const Complex& v : z) far = far && std::abs(cand - v) > min_sep;
        if (far) z.push_back(cand);
    }
    return z;
}

// bundle at time t from symbolic zero and coefficient paths
template <typename Path>
DerivBundle bundle_at(const std::vector<Path>& zpaths, const std::vector<Path>& cpaths,
                      double t) {
    DerivBundle b;
    b.z = testsupport::derivative_slice(zpaths, t, 0);
    b.zd1 = testsupport::derivative_slice(zpaths, t, 1);
    b.zd2 = testsupport::derivative_slice(zpaths, t, 2);
    b.zd3 = testsupport::derivative_slice(zpaths, t, 3);
    b.zd4 = testsupport::derivative_slice(zpaths, t, 4);
    b.cd1 = testsupport::derivative_slice(cpaths, t, 1);
    b.cd2 = testsupport::derivative_slice(cpaths, t, 2);
    b.cd3 = testsupport::derivative_slice(cpaths, t, 3);
    b.cd4 = testsupport::derivative_slice(cpaths, t, 4);
    return b;
}

}  // namespace

TEST_CASE("relation matrix hand values") {
    const ComplexMatrix r = relation_matrix(CVec{2.0, 1.0});
    CHECK(std::abs(r(0, 0) - Complex(-2.0)) < 1e-14);
    CHECK(std::abs(r(0, 1) - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(r(1, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(r(1, 1) - Complex(1.0)) < 1e-14);

    const ComplexMatrix r2 = relation_matrix(CVec{1.0, -1.0});
    CHECK(std::abs(r2(0, 0) - Complex(-0.5)) < 1e-14);
    CHECK(std::abs(r2(0, 1) - Complex(-0.5)) < 1e-14);
    CHECK(std::abs(r2(1, 0) - Complex(-0.5)) < 1e-14);
    CHECK(std::abs(r2(1, 1) - Complex(0.5)) < 1e-14);

    CHECK_THROWS_AS(relation_matrix(CVec{1.0, 1.0}), SingularityError);
}

TEST_CASE("relation matrix inverse hand values and product") {
    const ComplexMatrix inv = relation_matrix_inverse(CVec{2.0, 1.0});
    CHECK(std::abs(inv(0, 0) - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(inv(0, 1) - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(inv(1, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(inv(1, 1) - Complex(2.0)) < 1e-14);

    const ComplexMatrix prod = relation_matrix(CVec{2.0, 1.0}) * inv;
    CHECK(prod.deviation_from_identity() < 1e-14);

    std::mt19937 rng(21);
    for (std::size_t n = 1; n <= 12; ++n) {
        const CVec z = random_distinct(rng, n);
        const ComplexMatrix p = relation_matrix(z) * relation_matrix_inverse(z);
        CHECK(p.deviation_from_identity() <= 1e-10);
    }
}

TEST_CASE("zero derivatives from coefficient derivatives") {
    SECTION("all-zero coefficient derivatives give all-zero zero derivatives") {
        const CVec z{Complex(1.0, 0.5), Complex(-1.0, 0.2), Complex(0.3, -1.0)};
        const CVec zero(3, Complex(0.0));
        const auto zd = zero_derivs_from_coeff_derivs(z, zero, zero, zero, zero);
        for (const Complex& v : zd.d1) CHECK(v == Complex(0.0));
        for (const Complex& v : *zd.d2) CHECK(v == Complex(0.0));
        for (const Complex& v : *zd.d3) CHECK(v == Complex(0.0));
        for (const Complex& v : *zd.d4) CHECK(v == Complex(0.0));
    }
    SECTION("N=2 hand example inverts the coefficient map") {
        const auto zd = zero_derivs_from_coeff_derivs(CVec{2.0, 1.0}, CVec{-2.0, 3.0});
        CHECK(std::abs(zd.d1[0] - Complex(1.0)) < 1e-14);
        CHECK(std::abs(zd.d1[1] - Complex(1.0)) < 1e-14);
    }
    SECTION("order 1 equals the relation-matrix action") {
        std::mt19937 rng(22);
        for (int trial = 0; trial < 10; ++trial) {
            const CVec z = random_distinct(rng, 6);
            CVec cd1(6);
            for (auto& v : cd1)
                v = Complex(std::uniform_real_distribution<double>(-2, 2)(rng),
                            std::uniform_real_distribution<double>(-2, 2)(rng));
            const auto zd = zero_derivs_from_coeff_derivs(z, cd1);
            const CVec matvec = relation_matrix(z).apply(cd1);
            for (std::size_t i = 0; i < 6; ++i)
                CHECK(std::abs(zd.d1[i] - matvec[i]) <= 1e-12 * (1.0 + std::abs(matvec[i])));
        }
    }
    SECTION("coincident zeros are rejected") {
        CHECK_THROWS_AS(zero_derivs_from_coeff_derivs(CVec{1.0, 1.0}, CVec{1.0, 1.0}),
                        SingularityError);
    }
}

TEST_CASE("mutual inverse of the two derivative maps") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-2, 2);
    for (std::size_t n = 2; n <= 8; ++n) {
        const CVec z = random_distinct(rng, n, 2.0, 0.35);
        CVec cd1(n), cd2(n), cd3(n);
        for (std::size_t i = 0; i < n; ++i) {
            cd1[i] = Complex(u(rng), u(rng));
            cd2[i] = Complex(u(rng), u(rng));
            cd3[i] = Complex(u(rng), u(rng));
        }
        const auto zd = zero_derivs_from_coeff_derivs(z, cd1, cd2, cd3);
        const auto back = coeff_derivs_from_zero_derivs(z, zd.d1, *zd.d2, *zd.d3);
        const double s1 = 1.0 + max_abs(cd1), s2 = 1.0 + max_abs(cd2), s3 = 1.0 + max_abs(cd3);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(back.d1[i] - cd1[i]) <= 1e-9 * s1);
            CHECK(std::abs((*back.d2)[i] - cd2[i]) <= 1e-9 * s2);
            CHECK(std::abs((*back.d3)[i] - cd3[i]) <= 1e-9 * s3);
        }
    }
}

TEST_CASE("identity residuals vanish on consistent data") {
    SECTION("data built by inversion") {
        std::mt19937 rng(24);
        std::uniform_real_distribution<double> u(-2, 2);
        const std::size_t n = 5;
        const CVec z = random_distinct(rng, n);
        DerivBundle b;
        b.z = z;
        CVec cd1(n), cd2(n), cd3(n), cd4(n);
        for (std::size_t i = 0; i < n; ++i) {
            cd1[i] = Complex(u(rng), u(rng));
            cd2[i] = Complex(u(rng), u(rng));
            cd3[i] = Complex(u(rng), u(rng));
            cd4[i] = Complex(u(rng), u(rng));
        }
        const auto zd = zero_derivs_from_coeff_derivs(z, cd1, cd2, cd3, cd4);
        b.zd1 = zd.d1;
        b.zd2 = zd.d2;
        b.zd3 = zd.d3;
        b.zd4 = zd.d4;
        b.cd1 = cd1;
        b.cd2 = cd2;
        b.cd3 = cd3;
        b.cd4 = cd4;
        for (int order = 1; order <= 4; ++order)
            for (double rel : identity_relative_residuals(b, order)) CHECK(rel <= 1e-9);
    }
    SECTION("manufactured trajectory z1 = t, z2 = t^2 at t = 2") {
        // c1 = -(t + t^2), c2 = t^3, exact derivatives by hand
        DerivBundle b;
        b.z = CVec{2.0, 4.0};
        b.zd1 = CVec{1.0, 4.0};
        b.zd2 = CVec{0.0, 2.0};
        b.zd3 = CVec{0.0, 0.0};
        b.zd4 = CVec{0.0, 0.0};
        b.cd1 = CVec{-5.0, 12.0};
        b.cd2 = CVec{-2.0, 12.0};
        b.cd3 = CVec{0.0, 6.0};
        b.cd4 = CVec{0.0, 0.0};
        for (int order = 1; order <= 4; ++order)
            for (const Complex& r : identity_residuals(b, order)) CHECK(std::abs(r) < 1e-12);

        SECTION("perturbing one velocity breaks only what it should") {
            (*b.zd1)[0] += 1.0;
            const CVec r1 = identity_residuals(b, 1);
            CHECK(std::abs(r1[0] - Complex(1.0)) < 1e-12);
            CHECK(std::abs(r1[1]) < 1e-12);
        }
    }
    SECTION("missing inputs and collisions throw") {
        DerivBundle b;
        b.z = CVec{1.0, 2.0};
        b.zd1 = CVec{1.0, 1.0};
        CHECK_THROWS_AS(identity_residuals(b, 2), ArgumentError);
        b.cd1 = CVec{1.0, 1.0};
        CHECK_NOTHROW(identity_residuals(b, 1));
        b.z = CVec{1.0, 1.0};
        CHECK_THROWS_AS(identity_residuals(b, 1), SingularityError);
    }
}

TEST_CASE("identity residuals vanish on symbolic polynomial and exponential paths") {
    std::mt19937 rng(25);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {2u, 3u, 5u, 8u}) {
        SECTION("polynomial zero paths, N = " + std::to_string(n)) {
            std::vector<PolyPath> zpaths(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double angle = 2.0 * std::numbers::pi * double(i) / double(n) + 0.2;
                zpaths[i].c = {Complex(3.0 * std::cos(angle), 3.0 * std::sin(angle)),
                               Complex(0.3 * u(rng), 0.3 * u(rng)),
                               Complex(0.3 * u(rng), 0.3 * u(rng)),
                               Complex(0.3 * u(rng), 0.3 * u(rng))};
            }
            const auto cpaths = testsupport::coeff_paths(zpaths);
            const DerivBundle b = bundle_at(zpaths, cpaths, 0.7);
            for (int order = 1; order <= 4; ++order)
                for (double rel : identity_relative_residuals(b, order)) CHECK(rel <= 1e-9);
        }
        SECTION("exponential zero paths, N = " + std::to_string(n)) {
            std::vector<ExpSum> zpaths(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double angle = 2.0 * std::numbers::pi * double(i) / double(n) + 0.5;
                zpaths[i] = ExpSum::mode(
                    Complex(0.2 * std::cos(double(i) + 0.3), 0.5 + 0.15 * double(i)),
                    Complex(2.0 * std::cos(angle), 2.0 * std::sin(angle)));
            }
            const auto cpaths = testsupport::coeff_paths(zpaths);
            const DerivBundle b = bundle_at(zpaths, cpaths, 0.9);
            for (int order = 1; order <= 4; ++order)
                for (double rel : identity_relative_residuals(b, order)) CHECK(rel <= 1e-9);
        }
    }
}

TEST_CASE("interaction sums reduce to the hand form at N=2 and vanish at N=1") {
    std::mt19937 rng(26);
    std::uniform_real_distribution<double> u(-2, 2);
    const CVec z{Complex(u(rng), u(rng)), Complex(2.0 + u(rng), u(rng))};
    const CVec zd1{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    const CVec zd2{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    const CVec zd3{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};

    // at N=2 the multi-index primed sums are void: order 4 keeps only the
    // single-neighbor sum
    const auto t4 = detail::interaction_sum(4, z, zd1, zd2, zd3);
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t l = 1 - i;
        const Complex expect =
            (4.0 * zd3[i] * zd1[l] + 4.0 * zd3[l] * zd1[i] + 6.0 * zd2[i] * zd2[l]) /
            (z[i] - z[l]);
        CHECK(std::abs(t4.value[i] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
    const auto t3 = detail::interaction_sum(3, z, zd1, zd2, zd3);
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t l = 1 - i;
        const Complex expect = 3.0 * (zd2[i] * zd1[l] + zd2[l] * zd1[i]) / (z[i] - z[l]);
        CHECK(std::abs(t3.value[i] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }

    const CVec z1{Complex(1.0, 1.0)};
    const CVec v1{Complex(2.0, -1.0)};
    for (int order = 1; order <= 4; ++order)
        CHECK(detail::interaction_sum(order, z1, v1, v1, v1).value[0] == Complex(0.0));
}

TEST_CASE("two-zero relation at arbitrary derivative order") {
    SECTION("k = 1 coincides with the first identity on the manufactured trajectory") {
        // z1 = t, z2 = t^2 at t = 2
        const std::vector<Complex> z1d{2.0, 1.0};
        const std::vector<Complex> z2d{4.0, 4.0};
        const auto res = n2_order_k_residual(z1d, z2d, Complex(-5.0), Complex(12.0), 1);
        CHECK(std::abs(res[0]) < 1e-13);
        CHECK(std::abs(res[1]) < 1e-13);
    }
    SECTION("exponential pair, k = 1..6") {
        // z1 = e^t, z2 = e^{2t} at t = 1 (distinct there)
        const double t = 1.0;
        for (int k = 1; k <= 6; ++k) {
            std::vector<Complex> z1d, z2d;
            for (int j = 0; j <= k; ++j) {
                z1d.push_back(std::exp(t));
                z2d.push_back(std::pow(2.0, j) * std::exp(2.0 * t));
            }
            const Complex c1k = -(z1d.back() + z2d.back());
            const Complex c2k = std::pow(3.0, k) * std::exp(3.0 * t);
            const auto res = n2_order_k_residual(z1d, z2d, c1k, c2k, k);
            const double scale = 1.0 + std::abs(c2k);
            CHECK(std::abs(res[0]) / scale <= 1e-9);
            CHECK(std::abs(res[1]) / scale <= 1e-9);
        }
    }
    SECTION("k = 6 on cubic paths: high derivatives vanish") {
        std::vector<PolyPath> zpaths(2);
        zpaths[0].c = {Complex(1.0, 0.3), Complex(0.4, -0.2), Complex(0.1, 0.1), Complex(-0.2, 0.05)};
        zpaths[1].c = {Complex(-1.5, -0.4), Complex(0.2, 0.3), Complex(-0.3, 0.1), Complex(0.1, -0.1)};
        const auto cpaths = testsupport::coeff_paths(zpaths);
        const double t = 0.8;
        const int k = 6;
        std::vector<Complex> z1d, z2d;
        for (int j = 0; j <= k; ++j) {
            z1d.push_back(zpaths[0].eval(t, j));
            z2d.push_back(zpaths[1].eval(t, j));
        }
        const auto res = n2_order_k_residual(z1d, z2d, cpaths[0].eval(t, k), cpaths[1].eval(t, k), k);
        CHECK(std::abs(res[0]) < 1e-10);
        CHECK(std::abs(res[1]) < 1e-10);
    }
    SECTION("coincident zeros and bad ladders throw") {
        const std::vector<Complex> same{1.0, 2.0};
        CHECK_THROWS_AS(n2_order_k_residual(same, same, Complex(0), Complex(0), 1),
                        SingularityError);
        const std::vector<Complex> a{1.0};
        const std::vector<Complex> b{2.0, 1.0};
        CHECK_THROWS_AS(n2_order_k_residual(a, b, Complex(0), Complex(0), 1), ArgumentError);
        CHECK_THROWS_AS(n2_order_k_residual(b, b, Complex(0), Complex(0), 0), ArgumentError);
    }
}

TEST_CASE("inverted derivatives match finite differences of tracked zeros") {
    // closed-form coefficient evolution of the reference oscillatory system;
    // central differences of the tracked zeros must reproduce the inverted
    // identity chain with O(h^2) error
    const Complex i{0.0, 1.0};
    const CoeffParams params{{5.0 * i, 5.0, 5.0 * i, 6.0}, {5.0 * i, 5.0, 5.0 * i, 6.0}};
    const CVec z0{1.0 + i, 5.0 + i};
    const ModeSpec spec = fit_modes(params, z0, CVec{1.0, 1.0}, CVec{1.0, -i}, CVec{i, 1.0});

    const double t0 = 1.3;
    const CVec base = match_ordering(z0, roots(eval_coefficients(spec, t0))).ordered;
    const auto zd = zero_derivs_from_coeff_derivs(
        base, eval_coefficients(spec, t0, 1), eval_coefficients(spec, t0, 2),
        eval_coefficients(spec, t0, 3), eval_coefficients(spec, t0, 4));

    auto tracked = [&](double t) {
        return match_ordering(base, roots(eval_coefficients(spec, t), &base)).ordered;
    };

    std::array<double, 4> prev_err{};
    bool first = true;
    for (double h : {1e-2, 5e-3}) {
        const CVec zp = tracked(t0 + h), zm = tracked(t0 - h);
        const CVec zp2 = tracked(t0 + 2 * h), zm2 = tracked(t0 - 2 * h);
        std::array<double, 4> err{};
        for (std::size_t n = 0; n < 2; ++n) {
            const Complex d1 = (zp[n] - zm[n]) / (2 * h);
            const Complex d2 = (zp[n] - 2.0 * base[n] + zm[n]) / (h * h);
            const Complex d3 = (zp2[n] - 2.0 * zp[n] + 2.0 * zm[n] - zm2[n]) / (2 * h * h * h);
            const Complex d4 =
                (zp2[n] - 4.0 * zp[n] + 6.0 * base[n] - 4.0 * zm[n] + zm2[n]) / (h * h * h * h);
            err[0] = std::max(err[0], std::abs(d1 - zd.d1[n]));
            err[1] = std::max(err[1], std::abs(d2 - (*zd.d2)[n]));
            err[2] = std::max(err[2], std::abs(d3 - (*zd.d3)[n]));
            err[3] = std::max(err[3], std::abs(d4 - (*zd.d4)[n]));
        }
        if (!first)
            for (std::size_t k = 0; k < 4; ++k) CHECK(prev_err[k] / err[k] >= 3.5);
        first = false;
        prev_err = err;
    }
}
