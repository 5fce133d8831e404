#pragma once

// The direct numerical route: right-hand sides of the fourth-order system for
// the zeros, the equivalent Newtonian form in (z, w = z''), the explicit
// two- and three-particle reductions, and an adaptive embedded Runge-Kutta
// 5(4) integrator with dense output.

#include <functional>

#include "polydyn/coefficient_modes.hpp"
#include "polydyn/identities.hpp"
#include "polydyn/symmetric_functions.hpp"
#include "polydyn/trajectory.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

struct PhaseState {
    CVec z, zdot, w, wdot;

    std::size_t particles() const { return z.size(); }
    void require_consistent(const char* where) const {
        const std::size_t n = z.size();
        if (zdot.size() != n || w.size() != n || wdot.size() != n)
            throw ArgumentError(std::string(where) + ": phase-state length mismatch");
    }
};

namespace detail {

// alpha_m c'''_m + beta_m c''_m + gamma_m c'_m + delta_m c_m per m
inline CVec driving_vector(const CoeffParams& params, const CVec& c, const CVec& cd1,
                           const CVec& cd2, const CVec& cd3) {
    CVec q(c.size());
    for (std::size_t m = 0; m < c.size(); ++m)
        q[m] = params[m].alpha * cd3[m] + params[m].beta * cd2[m] + params[m].gamma * cd1[m] +
               params[m].delta * c[m];
    return q;
}

}  // namespace detail

// Fourth derivative of the zeros along the solvable flow, from the zeros and
// their first three derivatives. The coefficient derivatives are substituted
// through the symmetric-function maps.
inline CVec rhs_fourth_order(const CVec& z, const CVec& zd1, const CVec& zd2, const CVec& zd3,
                             const CoeffParams& params) {
    const std::size_t n = z.size();
    if (params.size() != n) throw ArgumentError("rhs_fourth_order: parameter count != N");
    if (zd1.size() != n || zd2.size() != n || zd3.size() != n)
        throw ArgumentError("rhs_fourth_order: derivative length mismatch");
    require_distinct_zeros(z, "rhs_fourth_order");

    const CVec c = coeffs_from_zeros(z);
    const CVec cd1 = coeff_derivs_order1(z, zd1);
    const CVec cd2 = coeff_derivs_order2(z, zd1, zd2);
    const CVec cd3 = coeff_derivs_order3(z, zd1, zd2, zd3);
    const CVec q = detail::driving_vector(params, c, cd1, cd2, cd3);

    const auto inter = detail::interaction_sum(4, z, zd1, zd2, zd3);
    const auto drive = detail::coefficient_term(z, q);
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = inter.value[i] + drive.value[i];
    return out;
}

// Same flow with the shared-beta shortcut: when beta_m = beta for all m the
// beta part of the driving term collapses to beta * (z''_n - sum' 2 z'_n
// z'_l / (z_n - z_l)) by the order-2 identity.
inline CVec rhs_fourth_order_shared_beta(const CVec& z, const CVec& zd1, const CVec& zd2,
                                         const CVec& zd3, const CoeffParams& params) {
    const std::size_t n = z.size();
    if (params.size() != n) throw ArgumentError("rhs_fourth_order_shared_beta: bad params");
    const Complex beta = params[0].beta;
    for (const auto& p : params)
        if (p.beta != beta)
            throw ArgumentError("rhs_fourth_order_shared_beta: beta must be shared");
    require_distinct_zeros(z, "rhs_fourth_order_shared_beta");

    const CVec c = coeffs_from_zeros(z);
    const CVec cd1 = coeff_derivs_order1(z, zd1);
    const CVec cd3 = coeff_derivs_order3(z, zd1, zd2, zd3);
    CVec q(n);
    for (std::size_t m = 0; m < n; ++m)
        q[m] = params[m].alpha * cd3[m] + params[m].gamma * cd1[m] + params[m].delta * c[m];

    const auto inter4 = detail::interaction_sum(4, z, zd1, zd2, zd3);
    const auto inter2 = detail::interaction_sum(2, z, zd1, zd2, zd3);
    const auto drive = detail::coefficient_term(z, q);
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = inter4.value[i] + drive.value[i] + beta * (zd2[i] - inter2.value[i]);
    return out;
}

struct NewtonianRhs {
    CVec zddot;  // = w
    CVec wddot;
};

// Newtonian form in the doubled variables (z, w): z'' = w and w'' as an
// explicit function of (z, z', w, w'). Transcribed independently of
// rhs_fourth_order; the two must agree under (w, w') = (z'', z''').
inline NewtonianRhs rhs_newtonian(const PhaseState& s, const CoeffParams& params) {
    s.require_consistent("rhs_newtonian");
    const std::size_t n = s.z.size();
    if (params.size() != n) throw ArgumentError("rhs_newtonian: parameter count != N");
    require_distinct_zeros(s.z, "rhs_newtonian");
    const CVec& z = s.z;
    const CVec& zd = s.zdot;
    const CVec& w = s.w;
    const CVec& wd = s.wdot;

    // coefficient derivatives through the dependent variables
    const CVec c = coeffs_from_zeros(z);
    const auto tab1 = detail::elem_sym_single_excl_table(z);
    CVec cd1(n), cd2(n), cd3(n);
    {
        double sign = -1.0;
        for (std::size_t m = 1; m <= n; ++m, sign = -sign) {
            Complex s1(0), s2(0), s3(0), t2(0), t3a(0), t3b(0);
            for (std::size_t k = 0; k < n; ++k) {
                const Complex sig1 = detail::sigma_excl1(tab1, k, static_cast<int>(m));
                s1 += sig1 * zd[k];
                s2 += sig1 * w[k];
                s3 += sig1 * wd[k];
            }
            for (std::size_t n1 = 0; n1 < n; ++n1)
                for (std::size_t n2 = 0; n2 < n; ++n2) {
                    if (n1 == n2) continue;
                    const std::size_t ex[2] = {n1, n2};
                    const Complex sig2 =
                        elem_sym_excl(std::span<const std::size_t>(ex, 2), static_cast<int>(m), z);
                    t2 += sig2 * zd[n1] * zd[n2];
                    t3a += sig2 * w[n1] * zd[n2];
                }
            for (std::size_t n1 = 0; n1 < n; ++n1)
                for (std::size_t n2 = 0; n2 < n; ++n2)
                    for (std::size_t n3 = 0; n3 < n; ++n3) {
                        if (n1 == n2 || n1 == n3 || n2 == n3) continue;
                        const std::size_t ex[3] = {n1, n2, n3};
                        t3b += elem_sym_excl(std::span<const std::size_t>(ex, 3),
                                             static_cast<int>(m), z) *
                               zd[n1] * zd[n2] * zd[n3];
                    }
            cd1[m - 1] = sign * s1;
            cd2[m - 1] = sign * (s2 + t2);
            cd3[m - 1] = sign * (s3 + 3.0 * t3a + t3b);
        }
    }

    NewtonianRhs out{w, CVec(n)};
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0);
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i) continue;
            acc += (4.0 * wd[i] * zd[l] + 4.0 * wd[l] * zd[i] + 6.0 * w[i] * w[l]) / (z[i] - z[l]);
        }
        for (std::size_t l1 = 0; l1 < n; ++l1)
            for (std::size_t l2 = 0; l2 < n; ++l2) {
                if (l1 == i || l2 == i || l1 == l2) continue;
                acc -= 6.0 * (w[i] * zd[l1] * zd[l2] + 2.0 * w[l1] * zd[i] * zd[l2]) /
                       ((z[i] - z[l1]) * (z[i] - z[l2]));
            }
        for (std::size_t l1 = 0; l1 < n; ++l1)
            for (std::size_t l2 = 0; l2 < n; ++l2)
                for (std::size_t l3 = 0; l3 < n; ++l3) {
                    if (l1 == i || l2 == i || l3 == i) continue;
                    if (l1 == l2 || l1 == l3 || l2 == l3) continue;
                    acc += 4.0 * zd[i] * zd[l1] * zd[l2] * zd[l3] /
                           ((z[i] - z[l1]) * (z[i] - z[l2]) * (z[i] - z[l3]));
                }
        Complex pref(1);
        for (std::size_t l = 0; l < n; ++l)
            if (l != i) pref *= z[i] - z[l];
        Complex drive(0);
        Complex p(1);
        for (std::size_t m = n; m >= 1; --m) {
            drive += (params[m - 1].alpha * cd3[m - 1] + params[m - 1].beta * cd2[m - 1] +
                      params[m - 1].gamma * cd1[m - 1] + params[m - 1].delta * c[m - 1]) *
                     p;
            p *= z[i];
        }
        out.wddot[i] = acc - drive / pref;
    }
    return out;
}

// Literal two-particle reduction.
inline CVec rhs_n2(const PhaseState& s, const CoeffParams& params) {
    s.require_consistent("rhs_n2");
    if (s.z.size() != 2 || params.size() != 2) throw ArgumentError("rhs_n2: N must be 2");
    require_distinct_zeros(s.z, "rhs_n2");
    const Complex z1 = s.z[0], z2 = s.z[1];
    const Complex zd1 = s.zdot[0], zd2 = s.zdot[1];
    const Complex w1 = s.w[0], w2 = s.w[1];
    const Complex wd1 = s.wdot[0], wd2 = s.wdot[1];
    const auto& [a1, b1, g1, d1] = params[0];
    const auto& [a2, b2, g2, d2] = params[1];

    const Complex big_g = (4.0 * wd1 * zd2 + 4.0 * wd2 * zd1 + 6.0 * w1 * w2) / (z1 - z2);
    const Complex f1 = a1 * (wd1 + wd2) + b1 * (w1 + w2) + g1 * (zd1 + zd2) + d1 * (z1 + z2);
    const Complex f2 = a2 * (wd1 * z2 + 3.0 * w1 * zd2 + 3.0 * zd1 * w2 + z1 * wd2) +
                       b2 * (w1 * z2 + 2.0 * zd1 * zd2 + z1 * w2) + g2 * (zd1 * z2 + z1 * zd2) +
                       d2 * z1 * z2;
    return {big_g + (z1 * f1 - f2) / (z1 - z2), -big_g + (-z2 * f1 + f2) / (z1 - z2)};
}

// Literal three-particle reduction.
inline CVec rhs_n3(const PhaseState& s, const CoeffParams& params) {
    s.require_consistent("rhs_n3");
    if (s.z.size() != 3 || params.size() != 3) throw ArgumentError("rhs_n3: N must be 3");
    require_distinct_zeros(s.z, "rhs_n3");
    const Complex z1 = s.z[0], z2 = s.z[1], z3 = s.z[2];
    const Complex zd1 = s.zdot[0], zd2 = s.zdot[1], zd3 = s.zdot[2];
    const Complex w1 = s.w[0], w2 = s.w[1], w3 = s.w[2];
    const Complex wd1 = s.wdot[0], wd2 = s.wdot[1], wd3 = s.wdot[2];
    const auto& [a1, b1, g1, d1] = params[0];
    const auto& [a2, b2, g2, d2] = params[1];
    const auto& [a3, b3, g3, d3] = params[2];

    const Complex k1 = -(a1 * (wd1 + wd2 + wd3) + b1 * (w1 + w2 + w3) + g1 * (zd1 + zd2 + zd3) +
                         d1 * (z1 + z2 + z3));
    const Complex k2 =
        a2 * (wd1 * (z2 + z3) + wd2 * (z1 + z3) + wd3 * (z1 + z2) + 2.0 * w1 * (zd2 + zd3) +
              2.0 * w2 * (zd1 + zd3) + 2.0 * w3 * (zd1 + zd2) + zd1 * (w2 + w3) +
              zd2 * (w1 + w3) + zd3 * (w1 + w2)) +
        b2 * (w1 * (z2 + z3) + w2 * (z1 + z3) + w3 * (z1 + z2) + zd1 * (zd2 + zd3) +
              zd2 * (zd1 + zd3) + zd3 * (zd1 + zd2)) +
        g2 * (zd1 * (z2 + z3) + zd2 * (z1 + z3) + zd3 * (z1 + z2)) +
        d2 * (z1 * z2 + z1 * z3 + z2 * z3);
    const Complex k3 =
        -(a3 * (wd1 * z2 * z3 + wd2 * z1 * z3 + wd3 * z1 * z2 + 2.0 * w1 * (zd2 * z3 + z2 * zd3) +
                2.0 * w2 * (zd1 * z3 + z1 * zd3) + 2.0 * w3 * (zd1 * z2 + z1 * zd2) +
                zd1 * (w2 * z3 + 2.0 * zd2 * zd3 + z2 * w3) +
                zd2 * (w1 * z3 + 2.0 * zd1 * zd3 + z1 * w3) +
                zd3 * (w1 * z2 + 2.0 * zd1 * zd2 + z1 * w2)) +
          b3 * (w1 * z2 * z3 + w2 * z1 * z3 + w3 * z1 * z2 + zd1 * (zd2 * z3 + z2 * zd3) +
                zd2 * (zd1 * z3 + z1 * zd3) + zd3 * (zd1 * z2 + z1 * zd2)) +
          g3 * (zd1 * z2 * z3 + z1 * zd2 * z3 + z1 * z2 * zd3) + d3 * z1 * z2 * z3);

    auto body = [&](Complex zn, Complex zdn, Complex wn,  //
                    Complex za, Complex zda, Complex wa, Complex wda,  //
                    Complex zb, Complex zdb, Complex wb, Complex wdb, Complex wdn) {
        const Complex pair_a = (4.0 * wdn * zda + 4.0 * wda * zdn + 6.0 * wn * wa) / (zn - za);
        const Complex pair_b = (4.0 * wdn * zdb + 4.0 * wdb * zdn + 6.0 * wn * wb) / (zn - zb);
        const Complex mixed = 12.0 * (wn * zda * zdb + zdn * (wa * zdb + wb * zda));
        return pair_a + pair_b -
               (mixed + zn * zn * k1 + zn * k2 + k3) / ((zn - za) * (zn - zb));
    };
    return {body(z1, zd1, w1, z2, zd2, w2, wd2, z3, zd3, w3, wd3, wd1),
            body(z2, zd2, w2, z1, zd1, w1, wd1, z3, zd3, w3, wd3, wd2),
            body(z3, zd3, w3, z1, zd1, w1, wd1, z2, zd2, w2, wd2, wd3)};
}

// ---------------------------------------------------------------------------
// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) over real vectors, with
// the method's dense-output interpolant. Complex systems integrate as real
// systems of doubled dimension.

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    int max_steps = 20'000'000;
};

namespace detail {

using RealVec = std::vector<double>;
using OdeRhs = std::function<void(double, const RealVec&, RealVec&)>;
using CollisionProbe = std::function<bool(const RealVec&)>;

// integrates y' = f(t, y) over [t0, t1], invoking on_sample at every time in
// samples (ascending, within the span) using the 5th-order interpolant;
// near_collision, when provided, decides how a step underflow is classified
inline void rk45_integrate(const OdeRhs& f, RealVec y, double t0, double t1,
                           const std::vector<double>& samples,
                           const std::function<void(double, const RealVec&)>& on_sample,
                           const IntegrateOptions& opt,
                           const CollisionProbe& near_collision = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // dense-output weights for the extra interpolation polynomial
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    const std::size_t dim = y.size();
    RealVec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), y5(dim);
    RealVec r1(dim), r2(dim), r3(dim), r4(dim), r5(dim);

    std::size_t next_sample = 0;
    while (next_sample < samples.size() && samples[next_sample] <= t0 + 1e-14 * (1.0 + std::abs(t0))) {
        on_sample(samples[next_sample], y);
        ++next_sample;
    }
    if (!(t1 > t0)) return;

    double t = t0;
    f(t, y, k1);

    // initial step from the local derivative scale
    double h;
    {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
            ynorm = std::max(ynorm, std::abs(y[i]) / sc);
            fnorm = std::max(fnorm, std::abs(k1[i]) / sc);
        }
        h = (fnorm > 1e-30) ? 0.01 * std::max(ynorm, 1.0) / fnorm : 1e-6 * (t1 - t0);
        h = std::min({h, t1 - t0, opt.max_step});
    }

    int steps = 0;
    bool last_reject_singular = false;
    while (t < t1 - 1e-14 * (1.0 + std::abs(t1))) {
        if (++steps > opt.max_steps)
            throw NumericalError("integrate: step budget exhausted at t = " + std::to_string(t));
        h = std::min({h, t1 - t, opt.max_step});
        const double h_floor = 1e-14 * (1.0 + std::abs(t));
        if (h < h_floor) {
            if (last_reject_singular || (near_collision && near_collision(y)))
                throw CollisionError("integrate: step underflow near zero collision at t = " +
                                         std::to_string(t),
                                     t);
            throw NumericalError("integrate: step underflow (tolerance failure) at t = " +
                                 std::to_string(t));
        }
        bool ok = true;
        double err = 0.0;
        try {
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
            f(t + c2 * h, ytmp, k2);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            f(t + c3 * h, ytmp, k3);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(t + c4 * h, ytmp, k4);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(t + c5 * h, ytmp, k5);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] =
                    y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            f(t + h, ytmp, k6);
            for (std::size_t i = 0; i < dim; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            f(t + h, y5, k7);

            double sumsq = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                sumsq += (ei / sc) * (ei / sc);
            }
            err = std::sqrt(sumsq / static_cast<double>(dim));
        } catch (const SingularityError&) {
            ok = false;
            last_reject_singular = true;
        }

        if (!ok) {
            h *= 0.5;
            continue;
        }
        if (err > 1.0) {
            last_reject_singular = false;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }

        // accepted: dense output inside (t, t+h]
        if (next_sample < samples.size() && samples[next_sample] <= t + h + 1e-14 * (1.0 + std::abs(t + h))) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double dy = y5[i] - y[i];
                r1[i] = y[i];
                r2[i] = dy;
                r3[i] = h * k1[i] - dy;
                r4[i] = dy - h * k7[i] - r3[i];
                r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
            }
            while (next_sample < samples.size() &&
                   samples[next_sample] <= t + h + 1e-14 * (1.0 + std::abs(t + h))) {
                const double theta = std::clamp((samples[next_sample] - t) / h, 0.0, 1.0);
                const double om = 1.0 - theta;
                for (std::size_t i = 0; i < dim; ++i)
                    ytmp[i] = r1[i] + theta * (r2[i] + om * (r3[i] + theta * (r4[i] + om * r5[i])));
                on_sample(samples[next_sample], ytmp);
                ++next_sample;
            }
        }

        t += h;
        y.swap(y5);
        k1.swap(k7);
        last_reject_singular = false;
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }
    // emit any samples that rounding left past the final step
    while (next_sample < samples.size()) {
        on_sample(samples[next_sample], y);
        ++next_sample;
    }
}

inline RealVec pack_state(const PhaseState& s) {
    const std::size_t n = s.z.size();
    RealVec y(8 * n);
    const CVec* blocks[4] = {&s.z, &s.zdot, &s.w, &s.wdot};
    for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t i = 0; i < n; ++i) {
            y[b * 2 * n + 2 * i] = (*blocks[b])[i].real();
            y[b * 2 * n + 2 * i + 1] = (*blocks[b])[i].imag();
        }
    return y;
}

inline PhaseState unpack_state(const RealVec& y, std::size_t n) {
    PhaseState s;
    CVec* blocks[4] = {&s.z, &s.zdot, &s.w, &s.wdot};
    for (std::size_t b = 0; b < 4; ++b) {
        blocks[b]->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*blocks[b])[i] = Complex(y[b * 2 * n + 2 * i], y[b * 2 * n + 2 * i + 1]);
    }
    return s;
}

}  // namespace detail

// Integrate the Newtonian system from state0 over [t0, t1], sampling z and w
// on a uniform grid of step at most dt_sample.
inline Trajectory integrate(const PhaseState& state0, const CoeffParams& params, double t0,
                            double t1, double dt_sample, const IntegrateOptions& opt = {}) {
    state0.require_consistent("integrate");
    const std::size_t n = state0.z.size();
    if (params.size() != n) throw ArgumentError("integrate: parameter count != N");
    if (!(t1 > t0)) throw ArgumentError("integrate: need t1 > t0");
    if (!(dt_sample > 0)) throw ArgumentError("integrate: need dt_sample > 0");
    require_distinct_zeros(state0.z, "integrate");

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt_sample - 1e-12));
    const std::size_t nsteps = std::max<std::size_t>(1, steps);
    const double dt = (t1 - t0) / static_cast<double>(nsteps);
    std::vector<double> samples(nsteps + 1);
    for (std::size_t j = 0; j <= nsteps; ++j)
        samples[j] = (j == nsteps) ? t1 : t0 + static_cast<double>(j) * dt;

    detail::OdeRhs f = [&params, n](double, const detail::RealVec& y, detail::RealVec& dydt) {
        const PhaseState s = detail::unpack_state(y, n);
        const NewtonianRhs rhs = rhs_newtonian(s, params);
        PhaseState ds;
        ds.z = s.zdot;
        ds.zdot = rhs.zddot;
        ds.w = s.wdot;
        ds.wdot = rhs.wddot;
        dydt = detail::pack_state(ds);
    };

    detail::CollisionProbe near_collision = [n](const detail::RealVec& y) {
        const PhaseState s = detail::unpack_state(y, n);
        if (s.z.size() < 2) return false;
        return min_pairwise_distance(s.z) < 1e-3 * (1.0 + max_abs(s.z));
    };

    Trajectory traj;
    traj.times.reserve(samples.size());
    traj.z.reserve(samples.size());
    traj.w.reserve(samples.size());
    detail::rk45_integrate(
        f, detail::pack_state(state0), t0, t1, samples,
        [&](double t, const detail::RealVec& y) {
            const PhaseState s = detail::unpack_state(y, n);
            traj.times.push_back(t);
            traj.z.push_back(s.z);
            traj.w.push_back(s.w);
        },
        opt, near_collision);
    // ODE slots carry identity through time by construction
    traj.perm_log.assign(traj.times.size() > 0 ? traj.times.size() - 1 : 0,
                         identity_permutation(n));
    return traj;
}

}  // namespace polydyn
