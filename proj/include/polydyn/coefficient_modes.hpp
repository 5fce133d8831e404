#pragma once

// Closed-form evolution of the polynomial coefficients: each coefficient
// satisfies a linear constant-coefficient ODE of order four, so it is a sum
// of four exponential modes. This header solves the characteristic quartic,
// converts between the parameter representations, fits mode amplitudes to
// initial data, and evaluates coefficients and their derivatives in time.

#include <Eigen/Eigenvalues>
#include <array>
#include <optional>

#include "polydyn/symmetric_functions.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

// One coefficient's ODE parameters: x'''' = alpha x''' + beta x'' + gamma x' + delta x.
struct Quartic {
    Complex alpha, beta, gamma, delta;
};

using CoeffParams = std::vector<Quartic>;  // one entry per coefficient index m

namespace detail {

inline Complex quartic_value(const Quartic& q, Complex l) {
    // l^4 - alpha l^3 - beta l^2 - gamma l - delta, Horner form
    return (((l - q.alpha) * l - q.beta) * l - q.gamma) * l - q.delta;
}

inline Complex quartic_slope(const Quartic& q, Complex l) {
    return ((4.0 * l - 3.0 * q.alpha) * l - 2.0 * q.beta) * l - q.gamma;
}

}  // namespace detail

// The four roots of l^4 = alpha l^3 + beta l^2 + gamma l + delta, via the
// eigenvalues of the 4x4 companion matrix, each polished by a few Newton
// steps. Returned in lexicographic order (real part, then imaginary part).
inline std::array<Complex, 4> quartic_modes(Complex alpha, Complex beta, Complex gamma,
                                            Complex delta) {
    const Quartic q{alpha, beta, gamma, delta};
    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    companion(0, 3) = delta;
    companion(1, 3) = gamma;
    companion(2, 3) = beta;
    companion(3, 3) = alpha;
    companion(1, 0) = companion(2, 1) = companion(3, 2) = Complex(1);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, /*computeEigenvectors=*/false);
    std::array<Complex, 4> roots;
    for (int i = 0; i < 4; ++i) {
        Complex l = solver.eigenvalues()(i);
        for (int step = 0; step < 5; ++step) {
            const Complex slope = detail::quartic_slope(q, l);
            if (std::abs(slope) == 0.0) break;
            const Complex dl = detail::quartic_value(q, l) / slope;
            l -= dl;
            if (std::abs(dl) <= 1e-15 * (1.0 + std::abs(l))) break;
        }
        roots[static_cast<std::size_t>(i)] = l;
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    double max_abs_root = 0.0;
    for (const auto& l : roots) max_abs_root = std::max(max_abs_root, std::abs(l));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) <
                1e-9 * (1.0 + max_abs_root))
                throw DegenerateModesError("quartic_modes: repeated characteristic root");
    return roots;
}

// Vieta's formulas; the inverse of quartic_modes on root sets. Accepts any
// roots, including repeated ones (it is a pure algebraic map).
inline Quartic params_from_modes(const std::array<Complex, 4>& l) {
    Complex e1(0), e2(0), e3(0);
    for (int i = 0; i < 4; ++i) {
        e1 += l[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < 4; ++j) {
            e2 += l[static_cast<std::size_t>(i)] * l[static_cast<std::size_t>(j)];
            for (int k = j + 1; k < 4; ++k)
                e3 += l[static_cast<std::size_t>(i)] * l[static_cast<std::size_t>(j)] *
                      l[static_cast<std::size_t>(k)];
        }
    }
    const Complex e4 = l[0] * l[1] * l[2] * l[3];
    return Quartic{e1, -e2, e3, -e4};
}

// Explicit real/imaginary expansion of the parameters in terms of the decay
// rates a_k and angular frequencies w_k of the modes l_k = -a_k + i w_k.
// Agrees with params_from_modes(-a + i w) identically; the two routes are
// kept as independent transcriptions and tested against each other.
inline Quartic params_from_decay_freq(const std::array<double, 4>& a,
                                      const std::array<double, 4>& w) {
    const double a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3];
    const double w1 = w[0], w2 = w[1], w3 = w[2], w4 = w[3];

    const Complex alpha{-a1 - a2 - a3 - a4, w1 + w2 + w3 + w4};

    const double beta_re = -a1 * a2 - a1 * a3 - a2 * a3 - a1 * a4 - a2 * a4 - a3 * a4 +
                           w1 * w2 + w1 * w3 + w2 * w3 + w1 * w4 + w2 * w4 + w3 * w4;
    const double beta_im = a2 * w1 + a3 * w1 + a4 * w1 + a1 * w2 + a3 * w2 + a4 * w2 +
                           a1 * w3 + a2 * w3 + a4 * w3 + a1 * w4 + a2 * w4 + a3 * w4;

    const double gamma_re = -a1 * a2 * a3 - a1 * a2 * a4 - a1 * a3 * a4 - a2 * a3 * a4 +
                            a1 * w2 * w3 + a1 * w2 * w4 + a1 * w3 * w4 + a2 * w1 * w3 +
                            a2 * w1 * w4 + a2 * w3 * w4 + a3 * w1 * w2 + a3 * w1 * w4 +
                            a3 * w2 * w4 + a4 * w1 * w2 + a4 * w1 * w3 + a4 * w2 * w3;
    const double gamma_im = a2 * a3 * w1 + a2 * a4 * w1 + a3 * a4 * w1 + a1 * a3 * w2 +
                            a1 * a4 * w2 + a3 * a4 * w2 + a1 * a2 * w3 + a1 * a4 * w3 +
                            a2 * a4 * w3 + a1 * a2 * w4 + a1 * a3 * w4 + a2 * a3 * w4 -
                            w1 * w2 * w3 - w1 * w2 * w4 - w1 * w3 * w4 - w2 * w3 * w4;

    const double delta_re = -a1 * a2 * a3 * a4 + a3 * a4 * w1 * w2 + a2 * a4 * w1 * w3 +
                            a2 * a3 * w1 * w4 + a1 * a4 * w2 * w3 + a1 * a3 * w2 * w4 +
                            a1 * a2 * w3 * w4 - w1 * w2 * w3 * w4;
    const double delta_im = a2 * a3 * a4 * w1 + a1 * a3 * a4 * w2 + a1 * a2 * a4 * w3 +
                            a1 * a2 * a3 * w4 - a4 * w1 * w2 * w3 - a3 * w1 * w2 * w4 -
                            a2 * w1 * w3 * w4 - a1 * w2 * w3 * w4;

    return Quartic{alpha, Complex{beta_re, beta_im}, Complex{gamma_re, gamma_im},
                   Complex{delta_re, delta_im}};
}

// Amplitudes solving sum_k b_k l_k^s = d_s for s = 0..3, by partial-pivot
// elimination on the 4x4 power-basis system, with one refinement pass.
struct AmplitudeFit {
    std::array<Complex, 4> b;
    double residual = 0.0;            // ||A b - d||_inf
    double condition_estimate = 0.0;  // ||A||_inf * ||A^-1||_inf
    bool ill_conditioned = false;     // condition estimate above 1e12
};

inline AmplitudeFit fit_amplitudes(const std::array<Complex, 4>& lambda,
                                   const std::array<Complex, 4>& data) {
    double max_abs_l = 0.0;
    for (const auto& l : lambda) max_abs_l = std::max(max_abs_l, std::abs(l));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(lambda[static_cast<std::size_t>(i)] -
                         lambda[static_cast<std::size_t>(j)]) < 1e-9 * (1.0 + max_abs_l))
                throw DegenerateModesError("fit_amplitudes: repeated exponents");

    Complex a[4][4];
    for (int s = 0; s < 4; ++s)
        for (int k = 0; k < 4; ++k)
            a[s][k] = std::pow(lambda[static_cast<std::size_t>(k)], s);

    // invert A via Gauss-Jordan with partial pivoting; 4x4, so the explicit
    // inverse doubles as the condition estimate and the refinement operator
    Complex inv[4][4] = {};
    for (int i = 0; i < 4; ++i) inv[i][i] = Complex(1);
    Complex work[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) work[i][j] = a[i][j];
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(work[r][col]) > std::abs(work[pivot][col])) pivot = r;
        if (std::abs(work[pivot][col]) == 0.0)
            throw DegenerateModesError("fit_amplitudes: singular mode system");
        if (pivot != col) {
            std::swap(work[pivot], work[col]);
            std::swap(inv[pivot], inv[col]);
        }
        const Complex scale = 1.0 / work[col][col];
        for (int j = 0; j < 4; ++j) {
            work[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const Complex f = work[r][col];
            if (f == Complex(0)) continue;
            for (int j = 0; j < 4; ++j) {
                work[r][j] -= f * work[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }

    auto mat_inf_norm = [](const Complex m[4][4]) {
        double norm = 0.0;
        for (int i = 0; i < 4; ++i) {
            double row = 0.0;
            for (int j = 0; j < 4; ++j) row += std::abs(m[i][j]);
            norm = std::max(norm, row);
        }
        return norm;
    };
    auto apply = [](const Complex m[4][4], const std::array<Complex, 4>& x) {
        std::array<Complex, 4> y{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) y[static_cast<std::size_t>(i)] += m[i][j] * x[static_cast<std::size_t>(j)];
        return y;
    };

    AmplitudeFit fit;
    fit.b = apply(inv, data);
    // one refinement pass tightens the residual when the system is skewed
    std::array<Complex, 4> r{};
    for (int i = 0; i < 4; ++i) {
        r[static_cast<std::size_t>(i)] = data[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j)
            r[static_cast<std::size_t>(i)] -= a[i][j] * fit.b[static_cast<std::size_t>(j)];
    }
    const auto corr = apply(inv, r);
    for (int j = 0; j < 4; ++j) fit.b[static_cast<std::size_t>(j)] += corr[static_cast<std::size_t>(j)];

    for (int i = 0; i < 4; ++i) {
        Complex resid = data[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j)
            resid -= a[i][j] * fit.b[static_cast<std::size_t>(j)];
        fit.residual = std::max(fit.residual, std::abs(resid));
    }
    fit.condition_estimate = mat_inf_norm(a) * mat_inf_norm(inv);
    fit.ill_conditioned = fit.condition_estimate > 1e12;
    return fit;
}

// One coefficient as a sum of four exponential modes.
struct CoefficientMode {
    std::array<Complex, 4> lambda;
    std::array<Complex, 4> amplitude;

    // d^order/dt^order of sum_k b_k exp(lambda_k t), order 0..4
    Complex eval(double t, int order = 0) const {
        if (order < 0 || order > 4) throw ArgumentError("CoefficientMode::eval: order 0..4");
        Complex v(0);
        for (int k = 0; k < 4; ++k) {
            Complex factor(1);
            for (int p = 0; p < order; ++p) factor *= lambda[static_cast<std::size_t>(k)];
            v += amplitude[static_cast<std::size_t>(k)] * factor *
                 std::exp(lambda[static_cast<std::size_t>(k)] * t);
        }
        return v;
    }
};

using ModeSpec = std::vector<CoefficientMode>;  // index m-1 holds coefficient m

inline Complex eval_coefficient(const ModeSpec& spec, std::size_t m_index, double t,
                                int order = 0) {
    if (m_index >= spec.size()) throw ArgumentError("eval_coefficient: index out of range");
    return spec[m_index].eval(t, order);
}

// Coefficient vector c(t) (or one of its derivative vectors) for all m.
inline CVec eval_coefficients(const ModeSpec& spec, double t, int order = 0) {
    CVec c(spec.size());
    for (std::size_t m = 0; m < spec.size(); ++m) c[m] = spec[m].eval(t, order);
    return c;
}

// Initial coefficient derivative data d^s c_m(0)/dt^s, s = 0..3, from the
// initial zeros, velocities, accelerations w = z'' and their derivatives.
struct InitialCoeffData {
    CVec c0, c1, c2, c3;
};

inline InitialCoeffData initial_coeff_data(const CVec& z0, const CVec& zdot0, const CVec& w0,
                                           const CVec& wdot0) {
    const std::size_t n = z0.size();
    if (zdot0.size() != n || w0.size() != n || wdot0.size() != n)
        throw ArgumentError("initial_coeff_data: length mismatch");
    InitialCoeffData d;
    d.c0 = coeffs_from_zeros(z0);
    d.c1 = coeff_derivs_order1(z0, zdot0);
    d.c2 = coeff_derivs_order2(z0, zdot0, w0);
    d.c3 = coeff_derivs_order3(z0, zdot0, w0, wdot0);
    return d;
}

// Full mode construction: characteristic roots per coefficient, then
// amplitudes fitted to the initial data.
inline ModeSpec fit_modes(const CoeffParams& params, const CVec& z0, const CVec& zdot0,
                          const CVec& w0, const CVec& wdot0) {
    if (params.size() != z0.size()) throw ArgumentError("fit_modes: parameter count != N");
    const InitialCoeffData d = initial_coeff_data(z0, zdot0, w0, wdot0);
    ModeSpec spec(params.size());
    for (std::size_t m = 0; m < params.size(); ++m) {
        const auto roots =
            quartic_modes(params[m].alpha, params[m].beta, params[m].gamma, params[m].delta);
        const auto fit = fit_amplitudes(roots, {d.c0[m], d.c1[m], d.c2[m], d.c3[m]});
        spec[m] = CoefficientMode{roots, fit.b};
    }
    return spec;
}

inline ModeSpec fit_modes_from_roots(const std::vector<std::array<Complex, 4>>& roots_per_m,
                                     const CVec& z0, const CVec& zdot0, const CVec& w0,
                                     const CVec& wdot0) {
    if (roots_per_m.size() != z0.size())
        throw ArgumentError("fit_modes_from_roots: root-set count != N");
    const InitialCoeffData d = initial_coeff_data(z0, zdot0, w0, wdot0);
    ModeSpec spec(roots_per_m.size());
    for (std::size_t m = 0; m < roots_per_m.size(); ++m) {
        const auto fit = fit_amplitudes(roots_per_m[m], {d.c0[m], d.c1[m], d.c2[m], d.c3[m]});
        spec[m] = CoefficientMode{roots_per_m[m], fit.b};
    }
    return spec;
}

}  // namespace polydyn
