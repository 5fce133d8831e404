#pragma once

// All zeros of a monic complex polynomial by Aberth-Ehrlich simultaneous
// iteration. O(N^2) per sweep and warm-startable, which is what trajectory
// tracking on fine time grids needs.

#include <numbers>

#include "polydyn/types.hpp"

namespace polydyn {

namespace detail {

// p(x) and p'(x) of the monic polynomial x^N + sum c_m x^{N-m}.
inline std::pair<Complex, Complex> monic_eval(const CVec& c, Complex x) {
    Complex p(1), dp(0);
    for (const Complex& cm : c) {
        dp = dp * x + p;
        p = p * x + cm;
    }
    return {p, dp};
}

inline CVec circle_start(const CVec& c) {
    const std::size_t n = c.size();
    const double radius = 1.0 + max_abs(c);
    CVec x(n);
    for (std::size_t k = 0; k < n; ++k) {
        // fixed angular offset plus a slight radius ramp: breaks the symmetry
        // that would otherwise lock the iteration on symmetric polynomials
        const double angle = 2.0 * std::numbers::pi * double(k) / double(n) + 0.3941;
        x[k] = radius * (1.0 + 1e-4 * double(k)) * Complex(std::cos(angle), std::sin(angle));
    }
    return x;
}

}  // namespace detail

struct RootOptions {
    int max_iterations = 200;
    double tol = 1e-13;  // converged when every update < tol * (1 + |root|)
};

// Zeros of x^N + sum_m c_m x^{N-m} as an unordered list. Exact trailing zero
// coefficients are deflated first, so pure monomials come out exact. Warm
// starts take the previous tracked zeros as initial guesses.
inline CVec roots(const CVec& c, const CVec* warm_start = nullptr,
                  const RootOptions& opt = {}) {
    // deflate x = 0 roots carried by an exactly-zero tail
    CVec work = c;
    std::size_t zero_roots = 0;
    while (!work.empty() && work.back() == Complex(0)) {
        work.pop_back();
        ++zero_roots;
    }
    const std::size_t d = work.size();
    CVec x;
    if (d == 1) {
        x.push_back(-work[0]);
    } else if (d >= 2) {
        if (warm_start && warm_start->size() == c.size()) {
            // keep the d guesses; separate any exact duplicates
            x.assign(warm_start->begin(), warm_start->begin() + static_cast<long>(d));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j)
                    if (x[i] == x[j]) x[j] += Complex(1e-8, 1e-8) * (1.0 + std::abs(x[j]));
        } else {
            x = detail::circle_start(work);
        }
        bool converged = false;
        for (int it = 0; it < opt.max_iterations && !converged; ++it) {
            converged = true;
            for (std::size_t i = 0; i < d; ++i) {
                const auto [p, dp] = detail::monic_eval(work, x[i]);
                if (p == Complex(0)) continue;
                Complex newton;
                if (dp == Complex(0)) {
                    // flat spot; nudge off it
                    x[i] += Complex(1e-6, 1e-6) * (1.0 + std::abs(x[i]));
                    converged = false;
                    continue;
                }
                newton = p / dp;
                Complex repulsion(0);
                for (std::size_t j = 0; j < d; ++j)
                    if (j != i) repulsion += 1.0 / (x[i] - x[j]);
                const Complex denom = 1.0 - newton * repulsion;
                const Complex step = (std::abs(denom) > 1e-30) ? newton / denom : newton;
                x[i] -= step;
                if (std::abs(step) > opt.tol * (1.0 + std::abs(x[i]))) converged = false;
            }
        }
        if (!converged) {
            double worst = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                worst = std::max(worst, std::abs(detail::monic_eval(work, x[i]).first));
            throw NumericalError("roots: no convergence after " +
                                 std::to_string(opt.max_iterations) +
                                 " iterations, max residual " + std::to_string(worst));
        }
    }
    x.insert(x.end(), zero_roots, Complex(0));
    return x;
}

}  // namespace polydyn
