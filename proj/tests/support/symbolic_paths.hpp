#pragma once

// Test-only symbolic trajectory oracles, independent of the library's
// derivative maps: polynomials in t and finite sums of exponentials, with
// exact arithmetic for products, sums and derivatives of any order. Used to
// manufacture zero paths whose coefficient paths (and every derivative) are
// known in closed form.

#include <complex>
#include <vector>

#include "polydyn/types.hpp"

namespace testsupport {

using polydyn::Complex;
using polydyn::CVec;

// sum_k c[k] t^k
struct PolyPath {
    std::vector<Complex> c;

    static PolyPath constant(Complex v) { return PolyPath{{v}}; }

    Complex eval(double t, int order = 0) const {
        Complex acc(0);
        double tpow = 1.0;
        for (std::size_t k = static_cast<std::size_t>(order); k < c.size(); ++k) {
            double factor = 1.0;
            for (int j = 0; j < order; ++j) factor *= static_cast<double>(k - static_cast<std::size_t>(j));
            acc += factor * c[k] * tpow;
            tpow *= t;
        }
        return acc;
    }

    PolyPath operator+(const PolyPath& rhs) const {
        PolyPath out;
        out.c.resize(std::max(c.size(), rhs.c.size()), Complex(0));
        for (std::size_t k = 0; k < c.size(); ++k) out.c[k] += c[k];
        for (std::size_t k = 0; k < rhs.c.size(); ++k) out.c[k] += rhs.c[k];
        return out;
    }

    PolyPath operator-() const {
        PolyPath out = *this;
        for (auto& v : out.c) v = -v;
        return out;
    }

    PolyPath operator*(const PolyPath& rhs) const {
        PolyPath out;
        if (c.empty() || rhs.c.empty()) return out;
        out.c.assign(c.size() + rhs.c.size() - 1, Complex(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < rhs.c.size(); ++j) out.c[i + j] += c[i] * rhs.c[j];
        return out;
    }
};

// Coefficient paths c_m(t) of the monic polynomial with zero paths z_n(t),
// by expanding prod_n (x - z_n(t)) one factor at a time. Entry m-1 is c_m.
inline std::vector<PolyPath> coeff_paths(const std::vector<PolyPath>& zero_paths) {
    // e[k] = elementary symmetric path of degree k
    std::vector<PolyPath> e(zero_paths.size() + 1);
    e[0] = PolyPath::constant(Complex(1));
    for (std::size_t used = 0; used < zero_paths.size(); ++used)
        for (std::size_t m = used + 1; m >= 1; --m)
            e[m] = e[m] + zero_paths[used] * e[m - 1];
    std::vector<PolyPath> c(zero_paths.size());
    double sign = -1.0;
    for (std::size_t m = 1; m <= zero_paths.size(); ++m, sign = -sign) {
        c[m - 1] = e[m];
        for (auto& v : c[m - 1].c) v *= sign;
    }
    return c;
}

// sum_j b_j exp(mu_j t)
struct ExpSum {
    std::vector<std::pair<Complex, Complex>> terms;  // (mu, amplitude)

    static ExpSum mode(Complex mu, Complex amplitude) { return ExpSum{{{mu, amplitude}}}; }

    void add_term(Complex mu, Complex amplitude) {
        for (auto& [m, b] : terms)
            if (std::abs(m - mu) <= 1e-12 * (1.0 + std::abs(mu))) {
                b += amplitude;
                return;
            }
        terms.emplace_back(mu, amplitude);
    }

    Complex eval(double t, int order = 0) const {
        Complex acc(0);
        for (const auto& [mu, b] : terms) {
            Complex factor(1);
            for (int j = 0; j < order; ++j) factor *= mu;
            acc += b * factor * std::exp(mu * t);
        }
        return acc;
    }

    ExpSum operator+(const ExpSum& rhs) const {
        ExpSum out = *this;
        for (const auto& [mu, b] : rhs.terms) out.add_term(mu, b);
        return out;
    }

    ExpSum operator-() const {
        ExpSum out = *this;
        for (auto& [mu, b] : out.terms) b = -b;
        return out;
    }

    ExpSum operator*(const ExpSum& rhs) const {
        ExpSum out;
        for (const auto& [mu1, b1] : terms)
            for (const auto& [mu2, b2] : rhs.terms) out.add_term(mu1 + mu2, b1 * b2);
        return out;
    }
};

inline std::vector<ExpSum> coeff_paths(const std::vector<ExpSum>& zero_paths) {
    std::vector<ExpSum> e(zero_paths.size() + 1);
    e[0] = ExpSum::mode(Complex(0), Complex(1));
    for (std::size_t used = 0; used < zero_paths.size(); ++used)
        for (std::size_t m = used + 1; m >= 1; --m)
            e[m] = e[m] + zero_paths[used] * e[m - 1];
    std::vector<ExpSum> c(zero_paths.size());
    double sign = -1.0;
    for (std::size_t m = 1; m <= zero_paths.size(); ++m, sign = -sign) {
        c[m - 1] = e[m];
        for (auto& [mu, b] : c[m - 1].terms) b *= sign;
    }
    return c;
}

// Derivative ladders (orders 0..max_order) at one time, per path.
template <typename Path>
std::vector<CVec> derivative_ladders(const std::vector<Path>& paths, double t, int max_order) {
    std::vector<CVec> ladders(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (int k = 0; k <= max_order; ++k) ladders[i].push_back(paths[i].eval(t, k));
    return ladders;
}

// order-k cross-section: vector over paths of the k-th derivative
template <typename Path>
CVec derivative_slice(const std::vector<Path>& paths, double t, int order) {
    CVec out(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) out[i] = paths[i].eval(t, order);
    return out;
}

}  // namespace testsupport
