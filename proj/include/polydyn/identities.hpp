#pragma once

// The four differential identities linking time derivatives of the zeros of a
// monic polynomial (orders 1..4) to time derivatives of its coefficients, the
// relation matrix pair connecting the two derivative families, inversion of
// the identities, and residual evaluators for consistency testing.

#include <optional>
#include <span>

#include "polydyn/symmetric_functions.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

// R_{nm} = -[prod_{l != n} (z_n - z_l)^{-1}] * z_n^{N-m}
inline ComplexMatrix relation_matrix(const CVec& z) {
    require_distinct_zeros(z, "relation_matrix");
    const std::size_t n = z.size();
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex pref(1);
        for (std::size_t l = 0; l < n; ++l)
            if (l != i) pref *= z[i] - z[l];
        pref = -1.0 / pref;
        // powers z_i^{N-m} for m = 1..N, filled from the right
        Complex p(1);
        for (std::size_t m = n; m >= 1; --m) {
            r(i, m - 1) = pref * p;
            p *= z[i];
        }
    }
    return r;
}

// (R^{-1})_{nm} = (-1)^n sigma with zero m excluded and degree n; built from
// the exclusion sums directly, no matrix inversion involved. The sign and the
// degree ride on the row index; the excluded zero is the column index (this
// is what R * R^{-1} = I forces).
inline ComplexMatrix relation_matrix_inverse(const CVec& z) {
    const std::size_t n = z.size();
    ComplexMatrix r(n, n);
    const auto tab1 = detail::elem_sym_single_excl_table(z);
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^degree, degree = i+1
        for (std::size_t m = 0; m < n; ++m)
            r(i, m) = sign * detail::sigma_excl1(tab1, m, static_cast<int>(i) + 1);
    }
    return r;
}

namespace detail {

// One additive contribution tracked both as a value and as a magnitude, so
// residuals can be reported relative to the size of what was summed.
struct TermSum {
    CVec value;
    std::vector<double> magnitude;
};

inline TermSum coefficient_term(const CVec& z, const CVec& cd) {
    const std::size_t n = z.size();
    TermSum out{CVec(n, Complex(0)), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        Complex pref(1);
        for (std::size_t l = 0; l < n; ++l)
            if (l != i) pref *= z[i] - z[l];
        pref = -1.0 / pref;
        Complex acc(0);
        double mag = 0.0;
        Complex p(1);
        for (std::size_t m = n; m >= 1; --m) {
            acc += cd[m - 1] * p;
            mag += std::abs(cd[m - 1] * p);
            p *= z[i];
        }
        out.value[i] = pref * acc;
        out.magnitude[i] = std::abs(pref) * mag;
    }
    return out;
}

// Interaction part of the order-k identity, written so that
//   zd_k = interaction_k + coefficient_term(z, cd_k).
// The primed sums skip equal indices and the outer index.
inline TermSum interaction_sum(int order, const CVec& z, const CVec& zd1, const CVec& zd2,
                               const CVec& zd3) {
    const std::size_t n = z.size();
    TermSum out{CVec(n, Complex(0)), std::vector<double>(n, 0.0)};
    if (order == 1) return out;
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0);
        double mag = 0.0;
        auto add = [&](Complex term) {
            acc += term;
            mag += std::abs(term);
        };
        if (order == 2) {
            for (std::size_t l = 0; l < n; ++l) {
                if (l == i) continue;
                add(2.0 * zd1[i] * zd1[l] / (z[i] - z[l]));
            }
        } else if (order == 3) {
            for (std::size_t l = 0; l < n; ++l) {
                if (l == i) continue;
                add(3.0 * (zd2[i] * zd1[l] + zd2[l] * zd1[i]) / (z[i] - z[l]));
            }
            for (std::size_t l1 = 0; l1 < n; ++l1)
                for (std::size_t l2 = 0; l2 < n; ++l2) {
                    if (l1 == i || l2 == i || l1 == l2) continue;
                    add(-3.0 * zd1[i] * zd1[l1] * zd1[l2] /
                        ((z[i] - z[l1]) * (z[i] - z[l2])));
                }
        } else if (order == 4) {
            for (std::size_t l = 0; l < n; ++l) {
                if (l == i) continue;
                add((4.0 * zd3[i] * zd1[l] + 4.0 * zd3[l] * zd1[i] + 6.0 * zd2[i] * zd2[l]) /
                    (z[i] - z[l]));
            }
            for (std::size_t l1 = 0; l1 < n; ++l1)
                for (std::size_t l2 = 0; l2 < n; ++l2) {
                    if (l1 == i || l2 == i || l1 == l2) continue;
                    add(-6.0 * (zd2[i] * zd1[l1] * zd1[l2] + 2.0 * zd2[l1] * zd1[l2] * zd1[i]) /
                        ((z[i] - z[l1]) * (z[i] - z[l2])));
                }
            for (std::size_t l1 = 0; l1 < n; ++l1)
                for (std::size_t l2 = 0; l2 < n; ++l2)
                    for (std::size_t l3 = 0; l3 < n; ++l3) {
                        if (l1 == i || l2 == i || l3 == i) continue;
                        if (l1 == l2 || l1 == l3 || l2 == l3) continue;
                        add(4.0 * zd1[i] * zd1[l1] * zd1[l2] * zd1[l3] /
                            ((z[i] - z[l1]) * (z[i] - z[l2]) * (z[i] - z[l3])));
                    }
        } else {
            throw ArgumentError("interaction_sum: order must be 1..4");
        }
        out.value[i] = acc;
        out.magnitude[i] = mag;
    }
    return out;
}

}  // namespace detail

// Zero derivatives from coefficient derivatives, solved order by order:
// each order is the coefficient term plus the interaction sums built from
// the lower-order results.
struct ZeroDerivs {
    CVec d1;
    std::optional<CVec> d2;
    std::optional<CVec> d3;
    std::optional<CVec> d4;
};

inline ZeroDerivs zero_derivs_from_coeff_derivs(const CVec& z, const CVec& cd1,
                                                const std::optional<CVec>& cd2 = std::nullopt,
                                                const std::optional<CVec>& cd3 = std::nullopt,
                                                const std::optional<CVec>& cd4 = std::nullopt) {
    require_distinct_zeros(z, "zero_derivs_from_coeff_derivs");
    const std::size_t n = z.size();
    auto check = [&](const CVec& v, const char* name) {
        if (v.size() != n) throw ArgumentError(std::string("zero_derivs: length mismatch in ") + name);
    };
    check(cd1, "cd1");
    if (cd3 && !cd2) throw ArgumentError("zero_derivs: cd3 supplied without cd2");
    if (cd4 && !cd3) throw ArgumentError("zero_derivs: cd4 supplied without cd3");

    ZeroDerivs out;
    const CVec none;
    out.d1 = detail::coefficient_term(z, cd1).value;
    if (cd2) {
        check(*cd2, "cd2");
        auto t = detail::interaction_sum(2, z, out.d1, none, none);
        auto c = detail::coefficient_term(z, *cd2);
        CVec d2(n);
        for (std::size_t i = 0; i < n; ++i) d2[i] = t.value[i] + c.value[i];
        out.d2 = std::move(d2);
    }
    if (cd3) {
        check(*cd3, "cd3");
        auto t = detail::interaction_sum(3, z, out.d1, *out.d2, none);
        auto c = detail::coefficient_term(z, *cd3);
        CVec d3(n);
        for (std::size_t i = 0; i < n; ++i) d3[i] = t.value[i] + c.value[i];
        out.d3 = std::move(d3);
    }
    if (cd4) {
        check(*cd4, "cd4");
        auto t = detail::interaction_sum(4, z, out.d1, *out.d2, *out.d3);
        auto c = detail::coefficient_term(z, *cd4);
        CVec d4(n);
        for (std::size_t i = 0; i < n; ++i) d4[i] = t.value[i] + c.value[i];
        out.d4 = std::move(d4);
    }
    return out;
}

// Everything one trajectory point can supply: the zeros plus any available
// derivative vectors on both sides of the duality.
struct DerivBundle {
    CVec z;
    std::optional<CVec> zd1, zd2, zd3, zd4;
    std::optional<CVec> cd1, cd2, cd3, cd4;
};

// LHS - RHS of the order-k identity, per zero. Zero (to rounding) iff the
// bundle is consistent with a single smooth polynomial trajectory.
inline CVec identity_residuals(const DerivBundle& b, int order) {
    if (order < 1 || order > 4) throw ArgumentError("identity_residuals: order must be 1..4");
    require_distinct_zeros(b.z, "identity_residuals");
    const std::size_t n = b.z.size();
    const std::optional<CVec>* zds[4] = {&b.zd1, &b.zd2, &b.zd3, &b.zd4};
    const std::optional<CVec>* cds[4] = {&b.cd1, &b.cd2, &b.cd3, &b.cd4};
    for (int k = 0; k < order; ++k)
        if (!zds[k]->has_value() || (*zds[k])->size() != n)
            throw ArgumentError("identity_residuals: missing/short zero derivative");
    if (!cds[order - 1]->has_value() || (*cds[order - 1])->size() != n)
        throw ArgumentError("identity_residuals: missing/short coefficient derivative");

    const CVec none;
    const CVec& zd1 = **zds[0];
    const CVec& zd2 = order >= 2 ? **zds[1] : none;
    const CVec& zd3 = order >= 3 ? **zds[2] : none;
    const CVec& zdk = **zds[order - 1];
    // the interaction sums only ever use zd1..zd3
    auto t = detail::interaction_sum(order, b.z, zd1, order >= 3 ? zd2 : none,
                                     order >= 4 ? zd3 : none);
    auto c = detail::coefficient_term(b.z, **cds[order - 1]);
    CVec res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = zdk[i] - t.value[i] - c.value[i];
    return res;
}

// Residual scaled by the magnitude of everything that was summed.
inline std::vector<double> identity_relative_residuals(const DerivBundle& b, int order) {
    if (order < 1 || order > 4) throw ArgumentError("identity_residuals: order must be 1..4");
    CVec res = identity_residuals(b, order);
    const std::size_t n = b.z.size();
    const std::optional<CVec>* zds[4] = {&b.zd1, &b.zd2, &b.zd3, &b.zd4};
    const std::optional<CVec>* cds[4] = {&b.cd1, &b.cd2, &b.cd3, &b.cd4};
    const CVec none;
    const CVec& zd1 = **zds[0];
    auto t = detail::interaction_sum(order, b.z, zd1, order >= 3 ? **zds[1] : none,
                                     order >= 4 ? **zds[2] : none);
    auto c = detail::coefficient_term(b.z, **cds[order - 1]);
    const CVec& zdk = **zds[order - 1];
    std::vector<double> rel(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = 1.0 + std::abs(zdk[i]) + t.magnitude[i] + c.magnitude[i];
        rel[i] = std::abs(res[i]) / scale;
    }
    return rel;
}

// Order-k residual of the two-zero relation expressing d^k z_n / dt^k through
// the k-th coefficient derivatives and the Leibniz expansion of
// d^k (z_1 z_2) / dt^k. Inputs are the derivative ladders of both zeros
// (orders 0..k) and the k-th derivatives of the two coefficients.
inline std::array<Complex, 2> n2_order_k_residual(std::span<const Complex> z1_derivs,
                                                  std::span<const Complex> z2_derivs,
                                                  Complex c1_kth, Complex c2_kth, int k) {
    if (k < 1) throw ArgumentError("n2_order_k_residual: k must be >= 1");
    if (z1_derivs.size() < static_cast<std::size_t>(k) + 1 ||
        z2_derivs.size() < static_cast<std::size_t>(k) + 1)
        throw ArgumentError("n2_order_k_residual: derivative ladders must reach order k");
    const Complex z1 = z1_derivs[0], z2 = z2_derivs[0];
    {
        const double scale = 1.0 + std::max(std::abs(z1), std::abs(z2));
        if (std::abs(z1 - z2) < kCoincidenceRel * scale)
            throw SingularityError("n2_order_k_residual: coincident zeros");
    }
    // binomial row C(k, 0..k)
    std::vector<double> binom(static_cast<std::size_t>(k) + 1, 1.0);
    for (int j = 1; j <= k; ++j)
        binom[static_cast<std::size_t>(j)] =
            binom[static_cast<std::size_t>(j - 1)] * double(k - j + 1) / double(j);
    Complex leibniz(0);
    for (int j = 0; j <= k; ++j)
        leibniz += binom[static_cast<std::size_t>(j)] * z1_derivs[static_cast<std::size_t>(j)] *
                   z2_derivs[static_cast<std::size_t>(k - j)];

    std::array<Complex, 2> res;
    for (int n = 0; n < 2; ++n) {
        const auto& a = (n == 0) ? z1_derivs : z2_derivs;
        const auto& b = (n == 0) ? z2_derivs : z1_derivs;
        const Complex num = leibniz - a[static_cast<std::size_t>(k)] * b[0] -
                            a[0] * b[static_cast<std::size_t>(k)] - (a[0] * c1_kth + c2_kth);
        res[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(k)] - num / (a[0] - b[0]);
    }
    return res;
}

}  // namespace polydyn
