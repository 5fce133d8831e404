#pragma once

// Elementary symmetric functions (plain and with excluded positions), the
// zeros->coefficients map of a monic polynomial, and the first three time
// derivatives of the coefficients expressed through derivatives of the zeros.

#include <optional>
#include <span>

#include "polydyn/types.hpp"

namespace polydyn {

// All elementary symmetric functions e[0..N] of z, by expanding the product
// prod_j (x + z_j) one factor at a time. O(N^2) for the whole family.
inline CVec elem_sym_all(const CVec& z) {
    CVec e(z.size() + 1, Complex(0));
    e[0] = Complex(1);
    std::size_t used = 0;
    for (const Complex& zj : z) {
        ++used;
        for (std::size_t m = used; m >= 1; --m) e[m] += zj * e[m - 1];
    }
    return e;
}

// sigma_m(z), 1 <= m <= N.
inline Complex elem_sym(int m, const CVec& z) {
    if (m < 1 || static_cast<std::size_t>(m) > z.size())
        throw ArgumentError("elem_sym: m out of range 1..N");
    return elem_sym_all(z)[static_cast<std::size_t>(m)];
}

// Symmetric function with 1..3 excluded positions (0-based) and the
// Kronecker offset delta_{|excl|,m}. A sum over an empty index set is zero,
// so degree m-|excl| < 1 contributes nothing beyond the offset.
inline Complex elem_sym_excl(std::span<const std::size_t> excluded, int m, const CVec& z) {
    const std::size_t n = z.size();
    const std::size_t k = excluded.size();
    if (k < 1 || k > 3) throw ArgumentError("elem_sym_excl: need 1..3 excluded positions");
    if (m < 1 || static_cast<std::size_t>(m) > n)
        throw ArgumentError("elem_sym_excl: m out of range 1..N");
    for (std::size_t i = 0; i < k; ++i) {
        if (excluded[i] >= n) throw ArgumentError("elem_sym_excl: excluded position out of range");
        for (std::size_t j = i + 1; j < k; ++j)
            if (excluded[i] == excluded[j])
                throw ArgumentError("elem_sym_excl: duplicate excluded position");
    }
    const Complex kron = (static_cast<std::size_t>(m) == k) ? Complex(1) : Complex(0);
    const int deg = m - static_cast<int>(k);
    if (deg < 1) return kron;
    CVec reduced;
    reduced.reserve(n - k);
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(excluded.begin(), excluded.end(), i) == excluded.end())
            reduced.push_back(z[i]);
    if (static_cast<std::size_t>(deg) > reduced.size()) return kron;
    return kron + elem_sym_all(reduced)[static_cast<std::size_t>(deg)];
}

inline Complex elem_sym_excl(std::initializer_list<std::size_t> excluded, int m, const CVec& z) {
    return elem_sym_excl(std::span<const std::size_t>(excluded.begin(), excluded.size()), m, z);
}

// c_m = (-1)^m sigma_m(z); the monic polynomial is x^N + sum_m c_m x^{N-m}.
inline CVec coeffs_from_zeros(const CVec& z) {
    const CVec e = elem_sym_all(z);
    CVec c(z.size());
    double sign = -1.0;
    for (std::size_t m = 1; m <= z.size(); ++m, sign = -sign) c[m - 1] = sign * e[m];
    return c;
}

// Horner evaluation of the monic polynomial with coefficient vector c.
inline Complex poly_eval(const CVec& c, Complex x) {
    Complex v(1);
    for (const Complex& cm : c) v = v * x + cm;
    return v;
}

namespace detail {

// e[0..N-1] of z with one position removed, for every removed position.
// Rows indexed by the removed position; O(N^3) total, N here is small.
inline std::vector<CVec> elem_sym_single_excl_table(const CVec& z) {
    const std::size_t n = z.size();
    std::vector<CVec> table(n);
    CVec reduced(n ? n - 1 : 0);
    for (std::size_t skip = 0; skip < n; ++skip) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != skip) reduced[w++] = z[i];
        table[skip] = elem_sym_all(reduced);
    }
    return table;
}

inline Complex sigma_excl1(const std::vector<CVec>& tab1, std::size_t n1, int m) {
    Complex v = (m == 1) ? Complex(1) : Complex(0);
    const int deg = m - 1;
    if (deg >= 1 && static_cast<std::size_t>(deg) < tab1[n1].size())
        v += tab1[n1][static_cast<std::size_t>(deg)];
    return v;
}

}  // namespace detail

// Time derivatives of the coefficients, orders 1..3, given the zeros and
// their derivative vectors. Multi-index sums run over pairwise-distinct
// indices. The order-2 and order-3 maps double as the expressions of
// (c-ddot, c-dddot) through (z, zdot, w, wdot) with w = z-ddot.
struct CoeffDerivs {
    CVec d1;
    std::optional<CVec> d2;
    std::optional<CVec> d3;
};

inline CVec coeff_derivs_order1(const CVec& z, const CVec& zd1) {
    const std::size_t n = z.size();
    if (zd1.size() != n) throw ArgumentError("coeff_derivs: zd1 length mismatch");
    const auto tab1 = detail::elem_sym_single_excl_table(z);
    CVec out(n);
    double sign = -1.0;
    for (std::size_t m = 1; m <= n; ++m, sign = -sign) {
        Complex s(0);
        for (std::size_t k = 0; k < n; ++k)
            s += detail::sigma_excl1(tab1, k, static_cast<int>(m)) * zd1[k];
        out[m - 1] = sign * s;
    }
    return out;
}

inline CVec coeff_derivs_order2(const CVec& z, const CVec& zd1, const CVec& zd2) {
    const std::size_t n = z.size();
    if (zd1.size() != n || zd2.size() != n)
        throw ArgumentError("coeff_derivs: derivative length mismatch");
    const auto tab1 = detail::elem_sym_single_excl_table(z);
    CVec out(n);
    double sign = -1.0;
    for (std::size_t m = 1; m <= n; ++m, sign = -sign) {
        Complex s(0);
        for (std::size_t k = 0; k < n; ++k)
            s += detail::sigma_excl1(tab1, k, static_cast<int>(m)) * zd2[k];
        for (std::size_t n1 = 0; n1 < n; ++n1)
            for (std::size_t n2 = 0; n2 < n; ++n2) {
                if (n1 == n2) continue;
                const std::size_t ex[2] = {n1, n2};
                s += elem_sym_excl(std::span<const std::size_t>(ex, 2), static_cast<int>(m), z) *
                     zd1[n1] * zd1[n2];
            }
        out[m - 1] = sign * s;
    }
    return out;
}

inline CVec coeff_derivs_order3(const CVec& z, const CVec& zd1, const CVec& zd2,
                                const CVec& zd3) {
    const std::size_t n = z.size();
    if (zd1.size() != n || zd2.size() != n || zd3.size() != n)
        throw ArgumentError("coeff_derivs: derivative length mismatch");
    const auto tab1 = detail::elem_sym_single_excl_table(z);
    CVec out(n);
    double sign = -1.0;
    for (std::size_t m = 1; m <= n; ++m, sign = -sign) {
        Complex s(0);
        for (std::size_t k = 0; k < n; ++k)
            s += detail::sigma_excl1(tab1, k, static_cast<int>(m)) * zd3[k];
        for (std::size_t n1 = 0; n1 < n; ++n1)
            for (std::size_t n2 = 0; n2 < n; ++n2) {
                if (n1 == n2) continue;
                const std::size_t ex[2] = {n1, n2};
                s += 3.0 *
                     elem_sym_excl(std::span<const std::size_t>(ex, 2), static_cast<int>(m), z) *
                     zd2[n1] * zd1[n2];
            }
        for (std::size_t n1 = 0; n1 < n; ++n1)
            for (std::size_t n2 = 0; n2 < n; ++n2)
                for (std::size_t n3 = 0; n3 < n; ++n3) {
                    if (n1 == n2 || n1 == n3 || n2 == n3) continue;
                    const std::size_t ex[3] = {n1, n2, n3};
                    s += elem_sym_excl(std::span<const std::size_t>(ex, 3), static_cast<int>(m),
                                       z) *
                         zd1[n1] * zd1[n2] * zd1[n3];
                }
        out[m - 1] = sign * s;
    }
    return out;
}

// Bundle form: computes only as high an order as the inputs allow.
inline CoeffDerivs coeff_derivs_from_zero_derivs(const CVec& z, const CVec& zd1,
                                                 const std::optional<CVec>& zd2 = std::nullopt,
                                                 const std::optional<CVec>& zd3 = std::nullopt) {
    if (zd3 && !zd2) throw ArgumentError("coeff_derivs: zd3 supplied without zd2");
    CoeffDerivs out;
    out.d1 = coeff_derivs_order1(z, zd1);
    if (zd2) out.d2 = coeff_derivs_order2(z, zd1, *zd2);
    if (zd2 && zd3) out.d3 = coeff_derivs_order3(z, zd1, *zd2, *zd3);
    return out;
}

}  // namespace polydyn
