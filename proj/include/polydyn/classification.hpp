#pragma once

// Behavior classification from the mode exponents lambda = -a + i w, and
// empirical per-particle period detection on sampled trajectories (a particle
// may need an integer multiple of the zero-set period when identities
// exchange over one period).

#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "polydyn/trajectory.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

enum class BehaviorKind {
    Isochronous,
    AsymptoticallyIsochronous,
    AsymptoticallyMultiplyPeriodic,
    Confined,
    ConvergingToOrigin,
    ScatteringCapable,
};

inline const char* to_string(BehaviorKind k) {
    switch (k) {
        case BehaviorKind::Isochronous: return "isochronous";
        case BehaviorKind::AsymptoticallyIsochronous: return "asymptotically_isochronous";
        case BehaviorKind::AsymptoticallyMultiplyPeriodic:
            return "asymptotically_multiply_periodic";
        case BehaviorKind::Confined: return "confined";
        case BehaviorKind::ConvergingToOrigin: return "converging_to_origin";
        case BehaviorKind::ScatteringCapable: return "scattering_capable";
    }
    return "?";
}

struct BehaviorClass {
    BehaviorKind kind = BehaviorKind::Confined;
    std::optional<double> period;  // set for the isochronous kinds
    std::string diagnostics;
};

namespace detail {

// best rational p/q for x with q <= max_den, by continued fractions
inline std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den,
                                                                      double tol) {
    long long p_prev = 1, q_prev = 0, p = static_cast<long long>(std::floor(x)), q = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64 && q <= max_den; ++it) {
        if (std::abs(x - double(p) / double(q)) <= tol * std::max(1.0, std::abs(x)))
            return std::make_pair(p, q);
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const double ai = std::floor(inv);
        if (ai > 1e15) break;
        frac = inv - ai;
        const long long a = static_cast<long long>(ai);
        const long long p_next = a * p + p_prev;
        const long long q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    if (q <= max_den && std::abs(x - double(p) / double(q)) <= tol * std::max(1.0, std::abs(x)))
        return std::make_pair(p, q);
    return std::nullopt;
}

inline long long gcd_ll(long long a, long long b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b != 0) {
        const long long r = a % b;
        a = b;
        b = r;
    }
    return a;
}

}  // namespace detail

// Classify the long-time behavior implied by the full exponent multiset.
// Total function: every exponent configuration maps to some class.
inline BehaviorClass classify_modes(std::span<const Complex> lambdas,
                                    double rational_tol = 1e-9) {
    BehaviorClass out;
    if (lambdas.empty()) {
        out.kind = BehaviorKind::Confined;
        out.diagnostics = "no exponents supplied";
        return out;
    }
    bool any_negative_a = false, any_positive_a = false;
    std::vector<double> zero_mode_freq;
    for (const Complex& l : lambdas) {
        const double a = -l.real();
        if (a < -rational_tol) any_negative_a = true;
        else if (a > rational_tol) any_positive_a = true;
        else zero_mode_freq.push_back(l.imag());
    }
    if (any_negative_a) {
        out.kind = BehaviorKind::ScatteringCapable;
        out.diagnostics = "at least one growing mode";
        if (!zero_mode_freq.empty() || any_positive_a)
            out.diagnostics += "; decaying/oscillatory modes coexist";
        return out;
    }
    if (zero_mode_freq.empty()) {
        out.kind = BehaviorKind::ConvergingToOrigin;
        out.diagnostics = "all modes decay";
        return out;
    }

    // commensurability of the purely oscillatory frequencies
    double base = 0.0;
    for (double w : zero_mode_freq)
        if (std::abs(w) > rational_tol && (base == 0.0 || std::abs(w) < std::abs(base))) base = w;
    if (base == 0.0) {
        out.kind = BehaviorKind::Confined;
        out.diagnostics = "undamped modes are constant";
        return out;
    }
    bool commensurable = true;
    long long lcm = 1;
    for (double w : zero_mode_freq) {
        if (std::abs(w) <= rational_tol) continue;
        const auto pq = detail::rational_approx(w / base, 64, rational_tol);
        if (!pq) {
            commensurable = false;
            break;
        }
        const long long q = pq->second;
        const long long g = detail::gcd_ll(lcm, q);
        lcm = lcm / g * q;
        if (lcm > (1ll << 20)) {
            commensurable = false;
            break;
        }
    }
    if (commensurable) {
        const double omega0 = base / static_cast<double>(lcm);
        long long g = 0;
        for (double w : zero_mode_freq) {
            if (std::abs(w) <= rational_tol) continue;
            const long long k = std::llround(w / omega0);
            if (std::abs(w - static_cast<double>(k) * omega0) >
                rational_tol * std::max(1.0, std::abs(w))) {
                commensurable = false;
                break;
            }
            g = detail::gcd_ll(g, k);
        }
        if (commensurable && g > 0) {
            const double omega = std::abs(omega0 * static_cast<double>(g));
            out.period = 2.0 * std::numbers::pi / omega;
            out.kind = any_positive_a ? BehaviorKind::AsymptoticallyIsochronous
                                      : BehaviorKind::Isochronous;
            out.diagnostics = "common frequency " + std::to_string(omega);
            return out;
        }
    }
    out.kind = any_positive_a ? BehaviorKind::AsymptoticallyMultiplyPeriodic
                              : BehaviorKind::Confined;
    out.diagnostics = "undamped frequencies not commensurable";
    return out;
}

struct PeriodDetection {
    std::vector<std::optional<int>> z;  // per particle: smallest p with period p*T
    std::vector<std::optional<int>> w;  // same for the w samples, when present
};

namespace detail {

inline std::optional<int> series_period(const std::vector<CVec>& series, std::size_t particle,
                                        std::size_t shift_per_period, int max_p, double tol) {
    double amp = 0.0;
    for (const auto& sample : series) amp = std::max(amp, std::abs(sample[particle]));
    const double threshold = tol * (1.0 + amp);
    for (int p = 1; p <= max_p; ++p) {
        const std::size_t shift = shift_per_period * static_cast<std::size_t>(p);
        if (shift >= series.size()) break;
        double sup = 0.0;
        for (std::size_t j = 0; j + shift < series.size(); ++j)
            sup = std::max(sup, std::abs(series[j + shift][particle] - series[j][particle]));
        if (sup <= threshold) return p;
    }
    return std::nullopt;
}

}  // namespace detail

// Smallest p <= max_p with |x(t + pT) - x(t)| below tol*(1 + max|x|) over the
// overlapping grid, per tracked particle, for the z series and (when present)
// the w series. The sample grid must be uniform and T an integer number of
// grid steps.
inline PeriodDetection detect_period(const Trajectory& traj, double candidate_period, int max_p,
                                     double tol = 1e-6) {
    if (traj.times.size() < 2) throw ArgumentError("detect_period: trajectory too short");
    if (max_p < 1) throw ArgumentError("detect_period: max_p must be >= 1");
    const double span = traj.times.back() - traj.times.front();
    if (span < static_cast<double>(max_p) * candidate_period - 1e-9)
        throw ArgumentError("detect_period: trajectory span below max_p * T");
    const double dt = (traj.times.back() - traj.times.front()) /
                      static_cast<double>(traj.times.size() - 1);
    const auto shift = static_cast<std::size_t>(std::llround(candidate_period / dt));
    if (shift < 1 || std::abs(static_cast<double>(shift) * dt - candidate_period) >
                         1e-9 * std::max(1.0, candidate_period))
        throw ArgumentError("detect_period: sample grid does not align with T");

    PeriodDetection out;
    const std::size_t n = traj.particles();
    out.z.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.z[i] = detail::series_period(traj.z, i, shift, max_p, tol);
    if (!traj.w.empty()) {
        out.w.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.w[i] = detail::series_period(traj.w, i, shift, max_p, tol);
    }
    return out;
}

}  // namespace polydyn
