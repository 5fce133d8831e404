#pragma once

// Particle-identity tracking: assign freshly computed (unordered) polynomial
// zeros to persistent slots by minimizing displacement from a prediction, and
// walk a closed-form coefficient evolution through time with adaptive step
// refinement near fast zero motion.

#include <optional>

#include "polydyn/coefficient_modes.hpp"
#include "polydyn/identities.hpp"
#include "polydyn/root_finding.hpp"
#include "polydyn/trajectory.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

namespace detail {

// Exact assignment by shortest augmenting paths with potentials, O(n^3).
// cost is row-major n x n; returns row -> column.
inline std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace detail

struct MatchResult {
    CVec ordered;      // ordered[i] = found[perm[i]]
    Permutation perm;  // indices into `found` as passed by the caller
};

// Optimal assignment of found zeros to prediction slots by total squared
// displacement. Exhaustive search up to 6 particles (ties resolved toward
// the lexicographically sorted order of `found`), Hungarian above that.
inline MatchResult match_ordering(const CVec& predicted, const CVec& found) {
    const std::size_t n = found.size();
    if (predicted.size() != n) throw ArgumentError("match_ordering: size mismatch");
    if (n == 0) return {};

    std::vector<std::size_t> sort_idx(n);
    for (std::size_t i = 0; i < n; ++i) sort_idx[i] = i;
    std::sort(sort_idx.begin(), sort_idx.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(found[a], found[b]); });

    std::vector<std::size_t> best;  // slot -> position in sorted list
    if (n <= 6) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cost += std::norm(found[sort_idx[p[i]]] - predicted[i]);
                if (cost >= best_cost) break;
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = p;
            }
        } while (std::next_permutation(p.begin(), p.end()));
    } else {
        std::vector<double> cost(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cost[i * n + j] = std::norm(predicted[i] - found[sort_idx[j]]);
        best = detail::hungarian(cost, n);
    }

    MatchResult out;
    out.ordered.resize(n);
    out.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.perm[i] = sort_idx[best[i]];
        out.ordered[i] = found[out.perm[i]];
    }
    return out;
}

namespace detail {

// slot -> canonical label, canonical = lexicographically sorted zero list
inline Permutation slot_to_canonical(const CVec& tracked) {
    const std::size_t n = tracked.size();
    std::vector<std::size_t> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = i;
    std::sort(sorted.begin(), sorted.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(tracked[a], tracked[b]); });
    // sorted[k] = slot occupying canonical label k; invert
    Permutation sigma(n);
    for (std::size_t k = 0; k < n; ++k) sigma[sorted[k]] = k;
    return sigma;
}

}  // namespace detail

struct TrackingOptions {
    double step_fraction = 0.25;      // allowed move per step, as a fraction of min separation
    int max_halvings = 20;
    double collision_rel = 1e-10;     // separation below this (relative) is a collision
    bool with_w = true;               // fill w = z'' via the inverted identities
};

// Walk the zero set of the closed-form coefficient evolution from t0 to t1,
// sampling on a uniform grid of step at most dt_max and keeping particle
// identities by continuity. Prediction is linear extrapolation of the last
// two accepted points; the root finder is warm-started from the prediction.
// initial_order, when given, fixes the slot assignment of the first sample.
inline Trajectory zero_trajectory(const ModeSpec& spec, double t0, double t1, double dt_max,
                                  const CVec* initial_order = nullptr,
                                  const TrackingOptions& opt = {}) {
    if (!(t1 > t0)) throw ArgumentError("zero_trajectory: need t1 > t0");
    if (!(dt_max > 0)) throw ArgumentError("zero_trajectory: need dt_max > 0");
    const std::size_t n = spec.size();
    if (n == 0) throw ArgumentError("zero_trajectory: empty mode spec");

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt_max - 1e-12));
    const std::size_t nsteps = std::max<std::size_t>(1, steps);
    const double dt = (t1 - t0) / static_cast<double>(nsteps);

    Trajectory traj;
    traj.times.reserve(nsteps + 1);
    traj.z.reserve(nsteps + 1);

    // first sample
    CVec cur = roots(eval_coefficients(spec, t0), initial_order);
    if (initial_order) {
        cur = match_ordering(*initial_order, cur).ordered;
    } else {
        std::sort(cur.begin(), cur.end(), lex_less);
    }
    double cur_t = t0;
    std::optional<CVec> prev;
    double prev_t = t0;

    auto fill_sample = [&](double t, const CVec& zs) {
        traj.times.push_back(t);
        traj.z.push_back(zs);
        if (opt.with_w) {
            const CVec cd1 = eval_coefficients(spec, t, 1);
            const CVec cd2 = eval_coefficients(spec, t, 2);
            const auto zd = zero_derivs_from_coeff_derivs(zs, cd1, cd2);
            traj.w.push_back(*zd.d2);
        }
    };

    fill_sample(cur_t, cur);
    Permutation sigma_prev = detail::slot_to_canonical(cur);

    // one tracking move from cur_t to target; recursion halves the interval
    auto advance = [&](auto&& self, double target, int depth) -> void {
        const double h = target - cur_t;
        CVec predicted = cur;
        if (prev && cur_t > prev_t) {
            const double ratio = h / (cur_t - prev_t);
            for (std::size_t i = 0; i < n; ++i)
                predicted[i] = cur[i] + (cur[i] - (*prev)[i]) * ratio;
        }
        const CVec found = roots(eval_coefficients(spec, target), &predicted);
        MatchResult matched = match_ordering(predicted, found);
        double move = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            move = std::max(move, std::abs(matched.ordered[i] - cur[i]));
        const double minsep = (n >= 2) ? min_pairwise_distance(cur)
                                       : std::numeric_limits<double>::infinity();
        if (move > opt.step_fraction * minsep && depth < opt.max_halvings) {
            self(self, cur_t + 0.5 * h, depth + 1);
            self(self, target, depth + 1);
            return;
        }
        if (depth >= opt.max_halvings) {
            // refinement is exhausted; accept only if identities are still
            // unambiguous, otherwise the zeros are colliding
            const double scale = 1.0 + max_abs(matched.ordered);
            const double sep = std::min(minsep, (n >= 2) ? min_pairwise_distance(matched.ordered)
                                                         : minsep);
            if (sep < opt.collision_rel * scale || move > 0.5 * sep)
                throw CollisionError("zero_trajectory: zero collision near t = " +
                                         std::to_string(target),
                                     target);
        }
        prev = cur;
        prev_t = cur_t;
        cur = std::move(matched.ordered);
        cur_t = target;
    };

    for (std::size_t j = 1; j <= nsteps; ++j) {
        const double target = (j == nsteps) ? t1 : t0 + static_cast<double>(j) * dt;
        advance(advance, target, 0);
        fill_sample(cur_t, cur);
        const Permutation sigma = detail::slot_to_canonical(cur);
        traj.perm_log.push_back(compose(inverse_permutation(sigma_prev), sigma));
        sigma_prev = sigma;
    }
    return traj;
}

}  // namespace polydyn
