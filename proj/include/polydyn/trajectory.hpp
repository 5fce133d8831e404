#pragma once

// Sampled trajectory of tracked particles in the complex plane, shared by the
// closed-form (zeros-of-a-polynomial) route and the direct ODE route.

#include <cstddef>
#include <vector>

#include "polydyn/types.hpp"

namespace polydyn {

using Permutation = std::vector<std::size_t>;

// compose(p, q)(i) = p[q[i]]  (apply q first, then p)
inline Permutation compose(const Permutation& p, const Permutation& q) {
    Permutation out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = p[q[i]];
    return out;
}

inline Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    return p;
}

inline Permutation inverse_permutation(const Permutation& p) {
    Permutation inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
    return inv;
}

inline std::size_t permutation_order(const Permutation& p) {
    Permutation acc = p;
    std::size_t order = 1;
    const Permutation id = identity_permutation(p.size());
    while (acc != id) {
        acc = compose(p, acc);
        ++order;
    }
    return order;
}

struct Trajectory {
    std::vector<double> times;          // strictly increasing sample grid
    std::vector<CVec> z;                // tracked zeros per sample, slot = particle
    std::vector<CVec> w;                // optional second derivatives per sample
    std::vector<Permutation> perm_log;  // per step; size = times.size() - 1

    // With sigma_j the map from tracked slot to canonical (lexicographically
    // sorted) zero label at sample j, perm_log[j] = sigma_j^{-1} o sigma_{j+1}.
    // Composing the log over [a, b] telescopes to sigma_a^{-1} o sigma_b; over
    // a closed period of the zero set that is the net particle exchange pi,
    // in the sense z_b[i] = z_a[pi(i)].
    Permutation net_exchange(std::size_t from_sample, std::size_t to_sample) const {
        Permutation acc = identity_permutation(particles());
        for (std::size_t j = from_sample; j < to_sample; ++j) acc = compose(acc, perm_log[j]);
        return acc;
    }

    std::size_t size() const { return times.size(); }
    std::size_t particles() const { return z.empty() ? 0 : z.front().size(); }
};

}  // namespace polydyn
