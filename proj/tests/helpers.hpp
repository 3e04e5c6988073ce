#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately implementation-independent of the library paths it is
// used to check: vertex sets come from support-pattern enumeration, behaviors
// from explicit vertex lists.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "bellmd/scenario.hpp"
#include "bellmd/sources.hpp"

namespace testutil {

using bellmd::Behavior;
using bellmd::DeterministicStrategy;
using bellmd::Rational;
using bellmd::ScenarioShape;
using R = Rational;

// Dirichlet(1,...,1)-distributed weights, rationalized to denominator 1e6 and
// renormalized exactly so rational-mode tests stay exact.
inline std::vector<R> rational_dirichlet(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(1e-9, 1.0);
    std::vector<R> w(n);
    R sum(0);
    for (auto& v : w) {
        const double e = -std::log(uni(rng));
        v = R(static_cast<long long>(e * 1e6) + 1, 1);
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

// The 24 no-signaling polytope vertices of the 2-party/2-setting/2-outcome
// scenario: 16 deterministic points and 8 PR-box variants.
inline std::vector<Behavior<R>> ns_vertices_2222() {
    std::vector<Behavior<R>> out;
    for (const auto& det : bellmd::enumerate_local_vertices(ScenarioShape::chsh()))
        out.push_back(det.to_behavior<R>());
    for (int v = 0; v < 8; ++v)
        out.push_back(bellmd::pr_box<R>(v & 1, (v >> 1) & 1, (v >> 2) & 1));
    return out;
}

inline Behavior<R> random_ns_chsh(std::mt19937_64& rng) {
    static const std::vector<Behavior<R>> verts = ns_vertices_2222();
    const auto w = rational_dirichlet(verts.size(), rng);
    std::vector<std::pair<R, Behavior<R>>> parts;
    for (std::size_t i = 0; i < verts.size(); ++i) parts.push_back({w[i], verts[i]});
    return bellmd::mix_behaviors<R>(parts);
}

// Tripartite no-signaling sample: a Dirichlet mixture of local vertices,
// optionally mixed with a PR box on parties 0,1 tensored with an unbiased
// third party. Validated exactly by the caller via is_no_signaling.
inline Behavior<R> random_ns_tripartite(std::mt19937_64& rng) {
    const ScenarioShape shape({2, 2, 2}, {2, 2, 2});
    const auto locals = bellmd::enumerate_local_vertices(shape);
    const auto w = rational_dirichlet(locals.size(), rng);
    std::vector<std::pair<R, Behavior<R>>> parts;
    for (std::size_t i = 0; i < locals.size(); ++i)
        parts.push_back({w[i], locals[i].to_behavior<R>()});
    Behavior<R> local_mix = bellmd::mix_behaviors<R>(parts);
    if (rng() % 2 == 0) return local_mix;

    const std::size_t no = shape.joint_outcomes();
    std::vector<R> table(shape.joint_settings() * no, R(0));
    const auto pr = bellmd::pr_box<R>();
    const ScenarioShape pr_shape = ScenarioShape::chsh();
    for (std::size_t z = 0; z < shape.joint_settings(); ++z) {
        const auto zt = shape.setting_tuple(z);
        const std::size_t zpr = pr_shape.setting_index({zt[0], zt[1]});
        for (std::size_t o = 0; o < no; ++o) {
            const auto ot = shape.outcome_tuple(o);
            const std::size_t opr = pr_shape.outcome_index({ot[0], ot[1]});
            table[z * no + o] = pr.prob(zpr, opr) * R(1, 2);
        }
    }
    Behavior<R> embedded(shape, std::move(table));
    R mu(static_cast<long long>(rng() % 900 + 50), 1000);
    return bellmd::mix_behaviors<R>({{mu, embedded}, {R(1) - mu, local_mix}});
}

// Brute-force extreme points of { p >= 0, p <= bound, sum p = 1 } by support
// patterns: every coordinate pinned to 0 or to the bound except at most one
// free coordinate determined by normalization.
inline std::set<std::vector<R>> polytope_vertices_bruteforce(std::size_t n, const R& bound) {
    std::set<std::vector<R>> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        int at_bound = 0;
        for (std::size_t i = 0; i < n; ++i) at_bound += (mask >> i) & 1;
        R fixed_sum = R(at_bound) * bound;
        // no free coordinate
        if (fixed_sum == R(1)) {
            std::vector<R> v(n, R(0));
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) v[i] = bound;
            out.insert(v);
        }
        // one free coordinate outside the mask
        for (std::size_t free = 0; free < n; ++free) {
            if ((mask >> free) & 1) continue;
            R val = R(1) - fixed_sum;
            if (val < R(0) || val > bound) continue;
            std::vector<R> v(n, R(0));
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) v[i] = bound;
            v[free] = val;
            out.insert(v);
        }
    }
    return out;
}

} // namespace testutil
