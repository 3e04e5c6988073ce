#pragma once

#include <deque>
#include <string>
#include <vector>

#include "bellmd/fine.hpp"
#include "bellmd/sources.hpp"

namespace bellmd {

namespace detail {

inline std::string anchor_label(const std::vector<int>& tuple) {
    std::string s = "anchor";
    for (int v : tuple) s += "_" + std::to_string(v);
    return s;
}

// Deterministic point satisfying every parity condition of a binary-outcome
// bipartite functional whose setting pair lies in `allowed`. The conditions
// restricted to a proper subset of the constraint cycle are always
// satisfiable; BFS over the constraint graph with 0-seeded components.
template <class T>
DeterministicStrategy xor_satisfying_point(const BellFunctional<T>& f,
                                           const std::vector<std::size_t>& allowed) {
    if (!f.xor_targets())
        throw invalid_strategy_error("functional carries no parity-condition metadata");
    const ScenarioShape& shape = f.shape();
    if (shape.parties() != 2 || shape.outcomes()[0] != 2 || shape.outcomes()[1] != 2)
        throw invalid_strategy_error("parity-form strategies need a binary bipartite scenario");
    const int ma = shape.settings()[0];
    const int nodes = ma + shape.settings()[1];
    std::vector<std::vector<std::pair<int, int>>> adj(nodes); // (neighbor, parity bit)
    for (const XorTarget& t : *f.xor_targets()) {
        if (!std::binary_search(allowed.begin(), allowed.end(), t.z)) continue;
        const auto zt = shape.setting_tuple(t.z);
        adj[zt[0]].push_back({ma + zt[1], t.bit});
        adj[ma + zt[1]].push_back({zt[0], t.bit});
    }
    std::vector<int> value(nodes, -1);
    for (int start = 0; start < nodes; ++start) {
        if (value[start] >= 0) continue;
        value[start] = 0;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (auto [v, bit] : adj[u]) {
                int want = value[u] ^ bit;
                if (value[v] < 0) {
                    value[v] = want;
                    queue.push_back(v);
                } else if (value[v] != want) {
                    throw invalid_strategy_error(
                        "parity conditions on the allowed settings are contradictory");
                }
            }
        }
    }
    std::vector<std::vector<int>> assignment(2);
    assignment[0].assign(ma, 0);
    assignment[1].assign(shape.settings()[1], 0);
    for (int x = 0; x < ma; ++x) assignment[0][x] = value[x];
    for (int y = 0; y < shape.settings()[1]; ++y) assignment[1][y] = value[ma + y];
    return DeterministicStrategy(shape, std::move(assignment));
}

} // namespace detail

// Cross-set faking source: one lambda per anchor tuple, settings uniform over
// the anchor's cross set and excluded elsewhere, uniform prior. The induced
// p_obs is uniform and P_M = 1/(sum_k m_k - K + 1). No output assignments.
template <class T>
SourceStrategy<T> strategy_theorem1(const ScenarioShape& shape) {
    const std::size_t ns = shape.joint_settings();
    std::vector<std::string> labels;
    std::vector<std::vector<T>> conds;
    for (std::size_t a = 0; a < ns; ++a) {
        const CrossSet cs = cross_set(shape, shape.setting_tuple(a));
        std::vector<T> cond(ns, num_traits<T>::zero());
        const T w = num_traits<T>::from_fraction(1, static_cast<long long>(cs.members.size()));
        for (std::size_t z : cs.members) cond[z] = w;
        labels.push_back(detail::anchor_label(shape.setting_tuple(a)));
        conds.push_back(std::move(cond));
    }
    std::vector<T> prior(ns, num_traits<T>::from_fraction(1, static_cast<long long>(ns)));
    return SourceStrategy<T>(shape, std::move(labels), std::move(prior), std::move(conds));
}

// The tilted-CHSH faking mixture: four deterministic points, each never seeing
// its one forbidden setting pair. Reaches 4 + alpha, beyond no-signaling.
template <class T>
SourceStrategy<T> strategy_tilted_eq6(const T& alpha) {
    auto f = catalog_tilted_chsh<T>(alpha);
    const ScenarioShape shape = f.shape();
    // (a0, a1, b0, b1) in +-1 convention, +1 = outcome 0; entry k hides pair k
    const int pts[4][4] = {
        {+1, -1, -1, +1}, // hides (0,0)
        {+1, +1, +1, -1}, // hides (0,1)
        {+1, -1, +1, +1}, // hides (1,0)
        {+1, +1, +1, +1}, // hides (1,1)
    };
    std::vector<std::string> labels;
    std::vector<std::vector<T>> conds;
    std::vector<std::optional<DeterministicStrategy>> outputs;
    const T third = num_traits<T>::from_fraction(1, 3);
    for (int k = 0; k < 4; ++k) {
        std::vector<T> cond(4, third);
        cond[static_cast<std::size_t>(k)] = num_traits<T>::zero();
        auto to_out = [](int v) { return v > 0 ? 0 : 1; };
        DeterministicStrategy det(shape, {{to_out(pts[k][0]), to_out(pts[k][1])},
                                          {to_out(pts[k][2]), to_out(pts[k][3])}});
        labels.push_back("hide_" + std::to_string(k / 2) + "_" + std::to_string(k % 2));
        conds.push_back(std::move(cond));
        outputs.emplace_back(std::move(det));
    }
    std::vector<T> prior(4, num_traits<T>::from_fraction(1, 4));
    return SourceStrategy<T>(shape, std::move(labels), std::move(prior), std::move(conds),
                             std::move(outputs));
}

// Cross-set faking source with outputs chosen to win the functional on every
// allowed setting. For tilted CHSH this is exactly the four-point mixture
// above; for CHSH and chained the points come from the parity construction.
template <class T>
SourceStrategy<T> strategy_theorem1(const BellFunctional<T>& f) {
    if (f.name() == "tilted_chsh")
        return strategy_tilted_eq6<T>(f.limits().algebraic - T(4));
    const ScenarioShape& shape = f.shape();
    SourceStrategy<T> bare = strategy_theorem1<T>(shape);
    const std::size_t ns = shape.joint_settings();
    std::vector<std::optional<DeterministicStrategy>> outputs;
    for (std::size_t a = 0; a < ns; ++a) {
        const CrossSet cs = cross_set(shape, shape.setting_tuple(a));
        outputs.emplace_back(detail::xor_satisfying_point(f, cs.members));
    }
    return SourceStrategy<T>(shape, bare.lambdas(), bare.prior(), bare.conditionals(),
                             std::move(outputs));
}

// Hide-one variant: one lambda per used setting pair, settings uniform over
// everything except that single pair. P_M = 1/(|S| - 1); for the chained
// inequality that is 1/(m^2 - 1).
template <class T>
SourceStrategy<T> strategy_hide_one(const BellFunctional<T>& f) {
    const ScenarioShape& shape = f.shape();
    const std::size_t ns = shape.joint_settings();
    std::vector<std::string> labels;
    std::vector<std::vector<T>> conds;
    std::vector<std::optional<DeterministicStrategy>> outputs;
    const T w = num_traits<T>::from_fraction(1, static_cast<long long>(ns) - 1);
    for (std::size_t h : f.used_settings()) {
        std::vector<T> cond(ns, w);
        cond[h] = num_traits<T>::zero();
        std::vector<std::size_t> allowed;
        for (std::size_t z : f.used_settings())
            if (z != h) allowed.push_back(z);
        labels.push_back("hide_" + std::to_string(h));
        conds.push_back(std::move(cond));
        outputs.emplace_back(detail::xor_satisfying_point(f, allowed));
    }
    const auto L = static_cast<long long>(labels.size());
    std::vector<T> prior(labels.size(), num_traits<T>::from_fraction(1, L));
    return SourceStrategy<T>(shape, std::move(labels), std::move(prior), std::move(conds),
                             std::move(outputs));
}

// The two-level source: p(z|lambda) = p_max on the lambda's allowed set S_g
// and Q = (1 - |S_g| p_max)/|S_h| on its hidden set. Q must land in [0, p_max].
// The allowed sets (and output points) are those of the cross-set strategy.
template <class T>
SourceStrategy<T> strategy_general(const BellFunctional<T>& f, const T& p_max) {
    SourceStrategy<T> base = strategy_theorem1<T>(f);
    const std::size_t ns = f.shape().joint_settings();
    std::vector<std::vector<T>> conds;
    for (const auto& bc : base.conditionals()) {
        long long n_good = 0;
        for (const T& v : bc) n_good += !num_traits<T>::is_zero(v);
        const auto n_hidden = static_cast<long long>(ns) - n_good;
        if (n_hidden == 0) throw invalid_strategy_error("strategy_general: nothing to hide");
        const T q = (num_traits<T>::one() - T(n_good) * p_max) / T(n_hidden);
        if (q < num_traits<T>::zero() || q > p_max)
            throw invalid_strategy_error("strategy_general: normalization weight outside [0, p_max]");
        std::vector<T> cond(ns, q);
        for (std::size_t z = 0; z < ns; ++z)
            if (!num_traits<T>::is_zero(bc[z])) cond[z] = p_max;
        conds.push_back(std::move(cond));
    }
    return SourceStrategy<T>(f.shape(), base.lambdas(), base.prior(), std::move(conds),
                             base.outputs());
}

} // namespace bellmd
