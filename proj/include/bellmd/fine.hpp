#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bellmd/lp.hpp"
#include "bellmd/scenario.hpp"

namespace bellmd {

// The cross set of an anchor setting tuple: all joint settings that differ
// from the anchor in at most one coordinate. Its size is sum_k m_k - K + 1,
// and it is exactly the region a local model can always mimic.
struct CrossSet {
    ScenarioShape shape;
    std::vector<int> anchor;
    std::vector<std::size_t> members; // sorted joint setting indices

    bool contains(std::size_t z) const {
        return std::binary_search(members.begin(), members.end(), z);
    }
};

inline CrossSet cross_set(const ScenarioShape& shape, const std::vector<int>& anchor) {
    const std::size_t anchor_idx = shape.setting_index(anchor); // validates the anchor
    (void)anchor_idx;
    CrossSet cs{shape, anchor, {}};
    for (std::size_t z = 0; z < shape.joint_settings(); ++z) {
        const auto zt = shape.setting_tuple(z);
        int diff = 0;
        for (std::size_t i = 0; i < zt.size(); ++i) diff += zt[i] != anchor[i];
        if (diff <= 1) cs.members.push_back(z);
    }
    return cs;
}

// Joint distribution over one outcome per (party, setting) pair, stored as a
// sparse mixture of complete assignments. Its per-setting marginals form a
// local behavior.
template <class T>
struct JointOutcomeModel {
    ScenarioShape shape;
    std::vector<std::pair<T, DeterministicStrategy>> components;

    Behavior<T> to_behavior() const {
        const std::size_t ns = shape.joint_settings(), no = shape.joint_outcomes();
        std::vector<T> table(ns * no, num_traits<T>::zero());
        for (const auto& [w, det] : components)
            for (std::size_t z = 0; z < ns; ++z) table[z * no + det.respond(z)] += w;
        return Behavior<T>(shape, std::move(table));
    }

    T total_weight() const {
        T sum = num_traits<T>::zero();
        for (const auto& [w, det] : components) sum += w;
        return sum;
    }
};

namespace detail {

// outcome index over all parties except `skip`
template <class T>
std::size_t reduced_outcome_index(const ScenarioShape& shape, const std::vector<int>& ot, int skip) {
    std::size_t idx = 0;
    for (int i = 0; i < shape.parties(); ++i) {
        if (i == skip) continue;
        idx = idx * static_cast<std::size_t>(shape.outcomes()[i]) +
              static_cast<std::size_t>(ot[i]);
    }
    return idx;
}

} // namespace detail

// Fine-style construction: build a local behavior agreeing exactly with the
// no-signaling input on the whole cross set of the anchor. The joint model is
// assembled from the anchor-setting joint distribution and, for every other
// (party, setting), the conditional of that outcome given all other parties'
// anchor outcomes. Conditionals on zero-probability events default to uniform.
template <class T>
std::pair<Behavior<T>, JointOutcomeModel<T>> local_mimic(const Behavior<T>& p,
                                                         const std::vector<int>& anchor) {
    if (!is_no_signaling(p).ok)
        throw std::domain_error("local_mimic requires a no-signaling behavior");
    const ScenarioShape& shape = p.shape();
    const std::size_t anchor_z = shape.setting_index(anchor);
    const int K = shape.parties();
    const std::size_t no = shape.joint_outcomes();

    // conditional tables: cond[i][j][o_rest][o_i] with j a non-anchor setting
    // of party i and o_rest the joint outcome of all other parties at anchors
    std::vector<std::vector<std::vector<std::vector<T>>>> cond(K);
    for (int i = 0; i < K; ++i) {
        const int d_i = shape.outcomes()[i];
        std::size_t rest = 1;
        for (int k = 0; k < K; ++k)
            if (k != i) rest *= static_cast<std::size_t>(shape.outcomes()[k]);
        cond[i].assign(shape.settings()[i], {});
        for (int j = 0; j < shape.settings()[i]; ++j) {
            if (j == anchor[i]) continue;
            std::vector<int> zt = anchor;
            zt[i] = j;
            const std::size_t z = shape.setting_index(zt);
            std::vector<std::vector<T>> table(rest, std::vector<T>(d_i, num_traits<T>::zero()));
            std::vector<T> denom(rest, num_traits<T>::zero());
            for (std::size_t o = 0; o < no; ++o) {
                const auto ot = shape.outcome_tuple(o);
                const std::size_t r = detail::reduced_outcome_index<T>(shape, ot, i);
                table[r][ot[i]] += p.prob(z, o);
                denom[r] += p.prob(z, o);
            }
            for (std::size_t r = 0; r < rest; ++r) {
                if (num_traits<T>::is_zero(denom[r])) {
                    for (int a = 0; a < d_i; ++a)
                        table[r][a] = num_traits<T>::from_fraction(1, d_i);
                } else {
                    for (int a = 0; a < d_i; ++a) table[r][a] /= denom[r];
                }
            }
            cond[i][j] = std::move(table);
        }
    }

    // enumerate nonzero-weight complete assignments
    JointOutcomeModel<T> model{shape, {}};
    struct Slot {
        int party, setting;
        std::size_t rest;
    };
    for (std::size_t oa = 0; oa < no; ++oa) {
        const T base = p.prob(anchor_z, oa);
        if (num_traits<T>::is_zero(base)) continue;
        const auto oat = shape.outcome_tuple(oa);
        std::vector<Slot> slots;
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < shape.settings()[i]; ++j)
                if (j != anchor[i])
                    slots.push_back({i, j, detail::reduced_outcome_index<T>(shape, oat, i)});

        std::vector<int> pick(slots.size(), 0);
        while (true) {
            T w = base;
            for (std::size_t s = 0; s < slots.size(); ++s)
                w *= cond[slots[s].party][slots[s].setting][slots[s].rest][pick[s]];
            if (!num_traits<T>::is_zero(w)) {
                std::vector<std::vector<int>> assignment(K);
                for (int i = 0; i < K; ++i) assignment[i].assign(shape.settings()[i], 0);
                for (int i = 0; i < K; ++i) assignment[i][anchor[i]] = oat[i];
                for (std::size_t s = 0; s < slots.size(); ++s)
                    assignment[slots[s].party][slots[s].setting] = pick[s];
                model.components.emplace_back(w, DeterministicStrategy(shape, std::move(assignment)));
            }
            // odometer over outcome picks
            std::size_t s = slots.size();
            while (s-- > 0) {
                if (++pick[s] < shape.outcomes()[slots[s].party]) break;
                pick[s] = 0;
                if (s == 0) {
                    s = slots.size() + 1; // signal wrap-around
                    break;
                }
            }
            if (slots.empty() || s == slots.size() + 1) break;
        }
    }
    return {model.to_behavior(), std::move(model)};
}

// Lemma-1 tightness probe: can some local behavior agree with p on the cross
// set plus one extra setting? Decided exactly by LP feasibility.
template <class T>
bool tightness_check(const Behavior<T>& p, const std::vector<int>& anchor,
                     const std::vector<int>& extra, PivotRule rule = PivotRule::bland) {
    CrossSet cs = cross_set(p.shape(), anchor);
    const std::size_t extra_z = p.shape().setting_index(extra);
    if (cs.contains(extra_z))
        throw std::invalid_argument("tightness_check: extra setting already in the cross set");
    std::vector<std::size_t> subset = cs.members;
    subset.push_back(extra_z);
    std::sort(subset.begin(), subset.end());
    return local_membership_on_subset(p, subset, rule).feasible;
}

} // namespace bellmd
