#pragma once

#include <cstddef>
#include <thread>
#include <vector>

#include "bellmd/scenario.hpp"
#include "bellmd/simplex.hpp"
#include "bellmd/sources.hpp"

namespace bellmd {

// Product decomposition basis: local polytope vertices e_i, source polytope
// vertices f_j, implicit products g_ij(o,z) = e_i(o|z) f_j(z).
template <class T>
struct ProductVertexBasis {
    std::vector<DeterministicStrategy> locals;
    std::vector<std::vector<T>> sources;

    std::size_t size() const { return locals.size() * sources.size(); }
};

template <class T>
struct MaxBellSolution {
    LpStatus status = LpStatus::infeasible;
    T value{};
    std::vector<T> gamma; // weights over (i,j), row-major in (local, source)
    ProductVertexBasis<T> basis;
    std::vector<T> farkas; // one entry per joint setting constraint
};

template <class T>
struct MaxBellOptions {
    std::size_t basis_cap = 1000000;
    std::size_t vertex_cap = 1000000;
    PivotRule rule = PivotRule::bland;
};

// Maximal Bell value over measurement-dependent local models constrained to
// reproduce p_obs, with every conditional setting probability at most
// p_max_bound:   max sum_{o,z} c(o,z) p(o,z)/p_obs(z)   over
//   p(o,z) = sum_ij gamma_ij g_ij(o,z),  gamma >= 0,
//   sum_ij gamma_ij f_j(z) = p_obs(z) for every z.
template <class T>
MaxBellSolution<T> max_bell(const BellFunctional<T>& f, const SettingDistribution<T>& p_obs,
                            const T& p_max_bound, const MaxBellOptions<T>& opts = {}) {
    if (!(f.shape() == p_obs.shape())) throw shape_error("max_bell: shape mismatch");
    for (std::size_t z : f.used_settings())
        if (num_traits<T>::is_zero(p_obs.prob(z)))
            throw std::invalid_argument("max_bell: used setting has zero observed probability");

    const std::size_t ns = f.shape().joint_settings();
    MaxBellSolution<T> sol;

    const auto n_ll = static_cast<long long>(ns);
    if (p_max_bound * T(n_ll) < num_traits<T>::one()) {
        // no setting distribution at all satisfies the bound; certify with the
        // empty-column system
        std::vector<std::vector<T>> A(ns, std::vector<T>());
        auto res = solve_lp_feasible(A, p_obs.probs());
        sol.status = LpStatus::infeasible;
        sol.farkas = std::move(res.farkas);
        return sol;
    }

    sol.basis.locals = enumerate_local_vertices(f.shape(), opts.vertex_cap);
    sol.basis.sources = source_polytope_vertices<T>(ns, p_max_bound);
    const std::size_t nE = sol.basis.locals.size(), nF = sol.basis.sources.size();
    if (nE * nF > opts.basis_cap) {
        sol.status = LpStatus::capped;
        return sol;
    }

    // V[i][z]: functional weight collected by local vertex i at setting z
    std::vector<std::vector<T>> V(nE, std::vector<T>(ns, num_traits<T>::zero()));
    for (std::size_t i = 0; i < nE; ++i)
        for (std::size_t z = 0; z < ns; ++z)
            V[i][z] = f.coeff(z, sol.basis.locals[i].respond(z));

    std::vector<std::vector<T>> A(ns, std::vector<T>(nE * nF, num_traits<T>::zero()));
    std::vector<T> c(nE * nF, num_traits<T>::zero());
    for (std::size_t i = 0; i < nE; ++i)
        for (std::size_t j = 0; j < nF; ++j) {
            const std::size_t col = i * nF + j;
            T w = num_traits<T>::zero();
            for (std::size_t z = 0; z < ns; ++z) {
                const T& fz = sol.basis.sources[j][z];
                A[z][col] = fz;
                if (!num_traits<T>::is_zero(p_obs.prob(z)) && !num_traits<T>::is_zero(V[i][z]))
                    w += V[i][z] * fz / p_obs.prob(z);
            }
            c[col] = w;
        }

    auto res = solve_lp_max(A, p_obs.probs(), c, opts.rule);
    sol.status = res.status;
    if (res.status == LpStatus::optimal) {
        sol.value = res.objective;
        sol.gamma = std::move(res.x);
    } else if (res.status == LpStatus::infeasible) {
        sol.farkas = std::move(res.farkas);
    }
    return sol;
}

// p(o,z) reconstructed from the optimizer weights, indexed z * |O| + o.
template <class T>
std::vector<T> reconstruct_joint(const MaxBellSolution<T>& sol, const ScenarioShape& shape) {
    const std::size_t ns = shape.joint_settings(), no = shape.joint_outcomes();
    const std::size_t nF = sol.basis.sources.size();
    std::vector<T> joint(ns * no, num_traits<T>::zero());
    for (std::size_t i = 0; i < sol.basis.locals.size(); ++i)
        for (std::size_t j = 0; j < nF; ++j) {
            const T& g = sol.gamma[i * nF + j];
            if (num_traits<T>::is_zero(g)) continue;
            for (std::size_t z = 0; z < ns; ++z) {
                const T w = g * sol.basis.sources[j][z];
                if (num_traits<T>::is_zero(w)) continue;
                joint[z * no + sol.basis.locals[i].respond(z)] += w;
            }
        }
    return joint;
}

template <class T>
struct MembershipResult {
    bool feasible = false;
    std::vector<T> weights; // over local vertices when feasible
    std::vector<T> farkas;  // rows: (z, o) pairs over the subset, then normalization
};

// Is p locally reproducible on the given joint settings? LP feasibility over
// convex weights on the local vertices.
template <class T>
MembershipResult<T> local_membership_on_subset(const Behavior<T>& p,
                                               const std::vector<std::size_t>& subset,
                                               PivotRule rule = PivotRule::bland,
                                               std::size_t vertex_cap = 1000000) {
    if (subset.empty()) throw std::invalid_argument("local membership: empty setting subset");
    const auto locals = enumerate_local_vertices(p.shape(), vertex_cap);
    const std::size_t no = p.shape().joint_outcomes(), nE = locals.size();
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    A.reserve(subset.size() * no + 1);
    for (std::size_t z : subset) {
        if (z >= p.shape().joint_settings())
            throw std::invalid_argument("local membership: setting index out of range");
        for (std::size_t o = 0; o < no; ++o) {
            std::vector<T> row(nE, num_traits<T>::zero());
            for (std::size_t i = 0; i < nE; ++i)
                if (locals[i].respond(z) == o) row[i] = num_traits<T>::one();
            A.push_back(std::move(row));
            b.push_back(p.prob(z, o));
        }
    }
    A.emplace_back(nE, num_traits<T>::one());
    b.push_back(num_traits<T>::one());

    auto res = solve_lp_feasible(A, b, rule);
    MembershipResult<T> out;
    out.feasible = res.status == LpStatus::optimal;
    if (out.feasible) out.weights = std::move(res.x);
    else out.farkas = std::move(res.farkas);
    return out;
}

template <class T>
struct SweepRow {
    T p_max{};
    LpStatus status = LpStatus::infeasible;
    T value{};
};

// One max_bell solve per grid point. Points are independent; n_threads > 1
// distributes them round-robin.
template <class T>
std::vector<SweepRow<T>> sweep_max_bell(const BellFunctional<T>& f,
                                        const SettingDistribution<T>& p_obs,
                                        const std::vector<T>& grid,
                                        const MaxBellOptions<T>& opts = {},
                                        unsigned n_threads = 1) {
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (!(grid[g - 1] < grid[g])) throw std::invalid_argument("sweep grid must be ascending");
    std::vector<SweepRow<T>> rows(grid.size());
    auto run_point = [&](std::size_t g) {
        rows[g].p_max = grid[g];
        try {
            auto sol = max_bell(f, p_obs, grid[g], opts);
            rows[g].status = sol.status;
            if (sol.status == LpStatus::optimal) rows[g].value = sol.value;
        } catch (const std::invalid_argument&) {
            rows[g].status = LpStatus::infeasible;
        }
    };
    if (n_threads <= 1 || grid.size() <= 1) {
        for (std::size_t g = 0; g < grid.size(); ++g) run_point(g);
        return rows;
    }
    const unsigned workers = std::min<unsigned>(n_threads, static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t g = w; g < grid.size(); g += workers) run_point(g);
        });
    for (auto& th : pool) th.join();
    return rows;
}

} // namespace bellmd
