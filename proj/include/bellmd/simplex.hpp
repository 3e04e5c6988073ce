#pragma once

#include <cstddef>
#include <vector>

#include "bellmd/errors.hpp"
#include "bellmd/scalar.hpp"

namespace bellmd {

enum class LpStatus { optimal, infeasible, unbounded, capped };

enum class PivotRule { bland, dantzig };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::capped: return "capped";
    }
    return "?";
}

template <class T>
struct LpResult {
    LpStatus status = LpStatus::infeasible;
    T objective{};
    std::vector<T> x;      // structural variable values when optimal
    std::vector<T> farkas; // when infeasible: y with y.b > 0 and y.A_j <= 0 for every column
};

namespace detail {

// Dense two-phase tableau simplex over an exact or floating scalar.
// Standard form: optimize over { x >= 0 : A x = b }. Bland's rule is the
// default (guaranteed termination, the reference configuration for exact
// arithmetic); Dantzig pricing is available as an independent cross-check.
template <class T>
class SimplexTableau {
public:
    SimplexTableau(const std::vector<std::vector<T>>& A, std::vector<T> b, PivotRule rule)
        : m_(A.size()), n_(A.empty() ? 0 : A[0].size()), rule_(rule) {
        eps_ = num_traits<T>::feas_eps();
        row_sign_.assign(m_, 1);
        rows_.assign(m_, std::vector<T>(n_ + m_ + 1, num_traits<T>::zero()));
        for (std::size_t i = 0; i < m_; ++i) {
            if (A[i].size() != n_) throw shape_error("lp: ragged constraint matrix");
            bool neg = b[i] < num_traits<T>::zero();
            if (neg) row_sign_[i] = -1;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = neg ? -A[i][j] : A[i][j];
            rows_[i][n_ + i] = num_traits<T>::one();
            rows_[i][n_ + m_] = neg ? -b[i] : b[i];
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        active_.assign(m_, true);
        banned_.assign(n_ + m_, false);
    }

    // phase 1; returns true if a feasible basis was found
    bool make_feasible(LpResult<T>& result) {
        cost_.assign(n_ + m_ + 1, num_traits<T>::zero());
        for (std::size_t j = 0; j <= n_ + m_; ++j) {
            T colsum = num_traits<T>::zero();
            for (std::size_t i = 0; i < m_; ++i) colsum += rows_[i][j];
            if (j < n_) cost_[j] = -colsum;
            else if (j == n_ + m_) cost_[j] = -colsum; // -objective
        }
        if (run() != LpStatus::optimal)
            throw resource_error("lp: phase 1 did not converge"); // cannot happen in exact mode
        T infeasibility = -cost_[n_ + m_];
        if (infeasibility > eps_) {
            result.status = LpStatus::infeasible;
            result.farkas.assign(m_, num_traits<T>::zero());
            // y = c_B B^{-1}; the artificial columns carry B^{-1}, and the
            // phase-1 reduced cost of artificial i is 1 - y_i
            for (std::size_t i = 0; i < m_; ++i) {
                T y = num_traits<T>::one() - cost_[n_ + i];
                result.farkas[i] = row_sign_[i] < 0 ? -y : y;
            }
            return false;
        }
        // pivot leftover artificials out; rows that cannot be pivoted are
        // redundant and get deactivated
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t j = 0;
            for (; j < n_; ++j)
                if (scalar_abs<T>(rows_[i][j]) > eps_) break;
            if (j < n_) pivot(i, j);
            else active_[i] = false;
        }
        for (std::size_t j = n_; j < n_ + m_; ++j) banned_[j] = true;
        return true;
    }

    // phase 2: maximize c.x from a feasible basis
    LpStatus improve(const std::vector<T>& c) {
        cost_.assign(n_ + m_ + 1, num_traits<T>::zero());
        // minimize -c: reduced costs  -c_j + sum_i cB_i row_ij
        for (std::size_t j = 0; j <= n_ + m_; ++j) {
            T acc = (j < n_) ? -c[j] : num_traits<T>::zero();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i] || basis_[i] >= n_) continue;
                acc += c[basis_[i]] * rows_[i][j];
            }
            cost_[j] = acc;
        }
        return run();
    }

    std::vector<T> solution() const {
        std::vector<T> x(n_, num_traits<T>::zero());
        for (std::size_t i = 0; i < m_; ++i)
            if (active_[i] && basis_[i] < n_) x[basis_[i]] = rows_[i][n_ + m_];
        return x;
    }

private:
    std::size_t m_, n_;
    PivotRule rule_;
    T eps_;
    std::vector<std::vector<T>> rows_;
    std::vector<T> cost_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
    std::vector<bool> banned_;
    std::vector<int> row_sign_;

    LpStatus run() {
        const std::size_t max_iter = 2000 + 200 * (n_ + m_);
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            std::size_t enter = n_ + m_;
            if (rule_ == PivotRule::bland) {
                for (std::size_t j = 0; j < n_ + m_; ++j)
                    if (!banned_[j] && cost_[j] < -eps_) {
                        enter = j;
                        break;
                    }
            } else {
                T best = -eps_;
                for (std::size_t j = 0; j < n_ + m_; ++j)
                    if (!banned_[j] && cost_[j] < best) {
                        best = cost_[j];
                        enter = j;
                    }
            }
            if (enter == n_ + m_) return LpStatus::optimal;

            std::size_t leave = m_;
            T best_ratio = num_traits<T>::zero();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i] || !(rows_[i][enter] > eps_)) continue;
                T ratio = rows_[i][n_ + m_] / rows_[i][enter];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return LpStatus::unbounded;
            pivot(leave, enter);
        }
        throw resource_error("lp: iteration cap hit");
    }

    void pivot(std::size_t r, std::size_t j) {
        const T piv = rows_[r][j];
        for (auto& v : rows_[r]) v /= piv;
        rows_[r][j] = num_traits<T>::one(); // exact one after normalization
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const T factor = rows_[i][j];
            if (num_traits<T>::is_zero(factor)) continue;
            for (std::size_t k = 0; k <= n_ + m_; ++k) rows_[i][k] -= factor * rows_[r][k];
            rows_[i][j] = num_traits<T>::zero();
        }
        const T cfactor = cost_[j];
        if (!num_traits<T>::is_zero(cfactor)) {
            for (std::size_t k = 0; k <= n_ + m_; ++k) cost_[k] -= cfactor * rows_[r][k];
            cost_[j] = num_traits<T>::zero();
        }
        basis_[r] = j;
    }
};

} // namespace detail

// maximize c.x over { x >= 0 : A x = b }
template <class T>
LpResult<T> solve_lp_max(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                         const std::vector<T>& c, PivotRule rule = PivotRule::bland) {
    LpResult<T> result;
    detail::SimplexTableau<T> tab(A, b, rule);
    if (!tab.make_feasible(result)) return result;
    result.status = tab.improve(c);
    if (result.status != LpStatus::optimal) return result;
    result.x = tab.solution();
    result.objective = num_traits<T>::zero();
    for (std::size_t j = 0; j < c.size(); ++j) result.objective += c[j] * result.x[j];
    return result;
}

// feasibility of { x >= 0 : A x = b }; on success x holds a feasible point
template <class T>
LpResult<T> solve_lp_feasible(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                              PivotRule rule = PivotRule::bland) {
    LpResult<T> result;
    detail::SimplexTableau<T> tab(A, b, rule);
    if (!tab.make_feasible(result)) return result;
    result.status = LpStatus::optimal;
    result.x = tab.solution();
    result.objective = num_traits<T>::zero();
    return result;
}

} // namespace bellmd
