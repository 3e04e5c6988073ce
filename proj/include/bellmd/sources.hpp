#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellmd/scenario.hpp"
#include "bellmd/simplex.hpp"

namespace bellmd {

// Observed distribution over joint settings.
template <class T>
class SettingDistribution {
public:
    SettingDistribution() = default;

    SettingDistribution(ScenarioShape shape, std::vector<T> probs)
        : shape_(std::move(shape)), probs_(std::move(probs)) {
        if (probs_.size() != shape_.joint_settings())
            throw shape_error("setting distribution size mismatch");
        const T eps = num_traits<T>::feas_eps();
        T sum = num_traits<T>::zero();
        for (const T& v : probs_) {
            if (v < -eps) throw shape_error("setting distribution has a negative entry");
            sum += v;
        }
        if (scalar_abs<T>(sum - num_traits<T>::one()) > eps)
            throw shape_error("setting distribution does not sum to one");
    }

    static SettingDistribution uniform(const ScenarioShape& shape) {
        const auto n = static_cast<long long>(shape.joint_settings());
        return SettingDistribution(shape, std::vector<T>(shape.joint_settings(),
                                                         num_traits<T>::from_fraction(1, n)));
    }

    const ScenarioShape& shape() const { return shape_; }
    const std::vector<T>& probs() const { return probs_; }
    const T& prob(std::size_t z) const { return probs_[z]; }

    T max_entry() const {
        T best = probs_[0];
        for (const T& v : probs_)
            if (v > best) best = v;
        return best;
    }

private:
    ScenarioShape shape_;
    std::vector<T> probs_;
};

// Finite measurement-dependent source model: hidden alphabet, prior p(lambda),
// per-lambda setting distributions p(z|lambda), and optionally one
// deterministic output assignment per lambda for simulation.
template <class T>
class SourceStrategy {
public:
    SourceStrategy() = default;

    SourceStrategy(ScenarioShape shape, std::vector<std::string> lambdas, std::vector<T> prior,
                   std::vector<std::vector<T>> conditionals,
                   std::vector<std::optional<DeterministicStrategy>> outputs = {})
        : shape_(std::move(shape)), lambdas_(std::move(lambdas)), prior_(std::move(prior)),
          conditionals_(std::move(conditionals)), outputs_(std::move(outputs)) {
        const std::size_t L = lambdas_.size();
        if (L == 0) throw invalid_strategy_error("strategy needs at least one lambda");
        if (prior_.size() != L || conditionals_.size() != L)
            throw invalid_strategy_error("strategy field sizes disagree");
        if (outputs_.empty()) outputs_.resize(L);
        if (outputs_.size() != L) throw invalid_strategy_error("strategy output size mismatch");
        check_distribution(prior_, "prior");
        for (const auto& cond : conditionals_) {
            if (cond.size() != shape_.joint_settings())
                throw invalid_strategy_error("conditional arity mismatch");
            check_distribution(cond, "conditional");
        }
        for (const auto& out : outputs_)
            if (out && !(out->shape() == shape_))
                throw invalid_strategy_error("output strategy shape mismatch");
    }

    const ScenarioShape& shape() const { return shape_; }
    const std::vector<std::string>& lambdas() const { return lambdas_; }
    const std::vector<T>& prior() const { return prior_; }
    const std::vector<std::vector<T>>& conditionals() const { return conditionals_; }
    const std::vector<std::optional<DeterministicStrategy>>& outputs() const { return outputs_; }

    bool has_all_outputs() const {
        for (const auto& o : outputs_)
            if (!o) return false;
        return true;
    }

private:
    ScenarioShape shape_;
    std::vector<std::string> lambdas_;
    std::vector<T> prior_;
    std::vector<std::vector<T>> conditionals_;
    std::vector<std::optional<DeterministicStrategy>> outputs_;

    static void check_distribution(const std::vector<T>& v, const char* what) {
        const T eps = num_traits<T>::feas_eps();
        T sum = num_traits<T>::zero();
        for (const T& p : v) {
            if (p < -eps) throw invalid_strategy_error(std::string(what) + " has a negative entry");
            sum += p;
        }
        if (scalar_abs<T>(sum - num_traits<T>::one()) > eps)
            throw invalid_strategy_error(std::string(what) + " does not sum to one");
    }
};

// P_M / P_m: extreme conditional setting probabilities over (z, lambda).
template <class T>
T p_max_merit(const SourceStrategy<T>& s) {
    T best = s.conditionals()[0][0];
    for (const auto& cond : s.conditionals())
        for (const T& v : cond)
            if (v > best) best = v;
    return best;
}

template <class T>
T p_min_merit(const SourceStrategy<T>& s) {
    T best = s.conditionals()[0][0];
    for (const auto& cond : s.conditionals())
        for (const T& v : cond)
            if (v < best) best = v;
    return best;
}

template <class T>
T guessing_probability(const SourceStrategy<T>& s) {
    T acc = num_traits<T>::zero();
    for (std::size_t l = 0; l < s.lambdas().size(); ++l) {
        T mx = s.conditionals()[l][0];
        for (const T& v : s.conditionals()[l])
            if (v > mx) mx = v;
        acc += s.prior()[l] * mx;
    }
    return acc;
}

template <class T>
SettingDistribution<T> induced_p_obs(const SourceStrategy<T>& s) {
    std::vector<T> probs(s.shape().joint_settings(), num_traits<T>::zero());
    for (std::size_t l = 0; l < s.lambdas().size(); ++l)
        for (std::size_t z = 0; z < probs.size(); ++z)
            probs[z] += s.prior()[l] * s.conditionals()[l][z];
    return SettingDistribution<T>(s.shape(), std::move(probs));
}

// single-round min-entropy of the settings given the hidden variable, in bits
template <class T>
double min_entropy(const SourceStrategy<T>& s) {
    return -num_traits<T>::log2(guessing_probability(s));
}

template <class T>
double min_entropy_unconditioned(const SourceStrategy<T>& s) {
    return -num_traits<T>::log2(induced_p_obs(s).max_entry());
}

template <class T>
struct SVParams {
    T p_min{};
    T p_max{};
};

// i.i.d. Santha-Vazirani predicate on the joint-settings alphabet
template <class T>
bool sv_check(const SourceStrategy<T>& s, const SVParams<T>& params) {
    const auto d = static_cast<long long>(s.shape().joint_settings());
    const T inv_d = num_traits<T>::from_fraction(1, d);
    if (params.p_min < num_traits<T>::zero() || params.p_min > inv_d || params.p_max < inv_d ||
        params.p_max > num_traits<T>::one())
        throw std::invalid_argument("sv_check: need 0 <= p_min <= 1/d <= p_max <= 1");
    for (const auto& cond : s.conditionals())
        for (const T& v : cond)
            if (v < params.p_min || v > params.p_max) return false;
    return true;
}

// Bayes inversion p(lambda|z) = p(z|lambda) p(lambda) / p_obs(z), indexed [z][lambda].
// Settings with zero observed probability have no posterior; that is an error.
template <class T>
std::vector<std::vector<T>> lambda_posterior(const SourceStrategy<T>& s) {
    const auto p_obs = induced_p_obs(s);
    const std::size_t L = s.lambdas().size(), ns = s.shape().joint_settings();
    std::vector<std::vector<T>> post(ns, std::vector<T>(L, num_traits<T>::zero()));
    for (std::size_t z = 0; z < ns; ++z) {
        if (num_traits<T>::is_zero(p_obs.prob(z)))
            throw std::domain_error("lambda_posterior: setting has zero observed probability");
        for (std::size_t l = 0; l < L; ++l)
            post[z][l] = s.prior()[l] * s.conditionals()[l][z] / p_obs.prob(z);
    }
    return post;
}

// Observed conditional statistics of a strategy whose outputs are all set:
// p(o|z) = sum_lambda p(lambda|z) [o = output_lambda(z)].
template <class T>
Behavior<T> observed_behavior(const SourceStrategy<T>& s) {
    if (!s.has_all_outputs())
        throw invalid_strategy_error("observed_behavior needs an output assignment per lambda");
    const auto post = lambda_posterior(s);
    const std::size_t ns = s.shape().joint_settings(), no = s.shape().joint_outcomes();
    std::vector<T> table(ns * no, num_traits<T>::zero());
    for (std::size_t z = 0; z < ns; ++z)
        for (std::size_t l = 0; l < s.lambdas().size(); ++l)
            table[z * no + s.outputs()[l]->respond(z)] += post[z][l];
    return Behavior<T>(s.shape(), std::move(table));
}

// Extreme points of the truncated simplex { p : sum p = 1, 0 <= p(z) <= p_max }:
// k = floor(1/p_max) entries at p_max, one entry carrying the remainder when it
// is nonzero, zeros elsewhere, over all placements.
template <class T>
std::vector<std::vector<T>> source_polytope_vertices(std::size_t num_settings, T p_max_bound) {
    const auto n = static_cast<long long>(num_settings);
    if (num_settings == 0) throw std::invalid_argument("source polytope needs settings");
    if (p_max_bound * T(n) < num_traits<T>::one())
        throw std::invalid_argument("source polytope infeasible: p_max below 1/num_settings");
    if (p_max_bound > num_traits<T>::one()) p_max_bound = num_traits<T>::one();

    long long k;
    if constexpr (num_traits<T>::exact) {
        k = (num_traits<T>::one() / p_max_bound).floor().to_int64();
    } else {
        k = static_cast<long long>(std::floor(1.0 / p_max_bound + 1e-12));
    }
    const T remainder = num_traits<T>::one() - T(k) * p_max_bound;
    const bool has_rem = !num_traits<T>::is_zero(remainder);

    std::vector<std::vector<T>> out;
    std::vector<std::size_t> comb(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = i;
    auto emit = [&]() {
        std::vector<bool> at_max(num_settings, false);
        for (std::size_t pos : comb) at_max[pos] = true;
        if (!has_rem) {
            std::vector<T> v(num_settings, num_traits<T>::zero());
            for (std::size_t z = 0; z < num_settings; ++z)
                if (at_max[z]) v[z] = p_max_bound;
            out.push_back(std::move(v));
            return;
        }
        for (std::size_t rz = 0; rz < num_settings; ++rz) {
            if (at_max[rz]) continue;
            std::vector<T> v(num_settings, num_traits<T>::zero());
            for (std::size_t z = 0; z < num_settings; ++z)
                if (at_max[z]) v[z] = p_max_bound;
            v[rz] = remainder;
            out.push_back(std::move(v));
        }
    };
    // enumerate k-combinations of {0..n-1} in lexicographic order
    while (true) {
        emit();
        std::size_t i = comb.size();
        while (i-- > 0) {
            if (comb[i] < num_settings - (comb.size() - i)) {
                ++comb[i];
                for (std::size_t j = i + 1; j < comb.size(); ++j) comb[j] = comb[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
        if (comb.empty()) return out; // k == n edge: single vertex
    }
}

enum class PriorStatus { feasible, infeasible };

template <class T>
struct PriorSolution {
    PriorStatus status = PriorStatus::infeasible;
    std::vector<T> prior;
    bool unique = false;    // conditional matrix has full column rank
    std::vector<T> farkas;  // rows: one per setting, then the normalization row
};

namespace detail {

// column rank of the (rows x cols) matrix via exact/tolerant Gaussian elimination
template <class T>
std::size_t column_rank(std::vector<std::vector<T>> mat) {
    const std::size_t rows = mat.size();
    if (rows == 0) return 0;
    const std::size_t cols = mat[0].size();
    const T eps = num_traits<T>::feas_eps();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && !(scalar_abs<T>(mat[piv][c]) > eps)) ++piv;
        if (piv == rows) continue;
        std::swap(mat[piv], mat[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || num_traits<T>::is_zero(mat[r][c])) continue;
            const T f = mat[r][c] / mat[rank][c];
            for (std::size_t cc = c; cc < cols; ++cc) mat[r][cc] -= f * mat[rank][cc];
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// Solve sum_lambda p(z|lambda) p(lambda) = target(z) for a prior p >= 0.
// Reports uniqueness when the conditional matrix has full column rank. Among
// multiple solutions the returned prior maximizes the smallest entry (solved
// as a secondary LP), which makes the output deterministic and as spread-out
// as the constraints allow.
template <class T>
PriorSolution<T> solve_prior(const std::vector<std::vector<T>>& conditionals,
                             const SettingDistribution<T>& target) {
    const std::size_t L = conditionals.size();
    const std::size_t ns = target.shape().joint_settings();
    if (L == 0) throw std::invalid_argument("solve_prior: empty conditional set");
    for (const auto& c : conditionals)
        if (c.size() != ns) throw std::invalid_argument("solve_prior: conditional arity mismatch");

    // system matrix: rows = settings + normalization, columns = lambdas
    std::vector<std::vector<T>> A(ns + 1, std::vector<T>(L, num_traits<T>::zero()));
    std::vector<T> b(ns + 1, num_traits<T>::zero());
    for (std::size_t z = 0; z < ns; ++z) {
        for (std::size_t l = 0; l < L; ++l) A[z][l] = conditionals[l][z];
        b[z] = target.prob(z);
    }
    for (std::size_t l = 0; l < L; ++l) A[ns][l] = num_traits<T>::one();
    b[ns] = num_traits<T>::one();

    PriorSolution<T> out;
    auto feas = solve_lp_feasible(A, b);
    if (feas.status == LpStatus::infeasible) {
        out.status = PriorStatus::infeasible;
        out.farkas = std::move(feas.farkas);
        return out;
    }
    out.status = PriorStatus::feasible;
    out.unique = detail::column_rank(A) == L;
    if (out.unique) {
        out.prior = std::move(feas.x);
        return out;
    }
    // maximin refinement: maximize t with p(lambda) - t - slack = 0
    const std::size_t ncols = L + 1 + L; // priors, t, slacks
    std::vector<std::vector<T>> A2(ns + 1 + L, std::vector<T>(ncols, num_traits<T>::zero()));
    std::vector<T> b2(ns + 1 + L, num_traits<T>::zero());
    for (std::size_t r = 0; r < ns + 1; ++r) {
        for (std::size_t l = 0; l < L; ++l) A2[r][l] = A[r][l];
        b2[r] = b[r];
    }
    for (std::size_t l = 0; l < L; ++l) {
        A2[ns + 1 + l][l] = num_traits<T>::one();
        A2[ns + 1 + l][L] = -num_traits<T>::one();
        A2[ns + 1 + l][L + 1 + l] = -num_traits<T>::one();
    }
    std::vector<T> c(ncols, num_traits<T>::zero());
    c[L] = num_traits<T>::one();
    auto refined = solve_lp_max(A2, b2, c);
    if (refined.status == LpStatus::optimal)
        out.prior.assign(refined.x.begin(), refined.x.begin() + L);
    else
        out.prior = std::move(feas.x); // fall back to the witness point
    return out;
}

// M' = max_z 2 D(p(Lambda|z), p(Lambda)) with p(Lambda) the p_obs-average.
// posterior is indexed [z][lambda].
template <class T>
T m_prime(const std::vector<std::vector<T>>& posterior, const SettingDistribution<T>& p_obs) {
    const std::size_t ns = p_obs.shape().joint_settings();
    if (posterior.size() != ns) throw std::invalid_argument("m_prime: posterior arity mismatch");
    const std::size_t L = posterior[0].size();
    std::vector<T> avg(L, num_traits<T>::zero());
    for (std::size_t z = 0; z < ns; ++z) {
        if (posterior[z].size() != L) throw std::invalid_argument("m_prime: ragged posterior");
        for (std::size_t l = 0; l < L; ++l) avg[l] += posterior[z][l] * p_obs.prob(z);
    }
    T best = num_traits<T>::zero();
    for (std::size_t z = 0; z < ns; ++z) {
        T dist = num_traits<T>::zero();
        for (std::size_t l = 0; l < L; ++l) dist += scalar_abs<T>(posterior[z][l] - avg[l]);
        if (dist > best) best = dist;
    }
    return best;
}

// Bipartite measurement-dependent local model given through p(lambda|xy) and
// local response functions.
template <class T>
struct MdLocalModel {
    ScenarioShape shape;                             // bipartite
    std::vector<std::vector<T>> posterior;           // [z][lambda]
    std::vector<std::vector<std::vector<T>>> resp_a; // [lambda][x][a]
    std::vector<std::vector<std::vector<T>>> resp_b; // [lambda][y][b]
};

template <class T>
struct MPrimeBoundReport {
    bool ok = false;
    T m_prime_value{};
    T max_deviation{};
    T slack{}; // m_prime - max_deviation
};

// Verifies |p^lambda(ab|xy) - p(ab|xy)| <= M' entrywise, where p^lambda uses
// p(lambda|xy) and p uses the averaged p(lambda).
template <class T>
MPrimeBoundReport<T> m_prime_bound_check(const MdLocalModel<T>& model,
                                         const SettingDistribution<T>& p_obs) {
    if (model.shape.parties() != 2)
        throw std::invalid_argument("m_prime_bound_check: bipartite models only");
    const std::size_t ns = model.shape.joint_settings();
    const std::size_t L = model.posterior.empty() ? 0 : model.posterior[0].size();
    MPrimeBoundReport<T> report;
    report.m_prime_value = m_prime(model.posterior, p_obs);

    std::vector<T> avg(L, num_traits<T>::zero());
    for (std::size_t z = 0; z < ns; ++z)
        for (std::size_t l = 0; l < L; ++l) avg[l] += model.posterior[z][l] * p_obs.prob(z);

    const int da = model.shape.outcomes()[0], db = model.shape.outcomes()[1];
    for (std::size_t z = 0; z < ns; ++z) {
        const auto zt = model.shape.setting_tuple(z);
        for (int a = 0; a < da; ++a)
            for (int b = 0; b < db; ++b) {
                T dep = num_traits<T>::zero(), indep = num_traits<T>::zero();
                for (std::size_t l = 0; l < L; ++l) {
                    const T joint = model.resp_a[l][zt[0]][a] * model.resp_b[l][zt[1]][b];
                    dep += joint * model.posterior[z][l];
                    indep += joint * avg[l];
                }
                const T dev = scalar_abs<T>(dep - indep);
                if (dev > report.max_deviation) report.max_deviation = dev;
            }
    }
    report.slack = report.m_prime_value - report.max_deviation;
    report.ok = !(report.max_deviation > report.m_prime_value);
    return report;
}

} // namespace bellmd
