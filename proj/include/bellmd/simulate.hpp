#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bellmd/scenario.hpp"
#include "bellmd/sources.hpp"

namespace bellmd {

namespace detail {

// Exact inverse-CDF sampler: candidate i is chosen when the 64-bit draw u
// satisfies u < cum_i * 2^64, decided in integer arithmetic so runs reproduce
// bit-for-bit on every platform. Per-symbol bias is below 2^-63.
template <class T>
class CategoricalSampler;

template <>
class CategoricalSampler<Rational> {
public:
    explicit CategoricalSampler(const std::vector<Rational>& probs) {
        Rational cum;
        for (const Rational& p : probs) {
            cum += p;
            num_shifted_.push_back(cum.num() * BigInt::pow2(64));
            den_.push_back(cum.den());
        }
    }

    std::size_t sample(std::uint64_t u) const {
        const BigInt draw = BigInt::from_u64(u);
        for (std::size_t i = 0; i + 1 < den_.size(); ++i)
            if (draw * den_[i] < num_shifted_[i]) return i;
        return den_.size() - 1;
    }

private:
    std::vector<BigInt> num_shifted_;
    std::vector<BigInt> den_;
};

template <>
class CategoricalSampler<double> {
public:
    explicit CategoricalSampler(const std::vector<double>& probs) {
        double cum = 0;
        for (double p : probs) cum_.push_back(cum += p);
    }

    std::size_t sample(std::uint64_t u) const {
        const double draw = std::ldexp(static_cast<double>(u), -64);
        for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
            if (draw < cum_[i]) return i;
        return cum_.size() - 1;
    }

private:
    std::vector<double> cum_;
};

} // namespace detail

struct RunRecord {
    std::uint64_t round = 0;
    std::size_t lambda = 0;
    std::size_t z = 0;
    std::size_t o = 0;
};

struct ExperimentSummary {
    ScenarioShape shape;
    std::string functional_name;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    std::string rng_id = "mt19937_64";

    std::vector<std::uint64_t> lambda_counts;
    std::vector<std::uint64_t> setting_counts; // per joint setting
    std::vector<std::uint64_t> joint_counts;   // z * |O| + o

    std::vector<double> empirical_p_obs;
    std::vector<double> p_obs_std_err;
    std::vector<double> conditional_freq;    // z * |O| + o, 0 on unvisited settings
    std::vector<double> conditional_std_err; // same indexing
    std::optional<double> bell_value;
    std::vector<std::size_t> undefined_settings; // used settings never visited
};

struct SimulationResult {
    ExperimentSummary summary;
    std::optional<std::vector<RunRecord>> records;
};

namespace detail {

template <class T>
void finalize_summary(ExperimentSummary& s, const BellFunctional<T>& f) {
    const std::size_t ns = s.shape.joint_settings(), no = s.shape.joint_outcomes();
    const double N = static_cast<double>(s.rounds);
    s.empirical_p_obs.assign(ns, 0.0);
    s.p_obs_std_err.assign(ns, 0.0);
    s.conditional_freq.assign(ns * no, 0.0);
    s.conditional_std_err.assign(ns * no, 0.0);
    for (std::size_t z = 0; z < ns; ++z) {
        const double phat = static_cast<double>(s.setting_counts[z]) / N;
        s.empirical_p_obs[z] = phat;
        s.p_obs_std_err[z] = std::sqrt(phat * (1.0 - phat) / N);
        if (s.setting_counts[z] == 0) continue;
        const double nz = static_cast<double>(s.setting_counts[z]);
        for (std::size_t o = 0; o < no; ++o) {
            const double fr = static_cast<double>(s.joint_counts[z * no + o]) / nz;
            s.conditional_freq[z * no + o] = fr;
            s.conditional_std_err[z * no + o] = std::sqrt(fr * (1.0 - fr) / nz);
        }
    }
    s.undefined_settings.clear();
    double value = 0.0;
    bool defined = true;
    for (std::size_t z : f.used_settings()) {
        if (s.setting_counts[z] == 0) {
            s.undefined_settings.push_back(z);
            defined = false;
            continue;
        }
        // accumulate the per-setting numerator before the single division so
        // that deterministic runs produce exact term values
        double numer = 0.0;
        for (std::size_t o = 0; o < no; ++o) {
            const double c = to_double(f.coeff(z, o));
            if (c != 0.0) numer += c * static_cast<double>(s.joint_counts[z * no + o]);
        }
        value += numer / static_cast<double>(s.setting_counts[z]);
    }
    if (defined) s.bell_value = value;
    else s.bell_value.reset();
}

} // namespace detail

// i.i.d. round-by-round simulation of a Bell test run from a measurement-
// dependent source. Deterministic for a fixed seed. The per-term estimator is
// the frequentist plug-in p(o|z) = count(o,z)/count(z); used settings that
// were never visited leave the Bell value undefined and are reported.
template <class T>
SimulationResult simulate(const SourceStrategy<T>& s, const BellFunctional<T>& f,
                          std::uint64_t rounds, std::uint64_t seed, bool keep_records = false) {
    if (!(s.shape() == f.shape())) throw shape_error("simulate: strategy/functional shape mismatch");
    if (!s.has_all_outputs())
        throw invalid_strategy_error("simulate needs an output assignment for every lambda");
    if (rounds == 0) throw std::invalid_argument("simulate needs at least one round");
    if (keep_records && rounds > 1000000)
        throw std::invalid_argument("record keeping is limited to 10^6 rounds; summaries stream");

    const std::size_t ns = s.shape().joint_settings(), no = s.shape().joint_outcomes();
    detail::CategoricalSampler<T> pick_lambda(s.prior());
    std::vector<detail::CategoricalSampler<T>> pick_setting;
    pick_setting.reserve(s.lambdas().size());
    for (const auto& cond : s.conditionals()) pick_setting.emplace_back(cond);

    SimulationResult out;
    ExperimentSummary& sum = out.summary;
    sum.shape = s.shape();
    sum.functional_name = f.name();
    sum.rounds = rounds;
    sum.seed = seed;
    sum.lambda_counts.assign(s.lambdas().size(), 0);
    sum.setting_counts.assign(ns, 0);
    sum.joint_counts.assign(ns * no, 0);
    if (keep_records) out.records.emplace();

    std::mt19937_64 gen(seed);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const std::size_t l = pick_lambda.sample(gen());
        const std::size_t z = pick_setting[l].sample(gen());
        const std::size_t o = s.outputs()[l]->respond(z);
        ++sum.lambda_counts[l];
        ++sum.setting_counts[z];
        ++sum.joint_counts[z * no + o];
        if (out.records) out.records->push_back({r, l, z, o});
    }
    detail::finalize_summary(sum, f);
    return out;
}

// Chunked variant with documented seed derivation (chunk i uses seed + i), so
// chunks may be produced independently and merged; the merge is associative.
template <class T>
ExperimentSummary merge_summaries(ExperimentSummary a, const ExperimentSummary& b,
                                  const BellFunctional<T>& f) {
    if (!(a.shape == b.shape)) throw shape_error("merge: shape mismatch");
    a.rounds += b.rounds;
    for (std::size_t i = 0; i < a.lambda_counts.size(); ++i) a.lambda_counts[i] += b.lambda_counts[i];
    for (std::size_t i = 0; i < a.setting_counts.size(); ++i)
        a.setting_counts[i] += b.setting_counts[i];
    for (std::size_t i = 0; i < a.joint_counts.size(); ++i) a.joint_counts[i] += b.joint_counts[i];
    detail::finalize_summary(a, f);
    return a;
}

template <class T>
ExperimentSummary simulate_chunked(const SourceStrategy<T>& s, const BellFunctional<T>& f,
                                   std::uint64_t rounds, std::uint64_t seed,
                                   std::uint64_t chunk_size) {
    if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
    std::optional<ExperimentSummary> acc;
    std::uint64_t done = 0, chunk = 0;
    while (done < rounds) {
        const std::uint64_t n = std::min<std::uint64_t>(chunk_size, rounds - done);
        auto part = simulate(s, f, n, seed + chunk, false).summary;
        acc = acc ? merge_summaries(std::move(*acc), part, f) : part;
        done += n;
        ++chunk;
    }
    acc->seed = seed;
    return std::move(*acc);
}

// Conditional frequency table as a double-mode behavior. Every setting must
// have been visited at least once.
inline Behavior<double> reconstruct_behavior(const ExperimentSummary& s) {
    const std::size_t ns = s.shape.joint_settings(), no = s.shape.joint_outcomes();
    for (std::size_t z = 0; z < ns; ++z)
        if (s.setting_counts[z] == 0)
            throw std::domain_error("reconstruct_behavior: setting " + std::to_string(z) +
                                    " has zero counts");
    std::vector<double> table(ns * no, 0.0);
    for (std::size_t z = 0; z < ns; ++z)
        for (std::size_t o = 0; o < no; ++o)
            table[z * no + o] = static_cast<double>(s.joint_counts[z * no + o]) /
                                static_cast<double>(s.setting_counts[z]);
    return Behavior<double>(s.shape, std::move(table));
}

} // namespace bellmd
