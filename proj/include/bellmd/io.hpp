#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bellmd/bounds.hpp"
#include "bellmd/fine.hpp"
#include "bellmd/lp.hpp"
#include "bellmd/scenario.hpp"
#include "bellmd/simulate.hpp"
#include "bellmd/sources.hpp"

// JSON wire formats. Rational values serialize as "n/d" strings (plain
// integers stay unquoted strings like "2"); parsers additionally accept JSON
// integers, decimal strings and JSON floats (taken at their exact binary
// value). Nested tables are indexed settings-major: [z_1]...[z_K][o_1]...[o_K].
namespace bellmd::io {

using json = nlohmann::json;

template <class T>
json scalar_to_json(const T& v) {
    if constexpr (num_traits<T>::exact) return v.to_string();
    else return v;
}

template <class T>
T scalar_from_json(const json& j) {
    if constexpr (num_traits<T>::exact) {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long long>());
        if (j.is_number_float()) return Rational::from_double(j.get<double>());
    } else {
        if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
        if (j.is_number()) return j.get<double>();
    }
    throw std::invalid_argument("expected a number or a rational string");
}

inline json shape_to_json(const ScenarioShape& shape) {
    return json{{"settings", shape.settings()}, {"outcomes", shape.outcomes()}};
}

inline ScenarioShape shape_from_json(const json& j) {
    return ScenarioShape(j.at("settings").get<std::vector<int>>(),
                         j.at("outcomes").get<std::vector<int>>());
}

namespace detail {

// flat <-> nested along a mixed-radix index (settings radices then outcome radices)
template <class T>
json nested_from_flat(const std::vector<T>& flat, const std::vector<int>& radices,
                      std::size_t level, std::size_t offset, std::size_t stride) {
    if (level == radices.size()) return scalar_to_json(flat[offset]);
    const std::size_t next_stride = stride / static_cast<std::size_t>(radices[level]);
    json arr = json::array();
    for (int k = 0; k < radices[level]; ++k)
        arr.push_back(nested_from_flat(flat, radices, level + 1,
                                       offset + static_cast<std::size_t>(k) * next_stride,
                                       next_stride));
    return arr;
}

template <class T>
void flat_from_nested(const json& j, const std::vector<int>& radices, std::size_t level,
                      std::vector<T>& out) {
    if (level == radices.size()) {
        out.push_back(scalar_from_json<T>(j));
        return;
    }
    if (!j.is_array() || j.size() != static_cast<std::size_t>(radices[level]))
        throw std::invalid_argument("nested table has wrong arity at depth " +
                                    std::to_string(level));
    for (const auto& sub : j) flat_from_nested(sub, radices, level + 1, out);
}

inline std::vector<int> table_radices(const ScenarioShape& shape) {
    std::vector<int> radices = shape.settings();
    radices.insert(radices.end(), shape.outcomes().begin(), shape.outcomes().end());
    return radices;
}

} // namespace detail

template <class T>
json behavior_to_json(const Behavior<T>& b) {
    const auto radices = detail::table_radices(b.shape());
    return json{{"shape", shape_to_json(b.shape())},
                {"table", detail::nested_from_flat(b.table(), radices, 0, 0,
                                                   b.shape().joint_settings() *
                                                       b.shape().joint_outcomes())}};
}

template <class T>
Behavior<T> behavior_from_json(const json& j) {
    ScenarioShape shape = shape_from_json(j.at("shape"));
    std::vector<T> flat;
    flat.reserve(shape.joint_settings() * shape.joint_outcomes());
    detail::flat_from_nested<T>(j.at("table"), detail::table_radices(shape), 0, flat);
    return Behavior<T>(shape, std::move(flat));
}

template <class T>
json functional_to_json(const BellFunctional<T>& f) {
    const auto radices = detail::table_radices(f.shape());
    json limits{{"local", scalar_to_json(f.limits().local)},
                {"no_signaling", scalar_to_json(f.limits().no_signaling)},
                {"algebraic", scalar_to_json(f.limits().algebraic)}};
    limits["quantum"] = f.limits().quantum ? json(*f.limits().quantum) : json(nullptr);
    json out{{"shape", shape_to_json(f.shape())},
             {"coefficients",
              detail::nested_from_flat(f.coefficients(), radices, 0, 0,
                                       f.shape().joint_settings() * f.shape().joint_outcomes())},
             {"limits", std::move(limits)},
             {"name", f.name()},
             {"symmetric_hiding", f.symmetric_hiding()}};
    if (f.settings_allowed()) out["settings_allowed"] = *f.settings_allowed();
    if (f.hidden_set_size()) out["hidden_set_size"] = *f.hidden_set_size();
    if (f.xor_targets()) {
        json targets = json::array();
        for (const auto& t : *f.xor_targets()) targets.push_back({{"z", t.z}, {"bit", t.bit}});
        out["xor_targets"] = std::move(targets);
    }
    return out;
}

template <class T>
BellFunctional<T> functional_from_json(const json& j) {
    ScenarioShape shape = shape_from_json(j.at("shape"));
    std::vector<T> flat;
    detail::flat_from_nested<T>(j.at("coefficients"), detail::table_radices(shape), 0, flat);
    const auto& jl = j.at("limits");
    BellLimits<T> limits;
    limits.local = scalar_from_json<T>(jl.at("local"));
    limits.no_signaling = scalar_from_json<T>(jl.at("no_signaling"));
    limits.algebraic = scalar_from_json<T>(jl.at("algebraic"));
    if (jl.contains("quantum") && !jl.at("quantum").is_null())
        limits.quantum = jl.at("quantum").get<double>();
    BellFunctional<T> f(shape, std::move(flat), std::move(limits),
                        j.value("name", std::string{}));
    if (j.contains("settings_allowed") || j.contains("hidden_set_size"))
        f.set_hiding_metadata(j.value("settings_allowed", 0LL), j.value("hidden_set_size", 0),
                              j.value("symmetric_hiding", false));
    if (j.contains("xor_targets")) {
        std::vector<XorTarget> targets;
        for (const auto& t : j.at("xor_targets"))
            targets.push_back({t.at("z").get<std::size_t>(), t.at("bit").get<int>()});
        f.set_xor_targets(std::move(targets));
    }
    return f;
}

template <class T>
json setting_distribution_to_json(const SettingDistribution<T>& d) {
    json probs = json::array();
    for (const auto& p : d.probs()) probs.push_back(scalar_to_json(p));
    return json{{"shape", shape_to_json(d.shape())}, {"probs", std::move(probs)}};
}

template <class T>
SettingDistribution<T> setting_distribution_from_json(const json& j) {
    ScenarioShape shape = shape_from_json(j.at("shape"));
    std::vector<T> probs;
    for (const auto& p : j.at("probs")) probs.push_back(scalar_from_json<T>(p));
    return SettingDistribution<T>(shape, std::move(probs));
}

inline json assignment_to_json(const DeterministicStrategy& det) {
    return json(det.assignment());
}

inline DeterministicStrategy assignment_from_json(const ScenarioShape& shape, const json& j) {
    return DeterministicStrategy(shape, j.get<std::vector<std::vector<int>>>());
}

template <class T>
json strategy_to_json(const SourceStrategy<T>& s) {
    json conditionals = json::object();
    json outputs = json::object();
    for (std::size_t l = 0; l < s.lambdas().size(); ++l) {
        json cond = json::array();
        for (const auto& v : s.conditionals()[l]) cond.push_back(scalar_to_json(v));
        conditionals[s.lambdas()[l]] = std::move(cond);
        if (s.outputs()[l]) outputs[s.lambdas()[l]] = assignment_to_json(*s.outputs()[l]);
    }
    json prior = json::array();
    for (const auto& v : s.prior()) prior.push_back(scalar_to_json(v));
    json out{{"shape", shape_to_json(s.shape())},
             {"lambdas", s.lambdas()},
             {"prior", std::move(prior)},
             {"conditionals", std::move(conditionals)}};
    if (!outputs.empty()) out["outputs"] = std::move(outputs);
    return out;
}

template <class T>
SourceStrategy<T> strategy_from_json(const json& j) {
    ScenarioShape shape = shape_from_json(j.at("shape"));
    auto lambdas = j.at("lambdas").get<std::vector<std::string>>();
    std::vector<T> prior;
    for (const auto& v : j.at("prior")) prior.push_back(scalar_from_json<T>(v));
    std::vector<std::vector<T>> conds;
    std::vector<std::optional<DeterministicStrategy>> outputs(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        std::vector<T> cond;
        for (const auto& v : j.at("conditionals").at(lambdas[l]))
            cond.push_back(scalar_from_json<T>(v));
        conds.push_back(std::move(cond));
        if (j.contains("outputs") && j.at("outputs").contains(lambdas[l]))
            outputs[l] = assignment_from_json(shape, j.at("outputs").at(lambdas[l]));
    }
    return SourceStrategy<T>(shape, std::move(lambdas), std::move(prior), std::move(conds),
                             std::move(outputs));
}

template <class T>
json decomposition_to_json(const JointOutcomeModel<T>& model) {
    json arr = json::array();
    for (const auto& [w, det] : model.components)
        arr.push_back({{"weight", scalar_to_json(w)}, {"assignment", assignment_to_json(det)}});
    return arr;
}

inline json bound_report_to_json(const BoundReport& r) {
    return json{{"per_run_min_entropy_bits", r.per_run_min_entropy_bits},
                {"p_max_threshold", r.p_max_threshold},
                {"regime", to_string(r.regime)},
                {"inequality_dependent", r.inequality_dependent}};
}

inline json summary_to_json(const ExperimentSummary& s) {
    json out{{"shape", shape_to_json(s.shape)},
             {"functional", s.functional_name},
             {"rounds", s.rounds},
             {"seed", s.seed},
             {"rng", s.rng_id},
             {"seed_derivation", "chunk i uses seed + i"},
             {"lambda_counts", s.lambda_counts},
             {"setting_counts", s.setting_counts},
             {"empirical_p_obs", s.empirical_p_obs},
             {"p_obs_std_err", s.p_obs_std_err},
             {"undefined_settings", s.undefined_settings}};
    const std::size_t no = s.shape.joint_outcomes();
    json freq = json::array(), err = json::array(), counts = json::array();
    for (std::size_t z = 0; z < s.shape.joint_settings(); ++z) {
        json fz = json::array(), ez = json::array(), cz = json::array();
        for (std::size_t o = 0; o < no; ++o) {
            fz.push_back(s.conditional_freq[z * no + o]);
            ez.push_back(s.conditional_std_err[z * no + o]);
            cz.push_back(s.joint_counts[z * no + o]);
        }
        freq.push_back(std::move(fz));
        err.push_back(std::move(ez));
        counts.push_back(std::move(cz));
    }
    out["conditional_frequencies"] = std::move(freq);
    out["conditional_std_err"] = std::move(err);
    out["joint_counts"] = std::move(counts);
    out["bell_value"] = s.bell_value ? json(*s.bell_value) : json(nullptr);
    return out;
}

// model file for the measurement-dependence distance: posterior p(lambda|z)
// per setting, the observed p_obs, and optional local responses
template <class T>
struct MPrimeInput {
    ScenarioShape shape;
    SettingDistribution<T> p_obs;
    std::vector<std::vector<T>> posterior; // [z][lambda]
    std::optional<MdLocalModel<T>> model;  // responses present
};

template <class T>
MPrimeInput<T> mprime_input_from_json(const json& j) {
    MPrimeInput<T> in;
    in.shape = shape_from_json(j.at("shape"));
    std::vector<T> probs;
    for (const auto& v : j.at("p_obs")) probs.push_back(scalar_from_json<T>(v));
    in.p_obs = SettingDistribution<T>(in.shape, std::move(probs));
    for (const auto& row : j.at("posterior")) {
        std::vector<T> r;
        for (const auto& v : row) r.push_back(scalar_from_json<T>(v));
        in.posterior.push_back(std::move(r));
    }
    if (j.contains("response_a") && j.contains("response_b")) {
        MdLocalModel<T> model;
        model.shape = in.shape;
        model.posterior = in.posterior;
        auto parse_resp = [](const json& jr) {
            std::vector<std::vector<std::vector<T>>> resp;
            for (const auto& per_lambda : jr) {
                std::vector<std::vector<T>> rl;
                for (const auto& per_setting : per_lambda) {
                    std::vector<T> rs;
                    for (const auto& v : per_setting) rs.push_back(scalar_from_json<T>(v));
                    rl.push_back(std::move(rs));
                }
                resp.push_back(std::move(rl));
            }
            return resp;
        };
        model.resp_a = parse_resp(j.at("response_a"));
        model.resp_b = parse_resp(j.at("response_b"));
        in.model = std::move(model);
    }
    return in;
}

} // namespace bellmd::io
