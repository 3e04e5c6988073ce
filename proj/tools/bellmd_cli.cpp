// bellmd: measurement-dependence toolkit for Bell tests.
//
// Subcommands: bounds, maxbell, fine, simulate, mprime, strategy.
// Exit codes: 0 success, 1 computational infeasibility (certificate included
// in the JSON output), 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bellmd/bounds.hpp"
#include "bellmd/fine.hpp"
#include "bellmd/io.hpp"
#include "bellmd/lp.hpp"
#include "bellmd/simulate.hpp"
#include "bellmd/strategies.hpp"

using namespace bellmd;
using bellmd::io::json;

namespace {

struct InfeasibleExit {
    json payload;
};

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    return json::parse(f);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path + " for writing");
    f << text;
}

void emit(const json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

unsigned sweep_threads(std::size_t grid_size) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("BELLMD_NUM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(grid_size, 1)));
}

struct Options {
    std::string mode = "rational";
    std::string output;
    std::string inequality = "chsh";
    std::string functional_file;
    std::string alpha = "1";
    int m = 2;
    int parties = 3;
    std::string pobs;
    std::string pobs_file;
    std::string grid;
    std::string pmax;
    std::string format = "csv";
    std::string behavior_file;
    std::string anchor;
    std::string strategy_file;
    std::string model_file;
    std::string records_file;
    std::string strategy_type = "theorem1";
    std::uint64_t rounds = 100000;
    std::uint64_t seed = 0;
};

template <class T>
BellFunctional<T> resolve_functional(const Options& opt) {
    if (!opt.functional_file.empty())
        return io::functional_from_json<T>(load_json(opt.functional_file));
    if (opt.inequality == "chsh") return catalog_chsh<T>();
    if (opt.inequality == "tilted-chsh" || opt.inequality == "tilted_chsh")
        return catalog_tilted_chsh<T>(num_traits<T>::parse(opt.alpha));
    if (opt.inequality == "chained") return catalog_chained<T>(opt.m);
    throw std::invalid_argument("unknown inequality '" + opt.inequality + "'");
}

std::vector<int> parse_int_tuple(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find(',', pos);
        out.push_back(std::stoi(s.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

template <class T>
std::vector<T> parse_scalar_list(const std::string& s) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find(',', pos);
        out.push_back(num_traits<T>::parse(s.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

// grid specification start:stop:step, step > 0, stop inclusive
template <class T>
std::vector<T> parse_grid(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("grid must be start:stop:step");
    const T start = num_traits<T>::parse(s.substr(0, c1));
    const T stop = num_traits<T>::parse(s.substr(c1 + 1, c2 - c1 - 1));
    const T step = num_traits<T>::parse(s.substr(c2 + 1));
    if (!(step > num_traits<T>::zero())) throw std::invalid_argument("grid step must be positive");
    std::vector<T> grid;
    for (T p = start; !(p > stop); p += step) {
        grid.push_back(p);
        if (grid.size() > 100000) throw std::invalid_argument("grid has too many points");
    }
    if (grid.empty()) throw std::invalid_argument("grid is empty");
    return grid;
}

int run_bounds(const Options& opt) {
    json out;
    if (opt.inequality == "mermin") {
        const auto md = catalog_mermin_metadata(opt.parties);
        ScenarioShape shape(std::vector<int>(opt.parties, 2), std::vector<int>(opt.parties, 2));
        out["inequality"] = "mermin";
        out["parties"] = opt.parties;
        out["settings_total"] = md.settings_total;
        out["settings_used"] = md.settings_used;
        out["settings_allowed"] = md.settings_allowed;
        out["theorem1"] = io::bound_report_to_json(theorem1_threshold(shape));
        out["inequality_dependent"] = io::bound_report_to_json(ns_threshold(md));
    } else {
        auto f = resolve_functional<Rational>(opt);
        out["inequality"] = f.name();
        out["theorem1"] = io::bound_report_to_json(theorem1_threshold(f.shape()));
        if (f.settings_allowed() && f.symmetric_hiding())
            out["inequality_dependent"] = io::bound_report_to_json(ns_threshold(f));
        if (f.limits().quantum) {
            out["quantum_pm_threshold"] = quantum_pm_threshold(f);
            out["quantum_min_entropy_bits"] = -std::log2(quantum_pm_threshold(f));
        }
    }
    emit(out, opt.output);
    std::fprintf(stderr, "inequality-independent threshold: %s bits per run\n",
                 format_sig12(out["theorem1"]["per_run_min_entropy_bits"].get<double>()).c_str());
    return 0;
}

template <class T>
int run_maxbell(const Options& opt) {
    auto f = resolve_functional<T>(opt);
    std::vector<T> probs;
    if (!opt.pobs_file.empty()) {
        auto d = io::setting_distribution_from_json<T>(load_json(opt.pobs_file));
        probs = d.probs();
    } else if (!opt.pobs.empty()) {
        probs = parse_scalar_list<T>(opt.pobs);
    } else {
        probs.assign(f.shape().joint_settings(),
                     num_traits<T>::from_fraction(
                         1, static_cast<long long>(f.shape().joint_settings())));
    }
    SettingDistribution<T> p_obs(f.shape(), std::move(probs));

    if (!opt.grid.empty()) {
        auto grid = parse_grid<T>(opt.grid);
        auto rows = sweep_max_bell(f, p_obs, grid, {}, sweep_threads(grid.size()));
        if (opt.format == "csv") {
            std::string text = "p_max,bell_max,status\n";
            for (const auto& row : rows) {
                text += format_sig12(to_double(row.p_max)) + ",";
                if (row.status == LpStatus::optimal) text += format_sig12(to_double(row.value));
                text += std::string(",") + to_string(row.status) + "\n";
            }
            emit(text, opt.output);
        } else {
            json arr = json::array();
            for (const auto& row : rows) {
                json jr{{"p_max", io::scalar_to_json(row.p_max)},
                        {"status", to_string(row.status)}};
                jr["bell_max"] =
                    row.status == LpStatus::optimal ? io::scalar_to_json(row.value) : json(nullptr);
                arr.push_back(std::move(jr));
            }
            emit(arr, opt.output);
        }
        std::fprintf(stderr, "%zu grid points solved\n", rows.size());
        return 0;
    }

    const T pmax = opt.pmax.empty() ? p_obs.max_entry() : num_traits<T>::parse(opt.pmax);
    auto sol = max_bell(f, p_obs, pmax);
    json out{{"p_max", io::scalar_to_json(pmax)}, {"status", to_string(sol.status)}};
    if (sol.status == LpStatus::optimal) {
        out["bell_max"] = io::scalar_to_json(sol.value);
        out["bell_max_double"] = to_double(sol.value);
    } else if (sol.status == LpStatus::infeasible) {
        json cert = json::array();
        for (const auto& y : sol.farkas) cert.push_back(io::scalar_to_json(y));
        out["certificate"] = std::move(cert);
        throw InfeasibleExit{std::move(out)};
    }
    emit(out, opt.output);
    std::fprintf(stderr, "max Bell value %s at p_max %s\n",
                 format_sig12(to_double(sol.value)).c_str(),
                 format_sig12(to_double(pmax)).c_str());
    return 0;
}

template <class T>
int run_fine(const Options& opt) {
    auto behavior = io::behavior_from_json<T>(load_json(opt.behavior_file));
    const auto anchor = parse_int_tuple(opt.anchor);
    auto [mimic, model] = local_mimic(behavior, anchor);
    const auto cs = cross_set(behavior.shape(), anchor);
    json out{{"anchor", anchor},
             {"cross_set", cs.members},
             {"mimic", io::behavior_to_json(mimic)},
             {"decomposition", io::decomposition_to_json(model)}};
    emit(out, opt.output);
    std::fprintf(stderr, "mimic built: %zu deterministic components, cross set size %zu\n",
                 model.components.size(), cs.members.size());
    return 0;
}

template <class T>
int run_simulate(const Options& opt) {
    auto s = io::strategy_from_json<T>(load_json(opt.strategy_file));
    auto f = resolve_functional<T>(opt);
    const bool keep = !opt.records_file.empty();
    auto res = simulate(s, f, opt.rounds, opt.seed, keep);
    emit(io::summary_to_json(res.summary), opt.output);
    if (keep) {
        const auto& shape = s.shape();
        std::string text = "round,lambda";
        for (int i = 0; i < shape.parties(); ++i) text += ",z" + std::to_string(i + 1);
        for (int i = 0; i < shape.parties(); ++i) text += ",o" + std::to_string(i + 1);
        text += "\n";
        for (const auto& rec : *res.records) {
            text += std::to_string(rec.round) + "," + s.lambdas()[rec.lambda];
            for (int v : shape.setting_tuple(rec.z)) text += "," + std::to_string(v);
            for (int v : shape.outcome_tuple(rec.o)) text += "," + std::to_string(v);
            text += "\n";
        }
        emit(text, opt.records_file);
    }
    if (res.summary.bell_value)
        std::fprintf(stderr, "empirical Bell value %s over %llu rounds\n",
                     format_sig12(*res.summary.bell_value).c_str(),
                     static_cast<unsigned long long>(res.summary.rounds));
    else
        std::fprintf(stderr, "Bell value undefined: %zu used settings unvisited\n",
                     res.summary.undefined_settings.size());
    return 0;
}

template <class T>
int run_mprime(const Options& opt) {
    auto in = io::mprime_input_from_json<T>(load_json(opt.model_file));
    const T value = m_prime(in.posterior, in.p_obs);
    json out{{"m_prime", io::scalar_to_json(value)}, {"m_prime_double", to_double(value)}};
    if (in.model) {
        auto rep = m_prime_bound_check(*in.model, in.p_obs);
        out["bound_check"] = json{{"ok", rep.ok},
                                  {"max_deviation", io::scalar_to_json(rep.max_deviation)},
                                  {"slack", io::scalar_to_json(rep.slack)}};
    }
    emit(out, opt.output);
    std::fprintf(stderr, "m_prime = %s\n", format_sig12(to_double(value)).c_str());
    return 0;
}

template <class T>
int run_strategy(const Options& opt) {
    auto f = resolve_functional<T>(opt);
    SourceStrategy<T> s = [&] {
        if (opt.strategy_type == "theorem1") return strategy_theorem1<T>(f);
        if (opt.strategy_type == "hide-one") return strategy_hide_one<T>(f);
        if (opt.strategy_type == "tilted")
            return strategy_tilted_eq6<T>(num_traits<T>::parse(opt.alpha));
        if (opt.strategy_type == "general") {
            if (opt.pmax.empty()) throw std::invalid_argument("strategy general needs --pmax");
            return strategy_general<T>(f, num_traits<T>::parse(opt.pmax));
        }
        throw std::invalid_argument("unknown strategy type '" + opt.strategy_type + "'");
    }();
    emit(io::strategy_to_json(s), opt.output);
    std::fprintf(stderr, "strategy with %zu lambdas, P_M = %s\n", s.lambdas().size(),
                 format_sig12(to_double(p_max_merit(s))).c_str());
    return 0;
}

template <int (*RationalFn)(const Options&), int (*DoubleFn)(const Options&)>
int dispatch(const Options& opt) {
    if (opt.mode == "rational") return RationalFn(opt);
    if (opt.mode == "double") return DoubleFn(opt);
    throw std::invalid_argument("mode must be rational or double");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-dependence toolkit for Bell tests"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--mode", opt.mode, "numeric mode: rational (exact) or double");
        sub->add_option("-o,--output", opt.output, "output file (default stdout)");
    };
    auto add_functional = [&](CLI::App* sub) {
        sub->add_option("--inequality", opt.inequality,
                        "catalog inequality: chsh, tilted-chsh, chained, mermin");
        sub->add_option("--m", opt.m, "chained inequality settings per party");
        sub->add_option("--alpha", opt.alpha, "tilted CHSH weight in [0,2]");
        sub->add_option("--functional", opt.functional_file, "functional JSON file");
    };

    auto* bounds = app.add_subcommand("bounds", "min-entropy thresholds for an inequality");
    add_common(bounds);
    add_functional(bounds);
    bounds->add_option("--parties", opt.parties, "party count for mermin metadata");

    auto* maxbell = app.add_subcommand(
        "maxbell", "maximal Bell value under measurement dependence (single point or sweep)");
    add_common(maxbell);
    add_functional(maxbell);
    maxbell->add_option("--pobs", opt.pobs, "observed setting distribution, comma separated");
    maxbell->add_option("--pobs-file", opt.pobs_file, "observed setting distribution JSON");
    maxbell->add_option("--grid", opt.grid, "p_max grid start:stop:step");
    maxbell->add_option("--pmax", opt.pmax, "single p_max bound");
    maxbell->add_option("--format", opt.format, "sweep output: csv or json");

    auto* fine = app.add_subcommand("fine", "local mimic of a no-signaling behavior on a cross set");
    add_common(fine);
    fine->add_option("--behavior", opt.behavior_file, "behavior JSON file")->required();
    fine->add_option("--anchor", opt.anchor, "anchor setting tuple, e.g. 0,0")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "round-by-round Bell test simulation");
    add_common(simulate_cmd);
    add_functional(simulate_cmd);
    simulate_cmd->add_option("--strategy", opt.strategy_file, "source strategy JSON")->required();
    simulate_cmd->add_option("--rounds", opt.rounds, "number of rounds");
    simulate_cmd->add_option("--seed", opt.seed, "rng seed");
    simulate_cmd->add_option("--keep-records", opt.records_file, "write per-round records CSV");

    auto* mprime = app.add_subcommand("mprime", "measurement-dependence distance of a model");
    add_common(mprime);
    mprime->add_option("--model", opt.model_file, "model JSON file")->required();

    auto* strategy = app.add_subcommand("strategy", "emit a catalog faking strategy as JSON");
    add_common(strategy);
    add_functional(strategy);
    strategy->add_option("--type", opt.strategy_type, "theorem1, hide-one, tilted, or general");
    strategy->add_option("--pmax", opt.pmax, "p_max for the general strategy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bounds->parsed()) return run_bounds(opt);
        if (maxbell->parsed()) return dispatch<run_maxbell<Rational>, run_maxbell<double>>(opt);
        if (fine->parsed()) return dispatch<run_fine<Rational>, run_fine<double>>(opt);
        if (simulate_cmd->parsed())
            return dispatch<run_simulate<Rational>, run_simulate<double>>(opt);
        if (mprime->parsed()) return dispatch<run_mprime<Rational>, run_mprime<double>>(opt);
        if (strategy->parsed())
            return dispatch<run_strategy<Rational>, run_strategy<double>>(opt);
    } catch (const InfeasibleExit& e) {
        std::fputs((e.payload.dump(2) + "\n").c_str(), stdout);
        std::fprintf(stderr, "infeasible: see certificate in output\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
