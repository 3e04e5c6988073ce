#pragma once

#include <cmath>

#include "bellmd/scenario.hpp"
#include "bellmd/sources.hpp"

namespace bellmd {

enum class BoundRegime { no_signaling_limit, quantum_limit };

inline const char* to_string(BoundRegime r) {
    return r == BoundRegime::no_signaling_limit ? "no_signaling_limit" : "quantum_limit";
}

// Per-run critical min-entropy: at or below this many bits of conditional
// min-entropy per run, the stated limit of the Bell test is reachable with
// purely local resources. p_max_threshold = 2^(-bits).
struct BoundReport {
    double per_run_min_entropy_bits = 0.0;
    double p_max_threshold = 0.0;
    BoundRegime regime = BoundRegime::no_signaling_limit;
    bool inequality_dependent = false;
};

// Inequality-independent threshold: log2(sum_k m_k - K + 1). Any Bell test on
// the shape is fakeable up to its no-signaling limit at or below this entropy.
inline BoundReport theorem1_threshold(const ScenarioShape& shape) {
    long long count = 1 - shape.parties();
    for (int m : shape.settings()) count += m;
    BoundReport report;
    report.per_run_min_entropy_bits = std::log2(static_cast<double>(count));
    report.p_max_threshold = 1.0 / static_cast<double>(count);
    report.regime = BoundRegime::no_signaling_limit;
    report.inequality_dependent = false;
    return report;
}

inline BoundReport ns_threshold_from_counts(long long settings_allowed, bool symmetric_hiding) {
    if (!symmetric_hiding)
        throw std::invalid_argument(
            "inequality-dependent threshold needs the constant-|L(z)| hiding symmetry");
    if (settings_allowed < 1) throw std::invalid_argument("settings_allowed must be positive");
    BoundReport report;
    report.per_run_min_entropy_bits = std::log2(static_cast<double>(settings_allowed));
    report.p_max_threshold = 1.0 / static_cast<double>(settings_allowed);
    report.regime = BoundRegime::no_signaling_limit;
    report.inequality_dependent = true;
    return report;
}

// Inequality-dependent threshold log2 |S^B_g| from catalog metadata.
template <class T>
BoundReport ns_threshold(const BellFunctional<T>& f) {
    if (!f.settings_allowed())
        throw std::invalid_argument("functional carries no settings_allowed metadata");
    return ns_threshold_from_counts(*f.settings_allowed(), f.symmetric_hiding());
}

inline BoundReport ns_threshold(const InequalityMetadata& md) {
    return ns_threshold_from_counts(md.settings_allowed, md.symmetric_hiding);
}

// Critical P_M for reaching the quantum limit with an i.i.d. source:
//   (1/|S|) [ 1 + (B_Q - B_L)/(B_NS - B_L) (|S|/|S_g| - 1) ].
template <class T>
double quantum_pm_threshold(const BellFunctional<T>& f) {
    if (!f.limits().quantum) throw std::invalid_argument("functional has no quantum limit");
    if (!f.settings_allowed())
        throw std::invalid_argument("functional carries no settings_allowed metadata");
    const double S = static_cast<double>(f.shape().joint_settings());
    const double Sg = static_cast<double>(*f.settings_allowed());
    const double bl = to_double(f.limits().local);
    const double bns = to_double(f.limits().no_signaling);
    const double q = (*f.limits().quantum - bl) / (bns - bl);
    return (1.0 + q * (S / Sg - 1.0)) / S;
}

// Analytic maximum of CHSH under the two-level strategy:
//   4 - 1/2 [ (1-3P) q + (1-3P)/(4P-1) (q - 16) ],  q = sum_z 1/p_obs(z),
// valid for max_z p_obs(z) <= P < 1/3.
template <class T>
T chsh_analytic_max(const SettingDistribution<T>& p_obs, const T& p_max) {
    if (p_obs.shape().joint_settings() != 4 || p_obs.shape().joint_outcomes() != 4)
        throw shape_error("chsh_analytic_max needs the 2x2 binary scenario");
    if (p_obs.max_entry() > p_max || !(p_max < num_traits<T>::from_fraction(1, 3)))
        throw std::domain_error("chsh_analytic_max: need max p_obs <= p_max < 1/3");
    T q = num_traits<T>::zero();
    for (std::size_t z = 0; z < 4; ++z) {
        if (num_traits<T>::is_zero(p_obs.prob(z)))
            throw std::domain_error("chsh_analytic_max: zero-probability setting");
        q += num_traits<T>::one() / p_obs.prob(z);
    }
    const T one_minus = num_traits<T>::one() - T(3) * p_max;
    const T q16 = q - T(16);
    T correction = one_minus * q;
    if (!num_traits<T>::is_zero(q16)) {
        // 4P - 1 > 0 is implied here: q != 16 forces a non-uniform p_obs,
        // whose largest entry (and hence p_max) exceeds 1/4
        correction += one_minus / (T(4) * p_max - num_traits<T>::one()) * q16;
    }
    return T(4) - correction / T(2);
}

} // namespace bellmd
