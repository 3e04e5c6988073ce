#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bellmd/errors.hpp"
#include "bellmd/scalar.hpp"

namespace bellmd {

// A Bell scenario: K parties, per-party setting and outcome counts.
// Joint settings and joint outcomes are addressed by a mixed-radix index with
// party 0 as the most significant digit.
class ScenarioShape {
public:
    ScenarioShape() = default;

    ScenarioShape(std::vector<int> settings, std::vector<int> outcomes)
        : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
        if (settings_.size() < 2) throw shape_error("scenario needs at least two parties");
        if (settings_.size() != outcomes_.size())
            throw shape_error("settings/outcomes party counts differ");
        for (int m : settings_)
            if (m < 2) throw shape_error("every party needs at least two settings");
        for (int d : outcomes_)
            if (d < 2) throw shape_error("every party needs at least two outcomes");
    }

    static ScenarioShape bipartite_binary(int m_a, int m_b) {
        return ScenarioShape({m_a, m_b}, {2, 2});
    }

    static ScenarioShape chsh() { return bipartite_binary(2, 2); }

    int parties() const { return static_cast<int>(settings_.size()); }
    const std::vector<int>& settings() const { return settings_; }
    const std::vector<int>& outcomes() const { return outcomes_; }

    std::size_t joint_settings() const { return product(settings_); }
    std::size_t joint_outcomes() const { return product(outcomes_); }

    std::size_t setting_index(const std::vector<int>& z) const { return index(settings_, z); }
    std::vector<int> setting_tuple(std::size_t idx) const { return tuple(settings_, idx); }
    std::size_t outcome_index(const std::vector<int>& o) const { return index(outcomes_, o); }
    std::vector<int> outcome_tuple(std::size_t idx) const { return tuple(outcomes_, idx); }

    bool operator==(const ScenarioShape& o) const {
        return settings_ == o.settings_ && outcomes_ == o.outcomes_;
    }

private:
    std::vector<int> settings_;
    std::vector<int> outcomes_;

    static std::size_t product(const std::vector<int>& v) {
        std::size_t p = 1;
        for (int x : v) p *= static_cast<std::size_t>(x);
        return p;
    }

    static std::size_t index(const std::vector<int>& radix, const std::vector<int>& digits) {
        if (digits.size() != radix.size()) throw shape_error("tuple arity mismatch");
        std::size_t idx = 0;
        for (std::size_t i = 0; i < radix.size(); ++i) {
            if (digits[i] < 0 || digits[i] >= radix[i]) throw shape_error("tuple entry out of range");
            idx = idx * static_cast<std::size_t>(radix[i]) + static_cast<std::size_t>(digits[i]);
        }
        return idx;
    }

    static std::vector<int> tuple(const std::vector<int>& radix, std::size_t idx) {
        std::vector<int> digits(radix.size());
        for (std::size_t i = radix.size(); i-- > 0;) {
            digits[i] = static_cast<int>(idx % static_cast<std::size_t>(radix[i]));
            idx /= static_cast<std::size_t>(radix[i]);
        }
        if (idx != 0) throw shape_error("joint index out of range");
        return digits;
    }
};

// Conditional outcome distribution p(o|z), stored z-major. Immutable after
// construction; the constructor validates normalization and nonnegativity.
template <class T>
class Behavior {
public:
    Behavior() = default;

    Behavior(ScenarioShape shape, std::vector<T> table)
        : shape_(std::move(shape)), table_(std::move(table)) {
        const std::size_t ns = shape_.joint_settings(), no = shape_.joint_outcomes();
        if (table_.size() != ns * no) throw shape_error("behavior table size mismatch");
        const T eps = num_traits<T>::feas_eps();
        for (std::size_t z = 0; z < ns; ++z) {
            T sum = num_traits<T>::zero();
            for (std::size_t o = 0; o < no; ++o) {
                const T& v = table_[z * no + o];
                if (v < -eps) throw shape_error("behavior has a negative probability");
                sum += v;
            }
            if (scalar_abs<T>(sum - num_traits<T>::one()) > eps)
                throw shape_error("behavior row does not sum to one");
        }
    }

    const ScenarioShape& shape() const { return shape_; }
    const std::vector<T>& table() const { return table_; }

    const T& prob(std::size_t z, std::size_t o) const {
        return table_[z * shape_.joint_outcomes() + o];
    }

    bool operator==(const Behavior& o) const { return shape_ == o.shape_ && table_ == o.table_; }

private:
    ScenarioShape shape_;
    std::vector<T> table_;
};

// One deterministic local response function: for each party, a fixed outcome
// per setting. These are the vertices of the local polytope.
class DeterministicStrategy {
public:
    DeterministicStrategy() = default;

    DeterministicStrategy(ScenarioShape shape, std::vector<std::vector<int>> assignment)
        : shape_(std::move(shape)), assignment_(std::move(assignment)) {
        if (assignment_.size() != static_cast<std::size_t>(shape_.parties()))
            throw shape_error("assignment party count mismatch");
        for (int i = 0; i < shape_.parties(); ++i) {
            if (assignment_[i].size() != static_cast<std::size_t>(shape_.settings()[i]))
                throw shape_error("assignment setting count mismatch");
            for (int o : assignment_[i])
                if (o < 0 || o >= shape_.outcomes()[i]) throw shape_error("assignment outcome out of range");
        }
    }

    const ScenarioShape& shape() const { return shape_; }
    const std::vector<std::vector<int>>& assignment() const { return assignment_; }

    int outcome_at(int party, int setting) const { return assignment_[party][setting]; }

    // joint outcome index produced under joint setting index z
    std::size_t respond(std::size_t z) const {
        std::vector<int> zt = shape_.setting_tuple(z);
        std::vector<int> ot(zt.size());
        for (std::size_t i = 0; i < zt.size(); ++i) ot[i] = assignment_[i][zt[i]];
        return shape_.outcome_index(ot);
    }

    template <class T>
    Behavior<T> to_behavior() const {
        const std::size_t ns = shape_.joint_settings(), no = shape_.joint_outcomes();
        std::vector<T> table(ns * no, num_traits<T>::zero());
        for (std::size_t z = 0; z < ns; ++z) table[z * no + respond(z)] = num_traits<T>::one();
        return Behavior<T>(shape_, std::move(table));
    }

    bool operator==(const DeterministicStrategy& o) const {
        return shape_ == o.shape_ && assignment_ == o.assignment_;
    }

private:
    ScenarioShape shape_;
    std::vector<std::vector<int>> assignment_;
};

inline std::size_t local_vertex_count(const ScenarioShape& shape, std::size_t cap) {
    std::size_t count = 1;
    for (int i = 0; i < shape.parties(); ++i)
        for (int s = 0; s < shape.settings()[i]; ++s) {
            count *= static_cast<std::size_t>(shape.outcomes()[i]);
            if (count > cap)
                throw resource_error("local vertex count exceeds cap (" + std::to_string(cap) + ")");
        }
    return count;
}

// All deterministic strategies in canonical order: the flattened assignment
// (party 0 setting 0, party 0 setting 1, ..., last party last setting) is an
// odometer with its last digit fastest; vertex 0 maps every setting to outcome 0.
inline std::vector<DeterministicStrategy> enumerate_local_vertices(const ScenarioShape& shape,
                                                                   std::size_t cap = 1000000) {
    const std::size_t count = local_vertex_count(shape, cap);
    std::vector<DeterministicStrategy> out;
    out.reserve(count);
    std::vector<std::vector<int>> assignment(shape.parties());
    for (int i = 0; i < shape.parties(); ++i) assignment[i].assign(shape.settings()[i], 0);
    while (true) {
        out.emplace_back(shape, assignment);
        // increment odometer
        int i = shape.parties() - 1;
        int s = shape.settings()[i] - 1;
        while (i >= 0) {
            if (++assignment[i][s] < shape.outcomes()[i]) break;
            assignment[i][s] = 0;
            if (--s < 0) {
                --i;
                if (i >= 0) s = shape.settings()[i] - 1;
            }
        }
        if (i < 0) break;
    }
    return out;
}

template <class T>
struct BellLimits {
    T local{};
    std::optional<double> quantum;
    T no_signaling{};
    T algebraic{};
};

// Parity condition metadata for binary-outcome bipartite catalog inequalities:
// on joint setting z the winning outcomes satisfy a XOR b == bit.
struct XorTarget {
    std::size_t z = 0;
    int bit = 0;
};

// Linear Bell functional: coefficients c(o,z) over a scenario, plus known
// limits and the hiding metadata the threshold calculators consume.
template <class T>
class BellFunctional {
public:
    BellFunctional() = default;

    BellFunctional(ScenarioShape shape, std::vector<T> coefficients, BellLimits<T> limits,
                   std::string name = {})
        : shape_(std::move(shape)), coeff_(std::move(coefficients)), limits_(std::move(limits)),
          name_(std::move(name)) {
        const std::size_t ns = shape_.joint_settings(), no = shape_.joint_outcomes();
        if (coeff_.size() != ns * no) throw shape_error("functional coefficient size mismatch");
        for (std::size_t z = 0; z < ns; ++z)
            for (std::size_t o = 0; o < no; ++o)
                if (!num_traits<T>::is_zero(coeff_[z * no + o])) {
                    used_settings_.push_back(z);
                    break;
                }
    }

    const ScenarioShape& shape() const { return shape_; }
    const std::vector<T>& coefficients() const { return coeff_; }
    const T& coeff(std::size_t z, std::size_t o) const {
        return coeff_[z * shape_.joint_outcomes() + o];
    }
    const BellLimits<T>& limits() const { return limits_; }
    const std::string& name() const { return name_; }

    // S^B: joint settings carrying any nonzero coefficient
    const std::vector<std::size_t>& used_settings() const { return used_settings_; }

    // |S^B_g|: settings a faking strategy may keep when hiding the worst case
    std::optional<long long> settings_allowed() const { return settings_allowed_; }
    // max over lambda of |S^B_h(lambda)|
    std::optional<int> hidden_set_size() const { return hidden_set_size_; }
    // whether the constant-|L(z)| hiding symmetry holds (prerequisite for the
    // inequality-dependent threshold)
    bool symmetric_hiding() const { return symmetric_hiding_; }
    const std::optional<std::vector<XorTarget>>& xor_targets() const { return xor_targets_; }

    BellFunctional& set_hiding_metadata(long long settings_allowed, int hidden_set_size,
                                        bool symmetric) {
        settings_allowed_ = settings_allowed;
        hidden_set_size_ = hidden_set_size;
        symmetric_hiding_ = symmetric;
        return *this;
    }

    BellFunctional& set_xor_targets(std::vector<XorTarget> targets) {
        xor_targets_ = std::move(targets);
        return *this;
    }

private:
    ScenarioShape shape_;
    std::vector<T> coeff_;
    BellLimits<T> limits_;
    std::string name_;
    std::vector<std::size_t> used_settings_;
    std::optional<long long> settings_allowed_;
    std::optional<int> hidden_set_size_;
    bool symmetric_hiding_ = false;
    std::optional<std::vector<XorTarget>> xor_targets_;
};

template <class T>
T bell_value(const BellFunctional<T>& f, const Behavior<T>& p) {
    if (!(f.shape() == p.shape())) throw shape_error("functional/behavior shape mismatch");
    const std::size_t ns = f.shape().joint_settings(), no = f.shape().joint_outcomes();
    T v = num_traits<T>::zero();
    for (std::size_t z = 0; z < ns; ++z)
        for (std::size_t o = 0; o < no; ++o) {
            const T& c = f.coeff(z, o);
            if (!num_traits<T>::is_zero(c)) v += c * p.prob(z, o);
        }
    return v;
}

template <class T>
struct NoSignalingReport {
    bool ok = true;
    int party = -1;          // violating party
    int party_setting = -1;  // that party's own setting value
    std::size_t z_ref = 0;   // two joint settings whose marginals disagree
    std::size_t z_other = 0;
    T max_deviation{};

    explicit operator bool() const { return ok; }
};

// Marginal-equality test: party i's outcome distribution given its own setting
// must not depend on the other parties' settings.
template <class T>
NoSignalingReport<T> is_no_signaling(const Behavior<T>& p, T tol = num_traits<T>::feas_eps()) {
    const ScenarioShape& shape = p.shape();
    const std::size_t ns = shape.joint_settings(), no = shape.joint_outcomes();
    NoSignalingReport<T> report;
    for (int party = 0; party < shape.parties(); ++party) {
        const int d = shape.outcomes()[party];
        // reference marginal per own-setting value, keyed by first joint z seen
        std::vector<std::vector<T>> ref(shape.settings()[party]);
        std::vector<std::size_t> ref_z(shape.settings()[party], 0);
        for (std::size_t z = 0; z < ns; ++z) {
            const int own = shape.setting_tuple(z)[party];
            std::vector<T> marg(d, num_traits<T>::zero());
            for (std::size_t o = 0; o < no; ++o)
                marg[shape.outcome_tuple(o)[party]] += p.prob(z, o);
            if (ref[own].empty()) {
                ref[own] = std::move(marg);
                ref_z[own] = z;
                continue;
            }
            for (int a = 0; a < d; ++a) {
                T dev = scalar_abs<T>(marg[a] - ref[own][a]);
                if (dev > tol && dev > report.max_deviation) {
                    report.ok = false;
                    report.party = party;
                    report.party_setting = own;
                    report.z_ref = ref_z[own];
                    report.z_other = z;
                    report.max_deviation = dev;
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Inequality catalog
// ---------------------------------------------------------------------------

namespace detail {

// correlator-form coefficient: sign * (-1)^(a+b), materialized over outcomes
template <class T>
void add_correlator(std::vector<T>& coeff, const ScenarioShape& shape, std::size_t z, const T& sign) {
    const std::size_t no = shape.joint_outcomes();
    for (std::size_t o = 0; o < no; ++o) {
        auto ot = shape.outcome_tuple(o);
        int par = (ot[0] + ot[1]) & 1;
        coeff[z * no + o] += par ? -sign : sign;
    }
}

} // namespace detail

// CHSH in correlator form: <a0b0> + <a0b1> + <a1b0> - <a1b1> <= 2.
template <class T>
BellFunctional<T> catalog_chsh() {
    ScenarioShape shape = ScenarioShape::chsh();
    std::vector<T> coeff(shape.joint_settings() * shape.joint_outcomes(), num_traits<T>::zero());
    std::vector<XorTarget> targets;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const std::size_t z = shape.setting_index({x, y});
            T sign = (x == 1 && y == 1) ? -num_traits<T>::one() : num_traits<T>::one();
            detail::add_correlator(coeff, shape, z, sign);
            targets.push_back({z, x & y});
        }
    BellLimits<T> limits{T(2), 2.0 * std::sqrt(2.0), T(4), T(4)};
    BellFunctional<T> f(shape, std::move(coeff), std::move(limits), "chsh");
    f.set_hiding_metadata(3, 1, true);
    f.set_xor_targets(std::move(targets));
    return f;
}

// CHSH plus alpha*<a0>; algebraic limit 4+alpha exceeds the no-signaling
// limit 4 for alpha in (0, 2]. The marginal term is materialized symmetrically
// over Bob's settings: alpha/2 * (-1)^a on (x=0, y=0) and (x=0, y=1).
template <class T>
BellFunctional<T> catalog_tilted_chsh(const T& alpha) {
    if (alpha < num_traits<T>::zero() || alpha > T(2))
        throw std::invalid_argument("tilted CHSH requires alpha in [0, 2]");
    ScenarioShape shape = ScenarioShape::chsh();
    std::vector<T> coeff(shape.joint_settings() * shape.joint_outcomes(), num_traits<T>::zero());
    std::vector<XorTarget> targets;
    const std::size_t no = shape.joint_outcomes();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const std::size_t z = shape.setting_index({x, y});
            T sign = (x == 1 && y == 1) ? -num_traits<T>::one() : num_traits<T>::one();
            detail::add_correlator(coeff, shape, z, sign);
            targets.push_back({z, x & y});
        }
    const T half_alpha = alpha / T(2);
    for (int y = 0; y < 2; ++y) {
        const std::size_t z = shape.setting_index({0, y});
        for (std::size_t o = 0; o < no; ++o) {
            auto ot = shape.outcome_tuple(o);
            coeff[z * no + o] += (ot[0] & 1) ? -half_alpha : half_alpha;
        }
    }
    BellLimits<T> limits{T(2) + alpha, std::nullopt, T(4), T(4) + alpha};
    BellFunctional<T> f(shape, std::move(coeff), std::move(limits), "tilted_chsh");
    f.set_hiding_metadata(3, 1, true);
    f.set_xor_targets(std::move(targets));
    return f;
}

// Chained inequality with m settings per party, probability form:
//   p(a=b | x=0, y=m-1) + sum over chain pairs of p(a!=b | x,y) <= 2m-1,
// chain pairs being x == y and x == y+1 (0-based). 2m of the m^2 setting
// pairs carry coefficients.
template <class T>
BellFunctional<T> catalog_chained(int m) {
    if (m < 2) throw std::invalid_argument("chained inequality requires m >= 2");
    ScenarioShape shape = ScenarioShape::bipartite_binary(m, m);
    const std::size_t no = shape.joint_outcomes();
    std::vector<T> coeff(shape.joint_settings() * no, num_traits<T>::zero());
    std::vector<XorTarget> targets;
    auto add_condition = [&](int x, int y, int want_xor) {
        const std::size_t z = shape.setting_index({x, y});
        for (std::size_t o = 0; o < no; ++o) {
            auto ot = shape.outcome_tuple(o);
            if (((ot[0] ^ ot[1]) & 1) == want_xor) coeff[z * no + o] += num_traits<T>::one();
        }
        targets.push_back({z, want_xor});
    };
    for (int y = 0; y < m; ++y) {
        add_condition(y, y, 1);
        if (y + 1 < m) add_condition(y + 1, y, 1);
    }
    add_condition(0, m - 1, 0);
    BellLimits<T> limits{T(2 * m - 1), std::nullopt, T(2 * m), T(2 * m)};
    BellFunctional<T> f(shape, std::move(coeff), std::move(limits), "chained");
    f.set_hiding_metadata(static_cast<long long>(m) * m - 1, 1, true);
    f.set_xor_targets(std::move(targets));
    return f;
}

// Mermin inequalities enter only through their hiding metadata (used and
// allowed setting counts); full coefficient tables are out of catalog scope.
struct InequalityMetadata {
    std::string name;
    int parties = 0;
    long long settings_total = 0;
    long long settings_used = 0;
    long long settings_allowed = 0;
    bool symmetric_hiding = false;
};

inline InequalityMetadata catalog_mermin_metadata(int parties) {
    if (parties < 3 || parties % 2 == 0)
        throw std::invalid_argument("mermin metadata covers odd party counts >= 3");
    InequalityMetadata md;
    md.name = "mermin";
    md.parties = parties;
    md.settings_total = 1LL << parties;
    md.settings_used = 1LL << (parties - 1);
    md.settings_allowed = (1LL << (parties - 2)) + (1LL << ((parties - 3) / 2));
    md.symmetric_hiding = true;
    return md;
}

// The eight PR-box variants: a XOR b = xy XOR alpha*x XOR beta*y XOR gamma
// with uniform marginals. Variant (0,0,0) is the standard PR box.
template <class T>
Behavior<T> pr_box(int alpha = 0, int beta = 0, int gamma = 0) {
    ScenarioShape shape = ScenarioShape::chsh();
    const std::size_t no = shape.joint_outcomes();
    std::vector<T> table(shape.joint_settings() * no, num_traits<T>::zero());
    const T half = num_traits<T>::from_fraction(1, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const std::size_t z = shape.setting_index({x, y});
            const int want = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
            for (std::size_t o = 0; o < no; ++o) {
                auto ot = shape.outcome_tuple(o);
                if (((ot[0] ^ ot[1]) & 1) == want) table[z * no + o] = half;
            }
        }
    return Behavior<T>(shape, std::move(table));
}

// Uniform noise: every outcome equally likely at every setting.
template <class T>
Behavior<T> uniform_behavior(const ScenarioShape& shape) {
    const std::size_t ns = shape.joint_settings(), no = shape.joint_outcomes();
    std::vector<T> table(ns * no, num_traits<T>::from_fraction(1, static_cast<long long>(no)));
    return Behavior<T>(shape, std::move(table));
}

// Convex mixture of behaviors over one shape.
template <class T>
Behavior<T> mix_behaviors(const std::vector<std::pair<T, Behavior<T>>>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty mixture");
    const ScenarioShape& shape = parts.front().second.shape();
    std::vector<T> table(shape.joint_settings() * shape.joint_outcomes(), num_traits<T>::zero());
    for (const auto& [w, b] : parts) {
        if (!(b.shape() == shape)) throw shape_error("mixture shape mismatch");
        for (std::size_t i = 0; i < table.size(); ++i) table[i] += w * b.table()[i];
    }
    return Behavior<T>(shape, std::move(table));
}

// No-signaling behavior reaching the no-signaling limit of a catalog
// functional: the PR box for (tilted) CHSH, perfect parity correlations with
// uniform completion for the chained inequality.
template <class T>
Behavior<T> maximal_ns_behavior(const BellFunctional<T>& f) {
    if (f.name() == "chsh" || f.name() == "tilted_chsh") return pr_box<T>();
    if (!f.xor_targets())
        throw std::invalid_argument("no maximal no-signaling point known for this functional");
    const ScenarioShape& shape = f.shape();
    const std::size_t ns = shape.joint_settings(), no = shape.joint_outcomes();
    const T half = num_traits<T>::from_fraction(1, 2);
    const T quarter = num_traits<T>::from_fraction(1, 4);
    std::vector<T> table(ns * no, quarter);
    for (const XorTarget& t : *f.xor_targets())
        for (std::size_t o = 0; o < no; ++o) {
            auto ot = shape.outcome_tuple(o);
            table[t.z * no + o] = (((ot[0] ^ ot[1]) & 1) == t.bit) ? half : num_traits<T>::zero();
        }
    return Behavior<T>(shape, std::move(table));
}

} // namespace bellmd
