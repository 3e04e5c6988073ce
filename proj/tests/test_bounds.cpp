#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellmd/bounds.hpp"
#include "bellmd/lp.hpp"

using namespace bellmd;
using R = Rational;

TEST_CASE("inequality-independent thresholds") {
    auto r22 = theorem1_threshold(ScenarioShape::chsh());
    CHECK(r22.per_run_min_entropy_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    CHECK(r22.p_max_threshold == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(!r22.inequality_dependent);

    for (int m = 2; m <= 6; ++m) {
        auto r = theorem1_threshold(ScenarioShape::bipartite_binary(m, m));
        CHECK(r.per_run_min_entropy_bits ==
              doctest::Approx(std::log2(2.0 * m - 1.0)).epsilon(1e-14));
        CHECK(r.p_max_threshold == doctest::Approx(1.0 / (2.0 * m - 1.0)).epsilon(1e-14));
    }

    auto r3 = theorem1_threshold(ScenarioShape({2, 2, 2}, {2, 2, 2}));
    CHECK(r3.per_run_min_entropy_bits == doctest::Approx(2.0).epsilon(1e-14));

    // 2^-bits consistency
    auto r_mixed = theorem1_threshold(ScenarioShape({3, 4, 2}, {2, 2, 2}));
    CHECK(std::exp2(-r_mixed.per_run_min_entropy_bits) ==
          doctest::Approx(r_mixed.p_max_threshold).epsilon(1e-13));
}

TEST_CASE("inequality-dependent thresholds from catalog metadata") {
    CHECK(ns_threshold(catalog_chsh<R>()).per_run_min_entropy_bits ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    for (int m : {2, 3, 10}) {
        auto r = ns_threshold(catalog_chained<R>(m));
        CHECK(r.per_run_min_entropy_bits ==
              doctest::Approx(std::log2(static_cast<double>(m) * m - 1.0)).epsilon(1e-14));
        CHECK(r.inequality_dependent);
    }
    CHECK(ns_threshold(catalog_mermin_metadata(5)).per_run_min_entropy_bits ==
          doctest::Approx(std::log2(10.0)).epsilon(1e-14));

    // the inequality-dependent bound never undercuts the independent one
    CHECK(theorem1_threshold(ScenarioShape::chsh()).per_run_min_entropy_bits ==
          doctest::Approx(ns_threshold(catalog_chsh<R>()).per_run_min_entropy_bits));
    for (int m : {2, 3, 4, 8})
        CHECK(theorem1_threshold(ScenarioShape::bipartite_binary(m, m)).per_run_min_entropy_bits <=
              ns_threshold(catalog_chained<R>(m)).per_run_min_entropy_bits + 1e-12);
    CHECK(theorem1_threshold(ScenarioShape({2, 2, 2, 2, 2}, {2, 2, 2, 2, 2}))
              .per_run_min_entropy_bits <=
          ns_threshold(catalog_mermin_metadata(5)).per_run_min_entropy_bits);

    // missing metadata and missing symmetry are refused
    BellFunctional<R> bare(ScenarioShape::chsh(), catalog_chsh<R>().coefficients(),
                           catalog_chsh<R>().limits());
    CHECK_THROWS_AS(ns_threshold(bare), std::invalid_argument);
    BellFunctional<R> asym = bare;
    asym.set_hiding_metadata(3, 1, false);
    CHECK_THROWS_AS(ns_threshold(asym), std::invalid_argument);
}

TEST_CASE("quantum-limit threshold for CHSH and hypothetical limits") {
    const double expected = (2.0 + std::sqrt(2.0)) / 12.0; // (1/4)[1 + (sqrt2 - 1)/3]
    CHECK(quantum_pm_threshold(catalog_chsh<R>()) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(quantum_pm_threshold(catalog_chsh<R>()) == doctest::Approx(0.2845177968).epsilon(1e-9));

    auto chsh = catalog_chsh<R>();
    BellLimits<R> at_local{R(2), 2.0, R(4), R(4)};
    BellFunctional<R> f_local(chsh.shape(), chsh.coefficients(), at_local);
    f_local.set_hiding_metadata(3, 1, true);
    CHECK(quantum_pm_threshold(f_local) == doctest::Approx(0.25).epsilon(1e-14));

    BellLimits<R> at_ns{R(2), 4.0, R(4), R(4)};
    BellFunctional<R> f_ns(chsh.shape(), chsh.coefficients(), at_ns);
    f_ns.set_hiding_metadata(3, 1, true);
    CHECK(quantum_pm_threshold(f_ns) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(quantum_pm_threshold(catalog_chained<R>(3)), std::invalid_argument);
}

TEST_CASE("analytic CHSH maximum: pinned values and validity range") {
    const auto uniform = SettingDistribution<R>::uniform(ScenarioShape::chsh());
    CHECK(chsh_analytic_max<R>(uniform, R(27, 100)) == R(62, 25)); // 2.48
    CHECK(chsh_analytic_max<R>(uniform, R(1, 4)) == R(2));
    // approaches the algebraic limit at the 1/3 endpoint
    const R p_near = R(1, 3) - R(1, 1000000000);
    CHECK(chsh_analytic_max<R>(uniform, p_near) == R(24) * p_near - R(4));

    SettingDistribution<R> biased(ScenarioShape::chsh(),
                                  {R(29, 100), R(13, 100), R(29, 100), R(29, 100)});
    CHECK(chsh_analytic_max<R>(biased, R(29, 100)) == R(2));

    CHECK_THROWS_AS(chsh_analytic_max<R>(uniform, R(1, 3)), std::domain_error);
    CHECK_THROWS_AS(chsh_analytic_max<R>(uniform, R(2, 5)), std::domain_error);
    CHECK_THROWS_AS(chsh_analytic_max<R>(biased, R(28, 100)), std::domain_error);
    CHECK_THROWS_AS(chsh_analytic_max<R>(
                        SettingDistribution<R>(ScenarioShape::bipartite_binary(3, 3),
                                               std::vector<R>(9, R(1, 9))),
                        R(3, 10)),
                    shape_error);
}

TEST_CASE("quantum threshold is the root of the analytic curve at 2 sqrt 2") {
    const auto uniform = SettingDistribution<double>::uniform(ScenarioShape::chsh());
    const double target = 2.0 * std::sqrt(2.0);
    double lo = 0.26, hi = 0.33;
    for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2;
        if (chsh_analytic_max<double>(uniform, mid) < target) lo = mid;
        else hi = mid;
    }
    CHECK(std::abs((lo + hi) / 2 - quantum_pm_threshold(catalog_chsh<double>())) < 1e-9);
}

TEST_CASE("analytic formula matches the LP across distributions and grids") {
    auto f = catalog_chsh<R>();
    const std::vector<std::vector<R>> dists = {
        {R(1, 4), R(1, 4), R(1, 4), R(1, 4)},
        {R(29, 100), R(13, 100), R(29, 100), R(29, 100)},
        {R(3, 10), R(3, 10), R(2, 10), R(2, 10)},
        {R(26, 100), R(26, 100), R(26, 100), R(22, 100)},
    };
    for (const auto& d : dists) {
        SettingDistribution<R> p_obs(f.shape(), d);
        const R lo = p_obs.max_entry();
        const R hi = R(1, 3);
        for (int k = 0; k < 6; ++k) {
            const R p = lo + (hi - lo) * R(k, 7);
            if (!(p < hi)) continue;
            auto lp = max_bell(f, p_obs, p);
            REQUIRE(lp.status == LpStatus::optimal);
            CHECK(lp.value == chsh_analytic_max<R>(p_obs, p));
        }
    }
}
