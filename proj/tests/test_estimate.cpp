#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "perc/estimate.hpp"

using namespace perc;

namespace {

const GroupModel& z2() {
    static GroupModel g = build_group(GroupSpec::lattice(2, {{1, 0}, {0, 1}}));
    return g;
}

}  // namespace

TEST_CASE("wilson estimate invariants") {
    for (const auto [k, n] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {0, 100}, {1, 100}, {50, 100}, {99, 100}, {100, 100}, {3, 7}}) {
        const auto e = wilson_estimate(k, n);
        CHECK(e.ci_low >= 0.0);
        CHECK(e.ci_low <= e.p_hat);
        CHECK(e.p_hat <= e.ci_high);
        CHECK(e.ci_high <= 1.0);
        CHECK(e.p_hat == doctest::Approx(double(k) / double(n)));
    }
    CHECK(wilson_estimate(0, 50).ci_low == 0.0);
    CHECK(wilson_estimate(50, 50).ci_high == 1.0);
    CHECK_THROWS_AS(wilson_estimate(0, 0), config_error);
}

TEST_CASE("wilson interval coverage calibration") {
    // synthetic Bernoulli(0.3): the 95% interval covers in >= 93% of trials
    const double p = 0.3;
    const std::uint64_t trials = 1000;
    const std::uint64_t per_trial = 200;
    std::uint64_t covered = 0;
    rng::Stream stream(2024, 8);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < per_trial; ++i)
            if (stream.next_unit() < p) ++k;
        const auto e = wilson_estimate(k, per_trial);
        if (e.ci_low <= p && p <= e.ci_high) ++covered;
    }
    CHECK(covered >= 930);
}

TEST_CASE("estimate_event basics") {
    const GraphWindow w(z2(), 8);

    SUBCASE("piv at p=1 gives zero with a zero lower bound") {
        EventSpec spec;
        spec.name = "piv";
        spec.m_aux = 1;
        spec.n = 4;
        const auto e = estimate_event(w, spec, 1.0, 3, 500);
        CHECK(e.p_hat == 0.0);
        CHECK(e.ci_low == 0.0);
    }
    SUBCASE("single-edge corridor at p=0.5 is a fair coin") {
        EventSpec spec;
        spec.name = "corridor";
        spec.m_aux = 1;
        spec.n = 0;
        const auto e = estimate_event(w, spec, 0.5, 3, 10000);
        CHECK(e.ci_low <= 0.5);
        CHECK(0.5 <= e.ci_high);
    }
    SUBCASE("piv(1,1) matches the exhaustive enumeration oracle") {
        const GraphWindow w1(z2(), 2);
        std::vector<std::uint32_t> spokes;
        for (const auto& arc : w1.neighbors(0)) spokes.push_back(arc.edge);
        double exact = 0.0;
        for (const auto& mask : oracle::all_masks(w1, spokes)) {
            int open = 0;
            for (const auto e : spokes) open += mask[e];
            if (piv(Config::from_mask(w1, mask), 0, 1, 1))
                exact += std::pow(0.5, open) * std::pow(0.5, 4 - open);
        }
        EventSpec spec;
        spec.name = "piv";
        spec.m_aux = 1;
        spec.n = 1;
        const std::uint64_t N = 20000;
        const auto e = estimate_event(w1, spec, 0.5, 5, N);
        const double se = std::sqrt(exact * (1 - exact) / double(N));
        CHECK(std::abs(e.p_hat - exact) <= 3 * se);
    }
    SUBCASE("unknown event and margin violations") {
        EventSpec bad;
        bad.name = "nonsense";
        bad.n = 2;
        CHECK_THROWS_AS(estimate_event(w, bad, 0.5, 1, 10), config_error);
        EventSpec margin;
        margin.name = "trunc_radius";
        margin.n = 3;  // needs W >= 9
        const GraphWindow small(z2(), 8);
        CHECK_THROWS_AS(estimate_event(small, margin, 0.5, 1, 10), margin_error);
    }
}

TEST_CASE("estimator determinism under any worker count") {
    const GraphWindow w(z2(), 12);
    EventSpec spec;
    spec.name = "trunc_radius";
    spec.n = 4;
    const auto e1 = estimate_event(w, spec, 0.6, 9, 4000, 1);
    const auto e4 = estimate_event(w, spec, 0.6, 9, 4000, 4);
    const auto e8 = estimate_event(w, spec, 0.6, 9, 4000, 8);
    CHECK(e1.successes == e4.successes);
    CHECK(e4.successes == e8.successes);
    CHECK(e1.p_hat == e4.p_hat);
    CHECK(e1.ci_low == e8.ci_low);
}

TEST_CASE("corridor kappa") {
    const GraphWindow w(z2(), 8);

    SUBCASE("m=0 is exactly one") {
        CorridorPolicy policy;
        const auto k = corridor_kappa(w, 0, 2, 0.4, policy, 1, 100);
        CHECK(k.estimate.p_hat == 1.0);
        CHECK_FALSE(k.upper_bound);
    }
    SUBCASE("p=1 is exactly one") {
        CorridorPolicy policy;
        const auto k = corridor_kappa(w, 3, 1, 1.0, policy, 1, 100);
        CHECK(k.estimate.p_hat == 1.0);
    }
    SUBCASE("exhaustive matches per-path brute force at m=2, n=1, p=0.5") {
        CorridorPolicy policy;
        policy.kind = CorridorPolicy::Kind::exhaustive;
        const double p = 0.5;

        // oracle: exact minimum over all walks of length <= 2 of the exact
        // per-path crossing probability (enumerating corridor edge states)
        double exact_min = 1.0;
        std::vector<std::vector<std::uint32_t>> walks{{0}};
        for (std::size_t head = 0; head < walks.size(); ++head) {
            auto walk = walks[head];
            if (walk.size() <= 2) {
                for (const auto& arc : w.neighbors(walk.back())) {
                    auto next = walk;
                    next.push_back(arc.to);
                    walks.push_back(next);
                }
            }
        }
        for (const auto& verts : walks) {
            if (static_cast<int>(verts.size()) - 1 > 2) continue;
            const PathSpec path(w, verts);
            const auto corr = corridor(w, path, 1);
            std::vector<std::uint32_t> corr_edges;
            for (std::uint32_t e = 0; e < w.edge_count(); ++e) {
                const auto [a, b] = w.edge_endpoints(e);
                if (corr.contains(a) && corr.contains(b)) corr_edges.push_back(e);
            }
            REQUIRE(corr_edges.size() <= 16);
            double prob = 0.0;
            for (const auto& mask : oracle::all_masks(w, corr_edges)) {
                int open = 0;
                for (const auto e : corr_edges) open += mask[e];
                if (corridor_crossing(Config::from_mask(w, mask), path, 1))
                    prob += std::pow(p, open) *
                            std::pow(1 - p, double(corr_edges.size() - open));
            }
            exact_min = std::min(exact_min, prob);
        }

        const std::uint64_t N = 20000;
        const auto k = corridor_kappa(w, 2, 1, p, policy, 7, N);
        CHECK_FALSE(k.upper_bound);
        const double se = std::sqrt(exact_min * (1 - exact_min) / double(N));
        CHECK(std::abs(k.estimate.p_hat - exact_min) <= 5 * se);
    }
    SUBCASE("family policies upper-bound the exhaustive minimum") {
        CorridorPolicy exhaustive;
        exhaustive.kind = CorridorPolicy::Kind::exhaustive;
        CorridorPolicy family;
        family.kind = CorridorPolicy::Kind::geodesic_family;
        family.saw_count = 16;
        const auto a = corridor_kappa(w, 2, 1, 0.5, exhaustive, 7, 5000);
        const auto b = corridor_kappa(w, 2, 1, 0.5, family, 7, 5000);
        CHECK(b.upper_bound);
        CHECK(b.estimate.p_hat + 0.03 >= a.estimate.p_hat);
    }
    SUBCASE("exhaustive beyond the cap is rejected") {
        CorridorPolicy policy;
        policy.kind = CorridorPolicy::Kind::exhaustive;
        policy.exhaustive_cap = 3;
        CHECK_THROWS_AS(corridor_kappa(w, 4, 1, 0.5, policy, 1, 10), config_error);
    }
}

TEST_CASE("uniqueness zone scan") {
    const GraphWindow w(z2(), 24);

    SUBCASE("p=1 gives s=1") {
        CHECK(uniqueness_zone_scan(w, 1.0, 24, 0.05, 11, 200) == 1);
    }
    SUBCASE("threshold 1 gives s=1") {
        CHECK(uniqueness_zone_scan(w, 0.3, 24, 1.0, 11, 200) == 1);
    }
    SUBCASE("supercritical scan stabilises at s=1 as samples grow") {
        int prev = 24;
        for (const std::uint64_t n_samples : {200ULL, 800ULL}) {
            const int s = uniqueness_zone_scan(w, 0.7, 24, 0.05, 11, n_samples);
            CHECK(s <= prev);
            prev = s;
        }
        CHECK(prev == 1);
    }
}

TEST_CASE("theta hat ladder") {
    SUBCASE("extremes") {
        const auto ones = theta_hat(z2(), 1.0, {4, 8}, 1, 200);
        CHECK(ones[0].p_hat == 1.0);
        CHECK(ones[1].p_hat == 1.0);
        const auto zeros = theta_hat(z2(), 0.0, {4, 8}, 1, 200);
        CHECK(zeros[0].p_hat == 0.0);
        CHECK(zeros[1].p_hat == 0.0);
    }
    SUBCASE("rungs couple monotonically and stabilise at p=0.6") {
        const auto ladder = theta_hat(z2(), 0.6, {8, 16, 32}, 5, 3000);
        REQUIRE(ladder.size() == 3);
        // key-based labels couple the rungs: reaching 32 implies reaching 16
        CHECK(ladder[0].successes >= ladder[1].successes);
        CHECK(ladder[1].successes >= ladder[2].successes);
        // stabilisation: second and third rungs agree within CI overlap
        CHECK(ladder[2].ci_high >= ladder[1].ci_low);
    }
    SUBCASE("ladder must increase") {
        CHECK_THROWS_AS(theta_hat(z2(), 0.5, {8, 8}, 1, 10), config_error);
    }
}

TEST_CASE("fit decay") {
    auto synthetic = [](double (*f)(double), std::vector<double> ns) {
        std::vector<FitPoint> table;
        for (const double n : ns) {
            Estimate e;
            e.p_hat = f(n);
            e.ci_low = e.p_hat * 0.9;
            e.ci_high = std::min(1.0, e.p_hat * 1.1);
            e.n_samples = 100000;
            table.push_back(FitPoint{n, e});
        }
        return table;
    };

    SUBCASE("plain exponential") {
        const auto table = synthetic([](double n) { return std::exp(-0.5 * n); },
                                     {4, 6, 8, 10, 12, 14});
        const auto fit = fit_decay(table, FitModel::exponential());
        CHECK(fit.slope >= -0.55);
        CHECK(fit.slope <= -0.45);
        CHECK(fit.r2 >= 0.99);
        CHECK(fit.points_used == 6);
    }
    SUBCASE("stretched with alpha = 1/2") {
        const auto table = synthetic([](double n) { return std::exp(-std::sqrt(n)); },
                                     {4, 8, 16, 32, 64});
        const auto fit = fit_decay(table, FitModel::stretched(0.5));
        CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.05));
        CHECK(fit.r2 >= 0.99);
    }
    SUBCASE("too few points") {
        const auto table = synthetic([](double n) { return std::exp(-n); }, {4, 6, 8});
        CHECK_THROWS_AS(fit_decay(table, FitModel::exponential()), config_error);
    }
    SUBCASE("zero-success points are dropped") {
        auto table = synthetic([](double n) { return std::exp(-0.5 * n); },
                               {4, 6, 8, 10, 12});
        Estimate zero;
        zero.p_hat = 0.0;
        zero.ci_low = 0.0;
        zero.ci_high = 0.001;
        zero.n_samples = 100000;
        table.push_back(FitPoint{40.0, zero});
        const auto fit = fit_decay(table, FitModel::exponential());
        CHECK(fit.points_used == 5);
    }
}

TEST_CASE("margin validation names the rule") {
    EventSpec spec;
    spec.name = "trunc_radius";
    spec.n = 10;
    try {
        validate_event_margins(spec, 24);
        FAIL("expected margin_error");
    } catch (const margin_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("W/3") != std::string::npos);
    }
}

TEST_CASE("every vocabulary event estimates through the dispatcher") {
    const GraphWindow w(z2(), 24);
    const std::uint64_t N = 50;
    for (const auto& [name, m_aux, n, delta, k] :
         std::vector<std::tuple<std::string, int, int, double, int>>{
             {"piv", 2, 6, 0.0, 0},
             {"uniq", 2, 6, 0.0, 0},
             {"sprinkled_uniq", 2, 6, 0.1, 0},
             {"corridor", 3, 2, 0.0, 0},
             {"trunc_radius", 0, 6, 0.0, 0},
             {"trunc_volume", 0, 16, 0.0, 0},
             {"prop1", 0, 20, 0.0, 0},
             {"two_seed", 0, 12, 0.0, 0},
             {"coarse_cutset", 0, 4, 0.0, 10},
             {"hybrid_count", 3, 5, 0.05, 0},
         }) {
        EventSpec spec;
        spec.name = name;
        spec.m_aux = m_aux;
        spec.n = n;
        spec.delta = delta;
        spec.k = k;
        spec.dx = 1;
        spec.dy = 2;
        CAPTURE(name);
        const auto e = estimate_event(w, spec, 0.6, 3, N);
        CHECK(e.n_samples == N);
        CHECK(e.ci_low <= e.p_hat);
        CHECK(e.p_hat <= e.ci_high);
    }
}

TEST_CASE("sampled_saw policy builds a pure walk family") {
    const GraphWindow w(z2(), 10);
    CorridorPolicy policy;
    policy.kind = CorridorPolicy::Kind::sampled_saw;
    policy.saw_count = 8;
    const auto k = corridor_kappa(w, 4, 2, 0.6, policy, 3, 500);
    CHECK(k.upper_bound);
    CHECK(k.estimate.n_samples == 500);
    CHECK(k.argmin_path.size() == 5);  // walks have exactly m edges
}
