#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "perc/events.hpp"

using namespace perc;

namespace {

const GroupModel& z2() {
    static GroupModel g = build_group(GroupSpec::lattice(2, {{1, 0}, {0, 1}}));
    return g;
}

}  // namespace

TEST_CASE("seed schedule") {
    const SeedSchedule sched{0.5};
    const int from = sched.valid_from();
    CHECK(from <= 3);
    for (int n = from; n <= 1000; n += 7) {
        CHECK(sched.sigma(n) >= 1);
        CHECK(sched.sigma(n) <= sched.t(n));
        CHECK(sched.t(n) <= n);
    }
    CHECK(sched.epsilon(1000) == doctest::Approx(1.0 / std::pow(std::log(1000.0), 10)));
}

TEST_CASE("piv and uniqueness") {
    const GraphWindow w(z2(), 8);

    SUBCASE("trivial endpoints") {
        const LabelField labels(w, 1, 0);
        CHECK_FALSE(piv(Config(labels, 1.0), 0, 1, 4));  // one cluster
        CHECK_FALSE(piv(Config(labels, 0.0), 0, 1, 4));  // nothing reaches
        CHECK(uniqueness(Config(labels, 1.0), 0, 1, 4));
        CHECK(uniqueness(Config(labels, 0.0), 0, 1, 4));
    }
    SUBCASE("uniqueness equals not-piv on random configurations") {
        for (std::uint64_t r = 0; r < 10000; ++r) {
            const LabelField labels(w, 17, r);
            const Config c(labels, 0.5);
            CHECK(uniqueness(c, 0, 2, 6) == !piv(c, 0, 2, 6));
        }
    }
    SUBCASE("margins and parameter checks") {
        const LabelField labels(w, 1, 0);
        const Config c(labels, 0.5);
        CHECK_THROWS_AS(piv(c, 0, 1, 9), margin_error);
        CHECK_THROWS(piv(c, 0, 0, 4));
        CHECK_THROWS(piv(c, 0, 5, 4));
    }
    SUBCASE("degenerate m = n case follows the crossing-cluster definition") {
        const GraphWindow w1(z2(), 2);
        std::vector<std::uint8_t> mask1(w1.edge_count(), 0);
        // all edges closed: singleton clusters at distance 1 cross B_1 -> dist 1
        CHECK(piv(Config::from_mask(w1, mask1), 0, 1, 1));
        // for m < n the p=0 configuration never crosses
        CHECK_FALSE(piv(Config::from_mask(w1, mask1), 0, 1, 2));
    }
}

TEST_CASE("piv(1,1) exact probability by exhaustive enumeration") {
    const GraphWindow w(z2(), 2);
    std::vector<std::uint32_t> spokes;
    for (const auto& arc : w.neighbors(0)) spokes.push_back(arc.edge);
    REQUIRE(spokes.size() == 4);

    double exact = 0.0;
    const double p = 0.5;
    for (const auto& mask : oracle::all_masks(w, spokes)) {
        int open = 0;
        for (const auto e : spokes) open += mask[e];
        const double prob = std::pow(p, open) * std::pow(1 - p, 4 - open);
        if (piv(Config::from_mask(w, mask), 0, 1, 1)) exact += prob;
    }
    CHECK(exact == doctest::Approx(15.0 / 16.0));  // unique only when all spokes open

    std::uint64_t hits = 0;
    const std::uint64_t N = 20000;
    for (std::uint64_t r = 0; r < N; ++r) {
        const LabelField labels(w, 5, r);
        if (piv(Config(labels, p), 0, 1, 1)) ++hits;
    }
    const double mc = static_cast<double>(hits) / N;
    const double se = std::sqrt(exact * (1 - exact) / N);
    CHECK(std::abs(mc - exact) <= 3 * se);
}

TEST_CASE("sprinkled uniqueness") {
    const GraphWindow w(z2(), 8);

    SUBCASE("q=1 on a connected ball is true") {
        const LabelField labels(w, 2, 0);
        CHECK(sprinkled_uniqueness(labels, 0.3, 1.0, 0, 2, 6));
    }
    SUBCASE("q=p equals plain uniqueness on the same labels") {
        for (std::uint64_t r = 0; r < 5000; ++r) {
            const LabelField labels(w, 23, r);
            CHECK(sprinkled_uniqueness(labels, 0.5, 0.5, 0, 2, 6) ==
                  uniqueness(Config(labels, 0.5), 0, 2, 6));
        }
    }
    SUBCASE("monotone nondecreasing in q per configuration") {
        for (std::uint64_t r = 0; r < 10000; ++r) {
            const LabelField labels(w, 29, r);
            bool prev = false;
            for (const double q : {0.5, 0.65, 0.8, 1.0}) {
                const bool now = sprinkled_uniqueness(labels, 0.5, q, 0, 2, 8);
                if (prev) CHECK(now);
                prev = now;
            }
        }
    }
    SUBCASE("p > q is rejected") {
        const LabelField labels(w, 2, 0);
        CHECK_THROWS(sprinkled_uniqueness(labels, 0.7, 0.5, 0, 2, 6));
    }
}

TEST_CASE("corridor crossing") {
    const GraphWindow w(z2(), 8);

    SUBCASE("length-0 path is always connected") {
        const LabelField labels(w, 3, 0);
        const PathSpec p0(w, {0});
        CHECK(corridor_crossing(Config(labels, 0.0), p0, 2));
    }
    SUBCASE("p=1 crosses") {
        const LabelField labels(w, 3, 0);
        const auto path = geodesic(w, 0, 40);
        CHECK(corridor_crossing(Config(labels, 1.0), path, 1));
    }
    SUBCASE("single edge with n=0 is the edge state") {
        const auto path = geodesic(w, 0, w.neighbors(0)[0].to);
        REQUIRE(path.length() == 1);
        const std::uint32_t edge = w.neighbors(0)[0].edge;
        for (std::uint64_t r = 0; r < 2000; ++r) {
            const LabelField labels(w, 7, r);
            const Config c(labels, 0.5);
            CHECK(corridor_crossing(c, path, 0) == c.open(edge));
        }
    }
}

TEST_CASE("truncated radius event") {
    const GraphWindow w(z2(), 18);

    SUBCASE("extremes") {
        const LabelField labels(w, 4, 0);
        CHECK_FALSE(truncated_radius_event(labels, 1.0, 6));  // reaches the boundary
        CHECK_FALSE(truncated_radius_event(labels, 0.0, 6));  // reaches nothing
    }
    SUBCASE("margin") {
        const LabelField labels(w, 4, 0);
        CHECK_THROWS_AS(truncated_radius_event(labels, 0.5, 7), margin_error);
    }
    SUBCASE("stabilisation ladder: rungs couple monotonically through shared labels") {
        // a cluster that avoids the window boundary is closed-bounded, hence
        // identical in any larger window; the event can only switch on as W
        // grows, and the rung estimates stabilise
        const std::uint64_t N = 4000;
        const GraphWindow w18(z2(), 18);
        const GraphWindow w24(z2(), 24);
        const GraphWindow w30(z2(), 30);
        std::uint64_t h18 = 0, h24 = 0, h30 = 0;
        for (std::uint64_t r = 0; r < N; ++r) {
            const bool e18 = truncated_radius_event(LabelField(w18, 4, r), 0.6, 6);
            const bool e24 = truncated_radius_event(LabelField(w24, 4, r), 0.6, 6);
            const bool e30 = truncated_radius_event(LabelField(w30, 4, r), 0.6, 6);
            if (e18) CHECK(e24);
            if (e24) CHECK(e30);
            h18 += e18;
            h24 += e24;
            h30 += e30;
        }
        CHECK(h18 <= h24);
        CHECK(h24 <= h30);
        CHECK(h30 - h18 <= N / 100);  // rungs have stabilised
    }
}

TEST_CASE("truncated volume event") {
    const GraphWindow w(z2(), 18);
    const LabelField labels(w, 6, 0);

    SUBCASE("extremes") {
        CHECK_FALSE(truncated_volume_event(labels, 0.0, 2));
        CHECK_FALSE(truncated_volume_event(labels, 1.0, 2));
    }
    SUBCASE("n_vol=1 is exactly non-connection to the boundary") {
        for (std::uint64_t r = 0; r < 3000; ++r) {
            const LabelField lf(w, 8, r);
            const Config c(lf, 0.5);
            const auto dec = clusters_in(c, w.ball(w.radius()));
            const auto id = dec.id_of(0);
            const bool touches = dec.info(id).farthest_dist == w.radius();
            CHECK(truncated_volume_event(lf, 0.5, 1) == !touches);
        }
    }
    SUBCASE("margin: volume beyond |B_{W/3}|") {
        CHECK_THROWS_AS(truncated_volume_event(labels, 0.5, 100000), margin_error);
    }
}

TEST_CASE("local existence and uniqueness event") {
    const GraphWindow w(z2(), 30);
    const LabelField labels(w, 9, 0);

    CHECK(local_existence_uniqueness(Config(labels, 1.0), 30));
    CHECK_FALSE(local_existence_uniqueness(Config(labels, 0.0), 30));
    CHECK_THROWS_AS(local_existence_uniqueness(Config(labels, 0.5), 31), margin_error);
    CHECK_THROWS_AS(local_existence_uniqueness(Config(labels, 0.5), 8), margin_error);
}

TEST_CASE("two seed connectivity") {
    const GraphWindow w(z2(), 12);
    const LabelField labels(w, 10, 0);
    const Config c0(labels, 0.0);

    SUBCASE("x == y") { CHECK(two_seed_connected(c0, 5, 5, 10, 1)); }
    SUBCASE("adjacent seeds overlap") {
        const auto nb = w.neighbors(0)[0].to;
        CHECK(two_seed_connected(c0, 0, nb, 10, 1));
    }
    SUBCASE("distant seeds at p=0 are not connected; p=1 connects them") {
        std::uint32_t far = 0;
        for (std::uint32_t v = 0; v < w.vertex_count(); ++v)
            if (w.dist(v) == 6) {
                far = v;
                break;
            }
        CHECK_FALSE(two_seed_connected(c0, 0, far, 10, 2));
        CHECK(two_seed_connected(Config(labels, 1.0), 0, far, 10, 2));
    }
    SUBCASE("margin") {
        std::uint32_t far = 0;
        for (std::uint32_t v = 0; v < w.vertex_count(); ++v)
            if (w.dist(v) == 10) far = v;
        CHECK_THROWS_AS(two_seed_connected(c0, 0, far, 10, 2), margin_error);
    }
}

TEST_CASE("coarse field") {
    const GraphWindow w(z2(), 14);

    SUBCASE("p=1 gives X identically 1; p=0 identically 0") {
        const LabelField labels(w, 11, 0);
        const auto ones = coarse_field(labels, 1.0, 10);
        const auto zeros = coarse_field(labels, 0.0, 10);
        int evaluable = 0;
        for (std::uint32_t v = 0; v < w.vertex_count(); ++v) {
            CHECK(ones.evaluable(v) == (w.dist(v) + 10 <= 14));
            if (ones.evaluable(v)) {
                ++evaluable;
                CHECK(ones.open(v));
                CHECK_FALSE(zeros.open(v));
            }
        }
        CHECK(evaluable > 0);
    }
    SUBCASE("parallel construction is deterministic") {
        const LabelField labels(w, 12, 3);
        const auto serial = coarse_field(labels, 0.8, 10, 1);
        const auto parallel = coarse_field(labels, 0.8, 10, 4);
        CHECK(serial.value == parallel.value);
    }
    SUBCASE("k below the floor limit is rejected") {
        const LabelField labels(w, 11, 0);
        CHECK_THROWS_AS(coarse_field(labels, 0.5, 9), margin_error);
    }
}

TEST_CASE("coarse field is 2k-independent at distant vertex pairs") {
    const int k = 10;
    const GraphWindow w(z2(), 32);
    // pick u, v evaluable with d(u,v) > 2k (opposite sides of the origin)
    std::uint32_t u = 0, v = 0;
    for (std::uint32_t a = 0; a < w.vertex_count(); ++a) {
        if (w.dist(a) != 11) continue;
        const auto& ea = w.element_of(a);
        if (ea[0] > 0 && u == 0) u = a;
        if (ea[0] < 0) v = a;
    }
    REQUIRE(u != 0);
    REQUIRE(v != 0);

    const std::uint64_t N = 10000;
    double su = 0, sv = 0, suv = 0;
    for (std::uint64_t r = 0; r < N; ++r) {
        const LabelField labels(w, 13, r);
        const Config c(labels, 0.6);
        const bool xu = local_existence_uniqueness_at(c, u, k);
        const bool xv = local_existence_uniqueness_at(c, v, k);
        su += xu;
        sv += xv;
        suv += (xu && xv);
    }
    const double mu = su / N, mv = sv / N, muv = suv / N;
    const double cov = muv - mu * mv;
    const double denom = std::sqrt(mu * (1 - mu) * mv * (1 - mv));
    REQUIRE(denom > 0);
    CHECK(std::abs(cov / denom) < 3.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("smallest closed coarse cutset") {
    const GraphWindow w(z2(), 14);
    const LabelField labels(w, 14, 0);

    SUBCASE("X identically 1: no cutset") {
        const auto field = coarse_field(labels, 1.0, 10);
        CHECK_FALSE(smallest_closed_coarse_cutset(field).has_value());
    }
    SUBCASE("X identically 0: the neighbour set of o, size = degree") {
        const auto field = coarse_field(labels, 0.0, 10);
        const auto cut = smallest_closed_coarse_cutset(field);
        REQUIRE(cut.has_value());
        CHECK(cut->cutset.size() == 4);
        CHECK(cut->component == VertexSet::single(0));
        std::vector<std::uint32_t> nbs;
        for (const auto& arc : w.neighbors(0)) nbs.push_back(arc.to);
        CHECK(cut->cutset == VertexSet(nbs));
    }
    SUBCASE("returned cutsets pass the geometry module's minimality oracle") {
        // synthetic fields with dense blocking so cutsets actually occur
        int found = 0;
        for (std::uint64_t r = 0; r < 60; ++r) {
            CoarseField field;
            field.window = &w;
            field.k = 10;
            field.value.assign(w.vertex_count(), -1);
            rng::Stream stream(77, 1, r);
            for (std::uint32_t vv = 0; vv < w.vertex_count(); ++vv)
                if (w.dist(vv) + 10 <= 14) field.value[vv] = stream.next_unit() < 0.45 ? 1 : 0;
            const auto cut = smallest_closed_coarse_cutset(field);
            if (!cut) continue;
            ++found;
            for (const std::uint32_t c : cut->cutset) CHECK_FALSE(field.open(c));
            const auto analysis = analyze_cutset(w, cut->component, cut->cutset);
            CHECK(analysis.cuts);
            CHECK(analysis.minimal);
        }
        CHECK(found > 0);
    }
}

TEST_CASE("hybrid crossing count") {
    const GraphWindow w(z2(), 16);

    SUBCASE("p=0, delta=0 gives zero") {
        const LabelField labels(w, 15, 0);
        CHECK(hybrid_crossing_count(labels, 0.0, 0.0, 4, 4) == 0);
    }
    SUBCASE("p + delta = 1 forces count <= 1, equal to 1 iff some p-cluster crosses") {
        for (std::uint64_t r = 0; r < 300; ++r) {
            const LabelField labels(w, 16, r);
            const double p = 0.55;
            const int n = 4, rr = 4;
            const int count = hybrid_crossing_count(labels, p, 1.0 - p, rr, n);
            CHECK(count <= 1);
            const Config c(labels, p);
            const auto dec = clusters_in(c, w.ball(4 * n));
            bool crosses = false;
            for (std::uint32_t e = 0; e < w.edge_count() && !crosses; ++e) {
                const auto [a, b] = w.edge_endpoints(e);
                if (w.dist(a) > 4 * n || w.dist(b) > 4 * n) continue;
                if (std::min(w.dist(a), w.dist(b)) > rr) continue;
                if (!c.open(e)) continue;
                crosses = dec.info(dec.id_of(a)).farthest_dist == 4 * n;
            }
            CHECK(count == (crosses ? 1 : 0));
        }
    }
    SUBCASE("count is nonincreasing in delta at fixed labels") {
        for (std::uint64_t r = 0; r < 1000; ++r) {
            const LabelField labels(w, 18, r);
            int prev = 1 << 30;
            for (const double delta : {0.0, 0.1, 0.2, 0.45}) {
                const int count = hybrid_crossing_count(labels, 0.55, delta, 4, 4);
                CHECK(count <= prev);
                prev = count;
            }
        }
    }
    SUBCASE("margins") {
        const LabelField labels(w, 15, 0);
        CHECK_THROWS_AS(hybrid_crossing_count(labels, 0.5, 0.1, 12, 5), margin_error);
        CHECK_THROWS_AS(hybrid_crossing_count(labels, 0.5, 0.1, 9, 4), margin_error);
    }
}

TEST_CASE("two-seed function is approximately multiplicative (statistical)") {
    // tau(x,z) >= tau(x,y) tau(y,z) - eps(n) - 3 * combined standard error
    const int n = 16;
    const GraphWindow w(z2(), n);
    const SeedSchedule sched{0.5};
    const int sigma = sched.sigma(n);
    REQUIRE(sigma >= 1);

    auto vertex_at = [&](int cx, int cy) {
        for (std::uint32_t v = 0; v < w.vertex_count(); ++v) {
            const auto& el = w.element_of(v);
            if (el[0] == cx && el[1] == cy) return v;
        }
        FAIL("vertex not found");
        return 0u;
    };
    const std::uint32_t x = vertex_at(-6, 0);
    const std::uint32_t y = vertex_at(0, 0);
    const std::uint32_t z = vertex_at(6, 0);

    const std::uint64_t N = 4000;
    std::uint64_t kxz = 0, kxy = 0, kyz = 0;
    for (std::uint64_t r = 0; r < N; ++r) {
        const LabelField labels(w, 61, r);
        const Config c(labels, 0.7);
        kxz += two_seed_connected(c, x, z, n, sigma);
        kxy += two_seed_connected(c, x, y, n, sigma);
        kyz += two_seed_connected(c, y, z, n, sigma);
    }
    const double txz = double(kxz) / N, txy = double(kxy) / N, tyz = double(kyz) / N;
    auto se = [&](double t) { return std::sqrt(t * (1 - t) / double(N)); };
    const double combined = std::sqrt(se(txz) * se(txz) + tyz * tyz * se(txy) * se(txy) +
                                      txy * txy * se(tyz) * se(tyz));
    CHECK(txz >= txy * tyz - sched.epsilon(n) - 3 * combined);
}

TEST_CASE("boundary crossing is monotone increasing in p per configuration") {
    const GraphWindow w(z2(), 18);
    for (std::uint64_t r = 0; r < 500; ++r) {
        const LabelField labels(w, 62, r);
        bool prev = false;
        for (const double p : {0.3, 0.5, 0.7, 0.9}) {
            // reach-n is (trunc_radius OR touches boundary), and the volume
            // event at n_vol=1 is exactly "does not touch the boundary"
            const bool now = truncated_radius_event(labels, p, 6) ||
                             !truncated_volume_event(labels, p, 1);
            if (prev) CHECK(now);
            prev = now;
        }
    }
}

TEST_CASE("events behave on the heisenberg graph") {
    const GroupModel heis = build_group(GroupSpec::heisenberg());
    const GraphWindow w(heis, 8);
    const LabelField l1(w, 63, 0);
    CHECK_FALSE(piv(Config(l1, 1.0), 0, 2, 6));
    CHECK(uniqueness(Config(l1, 0.0), 0, 2, 6));
    for (std::uint64_t r = 0; r < 2000; ++r) {
        const LabelField labels(w, 63, r);
        const Config c(labels, 0.35);
        CHECK(uniqueness(c, 0, 2, 6) == !piv(c, 0, 2, 6));
    }
    // sprinkled uniqueness stays monotone in q off the lattice as well
    for (std::uint64_t r = 0; r < 1000; ++r) {
        const LabelField labels(w, 64, r);
        bool prev = false;
        for (const double q : {0.35, 0.5, 0.75, 1.0}) {
            const bool now = sprinkled_uniqueness(labels, 0.35, q, 0, 2, 6);
            if (prev) CHECK(now);
            prev = now;
        }
    }
}
