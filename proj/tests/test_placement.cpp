#include <catch_amalgamated.hpp>

#include "mgon/placement.hpp"

using namespace mgon;

namespace {

Topology load_data(const char* name) {
    return load_topology(std::string(MGON_SOURCE_DIR) + "/data/" + name);
}

std::vector<Request> workload(const Topology& topo, int n, uint64_t seed) {
    TrafficSpec spec;
    spec.sizes = {2, 3, 4};
    spec.size_probs = {0.5, 0.3, 0.2};
    return generate_requests(spec, topo, n, seed, false);
}

}  // namespace

TEST_CASE("switch-unit budgets") {
    Topology topo = load_data("placement5.txt");
    SECTION("cascade sizes for full switches") {
        // ports per node: 5, 8, 7, 6, 4
        CHECK(budget_units(topo, 0, false) == 30);
        CHECK(budget_units(topo, 1, false) == 48);
        CHECK(budget_units(topo, 2, false) == 42);
        CHECK(budget_units(topo, 3, false) == 36);
        CHECK(budget_units(topo, 4, false) == 8);  // a 4-port node: 8 units
        CHECK(budget_units(topo, 4, true) == 8);   // banding node of 4 ports: same
        CHECK(placement_total(topo, std::vector<char>(5, 0)) == 164);
        CHECK(placement_total(topo, std::vector<char>(5, 1)) == 60);
    }
    SECTION("a 16-port full switch needs 160 units") {
        Topology nsf = load_data("nsf.txt");
        // fabricate by checking the formula directly through s_exact
        CHECK(2 * 16 * s_exact(16) == 160);
    }
}

TEST_CASE("random placement") {
    Topology topo = load_data("placement5.txt");
    SECTION("full budget: no replacements") {
        PlacementResult r = place_random(topo, 164, 1);
        CHECK(r.order.empty());
        CHECK(r.total_units == 164);
        for (char f : r.flex) CHECK_FALSE(f);
    }
    SECTION("minimum budget: everything converted") {
        PlacementResult r = place_random(topo, 60, 1);
        CHECK(r.total_units == 60);
        for (char f : r.flex) CHECK(f);
    }
    SECTION("below-minimum budget is rejected") {
        CHECK_THROWS_AS(place_random(topo, 59, 1), InfeasibleBudget);
    }
    SECTION("budget respected and deterministic per seed") {
        Topology nsf = load_data("nsf_f3_5.txt");
        long long lo = placement_total(nsf, std::vector<char>(nsf.node_count, 1));
        long long hi = placement_total(nsf, std::vector<char>(nsf.node_count, 0));
        Rng rng(8);
        for (int iter = 0; iter < 50; ++iter) {
            long long budget = lo + (long long)rng.next_below((uint64_t)(hi - lo + 1));
            PlacementResult a = place_random(nsf, budget, iter);
            PlacementResult b = place_random(nsf, budget, iter);
            CHECK(a.total_units <= budget);
            CHECK(a.flex == b.flex);
            CHECK(a.order == b.order);
        }
    }
}

TEST_CASE("probe run records band fan-out and through-traffic") {
    Topology topo = load_data("star7.txt");
    std::vector<Request> reqs;
    int id = 0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            if (i != j) reqs.push_back({id++, i, j, 2});
    ProbeStats stats = probe_traffic(topo, reqs);
    CHECK(stats.through[0] == (long long)reqs.size());  // every pair transits the hub
    CHECK(stats.maxb[0] >= 1);
    for (int v = 1; v <= 6; ++v) {
        CHECK(stats.through[v] == 0);
        CHECK(stats.maxb[v] == 0);
    }
}

TEST_CASE("traffic-aware ordering") {
    Topology topo = load_data("placement5.txt");
    SECTION("all costs zero: order by port count, then id") {
        ProbeStats stats;
        stats.maxb.assign(5, 1);
        stats.through.assign(5, 10);
        PlacementResult r = place_traffic_aware(topo, 60, stats, 4);
        // node 4 saves nothing (4 ports), so the budget holds without it
        CHECK(r.order == std::vector<int>{1, 2, 3, 0});
        for (double c : r.cost) CHECK(c == 0.0);
        CHECK(r.total_units == 60);
    }
    SECTION("heavily banded hub converted last") {
        ProbeStats stats;
        stats.maxb = {1, 6, 2, 1, 1};
        stats.through = {0, 500, 0, 0, 0};
        PlacementResult r = place_traffic_aware(topo, 60, stats, 4);
        CHECK(r.cost[1] == 500.0 / 8);
        CHECK(r.order == std::vector<int>{2, 3, 0, 4, 1});
    }
    SECTION("replacement stops once the budget holds") {
        ProbeStats stats;
        stats.maxb.assign(5, 1);
        stats.through.assign(5, 0);
        PlacementResult r = place_traffic_aware(topo, 120, stats, 4);
        CHECK(r.total_units <= 120);
        // node 1 alone saves 32 units (164 -> 132); node 2 next (132 -> 104)
        CHECK(r.order == std::vector<int>{1, 2});
    }
}

TEST_CASE("pipeline endpoints") {
    Topology topo = load_data("placement5.txt");
    auto reqs = workload(topo, 40, 5);
    SECTION("full budget reproduces the pure full-switch run") {
        PlacementOutcome rp = placement_pipeline(topo, 164, reqs, PlacementScheme::Random, 4, 3);
        RfbsaParams conv;
        conv.flex_node.assign(topo.node_count, 0);
        SpectrumState state(topo);
        for (const auto& r : reqs) REQUIRE(rfbsa_route(r, state, conv).has_value());
        CHECK(rp.blocked == 0);
        CHECK(rp.msu.per_fiber == msu_metrics(state).per_fiber);
    }
    SECTION("minimum budget forces every saving conversion") {
        PlacementOutcome rp = placement_pipeline(topo, 60, reqs, PlacementScheme::Random, 4, 3);
        PlacementOutcome tap =
            placement_pipeline(topo, 60, reqs, PlacementScheme::TrafficAware, 4, 3);
        // nodes 0-3 must convert in both; node 4 (no savings) is free choice
        for (int v = 0; v < 4; ++v) {
            CHECK(rp.placement.flex[v]);
            CHECK(tap.placement.flex[v]);
        }
        CHECK(rp.placement.total_units == 60);
        CHECK(tap.placement.total_units == 60);
    }
}

TEST_CASE("traffic-aware beats random on average at the mid budget") {
    Topology topo = load_data("placement5.txt");
    double rp_sum = 0, tap_sum = 0;
    int runs = 0;
    for (int seed = 1; seed <= 10; ++seed) {
        auto reqs = workload(topo, 60, seed);
        PlacementOutcome rp =
            placement_pipeline(topo, 89, reqs, PlacementScheme::Random, 4, seed);
        PlacementOutcome tap =
            placement_pipeline(topo, 89, reqs, PlacementScheme::TrafficAware, 4, seed);
        REQUIRE(rp.placement.total_units <= 89);
        REQUIRE(tap.placement.total_units <= 89);
        rp_sum += rp.msu.avg;
        tap_sum += tap.msu.avg;
        ++runs;
    }
    REQUIRE(runs == 10);
    CHECK(tap_sum <= rp_sum);
}

TEST_CASE("keeping the better of both placements never loses") {
    Topology topo = load_data("placement5.txt");
    for (int seed = 1; seed <= 8; ++seed) {
        auto reqs = workload(topo, 50, 100 + seed);
        auto rp = placement_pipeline(topo, 89, reqs, PlacementScheme::Random, 4, seed);
        auto tap = placement_pipeline(topo, 89, reqs, PlacementScheme::TrafficAware, 4, seed);
        auto best = placement_pipeline(topo, 89, reqs, PlacementScheme::Best, 4, seed);
        CHECK(best.blocked <= std::min(rp.blocked, tap.blocked));
        if (best.blocked == rp.blocked && best.blocked == tap.blocked)
            CHECK(best.msu.avg <= std::min(rp.msu.avg, tap.msu.avg));
    }
}
