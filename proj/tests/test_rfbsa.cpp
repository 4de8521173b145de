#include <catch_amalgamated.hpp>

#include "mgon/rfbsa.hpp"

using namespace mgon;

namespace {

Topology load_data(const char* name) {
    return load_topology(std::string(MGON_SOURCE_DIR) + "/data/" + name);
}

// Four-node example network: node 0 feeds node 1 over two fibers; nodes
// 1, 2, 3 are interconnected (links 1-2, 1-3, 3-2, two fibers each).
// Directed link ids: 0:0->1, 2:1->2, 4:1->3, 6:3->2 (odd ids are reverses).
// Global fiber = 2*link + index.
struct Example {
    Topology topo;
    SpectrumState state;
    RfbsaParams params;

    Example() : topo(load_data("rfbsa4.txt")), state(topo) {
        params.alpha = 0.1;
        params.beta = 1.0;
        params.band_limit = 2;
        params.variant = CostVariant::StaticGlobal;
        // pre-existing traffic (0-based slots)
        state.allocate(-1, {{{0, {2, 2}}}, {}});     // first 0->1 fiber
        state.allocate(-2, {{{4, {0, 2}}}, {}});     // first 1->2 fiber
        state.allocate(-3, {{{5, {0, 3}}}, {}});     // second 1->2 fiber
        state.allocate(-4, {{{8, {0, 2}}}, {}});     // first 1->3 fiber
        // pre-existing bands at node 1; the first input fiber is saturated
        state.force_band(1, 0, 4);
        state.force_band(1, 0, 8);
        state.force_band(1, 1, 5);
    }
};

}  // namespace

TEST_CASE("edge cost functions") {
    Example ex;
    SECTION("switching") {
        CHECK(switching_cost(ex.state, ex.params, 1, 0, 4) == 0.0);       // established
        CHECK(switching_cost(ex.state, ex.params, 3, 9, 12) == 0.0);      // fresh, b=0
        CHECK(switching_cost(ex.state, ex.params, 1, 1, 9) == 0.1);       // b=1, new band
        CHECK(switching_cost(ex.state, ex.params, 1, 0, 5) == kInfCost);  // b=B
        RfbsaParams conv = ex.params;
        conv.flex_node.assign(4, 0);
        CHECK(switching_cost(ex.state, conv, 1, 0, 5) == 0.0);  // full switch
        RfbsaParams norm = ex.params;
        norm.variant = CostVariant::StaticPath;
        CHECK(switching_cost(ex.state, norm, 1, 1, 9) == 0.1 * 1 / 2);
    }
    SECTION("spectrum") {
        CHECK(spectrum_cost(ex.state, ex.params, 4, {0, 2}, false) == kInfCost);  // occupied
        CHECK(spectrum_cost(ex.state, ex.params, 0, {0, 2}, false) == 1.0);  // under usage
        CHECK(spectrum_cost(ex.state, ex.params, 0, {4, 2}, false) == 6.0);  // raises usage
        RfbsaParams norm = ex.params;
        norm.variant = CostVariant::StaticPath;
        norm.omega = 16;
        CHECK(spectrum_cost(ex.state, norm, 0, {4, 2}, false) == (6.0 - 4.0) / 16 + 1.0);
        CHECK(spectrum_cost(ex.state, norm, 0, {0, 2}, false) == 1.0);
        RfbsaParams dyn = ex.params;
        dyn.variant = CostVariant::DynamicCompact;
        CHECK(spectrum_cost(ex.state, dyn, 1, {3, 2}, true) == 4.0);   // start index
        CHECK(spectrum_cost(ex.state, dyn, 1, {3, 2}, false) == 1.0);  // transit fiber
    }
}

TEST_CASE("worked example: candidate generation and the committed path") {
    Example ex;
    Request req{7, 0, 2, 2};

    SECTION("first source fiber: finite only from start 4, two-hop, cost 12") {
        auto cand = detail::aux_graph_candidate(ex.state, ex.params, 0, 2, 2, nullptr);
        REQUIRE(cand.cost < kInfCost);
        CHECK(cand.cost == 12.0);
        CHECK(cand.si == 4);
        CHECK(cand.fibers == std::vector<int>{0, 4});
        // no window below start 4 admits any finite path from this fiber
        for (int s = 0; s < 4; ++s) {
            auto probe = detail::window_search(ex.state, ex.params, 0, {s, 2}, 2, nullptr);
            CHECK(probe.cost == kInfCost);
        }
    }
    SECTION("direct continuation on the second source fiber prices at 10") {
        CHECK(evaluate_fiber_path(ex.state, ex.params, {1, 5}, {3, 2}) == 10.0);
    }
    SECTION("committed lightpath: three hops, lowest slots, cost 6.1") {
        auto lp = rfbsa_route(req, ex.state, ex.params);
        REQUIRE(lp.has_value());
        CHECK(lp->fibers == std::vector<int>{1, 9, 12});
        CHECK(lp->range == SlotRange{0, 2});
        CHECK(lp->total_cost == Catch::Approx(6.1).epsilon(1e-12));
        CHECK(ex.state.band_established(1, 1, 9));
        CHECK(ex.state.bands_from(1, 1) == 2);
        CHECK(validate_lightpath(ex.state, ex.params, req, *lp).empty());
    }
    SECTION("cost audit: recomputation on the pre-commit state matches") {
        Example fresh;
        auto lp = rfbsa_route(req, ex.state, ex.params);
        REQUIRE(lp.has_value());
        CHECK(evaluate_fiber_path(fresh.state, fresh.params, lp->fibers, lp->range) ==
              lp->total_cost);
    }
}

TEST_CASE("empty line network routes on the shortest path at the lowest slots") {
    Topology topo;
    {
        std::string path = std::string(MGON_SOURCE_DIR) + "/data/rfbsa4.txt";
        topo = load_topology(path);
    }
    SpectrumState state(topo);
    RfbsaParams params;
    params.variant = CostVariant::StaticGlobal;
    Request req{1, 0, 3, 3};
    auto lp = rfbsa_route(req, state, params);
    REQUIRE(lp.has_value());
    CHECK(lp->fibers == std::vector<int>{0, 8});  // 0->1, 1->3, first fibers
    CHECK(lp->range == SlotRange{0, 3});
    CHECK(lp->total_cost == 2 * 3.0);  // two fibers, window end 3, no bands yet
    CHECK(validate_lightpath(state, params, req, *lp).empty());
}

TEST_CASE("tiny instances never beat the exhaustive optimum") {
    Topology topo = load_data("rfbsa4.txt");
    Rng rng(31);
    for (int iter = 0; iter < 40; ++iter) {
        int n = 1 + (int)rng.next_below(3);
        std::vector<Request> reqs;
        for (int i = 0; i < n; ++i) {
            int src = (int)rng.next_below(4), dst;
            do dst = (int)rng.next_below(4);
            while (dst == src);
            reqs.push_back({i, src, dst, 1 + (int)rng.next_below(2)});
        }
        RfbsaParams params;
        params.band_limit = 2;
        SpectrumState state(topo, 8);
        bool all_routed = true;
        for (const auto& r : reqs) {
            auto lp = rfbsa_route(r, state, params);
            if (!lp) {
                all_routed = false;
                break;
            }
            CHECK(validate_lightpath(state, params, r, *lp).empty());
        }
        if (!all_routed) continue;
        int opt = oracle_min_msu(topo, reqs, params, 8);
        REQUIRE(opt <= 8);
        CHECK(state.max_msu() >= opt);
    }
}

TEST_CASE("unconstrained search is at least as good as first-fit per request") {
    Topology topo = load_data("rfbsa4.txt");
    RfbsaParams params;
    params.alpha = 0.0;
    params.band_limit = 1 << 28;  // effectively unlimited banding
    Rng rng(77);
    int checked = 0;
    for (int iter = 0; iter < 60; ++iter) {
        // build a random starting state with first-fit commits
        SpectrumState state(topo);
        int preload = (int)rng.next_below(6);
        for (int i = 0; i < preload; ++i) {
            int src = (int)rng.next_below(4), dst;
            do dst = (int)rng.next_below(4);
            while (dst == src);
            Request r{-100 - i, src, dst, 1 + (int)rng.next_below(3)};
            auto sp = topo.shortest_path(src, dst);
            spff_route(r, state, params, {sp});
        }
        int src = (int)rng.next_below(4), dst;
        do dst = (int)rng.next_below(4);
        while (dst == src);
        Request probe{1000, src, dst, 1 + (int)rng.next_below(3)};
        SpectrumState a = state, b = state;
        auto lp_r = rfbsa_route(probe, a, params);
        auto lp_s = spff_route(probe, b, params, {topo.shortest_path(src, dst)});
        REQUIRE(lp_r.has_value());
        REQUIRE(lp_s.has_value());
        CHECK(a.max_msu() <= b.max_msu());
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("committed start slot is the lowest workable one for the winner") {
    Topology topo = load_data("rfbsa4.txt");
    Rng rng(5);
    for (int iter = 0; iter < 40; ++iter) {
        RfbsaParams params;
        params.band_limit = 2;
        SpectrumState state(topo);
        for (int i = 0; i < (int)rng.next_below(5); ++i) {
            int src = (int)rng.next_below(4), dst;
            do dst = (int)rng.next_below(4);
            while (dst == src);
            rfbsa_route({-1 - i, src, dst, 1 + (int)rng.next_below(3)}, state, params);
        }
        int src = (int)rng.next_below(4), dst;
        do dst = (int)rng.next_below(4);
        while (dst == src);
        Request req{99, src, dst, 2};
        SpectrumState before = state;
        auto lp = rfbsa_route(req, state, params);
        if (!lp) continue;  // banding may legitimately exhaust every graph
        int kappa = lp->fibers.front();
        for (int s = 0; s < lp->range.start; ++s) {
            if (!before.is_free(kappa, {s, 2})) continue;
            auto probe = detail::window_search(before, params, kappa, {s, 2}, dst, nullptr);
            CHECK(probe.cost == kInfCost);
        }
    }
}

TEST_CASE("first-fit baseline") {
    Topology topo = load_data("rfbsa4.txt");
    RfbsaParams params;
    SECTION("empty network: first fibers, lowest window") {
        SpectrumState state(topo);
        Request req{1, 0, 2, 2};
        auto lp = spff_route(req, state, params, {topo.shortest_path(0, 2)});
        REQUIRE(lp.has_value());
        CHECK(lp->fibers == std::vector<int>{0, 4});
        CHECK(lp->range == SlotRange{0, 2});
    }
    SECTION("band-saturated continuations are filtered out") {
        SpectrumState state(topo);
        RfbsaParams tight = params;
        tight.band_limit = 1;
        // first 0->1 fiber already banded to the (fully busy) first 1->2 fiber
        state.force_band(1, 0, 4);
        state.allocate(-1, {{{4, {0, 16}}}, {}});
        Request req{1, 0, 2, 2};
        auto lp = spff_route(req, state, tight, {topo.shortest_path(0, 2)});
        REQUIRE(lp.has_value());
        CHECK(lp->fibers == std::vector<int>{1, 5});  // fiber 0 cannot continue
        CHECK(lp->range == SlotRange{0, 2});
    }
    SECTION("multiple paths: first one with a usage-neutral window wins") {
        SpectrumState state(topo);
        // raise network usage so low windows count as neutral
        state.allocate(-1, {{{12, {0, 6}}}, {}});
        // block the direct 1->2 fibers low down so path 1 has no neutral window
        state.allocate(-2, {{{4, {0, 5}}, {5, {0, 5}}}, {}});
        Request req{1, 0, 2, 2};
        std::vector<std::vector<int>> paths = {{0, 1, 2}, {0, 1, 3, 2}};
        auto lp = spff_route(req, state, params, paths);
        REQUIRE(lp.has_value());
        CHECK(lp->fibers.size() == 3);  // detoured through node 3
        CHECK(lp->range.start == 0);
    }
    SECTION("blocked when no window fits anywhere") {
        SpectrumState state(topo, 4);
        state.allocate(-1, {{{0, {0, 4}}, {1, {0, 4}}}, {}});
        Request req{1, 0, 2, 2};
        CHECK_FALSE(spff_route(req, state, params, {topo.shortest_path(0, 2)}).has_value());
    }
}

TEST_CASE("usage metrics") {
    Topology topo = load_data("rfbsa4.txt");
    SpectrumState state(topo);
    SECTION("empty state is all zeros") {
        MsuMetrics m = msu_metrics(state);
        CHECK(m.max == 0);
        CHECK(m.avg == 0.0);
        for (int v : m.per_fiber) CHECK(v == 0);
    }
    SECTION("one lightpath over three fibers") {
        state.allocate(1, {{{0, {0, 2}}, {8, {0, 2}}, {12, {0, 2}}}, {}});
        MsuMetrics m = msu_metrics(state);
        CHECK(m.max == 2);
        CHECK(m.per_fiber[0] == 2);
        CHECK(m.per_fiber[8] == 2);
        CHECK(m.per_fiber[12] == 2);
        CHECK(m.per_fiber[1] == 0);
        CHECK(m.avg == Catch::Approx(6.0 / state.fiber_count()));
    }
    SECTION("random states keep max at or above mean") {
        Rng rng(3);
        for (int iter = 0; iter < 50; ++iter) {
            SpectrumState s(topo);
            for (int i = 0; i < 10; ++i) {
                int f = (int)rng.next_below(s.fiber_count());
                int start = (int)rng.next_below(14);
                if (s.is_free(f, {start, 2})) s.allocate(1000 + iter * 100 + i, {{{f, {start, 2}}}, {}});
            }
            MsuMetrics m = msu_metrics(s);
            CHECK(m.max >= m.avg);
        }
    }
}

TEST_CASE("backbone smoke run: joint search uses no more spectrum than first-fit") {
    Topology topo = load_data("nsf_f5_10.txt");
    TrafficSpec spec;
    spec.sizes = {2, 3, 4, 6, 8};
    spec.size_probs = {0.3, 0.25, 0.2, 0.15, 0.1};
    RfbsaParams params;  // alpha = beta = 1
    // a single run can go either way; the joint search wins on average
    int joint_total = 0, ff_total = 0;
    for (int seed : {1, 2, 3}) {
        auto reqs = generate_requests(spec, topo, 200, seed, false);
        SpectrumState flex_state(topo), ff_state(topo);
        for (const auto& r : reqs) {
            auto lp = rfbsa_route(r, flex_state, params);
            REQUIRE(lp.has_value());
            REQUIRE(validate_lightpath(flex_state, params, r, *lp).empty());
            auto sp = spff_route(r, ff_state, params, {topo.shortest_path(r.src, r.dst)});
            REQUIRE(sp.has_value());
        }
        joint_total += flex_state.max_msu();
        ff_total += ff_state.max_msu();
        CHECK(flex_state.max_msu() > 0);
    }
    CHECK(joint_total < ff_total);
}

TEST_CASE("dynamic compaction variant releases and refuses when full") {
    Topology topo = load_data("rfbsa4.txt");
    RfbsaParams params;
    params.variant = CostVariant::DynamicCompact;
    params.alpha = 100;
    SpectrumState state(topo, 4);
    Request a{1, 0, 2, 2}, b{2, 0, 2, 2}, c{3, 0, 2, 4};
    REQUIRE(rfbsa_route(a, state, params).has_value());
    REQUIRE(rfbsa_route(b, state, params).has_value());
    // a four-slot demand cannot fit either source fiber's remaining space
    state.allocate(-1, {{{0, {2, 2}}, {1, {2, 2}}}, {}});
    CHECK_FALSE(rfbsa_route(c, state, params).has_value());
    state.release(1);
    state.release(-1);
    Request d{4, 0, 2, 4};
    auto lp = rfbsa_route(d, state, params);
    REQUIRE(lp.has_value());
    CHECK(lp->range == SlotRange{0, 4});
}
