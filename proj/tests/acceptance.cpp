// Release gate: one self-contained check per line of output. Each check
// rebuilds its own inputs (worked examples, random corpora, simulations) and
// prints PASS or FAIL; the exit status is the number of failing checks.
//
// Usage: acceptance <source-dir>   (the source tree provides data/*.txt)

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mgon/cosched.hpp"
#include "mgon/dynrsa.hpp"
#include "mgon/oxc.hpp"
#include "mgon/placement.hpp"
#include "mgon/rfbsa.hpp"
#include "mgon/sim.hpp"
#include "mgon/waveband.hpp"

using namespace mgon;
using Rational = boost::multiprecision::cpp_rational;

namespace {

std::string g_src;
int g_failed = 0;

std::string data(const char* name) { return g_src + "/data/" + name; }

#define REQ(cond)                  \
    do {                           \
        if (!(cond)) return false; \
    } while (0)

template <class F>
void criterion(int n, const char* what, F body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %2d. %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", n, what, secs,
                err.empty() ? "" : " exception: ", err.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

// Run fn(i) for i in [0, n) across a few worker threads.
template <class Fn>
void parallel_for(int n, Fn fn, int threads = 8) {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(n, threads); ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- helpers --

BinaryMatrix random_binary(Rng& rng, int w, int cols, double p_one = 0.4) {
    BinaryMatrix m(w, std::vector<uint8_t>(cols, 0));
    for (auto& row : m)
        for (auto& v : row) v = rng.next_double() < p_one;
    return m;
}

RwaMatrix random_ternary(Rng& rng, int w, int cols, double p_one = 0.3, double p_x = 0.2) {
    BinaryMatrix dummy(w, std::vector<uint8_t>(cols, 0));
    RwaMatrix m = to_ternary(dummy);
    for (int i = 0; i < w; ++i)
        for (int c = 0; c < cols; ++c) {
            double u = rng.next_double();
            m.cells[i][c] = u < p_one ? Cell::One : (u < p_one + p_x ? Cell::DontCare : Cell::Zero);
        }
    return m;
}

// 4-node mesh demand set: two lightpaths per node pair, first-fit wavelengths.
std::vector<RoutedLightpath> example_paths() {
    return {
        {{0, 1}, 0}, {{0, 2}, 0}, {{0, 3}, 0}, {{1, 3}, 0}, {{2, 3}, 0},
        {{1, 0, 2}, 1}, {{0, 3}, 1}, {{1, 3}, 1}, {{2, 3}, 1},
        {{0, 1}, 2}, {{0, 2}, 2},
        {{1, 0, 2}, 3},
    };
}

// Worked demand table for the D=2, F=3, W=4 node.
DemandMatrix example_demand() {
    DemandMatrix dm;
    dm.Q = {{3, 1}, {2, 2}, {1, 3}, {3, 1}, {0, 4}, {3, 1}};
    return dm;
}

int blocked_on_link(const NodeAssignment& a, int link) {
    int n = 0;
    for (const auto& r : a.requests) n += r.blocked && r.out_link == link;
    return n;
}

DemandMatrix bounded_demand(const NodeSpec& spec, Rng& rng) {
    DemandMatrix dm = random_demand(spec, rng);
    for (int d = 0; d < spec.D; ++d) {
        int total = 0;
        for (int f = 0; f < spec.N(); ++f) total += dm.Q[f][d];
        while (total > spec.link_capacity()) {
            int f = (int)rng.next_below(spec.N());
            if (dm.Q[f][d] > 0) {
                --dm.Q[f][d];
                --total;
            }
        }
    }
    return dm;
}

bool packing_invariants_hold(const NodeSpec& spec, const NodeAssignment& a) {
    std::map<int, int> per_fiber;
    std::map<int, std::set<int>> fibers_per_group;
    std::map<int, std::set<int>> colors_per_vertex;
    for (const auto& r : a.requests) {
        if (r.blocked) continue;
        ++per_fiber[r.out_fiber];
        fibers_per_group[r.in_fiber * spec.D + r.out_link].insert(r.out_fiber);
        if (r.wavelength < 0 || r.wavelength >= spec.W) return false;
        if (!colors_per_vertex[r.in_fiber].insert(r.wavelength).second) return false;
        if (!colors_per_vertex[spec.N() + r.out_fiber].insert(r.wavelength).second) return false;
    }
    for (auto& [f, n] : per_fiber)
        if (n > spec.W) return false;
    for (int d = 0; d < spec.D; ++d) {
        int partial = 0;
        for (int j = 0; j < spec.F; ++j) {
            auto it = per_fiber.find(d * spec.F + j);
            int n = it == per_fiber.end() ? 0 : it->second;
            if (n > 0 && n < spec.W) ++partial;
        }
        if (partial > 1) return false;
    }
    for (auto& [g, fs] : fibers_per_group)
        if (fs.size() > 2) return false;
    return true;
}

// Reference probability table for the 5-node network, 0-based node paths.
PathTable table5() {
    PathTable t;
    auto add = [&](int s, int d, std::vector<std::vector<int>> paths, std::vector<double> p) {
        t.entries.push_back({s, d, std::move(paths), std::move(p)});
    };
    add(0, 1, {{0, 1}}, {1.0});
    add(0, 2, {{0, 2}}, {1.0});
    add(0, 3, {{0, 1, 3}, {0, 2, 3}}, {1.0 / 3, 2.0 / 3});
    add(0, 4, {{0, 1, 4}, {0, 2, 4}}, {1.0, 0.0});
    add(1, 2, {{1, 0, 2}, {1, 3, 2}, {1, 4, 2}}, {1.0, 0.0, 0.0});
    add(1, 3, {{1, 3}}, {1.0});
    add(1, 4, {{1, 4}}, {1.0});
    add(2, 3, {{2, 3}}, {1.0});
    add(2, 4, {{2, 4}}, {1.0});
    add(3, 4, {{3, 1, 4}, {3, 2, 4}}, {2.0 / 3, 1.0 / 3});
    return t;
}

std::vector<RouteSpec> routes5() {
    std::vector<RouteSpec> routes;
    for (const auto& e : table5().entries) routes.push_back({e.src, e.dst, 1.0, e.paths});
    return routes;
}

// Independent objective evaluation: mean + max per-fiber load.
double eval_objective(const Topology& topo, const std::vector<RouteSpec>& routes,
                      const std::vector<std::vector<double>>& probs) {
    std::map<std::pair<int, int>, double> load;
    std::map<std::pair<int, int>, int> fibers;
    for (const auto& l : topo.links) {
        auto key = std::minmax(l.src, l.dst);
        fibers[{key.first, key.second}] = l.fiber_count;
        load[{key.first, key.second}] = 0;
    }
    for (size_t r = 0; r < routes.size(); ++r)
        for (size_t k = 0; k < routes[r].candidates.size(); ++k) {
            const auto& path = routes[r].candidates[k];
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                auto key = std::minmax(path[i], path[i + 1]);
                load[{key.first, key.second}] += routes[r].load * probs[r][k];
            }
        }
    double sum = 0, mx = 0;
    for (auto& [key, w] : load) {
        double per = w / fibers[key];
        sum += per;
        mx = std::max(mx, per);
    }
    return sum / (double)load.size() + mx;
}

Job chain_job(int id, std::vector<long long> work, std::vector<long long> data) {
    Job j;
    j.id = id;
    j.work = std::move(work);
    for (size_t i = 0; i + 1 < j.work.size(); ++i) j.transfer[{(int)i, (int)i + 1}] = data[i];
    return j;
}

long long critical_path_bound(const Job& job, const ClusterNet& net) {
    int hmax = *std::max_element(net.vm_capacity.begin(), net.vm_capacity.end());
    auto layers = layerize(job);
    std::vector<long long> down(job.task_count(), 0);
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        for (int i : *it) {
            long long k = std::min<long long>(hmax, job.work[i]);
            long long here = (job.work[i] + k - 1) / k;
            long long tail = 0;
            for (int r : job.children(i)) tail = std::max(tail, down[r]);
            down[i] = here + tail;
        }
    long long bound = 0;
    for (long long d : down) bound = std::max(bound, d);
    return bound;
}

// Exhaustive minimum makespan for tiny instances under abundant spectrum:
// with enough subcarriers every remote transfer takes one slot, so the only
// shared resource left is per-slot VM capacity. Iterative deepening over the
// target makespan; the first feasible target is optimal, and relaxing the
// spectrum means the result never exceeds a real schedule's makespan.
struct TinyOracle {
    const std::vector<Job>& jobs;
    const ClusterNet& net;
    std::vector<std::pair<int, int>> order;
    std::map<std::pair<int, long long>, int> used;
    std::vector<std::vector<std::pair<long long, long long>>> window;
    std::map<std::pair<int, int>, int> node_;

    explicit TinyOracle(const std::vector<Job>& js, const ClusterNet& n) : jobs(js), net(n) {
        for (size_t j = 0; j < jobs.size(); ++j) {
            window.push_back(std::vector<std::pair<long long, long long>>(jobs[j].task_count()));
            for (const auto& layer : layerize(jobs[j]))
                for (int i : layer) order.push_back({(int)j, i});
        }
    }

    bool place(size_t idx, long long target) {
        if (idx == order.size()) return true;
        auto [j, i] = order[idx];
        const Job& job = jobs[j];
        long long lower = 1;
        for (int p : job.parents(i)) lower = std::max(lower, window[j][p].second + 1);
        for (int n = 0; n < net.topo.node_count; ++n) {
            long long lb = lower;
            for (int p : job.parents(i))
                if (window[j][p].first >= 0 && node_.at({j, p}) != n)
                    lb = std::max(lb, window[j][p].second + 2);  // one-slot transfer
            std::vector<long long> durs;
            for (long long k = std::min<long long>(net.vm_capacity[n], job.work[i]); k >= 1; --k) {
                long long d = (job.work[i] + k - 1) / k;
                if (durs.empty() || durs.back() != d) durs.push_back(d);
            }
            for (long long d : durs)
                for (long long s = lb; s + d - 1 <= target; ++s) {
                    long long k = (job.work[i] + d - 1) / d;
                    bool ok = true;
                    for (long long t = s; t <= s + d - 1 && ok; ++t)
                        ok = used[{n, t}] + k <= net.vm_capacity[n];
                    if (!ok) continue;
                    for (long long t = s; t <= s + d - 1; ++t) used[{n, t}] += (int)k;
                    window[j][i] = {s, s + d - 1};
                    node_[{j, i}] = n;
                    if (place(idx + 1, target)) return true;
                    for (long long t = s; t <= s + d - 1; ++t) used[{n, t}] -= (int)k;
                    window[j][i] = {-1, -1};
                }
        }
        return false;
    }

    long long solve(long long upper) {
        long long lb = 0;
        for (const Job& j : jobs) lb = std::max(lb, critical_path_bound(j, net));
        for (long long target = lb; target <= upper; ++target) {
            used.clear();
            node_.clear();
            for (auto& w : window)
                for (auto& p : w) p = {-1, -1};
            if (place(0, target)) return target;
        }
        return upper + 1;
    }
};

// ------------------------------------------------------------- criteria ----

bool c1_band_counting() {
    BinaryMatrix col = {{1}, {0}, {0}, {1}, {1}};
    REQ(count_bands(col).total == 2);
    Rng rng(17);
    for (int iter = 0; iter < 1000; ++iter) {
        BinaryMatrix m = random_binary(rng, 20, 30);
        std::vector<int> order(20);
        std::iota(order.begin(), order.end(), 0);
        REQ(count_bands(m).total == bands_by_distance_sum(m, order));
    }
    return true;
}

bool c2_worked_ordering() {
    Topology topo = load_topology(data("band4.txt"));
    RwaMatrix m = encode_rwa(topo, example_paths());
    BandPlan nn = solve_bmp_fixed_start(m, BmpStrategy::NN, 0);
    REQ(nn.total_bands == 11);
    REQ(bands_by_distance_sum(fill_dont_cares(m), nn.order) == 11);
    BandPlan oracle = oracle_bmp(to_ternary(fill_dont_cares(m)));  // 4 rows: 24 orderings
    REQ(oracle.total_bands <= 11);
    return true;
}

bool c3_ordering_sanity() {
    Rng rng(23);
    int improved = 0;
    for (int iter = 0; iter < 200; ++iter) {
        int rows = 4 + (int)rng.next_below(5);  // 4..8 rows
        RwaMatrix m = random_ternary(rng, rows, 12 + (int)rng.next_below(13));
        int identity = count_bands(fill_dont_cares(m)).total;
        BandPlan nn = solve_bmp(m, BmpStrategy::NN);
        BandPlan rdc = solve_bmp(m, BmpStrategy::RDC);
        BandPlan oracle = oracle_bmp(m);
        REQ(nn.total_bands <= identity);
        REQ(rdc.total_bands <= identity);
        REQ(oracle.total_bands <= nn.total_bands);
        REQ(oracle.total_bands <= rdc.total_bands);
        if (std::min(nn.total_bands, rdc.total_bands) < identity) ++improved;
    }
    return improved >= 100;
}

bool c4_full_switch_property() {
    NodeSpec spec;
    spec.arch = NodeArch::Conv;
    spec.D = 4;
    spec.F = 3;
    spec.W = 4;
    Rng rng(31);
    for (int iter = 0; iter < 1000; ++iter) {
        DemandMatrix dm = bounded_demand(spec, rng);
        NodeAssignment a = flex_assign(spec, dm);
        REQ(a.blocked_count() == 0);
        REQ(packing_invariants_hold(spec, a));
    }
    return true;
}

bool c5_worked_node_assignments() {
    NodeSpec spec;
    spec.arch = NodeArch::Hier;
    spec.D = 2;
    spec.F = 3;
    spec.W = 4;
    NodeAssignment hsa = hsa_assign(spec, example_demand());
    REQ(blocked_on_link(hsa, 0) == 1);
    // published random fiber selection: worst case on the first output link
    std::vector<std::vector<int>> choices = {{0, 0}, {1, 0}, {2, 1}, {1, 1}, {0, 2}, {0, 0}};
    NodeAssignment hrfs = hrfs_assign_with_choices(spec, example_demand(), choices);
    REQ(blocked_on_link(hrfs, 0) == 3);
    REQ(blocked_on_link(hrfs, 1) == 0);
    return true;
}

bool c6_grouped_matches_full() {
    NodeSpec hier;
    hier.arch = NodeArch::Hier;
    hier.k = 2;
    hier.D = 4;
    hier.F = 3;
    hier.W = 4;
    NodeSpec flex = hier;
    flex.arch = NodeArch::Conv;
    flex.k = 1;
    Rng rng(9);
    for (int iter = 0; iter < 1000; ++iter) {
        DemandMatrix dm = random_demand(hier, rng);
        REQ(hier_k2_assign(hier, dm).blocked_count() == flex_assign(flex, dm).blocked_count());
    }
    return true;
}

bool c7_analytic_vs_mc() {
    std::atomic<bool> ok{true};
    std::vector<std::pair<NodeArch, double>> points;
    for (NodeArch arch : {NodeArch::Conv, NodeArch::Hier})
        for (int i = 1; i <= 10; ++i) points.push_back({arch, 0.05 * i});
    parallel_for((int)points.size(), [&](int idx) {
        auto [arch, p] = points[idx];
        NodeSpec spec;
        spec.arch = arch;
        spec.D = 4;
        spec.F = 10;
        spec.W = 32;
        double analytic = blocking_analytic(spec, p);
        McResult mc = blocking_mc(spec, p, 10000, 99 + idx);
        // 1e-6 floor: 10^4 trials cannot resolve probabilities below ~1e-4,
        // so at low p the empirical band collapses to zero width while the
        // formula returns a tiny positive value.
        if (std::abs(analytic - mc.mean) > 3 * mc.stderr_ + 1e-6) ok = false;
    });
    return ok;
}

bool c8_cost_model() {
    REQ(s_exact(16) == 5);
    NodeSpec n16;
    n16.D = 4;
    n16.F = 4;  // 16 x 16 ports
    REQ(cost_model(n16).wss_units == 160);
    NodeSpec n4;
    n4.D = 4;
    n4.F = 1;  // 4 x 4 ports
    REQ(cost_model(n4).wss_units == 8);
    return true;
}

bool c9_joint_search_worked_example() {
    Topology topo = load_topology(data("rfbsa4.txt"));
    SpectrumState state(topo);
    RfbsaParams params;
    params.alpha = 0.1;
    params.beta = 1.0;
    params.band_limit = 2;
    params.variant = CostVariant::StaticGlobal;
    // pre-existing traffic (0-based slots)
    state.allocate(-1, {{{0, {2, 2}}}, {}});
    state.allocate(-2, {{{4, {0, 2}}}, {}});
    state.allocate(-3, {{{5, {0, 3}}}, {}});
    state.allocate(-4, {{{8, {0, 2}}}, {}});
    // pre-existing bands at node 1; the first input fiber is saturated
    state.force_band(1, 0, 4);
    state.force_band(1, 0, 8);
    state.force_band(1, 1, 5);

    // candidate from the first source fiber: detour, priced at 12
    auto cand = detail::aux_graph_candidate(state, params, 0, 2, 2, nullptr);
    REQ(cand.cost == 12.0);
    REQ(cand.si == 4);
    REQ((cand.fibers == std::vector<int>{0, 4}));
    // direct continuation on the second source fiber: priced at 10
    REQ(evaluate_fiber_path(state, params, {1, 5}, {3, 2}) == 10.0);
    // winner: three hops on the second fibers, lowest two slots
    Request req{7, 0, 2, 2};
    auto lp = rfbsa_route(req, state, params);
    REQ(lp.has_value());
    REQ((lp->fibers == std::vector<int>{1, 9, 12}));
    REQ((lp->range == SlotRange{0, 2}));
    REQ(std::abs(lp->total_cost - 6.1) < 1e-9);
    return true;
}

bool c10_joint_search_vs_baseline() {
    Topology topo = load_topology(data("nsf_f5_10.txt"));
    TrafficSpec spec;
    spec.sizes = {2, 3, 4};
    spec.size_probs = {0.5, 0.3, 0.2};
    const int seeds = 10, n = 500;
    std::vector<double> flex(seeds), conv(seeds), base(seeds);
    std::atomic<bool> ok{true};
    parallel_for(seeds, [&](int s) {
        auto reqs = generate_requests(spec, topo, n, s + 1, false);
        auto run = [&](bool full_switch, bool joint) {
            RfbsaParams params;
            params.band_limit = 4;
            if (full_switch) params.flex_node.assign(topo.node_count, 0);
            SpectrumState state(topo);
            for (const Request& req : reqs) {
                std::optional<Lightpath> lp;
                if (joint) {
                    lp = rfbsa_route(req, state, params);
                } else {
                    auto paths = topo.k_shortest_paths(req.src, req.dst, 1);
                    lp = spff_route(req, state, params, paths);
                }
                if (!lp) ok = false;  // static workload must fit
            }
            return (double)msu_metrics(state).max;
        };
        flex[s] = run(false, true);
        conv[s] = run(true, true);
        base[s] = run(false, false);
    });
    REQ(ok);
    double mf = mean_ci(flex).mean, mc = mean_ci(conv).mean, mb = mean_ci(base).mean;
    REQ(mf <= 0.85 * mb);
    REQ(std::abs(mf - mc) <= 0.05 * mc);
    return true;
}

bool c11_placement() {
    Topology topo = load_topology(data("placement5.txt"));
    TrafficSpec spec;
    spec.sizes = {2, 3, 4};
    spec.size_probs = {0.5, 0.3, 0.2};
    double rp_sum = 0, tap_sum = 0;
    int trials = 0;
    bool ok = true;
    for (int requests : {40, 60, 80, 100})
        for (int seed = 1; seed <= 5; ++seed) {
            auto reqs = generate_requests(spec, topo, requests, 10 * requests + seed, false);
            auto rp = placement_pipeline(topo, 89, reqs, PlacementScheme::Random, 4, seed);
            auto tap = placement_pipeline(topo, 89, reqs, PlacementScheme::TrafficAware, 4, seed);
            ok = ok && rp.placement.total_units <= 89 && tap.placement.total_units <= 89;
            rp_sum += rp.msu.avg;
            tap_sum += tap.msu.avg;
            ++trials;
        }
    REQ(ok);
    REQ(trials == 20);
    REQ(tap_sum <= rp_sum);
    return true;
}

bool c12_partition_plan() {
    PartitionPlan p = plan_partitions(352, {3, 4, 7}, {0.2, 0.5, 0.3});
    REQ(p.segments.size() == 3);
    REQ(p.segments[0].length == 45 && p.segments[0].bins() == 15);
    REQ(p.segments[1].length == 152 && p.segments[1].bins() == 38);
    REQ(p.segments[2].length == 154 && p.segments[2].bins() == 22);
    REQ(p.assigned() == 351);  // one slot left unassigned
    return true;
}

bool c13_loss_worked_example() {
    Topology topo = load_topology(data("rsa5.txt"));
    SpectrumState state(topo, 16);
    PartitionPlan plan{{{4, 0, 16}}, 16, false};
    DynRsaPolicy policy(topo, RsaPolicyKind::Nsa, RoutingMode::Mps, table5(), plan, 1);
    // busy fibers per bin; link ids: 0 = 0->1, 6 = 1->4, 5 = 3->1, 11 = 4->2
    std::map<int, std::array<int, 4>> busy = {
        {0, {1, 2, 3, 4}}, {6, {1, 2, 1, 2}}, {5, {1, 0, 1, 0}}, {11, {0, 1, 0, 0}}};
    long long next_id = 1000;
    for (auto& [link, counts] : busy)
        for (int x = 0; x < 4; ++x)
            for (int i = 0; i < counts[x]; ++i) {
                Connection c;
                c.slices.push_back({state.fiber_base(link) + i, {x * 4, 4}});
                state.allocate(next_id++, c);
            }
    const ConflictGraph& g = policy.graph();
    int kv = g.index.at({6, 0});
    auto losses = policy.native_losses(state, kv, 4);
    REQ(losses.size() == 4);

    // exact rational recomputation of every per-bin loss
    PathTable ref = table5();
    std::vector<Rational> probs(g.vertices.size());
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        double p = ref.entries[g.vertices[v].entry].probs[g.vertices[v].k];
        probs[v] = p == 1.0 / 3 ? Rational(1, 3) : p == 2.0 / 3 ? Rational(2, 3) : Rational((int)p);
    }
    std::vector<Rational> expect = {Rational(1), Rational(5, 3), Rational(0), Rational(2, 3)};
    for (int x = 0; x < 4; ++x) {
        SlotRange range{x * 4, 4};
        Rational zeta = 0;
        for (int other : g.adj[kv]) {
            const auto& v = g.vertices[other];
            if (probs[other] == 0) continue;
            int minc = 1 << 30;
            for (int l : v.links) minc = std::min(minc, state.availability(l, range));
            for (int l : v.links)
                if (state.availability(l, range) == minc &&
                    std::binary_search(g.vertices[kv].links.begin(), g.vertices[kv].links.end(),
                                       l)) {
                    zeta += probs[other];
                    break;
                }
        }
        REQ(zeta == expect[x]);
        REQ(std::abs(losses[x] - zeta.convert_to<double>()) < 1e-12);
    }

    // the zero-loss third bin wins, placed on the lowest free fiber
    Request req{1, 1, 4, 4};
    auto conn = policy.admit(req, state);
    REQ(conn.has_value());
    REQ(conn->slices.size() == 1);
    REQ((conn->slices[0].range == SlotRange{8, 4}));
    REQ(conn->slices[0].fiber == state.fiber_base(6) + 1);
    return true;
}

bool c14_path_lp() {
    Topology topo = load_topology(data("rsa5.txt"));
    auto routes = routes5();
    PathTable t = solve_path_lp(topo, routes);
    // the reference probability vector is feasible...
    std::vector<std::vector<double>> ref;
    for (const auto& e : table5().entries) {
        double s = 0;
        for (double p : e.probs) {
            REQ(p >= 0 && p <= 1);
            s += p;
        }
        REQ(std::abs(s - 1.0) < 1e-12);
        ref.push_back(e.probs);
    }
    // ...and the solver's optimum matches its objective value
    REQ(std::abs(t.objective - eval_objective(topo, routes, ref)) <= 1e-9);
    // internal consistency: reported optimum matches the returned vector
    std::vector<std::vector<double>> got;
    for (const auto& e : t.entries) got.push_back(e.probs);
    REQ(std::abs(t.objective - eval_objective(topo, routes, got)) <= 1e-9);
    return true;
}

bool c15_dynamic_stack() {
    Topology topo = load_topology(data("nsf_f5_10.txt"));
    REQ(topo.slots_per_fiber == 352);
    PathTable table = solve_path_lp(topo, all_pair_routes(topo, 3));
    TrafficSpec spec;
    spec.sizes = {3, 4, 7};
    spec.size_probs = {0.5, 0.3, 0.2};
    spec.arrival_rate = 3650;  // calibrated: shortest-path first-fit blocks a few percent
    PartitionPlan plan = plan_partitions(topo.slots_per_fiber, spec.sizes, spec.size_probs);

    const int seeds = 15, n = 100000, warmup = 10000;
    struct Config {
        RsaPolicyKind kind;
        RoutingMode routing;
    };
    std::vector<Config> configs = {{RsaPolicyKind::NsaShared, RoutingMode::Mps},
                                   {RsaPolicyKind::FirstFit, RoutingMode::Mps},
                                   {RsaPolicyKind::FirstFit, RoutingMode::Ssp}};
    std::vector<std::vector<double>> dbr(configs.size(), std::vector<double>(seeds));
    parallel_for((int)configs.size() * seeds, [&](int idx) {
        int c = idx / seeds, s = idx % seeds;
        DynRsaPolicy policy(topo, configs[c].kind, configs[c].routing, table, plan, s + 1);
        SimMetrics m = run_dynamic_sim(topo, spec, policy, n, warmup, s + 1);
        dbr[c][s] = m.demand_blocking_ratio;
    });
    MeanCi nsa = mean_ci(dbr[0]), ffm = mean_ci(dbr[1]), ffs = mean_ci(dbr[2]);
    std::printf("       loss-aware+split %.5g±%.2g  first-fit+split %.5g±%.2g  "
                "first-fit+shortest %.5g±%.2g\n",
                nsa.mean, nsa.ci95, ffm.mean, ffm.ci95, ffs.mean, ffs.ci95);
    REQ(ffs.mean >= 0.01 && ffs.mean <= 0.05);  // operating point
    REQ(nsa.mean < ffm.mean && ffm.mean < ffs.mean);
    REQ(nsa.mean + nsa.ci95 < ffm.mean - ffm.ci95);  // non-overlapping intervals
    REQ(ffm.mean + ffm.ci95 < ffs.mean - ffs.ci95);
    return true;
}

bool c16_cosched() {
    ClusterNet net;
    net.topo = load_topology(data("cosched5.txt"));
    net.vm_capacity = {8, 6, 7, 5, 9};
    net.guardband = 2;

    // (a) fuzzed batches: both schedulers always validator-clean
    std::atomic<bool> clean{true};
    parallel_for(10000, [&](int t) {
        JobParams params;
        Rng rng(40000 + t);
        std::vector<Job> jobs;
        int njobs = 1 + (int)rng.next_below(3);
        for (int j = 0; j < njobs; ++j) jobs.push_back(random_job(j, params, rng));
        Schedule ff = schedule_ff(jobs, net);
        Schedule ca = schedule_ca(jobs, net, 0.5, 1.0);
        if (!validate_schedule(ff, jobs, net).empty()) clean = false;
        if (!validate_schedule(ca, jobs, net).empty()) clean = false;
    });
    REQ(clean);

    // (b) exhaustive placement is no worse on average over 5-job batches
    double ff_sum = 0, ca_sum = 0;
    for (int t = 0; t < 100; ++t) {
        JobParams params;
        Rng rng(7000 + t);
        std::vector<Job> jobs;
        for (int j = 0; j < 5; ++j) jobs.push_back(random_job(j, params, rng));
        ff_sum += (double)schedule_ff(jobs, net).makespan;
        ca_sum += (double)schedule_ca(jobs, net, 0.5, 1.0).makespan;
    }
    REQ(ca_sum <= ff_sum);

    // (c) tiny instances: never beat the exhaustive optimum, often match it
    ClusterNet tiny;
    tiny.topo.node_count = 2;
    tiny.topo.slots_per_fiber = 400;  // plentiful: remote transfers take one slot
    tiny.topo.links = {{0, 1, 1}, {1, 0, 1}};
    tiny.topo.build_adjacency();
    tiny.vm_capacity = {3, 3};
    tiny.guardband = 2;
    JobParams params;
    params.min_tasks = 2;
    params.max_tasks = 3;
    params.edge_prob = 0.6;
    params.work_min = 2;
    params.work_max = 6;
    params.data_min = 3;
    params.data_max = 8;
    Rng rng(77);
    int exact = 0, total = 40;
    for (int trial = 0; trial < total; ++trial) {
        std::vector<Job> jobs = {random_job(0, params, rng), random_job(1, params, rng)};
        Schedule ca = schedule_ca(jobs, tiny, 0.5, 1.0);
        REQ(validate_schedule(ca, jobs, tiny).empty());
        long long serial = 0;
        for (const Job& j : jobs)
            for (long long w : j.work) serial += w + 2;
        TinyOracle oracle(jobs, tiny);
        long long opt = oracle.solve(serial);
        REQ(opt <= serial);
        REQ(ca.makespan >= opt);
        if (ca.makespan == opt) ++exact;
    }
    return exact * 10 >= total * 3;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <source-dir>\n", argv[0]);
        return 2;
    }
    g_src = argv[1];

    criterion(1, "band run-count equals the adjacent-distance sum", c1_band_counting);
    criterion(2, "4-node worked ordering reaches weight 11; exhaustive minimum at most 11",
              c2_worked_ordering);
    criterion(3, "ordering heuristics bracketed by oracle and identity, improving half the time",
              c3_ordering_sanity);
    criterion(4, "full cross-connect never blocks bounded demand and keeps packing invariants",
              c4_full_switch_property);
    criterion(5, "worked node table: size-ordered packing blocks 1, published random pick blocks 3",
              c5_worked_node_assignments);
    criterion(6, "pair-grouped node blocks exactly as the full cross-connect",
              c6_grouped_matches_full);
    criterion(7, "analytic blocking sits inside the Monte-Carlo 3-sigma band", c7_analytic_vs_mc);
    criterion(8, "switch cascade and unit-count cost model", c8_cost_model);
    criterion(9, "joint fiber/spectrum search worked example with candidate prices 12 and 10",
              c9_joint_search_worked_example);
    criterion(10, "joint search beats first-fit by 15% and band limit 4 costs at most 5%",
              c10_joint_search_vs_baseline);
    criterion(11, "traffic-aware switch placement beats random within the unit budget",
              c11_placement);
    criterion(12, "352-slot partition into (45,152,154) slots and (15,38,22) bins",
              c12_partition_plan);
    criterion(13, "capacity-loss worked state: rational losses (1, 5/3, 0, 2/3), zero-loss bin wins",
              c13_loss_worked_example);
    criterion(14, "path-probability LP optimum matches the reference vector's objective",
              c14_path_lp);
    criterion(15, "dynamic allocation stack strictly ordered with separated confidence intervals",
              c15_dynamic_stack);
    criterion(16, "co-scheduler outputs validator-clean, child-aware search no worse, near-optimal",
              c16_cosched);

    std::printf("%d of 16 criteria passed\n", 16 - g_failed);
    return g_failed;
}
