#ifndef MGON_COSCHED_HPP
#define MGON_COSCHED_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mgon/rng.hpp"
#include "mgon/topology.hpp"

namespace mgon {

struct CoschedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------- job model --

// A job is a DAG of tasks. work[i] is the processing time at one VM;
// transfer[(i,r)] is the result-transfer time from i to r at one subcarrier.
struct Job {
    int id = 0;
    std::vector<long long> work;
    std::map<std::pair<int, int>, long long> transfer;

    int task_count() const { return (int)work.size(); }
    std::vector<int> children(int i) const {
        std::vector<int> out;
        for (const auto& [edge, d] : transfer)
            if (edge.first == i) out.push_back(edge.second);
        return out;
    }
    std::vector<int> parents(int i) const {
        std::vector<int> out;
        for (const auto& [edge, d] : transfer)
            if (edge.second == i) out.push_back(edge.first);
        return out;
    }
};

// Layer 1 holds the tasks with no parents; a task sits one layer above its
// highest parent. Throws on cycles.
inline std::vector<std::vector<int>> layerize(const Job& job) {
    int n = job.task_count();
    std::vector<int> indeg(n, 0), layer(n, 0);
    for (const auto& [edge, d] : job.transfer) ++indeg[edge.second];
    std::vector<int> queue;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) {
            queue.push_back(i);
            layer[i] = 1;
        }
    size_t head = 0;
    int seen = 0;
    while (head < queue.size()) {
        int u = queue[head++];
        ++seen;
        for (int r : job.children(u)) {
            layer[r] = std::max(layer[r], layer[u] + 1);
            if (--indeg[r] == 0) queue.push_back(r);
        }
    }
    if (seen != n) throw CoschedError("job graph has a cycle");
    int depth = 0;
    for (int i = 0; i < n; ++i) depth = std::max(depth, layer[i]);
    std::vector<std::vector<int>> layers(depth);
    for (int i = 0; i < n; ++i) layers[layer[i] - 1].push_back(i);
    return layers;
}

// ------------------------------------------------------------ task weights --

struct TaskWeights {
    std::vector<double> theta;
    double job_weight = 0;
};

// Downstream-pressure weight of each task: the heaviest child chain of
// processing (scaled by alpha) plus transfer (scaled by beta). Tasks with no
// children weigh alpha*w.
inline TaskWeights task_weights(const Job& job, double alpha, double beta) {
    int n = job.task_count();
    TaskWeights w;
    w.theta.assign(n, -1.0);
    // process in reverse topological order via layers
    auto layers = layerize(job);
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        for (int i : *it) {
            double best = alpha * (double)job.work[i];  // childless base case
            for (int r : job.children(i))
                best = std::max(best, alpha * (double)job.work[i] +
                                          beta * (double)job.transfer.at({i, r}) + w.theta[r]);
            w.theta[i] = best;
        }
    for (int i : layers.front()) w.job_weight = std::max(w.job_weight, w.theta[i]);
    return w;
}

// Deadline estimate for dynamic admission: the weight recursion evaluated at
// alpha = beta = 0.01, rounded up per task, maximum over all tasks.
inline long long job_deadline(const Job& job) {
    TaskWeights w = task_weights(job, 0.01, 0.01);
    long long g = 0;
    for (double t : w.theta) g = std::max(g, (long long)std::ceil(t - 1e-12));
    return g;
}

// ------------------------------------------------------------ cluster model --

// Nodes host VMs; links carry subcarrier bands (subcarrier count = the
// topology's per-fiber slot count). Distinct bands on one fiber need a
// guardband of G subcarriers between them.
struct ClusterNet {
    Topology topo;
    std::vector<int> vm_capacity;
    int guardband = 0;

    int subcarriers() const { return topo.slots_per_fiber; }
    std::vector<int> path_links(int from, int to) const {
        return topo.path_links(topo.shortest_path(from, to));
    }
};

// ---------------------------------------------------------------- schedule --

struct TaskAssign {
    int node = -1;
    int vms = 0;
    long long start = 0;   // first processing slot (1-based)
    long long finish = 0;  // last processing slot

    bool operator==(const TaskAssign&) const = default;
};

struct TransferAssign {
    bool local = true;           // endpoints colocated: no band, zero time
    std::vector<int> links;      // directed link ids of the physical path
    int band = 0;                // first subcarrier index
    int width = 0;               // B
    long long start = 0;         // E
    long long finish = 0;        // X

    bool operator==(const TransferAssign&) const = default;
};

struct Schedule {
    std::map<std::pair<int, int>, TaskAssign> tasks;               // (job, task)
    std::map<std::tuple<int, int, int>, TransferAssign> transfers;  // (job, i, r)
    long long makespan = 0;
};

// --------------------------------------------------------- resource ledger --

// Mutable global state during scheduling: free VMs per (node, slot) and the
// subcarrier occupancy bitmap per (link, slot). Horizons grow on demand.
class ResourceState {
public:
    explicit ResourceState(const ClusterNet& net)
        : net_(&net),
          words_((net.subcarriers() + 63) / 64),
          vm_used_(net.topo.node_count),
          spec_(net.topo.links.size()) {}

    const ClusterNet& net() const { return *net_; }

    int free_vms(int node, long long t) const {
        const auto& v = vm_used_[node];
        int used = t - 1 < (long long)v.size() ? v[t - 1] : 0;
        return net_->vm_capacity[node] - used;
    }
    bool vms_available(int node, long long s, long long e, int k) const {
        for (long long t = s; t <= e; ++t)
            if (free_vms(node, t) < k) return false;
        return true;
    }
    void reserve_vms(int node, long long s, long long e, int k) {
        auto& v = vm_used_[node];
        if ((long long)v.size() < e) v.resize(e, 0);
        for (long long t = s; t <= e; ++t) v[t - 1] += k;
    }

    // True if subcarriers [lo, hi) on the link are unoccupied for every slot
    // in [s, e].
    bool band_window_free(int link, long long s, long long e, int lo, int hi) const {
        const auto& sp = spec_[link];
        for (long long t = s; t <= e; ++t) {
            if ((t - 1) * words_ >= (long long)sp.size()) break;  // beyond horizon: free
            const uint64_t* w = &sp[(t - 1) * words_];
            for (int c = lo; c < hi; ++c)
                if (w[c >> 6] & (1ULL << (c & 63))) return false;
        }
        return true;
    }
    void reserve_band(const std::vector<int>& links, int y, int width, long long s,
                      long long e) {
        for (int l : links) {
            auto& sp = spec_[l];
            if ((long long)sp.size() < e * words_) sp.resize(e * words_, 0);
            for (long long t = s; t <= e; ++t)
                for (int c = y; c < y + width; ++c)
                    sp[(t - 1) * words_ + (c >> 6)] |= 1ULL << (c & 63);
        }
    }

private:
    const ClusterNet* net_;
    int words_;
    std::vector<std::vector<int>> vm_used_;
    std::vector<std::vector<uint64_t>> spec_;
};

// ---------------------------------------------------------- list scheduling --

struct SchedulerOptions {
    bool children_aware = false;
    double alpha = 0.5;
    double beta = 1.0;
    long long earliest = 1;   // first allowed processing slot
    long long deadline = -1;  // latest allowed finish (-1: unbounded)
};

namespace detail {

struct StagedTransfer {
    int parent = -1;
    bool local = true;
    std::vector<int> links;
    int band = 0, width = 0;
    long long start = 0, finish = 0;
};

inline bool ranges_overlap(long long a1, long long a2, long long b1, long long b2) {
    return a1 <= b2 && b1 <= a2;
}

// First-fit band of `width` subcarriers free on every path link over
// [s, e], with a guardband margin of G against existing and staged bands.
inline int first_fit_band(const ResourceState& state, const std::vector<StagedTransfer>& staged,
                          const std::vector<int>& links, int width, long long s, long long e,
                          int guard) {
    int f = state.net().subcarriers();
    for (int y = 0; y + width <= f; ++y) {
        int lo = std::max(0, y - guard), hi = std::min(f, y + width + guard);
        bool ok = true;
        for (int l : links) {
            if (!state.band_window_free(l, s, e, lo, hi)) {
                ok = false;
                break;
            }
            for (const auto& st : staged) {
                if (st.local || !ranges_overlap(st.start, st.finish, s, e)) continue;
                if (std::find(st.links.begin(), st.links.end(), l) == st.links.end()) continue;
                if (lo < st.band + st.width && st.band < hi) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return y;
    }
    return -1;
}

// Minimal-finish transfer of D slot-units from `from` to `to`, starting no
// earlier than lb and finishing no later than x_limit. Widths are scanned so
// that the smallest width among finish-time minimizers wins; the band is
// first-fit at the winning (E, B).
inline bool best_transfer(const ResourceState& state, const std::vector<StagedTransfer>& staged,
                          const std::vector<int>& links, long long d_size, long long lb,
                          long long x_limit, StagedTransfer& out) {
    int f = state.net().subcarriers();
    int guard = state.net().guardband;
    long long best_x = std::numeric_limits<long long>::max();
    int best_b = -1, best_y = -1;
    long long best_e = -1;
    int bmax = (int)std::min<long long>(f, d_size);
    for (int b = bmax; b >= 1; --b) {
        long long dur = (d_size + b - 1) / b;
        if (lb + dur - 1 > x_limit) break;  // durations only grow for smaller b
        if (lb + dur - 1 > best_x) break;   // cannot beat or tie anymore
        for (long long e = lb; e + dur - 1 <= x_limit; ++e) {
            long long x = e + dur - 1;
            if (x > best_x) break;
            int y = first_fit_band(state, staged, links, b, e, x, guard);
            if (y < 0) continue;
            if (x <= best_x) {  // ties prefer the narrower band
                best_x = x;
                best_b = b;
                best_y = y;
                best_e = e;
            }
            break;
        }
    }
    if (best_b < 0) return false;
    out.local = false;
    out.links = links;
    out.band = best_y;
    out.width = best_b;
    out.start = best_e;
    out.finish = best_x;
    return true;
}

struct TaskChoice {
    long long finish = std::numeric_limits<long long>::max();
    long long start = 0;
    int node = -1, vms = 0;
    std::vector<StagedTransfer> staged;
};

constexpr long long kHorizonGuard = 1000000;

// Schedule one job onto the shared state (greedy list scheduling). Returns
// false (leaving state and out untouched for this job's entries) when the
// deadline cannot be met; static mode (deadline < 0) always succeeds.
inline bool schedule_one_job(const Job& job, const ClusterNet& net, const SchedulerOptions& opt,
                             ResourceState& state, Schedule& out) {
    auto layers = layerize(job);
    TaskWeights weights =
        opt.children_aware ? task_weights(job, opt.alpha, opt.beta) : TaskWeights{};
    std::vector<TaskAssign> assign(job.task_count());
    std::vector<std::pair<std::pair<int, int>, TransferAssign>> pending_transfers;
    ResourceState scratch = state;  // commit to `state` only if the job fits

    for (size_t li = 0; li < layers.size(); ++li) {
        std::vector<int> order = layers[li];
        if (opt.children_aware)
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return weights.theta[a] > weights.theta[b];
            });
        for (int i : order) {
            std::vector<int> parents = job.parents(i);
            if (opt.children_aware)
                std::stable_sort(parents.begin(), parents.end(), [&](int a, int b) {
                    return job.transfer.at({a, i}) > job.transfer.at({b, i});
                });
            long long lower = opt.earliest;
            for (int p : parents) lower = std::max(lower, assign[p].finish + 1);

            TaskChoice best;
            bool stop = false;
            for (long long s = lower; !stop; ++s) {
                if (s - lower > kHorizonGuard) throw CoschedError("scheduling horizon overrun");
                if (opt.deadline >= 0 && s > opt.deadline) break;
                if (best.node >= 0 && s >= best.finish) break;  // cannot improve
                for (int n = 0; n < net.topo.node_count; ++n) {
                    if (scratch.free_vms(n, s) <= 0) continue;
                    // every parent must deliver its result before slot s
                    std::vector<StagedTransfer> staged;
                    bool ok = true;
                    for (int p : parents) {
                        StagedTransfer st;
                        st.parent = p;
                        if (assign[p].node == n) {
                            st.local = true;
                            st.finish = assign[p].finish;
                        } else if (!best_transfer(scratch, staged,
                                                  net.path_links(assign[p].node, n),
                                                  job.transfer.at({p, i}),
                                                  assign[p].finish + 1, s - 1, st)) {
                            ok = false;
                            break;
                        }
                        staged.push_back(std::move(st));
                    }
                    if (!ok) continue;
                    int kmax = (int)std::min<long long>(scratch.free_vms(n, s), job.work[i]);
                    for (int k = kmax; k >= 1; --k) {
                        long long fin = s + (job.work[i] + k - 1) / k - 1;
                        if (fin >= best.finish) continue;
                        if (opt.deadline >= 0 && fin > opt.deadline) continue;
                        if (!scratch.vms_available(n, s, fin, k)) continue;
                        best = {fin, s, n, k, std::move(staged)};
                        break;  // larger k already minimizes the finish here
                    }
                    if (!opt.children_aware && best.node >= 0) {
                        stop = true;  // first fit: first feasible choice wins
                        break;
                    }
                }
            }
            if (best.node < 0) return false;  // deadline unreachable
            assign[i] = {best.node, best.vms, best.start, best.finish};
            scratch.reserve_vms(best.node, best.start, best.finish, best.vms);
            for (const auto& st : best.staged) {
                TransferAssign tr{st.local, st.links, st.band, st.width, st.start, st.finish};
                if (!st.local) scratch.reserve_band(st.links, st.band, st.width, st.start,
                                                    st.finish);
                pending_transfers.push_back({{st.parent, i}, tr});
            }
        }
    }

    state = std::move(scratch);
    for (int i = 0; i < job.task_count(); ++i) {
        out.tasks[{job.id, i}] = assign[i];
        out.makespan = std::max(out.makespan, assign[i].finish);
    }
    for (auto& [edge, tr] : pending_transfers)
        out.transfers[{job.id, edge.first, edge.second}] = tr;
    return true;
}

}  // namespace detail

// Jobs and tasks in index order, committing to the first feasible choice.
inline Schedule schedule_ff(const std::vector<Job>& jobs, const ClusterNet& net) {
    ResourceState state(net);
    Schedule out;
    SchedulerOptions opt;
    for (const Job& j : jobs) detail::schedule_one_job(j, net, opt, state, out);
    return out;
}

// Jobs sorted by descending weight, tasks by descending task weight, parents
// by descending transfer size; the search exhausts (start, node, VM) choices
// to minimize each task's finish time.
inline Schedule schedule_ca(const std::vector<Job>& jobs, const ClusterNet& net, double alpha,
                            double beta) {
    std::vector<int> order(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i) order[i] = (int)i;
    std::vector<double> jw(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i) jw[i] = task_weights(jobs[i], alpha, beta).job_weight;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return jw[a] > jw[b]; });
    ResourceState state(net);
    Schedule out;
    SchedulerOptions opt;
    opt.children_aware = true;
    opt.alpha = alpha;
    opt.beta = beta;
    for (int i : order) detail::schedule_one_job(jobs[i], net, opt, state, out);
    return out;
}

// Online admission: jobs arrive over time; a job whose earliest achievable
// completion exceeds its deadline is rejected with no state change.
class DynamicScheduler {
public:
    DynamicScheduler(const ClusterNet& net, bool children_aware, double alpha, double beta)
        : net_(&net),
          children_aware_(children_aware),
          alpha_(alpha),
          beta_(beta),
          state_(net) {}

    bool admit(const Job& job, long long now) {
        SchedulerOptions opt;
        opt.children_aware = children_aware_;
        opt.alpha = alpha_;
        opt.beta = beta_;
        opt.earliest = now + 1;
        opt.deadline = now + job_deadline(job);
        if (opt.deadline < opt.earliest || !detail::schedule_one_job(job, *net_, opt, state_,
                                                                     schedule_)) {
            ++blocked_;
            return false;
        }
        ++admitted_;
        return true;
    }

    long long admitted() const { return admitted_; }
    long long blocked() const { return blocked_; }
    const Schedule& committed() const { return schedule_; }

private:
    const ClusterNet* net_;
    bool children_aware_;
    double alpha_, beta_;
    ResourceState state_;
    Schedule schedule_;
    long long admitted_ = 0, blocked_ = 0;
};

// -------------------------------------------------------------- validation --

struct Violation {
    char code;
    std::string message;
};

// Independent audit of a schedule against the job set and cluster:
//   a  assignment well-formed (node/VM bounds)
//   d  processing duration = ceil(w / k)
//   e  per-slot VM capacity
//   g  a transfer is local exactly when the endpoints share a node
//   h  transfer starts strictly after the parent finishes
//   i  child starts after the parent's delivery (transfer + 1, or finish + 1
//      when colocated); every edge has a transfer record
//   j  transfer duration = ceil(D / B); band within the fiber; path correct
//   k  band non-overlap with guardband separation per (link, slot)
inline std::vector<Violation> validate_schedule(const Schedule& sched,
                                                const std::vector<Job>& jobs,
                                                const ClusterNet& net) {
    std::vector<Violation> out;
    auto fail = [&](char code, const std::string& msg) { out.push_back({code, msg}); };
    std::map<std::pair<int, long long>, long long> vm_load;  // (node, t) -> VMs

    for (const Job& job : jobs) {
        for (int i = 0; i < job.task_count(); ++i) {
            auto it = sched.tasks.find({job.id, i});
            if (it == sched.tasks.end()) {
                fail('a', "task not scheduled");
                continue;
            }
            const TaskAssign& ta = it->second;
            if (ta.node < 0 || ta.node >= net.topo.node_count || ta.vms < 1 ||
                ta.vms > net.vm_capacity[ta.node] || ta.start < 1)
                fail('a', "bad node/VM assignment");
            long long want = (job.work[i] + ta.vms - 1) / ta.vms;
            if (ta.finish - ta.start + 1 != want) fail('d', "processing duration mismatch");
            for (long long t = ta.start; t <= ta.finish; ++t) vm_load[{ta.node, t}] += ta.vms;
        }
        for (const auto& [edge, d] : job.transfer) {
            auto it = sched.transfers.find({job.id, edge.first, edge.second});
            if (it == sched.transfers.end()) {
                fail('i', "edge without transfer record");
                continue;
            }
            const TransferAssign& tr = it->second;
            auto pit = sched.tasks.find({job.id, edge.first});
            auto cit = sched.tasks.find({job.id, edge.second});
            if (pit == sched.tasks.end() || cit == sched.tasks.end()) continue;  // flagged above
            const TaskAssign& pa = pit->second;
            const TaskAssign& ca = cit->second;
            bool colocated = pa.node == ca.node;
            if (tr.local != colocated) fail('g', "local flag does not match node assignment");
            if (tr.local) {
                if (ca.start < pa.finish + 1) fail('i', "colocated child starts too early");
                continue;
            }
            if (tr.start < pa.finish + 1) fail('h', "transfer starts before parent finishes");
            if (ca.start < tr.finish + 1) fail('i', "child starts before delivery");
            long long want = (d + tr.width - 1) / tr.width;
            if (tr.width < 1 || tr.width > net.subcarriers() ||
                tr.finish - tr.start + 1 != want)
                fail('j', "transfer duration mismatch");
            if (tr.band < 0 || tr.band + tr.width > net.subcarriers())
                fail('j', "band outside fiber");
            if (tr.links != net.path_links(pa.node, ca.node)) fail('j', "path mismatch");
        }
    }

    for (const auto& [key, used] : vm_load)
        if (used > net.vm_capacity[key.first]) fail('e', "VM capacity exceeded");

    // band non-overlap with guardband: any two distinct bands on a shared
    // link at overlapping times must be >= G subcarriers apart
    std::vector<std::tuple<int, long long, long long, int, int>> bands;  // link,s,e,lo,width
    for (const auto& [key, tr] : sched.transfers) {
        if (tr.local) continue;
        for (int l : tr.links) bands.push_back({l, tr.start, tr.finish, tr.band, tr.width});
    }
    for (size_t a = 0; a < bands.size(); ++a)
        for (size_t b = a + 1; b < bands.size(); ++b) {
            auto [la, sa, ea, ya, wa] = bands[a];
            auto [lb, sb, eb, yb, wb] = bands[b];
            if (la != lb || !detail::ranges_overlap(sa, ea, sb, eb)) continue;
            if (ya < yb + wb + net.guardband && yb < ya + wa + net.guardband)
                fail('k', "bands overlap or violate the guardband");
        }
    return out;
}

// ---------------------------------------------------------- job generation --

struct JobParams {
    int min_tasks = 2, max_tasks = 4;
    double edge_prob = 0.8;
    int work_min = 5, work_max = 15;
    long long data_min = 15, data_max = 20;
};

// Random connected DAG with edges i -> r for i < r.
inline Job random_job(int id, const JobParams& params, Rng& rng) {
    for (;;) {
        Job job;
        job.id = id;
        int n = rng.uniform_int(params.min_tasks, params.max_tasks);
        for (int i = 0; i < n; ++i)
            job.work.push_back(rng.uniform_int(params.work_min, params.work_max));
        for (int i = 0; i < n; ++i)
            for (int r = i + 1; r < n; ++r)
                if (rng.next_double() < params.edge_prob)
                    job.transfer[{i, r}] =
                        rng.uniform_int((int)params.data_min, (int)params.data_max);
        // require weak connectivity
        std::vector<int> comp(n);
        for (int i = 0; i < n; ++i) comp[i] = i;
        std::function<int(int)> find = [&](int x) {
            return comp[x] == x ? x : comp[x] = find(comp[x]);
        };
        for (const auto& [edge, d] : job.transfer) comp[find(edge.first)] = find(edge.second);
        bool connected = true;
        for (int i = 0; i < n; ++i) connected = connected && find(i) == find(0);
        if (connected) return job;
    }
}

// Job sets from a plain-text file:
//   job <id>
//   task <work>          (tasks numbered 0, 1, ... within the job)
//   edge <i> <r> <size>  (result of task i feeds task r)
inline std::vector<Job> load_jobs(std::istream& is) {
    std::vector<Job> jobs;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw CoschedError("job file line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (word == "job") {
            Job j;
            if (!(ss >> j.id)) fail("expected job id");
            jobs.push_back(std::move(j));
        } else if (word == "task") {
            if (jobs.empty()) fail("task before any job");
            long long w = 0;
            if (!(ss >> w) || w < 1) fail("task work must be a positive integer");
            jobs.back().work.push_back(w);
        } else if (word == "edge") {
            if (jobs.empty()) fail("edge before any job");
            int i = 0, r = 0;
            long long d = 0;
            if (!(ss >> i >> r >> d) || d < 1) fail("edge needs tasks i r and a positive size");
            int n = jobs.back().task_count();
            if (i < 0 || i >= n || r < 0 || r >= n || i == r) fail("edge endpoints out of range");
            jobs.back().transfer[{i, r}] = d;
        } else {
            fail("unrecognized record: " + word);
        }
    }
    for (const Job& j : jobs) layerize(j);  // rejects cycles
    return jobs;
}

inline std::vector<Job> load_jobs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CoschedError("cannot open job file: " + path);
    return load_jobs(in);
}

}  // namespace mgon

#endif
