// mgon: command-line front end for the network experiment library.
//
// Each subcommand runs one experiment family; `mgon run CONFIG` executes a
// config file that may sweep any key over several values (Cartesian product,
// seeds innermost). Results go to a CSV (one row per trial, wall_ms last)
// plus a JSON aggregate with mean and 95% confidence interval per metric.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgon/cosched.hpp"
#include "mgon/dynrsa.hpp"
#include "mgon/oxc.hpp"
#include "mgon/placement.hpp"
#include "mgon/rfbsa.hpp"
#include "mgon/waveband.hpp"

namespace {

constexpr const char* kVersion = "v1.0.0";

// ------------------------------------------------------------------ logging

enum class LogLevel { Debug = 0, Info, Warn, Error };

LogLevel log_threshold() {
    static LogLevel level = [] {
        const char* env = std::getenv("MGON_LOG");
        std::string s = env ? env : "warn";
        if (s == "debug") return LogLevel::Debug;
        if (s == "info") return LogLevel::Info;
        if (s == "error") return LogLevel::Error;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel level, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    static std::mutex mu;
    if (level < log_threshold()) return;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[mgon] " << names[(int)level] << ": " << msg << "\n";
}

// ------------------------------------------------------------------- errors

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ value helpers

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw CliError("config error: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

long long to_ll(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw CliError("config error: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw CliError("config error: key '" + key + "' expects a number, got '" + v + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const std::string& tok : split(v, ',')) out.push_back(to_int(key, tok));
    return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& tok : split(v, ',')) out.push_back(to_double(key, tok));
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// --------------------------------------------------------- command schemas

// key -> default value; empty default plus `required` marks a mandatory key
struct KeySpec {
    std::string key;
    std::string def;
    bool required = false;
};

const std::map<std::string, std::vector<KeySpec>>& command_schemas() {
    static const std::map<std::string, std::vector<KeySpec>> schemas = {
        {"waveband",
         {{"topology", "", true}, {"requests", "20"}, {"strategy", "nn"}}},
        {"oxc",
         {{"arch", "conv"},
          {"k", "1"},
          {"b", "4"},
          {"d", "4"},
          {"f", "3"},
          {"w", "8"},
          {"p", "0.5"},
          {"trials", "10000"}}},
        {"rfbsa",
         {{"topology", "", true},
          {"arch", "flex"},
          {"b", "4"},
          {"alg", "rfbsa"},
          {"k", "3"},
          {"requests", "100"},
          {"sizes", "2,3,4"},
          {"size_probs", "0.5,0.3,0.2"}}},
        {"placement",
         {{"topology", "", true},
          {"budget", "", true},
          {"scheme", "rp"},
          {"b", "4"},
          {"requests", "60"},
          {"sizes", "2,3,4"},
          {"size_probs", "0.5,0.3,0.2"}}},
        {"dyn-rsa",
         {{"topology", "", true},
          {"policy", "nsa"},
          {"routing", "mps"},
          {"load", "100"},
          {"requests", "1000"},
          {"warmup", "100"},
          {"k", "3"},
          {"sizes", "3,4,7"},
          {"size_probs", "0.5,0.3,0.2"},
          {"cache_dir", ".mgon-cache"}}},
        {"cosched",
         {{"topology", "", true},
          {"jobs", "5"},
          {"mode", "static"},
          {"alg", "ff"},
          {"alpha", "0.5"},
          {"beta", "1"},
          {"vms", "8"},
          {"guard", "2"},
          {"jobs_file", ""},
          {"tasks", "2,4"},
          {"work", "5,15"},
          {"data", "15,20"},
          {"arrival_prob", "0.5"}}},
    };
    return schemas;
}

// Sweepable raw config: key -> list of values. `seeds`, `out`, `threads` are
// common to every command.
using RawConfig = std::map<std::string, std::vector<std::string>>;
// One trial: key -> single value (plus "seed").
using Params = std::map<std::string, std::string>;

void validate_keys(const std::string& command, const RawConfig& raw) {
    auto it = command_schemas().find(command);
    if (it == command_schemas().end()) throw CliError("unknown command: " + command);
    std::set<std::string> allowed = {"seeds", "out", "threads"};
    for (const KeySpec& ks : it->second) allowed.insert(ks.key);
    for (const auto& [key, vals] : raw)
        if (!allowed.count(key))
            throw CliError("config error: unknown key '" + key + "' for command '" + command +
                           "'");
    for (const KeySpec& ks : it->second)
        if (ks.required && (!raw.count(ks.key) || raw.at(ks.key).empty() ||
                            raw.at(ks.key).front().empty()))
            throw CliError("config error: missing required key '" + ks.key + "' for command '" +
                           command + "'");
}

// Expand "a..b" seed ranges.
std::vector<std::string> expand_seeds(const std::vector<std::string>& vals) {
    std::vector<std::string> out;
    for (const std::string& v : vals) {
        auto dots = v.find("..");
        if (dots == std::string::npos) {
            out.push_back(v);
            continue;
        }
        long long lo = to_ll("seeds", v.substr(0, dots));
        long long hi = to_ll("seeds", v.substr(dots + 2));
        if (hi < lo || hi - lo > 1000000) throw CliError("config error: bad seed range " + v);
        for (long long s = lo; s <= hi; ++s) out.push_back(std::to_string(s));
    }
    return out;
}

// Cartesian product over multi-valued keys (schema order), seeds innermost.
std::vector<Params> expand_trials(const std::string& command, const RawConfig& raw) {
    const auto& schema = command_schemas().at(command);
    std::vector<Params> trials = {{}};
    for (const KeySpec& ks : schema) {
        std::vector<std::string> vals =
            raw.count(ks.key) ? raw.at(ks.key) : std::vector<std::string>{ks.def};
        std::vector<Params> next;
        for (const Params& t : trials)
            for (const std::string& v : vals) {
                Params u = t;
                u[ks.key] = v;
                next.push_back(std::move(u));
            }
        trials = std::move(next);
    }
    std::vector<std::string> seeds =
        expand_seeds(raw.count("seeds") ? raw.at("seeds") : std::vector<std::string>{"1"});
    std::vector<Params> out;
    for (const Params& t : trials)
        for (const std::string& s : seeds) {
            Params u = t;
            u["seed"] = s;
            out.push_back(std::move(u));
        }
    return out;
}

uint64_t config_hash(const std::string& command, const RawConfig& raw) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    };
    mix(command);
    for (const auto& [key, vals] : raw) {
        mix(key);
        for (const auto& v : vals) mix(v);
    }
    return h;
}

// ------------------------------------------------------------ config files

struct ParsedConfig {
    std::string command;
    RawConfig raw;
};

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open config file: " + path);
    ParsedConfig cfg;
    bool have_schema = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        std::vector<std::string> vals;
        std::string v;
        while (ss >> v) vals.push_back(v);
        if (vals.empty())
            throw CliError("config error: key '" + key + "' has no value (line " +
                           std::to_string(lineno) + ")");
        if (key == "schema") {
            if (vals.size() != 1 || vals[0] != "1")
                throw CliError("config error: unsupported schema version '" + vals[0] + "'");
            have_schema = true;
        } else if (key == "command") {
            cfg.command = vals[0];
        } else {
            if (cfg.raw.count(key))
                throw CliError("config error: duplicate key '" + key + "' (line " +
                               std::to_string(lineno) + ")");
            cfg.raw[key] = vals;
        }
    }
    if (!have_schema) throw CliError("config error: missing 'schema 1' line");
    if (cfg.command.empty()) throw CliError("config error: missing 'command' line");
    validate_keys(cfg.command, cfg.raw);
    return cfg;
}

// -------------------------------------------------------------- run record

struct TrialResult {
    std::vector<std::string> id_values;            // one per id column
    std::vector<std::pair<std::string, double>> metrics;
    double wall_ms = 0;
};

struct CommandDef {
    std::vector<std::string> id_columns;
    std::vector<std::string> metric_columns;
    TrialResult (*run)(const Params&);
};

mgon::Topology load_topo_cached(const std::string& path) {
    static std::mutex mu;
    static std::map<std::string, mgon::Topology> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(path);
    if (it == cache.end()) it = cache.emplace(path, mgon::load_topology(path)).first;
    return it->second;
}

mgon::TrafficSpec make_traffic(const Params& p, double arrival_rate) {
    mgon::TrafficSpec spec;
    std::vector<int> sizes = to_int_list("sizes", p.at("sizes"));
    std::vector<double> probs = to_double_list("size_probs", p.at("size_probs"));
    if (sizes.size() != probs.size())
        throw CliError("config error: 'sizes' and 'size_probs' need the same length");
    spec.sizes = sizes;
    spec.size_probs = probs;
    spec.arrival_rate = arrival_rate;
    return spec;
}

// ------------------------------------------------------------- subcommands

TrialResult run_waveband(const Params& p) {
    using namespace mgon;
    Topology topo = load_topo_cached(p.at("topology"));
    int n = to_int("requests", p.at("requests"));
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    std::string strategy = p.at("strategy");
    TrafficSpec spec;  // single-wavelength lightpath demands
    auto reqs = generate_requests(spec, topo, n, seed, false);
    auto paths = route_first_fit(topo, reqs);
    RwaMatrix m = encode_rwa(topo, paths);
    int original = count_bands(fill_dont_cares(m)).total;
    BandPlan plan;
    if (strategy == "nn") {
        plan = solve_bmp(m, BmpStrategy::NN);
    } else if (strategy == "rdc") {
        plan = solve_bmp(m, BmpStrategy::RDC);
    } else if (strategy == "st") {
        plan = solve_bmp_st(topo, reqs, &paths);
    } else if (strategy == "oracle") {
        plan = oracle_bmp(m);
    } else {
        throw CliError("config error: key 'strategy' must be nn|rdc|st|oracle, got '" +
                       strategy + "'");
    }
    TrialResult r;
    r.id_values = {strategy, p.at("requests"), p.at("seed")};
    r.metrics = {{"original_bands", (double)original},
                 {"optimized_bands", (double)plan.total_bands},
                 {"swn", (double)swn_count(paths)}};
    return r;
}

TrialResult run_oxc(const Params& p) {
    using namespace mgon;
    NodeSpec spec;
    std::string arch = p.at("arch");
    if (arch == "conv")
        spec.arch = NodeArch::Conv;
    else if (arch == "hier")
        spec.arch = NodeArch::Hier;
    else if (arch == "flex")
        spec.arch = NodeArch::FlexBand;
    else
        throw CliError("config error: key 'arch' must be conv|hier|flex, got '" + arch + "'");
    spec.k = to_int("k", p.at("k"));
    spec.B = to_int("b", p.at("b"));
    spec.D = to_int("d", p.at("d"));
    spec.F = to_int("f", p.at("f"));
    spec.W = to_int("w", p.at("w"));
    double prob = to_double("p", p.at("p"));
    int trials = to_int("trials", p.at("trials"));
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    double analytic = blocking_analytic(spec, prob);
    McResult mc = blocking_mc(spec, prob, trials, seed);
    TrialResult r;
    r.id_values = {arch,      p.at("d"), p.at("f"),      p.at("w"),
                   p.at("k"), p.at("p"), p.at("trials"), p.at("seed")};
    r.metrics = {{"analytic_bp", analytic},
                 {"mc_bp", mc.mean},
                 {"mc_ci95", 1.96 * mc.stderr_}};
    return r;
}

TrialResult run_rfbsa(const Params& p) {
    using namespace mgon;
    Topology topo = load_topo_cached(p.at("topology"));
    RfbsaParams params;
    params.band_limit = to_int("b", p.at("b"));
    std::string arch = p.at("arch");
    if (arch == "conv")
        params.flex_node.assign(topo.node_count, 0);
    else if (arch != "flex")
        throw CliError("config error: key 'arch' must be conv|flex, got '" + arch + "'");
    int n = to_int("requests", p.at("requests"));
    int k = to_int("k", p.at("k"));
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    std::string alg = p.at("alg");
    auto reqs = generate_requests(make_traffic(p, 1.0), topo, n, seed, false);
    SpectrumState state(topo);
    int blocked = 0;
    for (const Request& req : reqs) {
        std::optional<Lightpath> lp;
        if (alg == "rfbsa") {
            lp = rfbsa_route(req, state, params);
        } else if (alg == "spff" || alg == "kspff") {
            auto paths = topo.k_shortest_paths(req.src, req.dst, alg == "spff" ? 1 : k);
            lp = spff_route(req, state, params, paths);
        } else if (alg == "spfbsa") {
            RfbsaParams pp = params;
            pp.variant = CostVariant::StaticPath;
            auto paths = topo.k_shortest_paths(req.src, req.dst, k);
            lp = rfbsa_route(req, state, pp, paths);
        } else {
            throw CliError("config error: key 'alg' must be rfbsa|spff|kspff|spfbsa, got '" +
                           alg + "'");
        }
        if (!lp) ++blocked;
    }
    MsuMetrics msu = msu_metrics(state);
    TrialResult r;
    r.id_values = {alg, p.at("requests"), p.at("seed")};
    r.metrics = {{"blocked", (double)blocked},
                 {"msu_max", (double)msu.max},
                 {"msu_avg", msu.avg}};
    return r;
}

TrialResult run_placement(const Params& p) {
    using namespace mgon;
    Topology topo = load_topo_cached(p.at("topology"));
    long long budget = to_ll("budget", p.at("budget"));
    int band_limit = to_int("b", p.at("b"));
    int n = to_int("requests", p.at("requests"));
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    std::string scheme_s = p.at("scheme");
    PlacementScheme scheme;
    if (scheme_s == "rp")
        scheme = PlacementScheme::Random;
    else if (scheme_s == "tap")
        scheme = PlacementScheme::TrafficAware;
    else if (scheme_s == "best")
        scheme = PlacementScheme::Best;
    else
        throw CliError("config error: key 'scheme' must be rp|tap|best, got '" + scheme_s + "'");
    auto reqs = generate_requests(make_traffic(p, 1.0), topo, n, seed, false);
    PlacementOutcome out = placement_pipeline(topo, budget, reqs, scheme, band_limit, seed);
    int n_flex = 0;
    for (char f : out.placement.flex) n_flex += f ? 1 : 0;
    TrialResult r;
    r.id_values = {scheme_s, p.at("budget"), p.at("requests"), p.at("seed")};
    r.metrics = {{"n_flex_nodes", (double)n_flex},
                 {"blocked", (double)out.blocked},
                 {"msu_avg", out.msu.avg},
                 {"dbr", n ? (double)out.blocked / n : 0.0}};
    return r;
}

// Path tables are expensive; memoize per (topology file, K) and persist under
// cache_dir keyed by a hash of the topology structure.
mgon::PathTable get_path_table(const std::string& topo_path, const mgon::Topology& topo, int k,
                               const std::string& cache_dir) {
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, mgon::PathTable> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto mk = std::make_pair(topo_path, k);
    auto it = memo.find(mk);
    if (it != memo.end()) return it->second;

    uint64_t h = 1469598103934665603ull;
    auto mix = [&](long long x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (unsigned char)(x >> (8 * i));
            h *= 1099511628211ull;
        }
    };
    mix(topo.node_count);
    mix(topo.slots_per_fiber);
    for (const auto& l : topo.links) {
        mix(l.src);
        mix(l.dst);
        mix(l.fiber_count);
    }
    mix(k);
    char name[64];
    std::snprintf(name, sizeof(name), "paths_%016llx.txt", (unsigned long long)h);
    std::filesystem::path file = std::filesystem::path(cache_dir) / name;

    mgon::PathTable table;
    std::ifstream in(file);
    if (in) {
        log(LogLevel::Info, "loading cached path table " + file.string());
        table = mgon::load_path_table(in);
    } else {
        log(LogLevel::Info, "solving path selection LP for " + topo_path);
        table = mgon::solve_path_lp(topo, mgon::all_pair_routes(topo, k));
        std::error_code ec;
        std::filesystem::create_directories(file.parent_path(), ec);
        std::ofstream out(file);
        if (out) mgon::save_path_table(table, out);
    }
    memo[mk] = table;
    return table;
}

TrialResult run_dynrsa(const Params& p) {
    using namespace mgon;
    std::string topo_path = p.at("topology");
    Topology topo = load_topo_cached(topo_path);
    std::string policy_s = p.at("policy");
    RsaPolicyKind kind;
    if (policy_s == "nsa")
        kind = RsaPolicyKind::Nsa;
    else if (policy_s == "nsa-shared")
        kind = RsaPolicyKind::NsaShared;
    else if (policy_s == "r")
        kind = RsaPolicyKind::Random;
    else if (policy_s == "ff")
        kind = RsaPolicyKind::FirstFit;
    else if (policy_s == "flf")
        kind = RsaPolicyKind::Flf;
    else if (policy_s == "mk")
        kind = RsaPolicyKind::Mk;
    else
        throw CliError("config error: key 'policy' must be nsa|nsa-shared|r|ff|flf|mk, got '" +
                       policy_s + "'");
    std::string routing_s = p.at("routing");
    RoutingMode routing;
    if (routing_s == "mps")
        routing = RoutingMode::Mps;
    else if (routing_s == "ssp")
        routing = RoutingMode::Ssp;
    else
        throw CliError("config error: key 'routing' must be mps|ssp, got '" + routing_s + "'");
    double load = to_double("load", p.at("load"));
    int n = to_int("requests", p.at("requests"));
    int warmup = to_int("warmup", p.at("warmup"));
    int k = to_int("k", p.at("k"));
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    if (load < 0) throw CliError("config error: key 'load' must be non-negative");
    // load 0 = vanishing offered traffic; the generator needs a positive rate
    TrafficSpec spec = make_traffic(p, std::max(load, 1e-9));
    PathTable table = get_path_table(topo_path, topo, k, p.at("cache_dir"));
    PartitionPlan plan = plan_partitions(topo.slots_per_fiber, spec.sizes, spec.size_probs);
    DynRsaPolicy policy(topo, kind, routing, table, plan, seed);
    SimMetrics metrics = run_dynamic_sim(topo, spec, policy, n, warmup, seed);
    TrialResult r;
    r.id_values = {policy_s, routing_s, p.at("load"), p.at("requests"), p.at("seed")};
    r.metrics = {{"offered_bw", (double)metrics.offered_bw},
                 {"blocked_bw", (double)metrics.blocked_bw},
                 {"dbr", metrics.demand_blocking_ratio}};
    return r;
}

TrialResult run_cosched(const Params& p) {
    using namespace mgon;
    ClusterNet net;
    net.topo = load_topo_cached(p.at("topology"));
    std::vector<int> vms = to_int_list("vms", p.at("vms"));
    if ((int)vms.size() == 1) vms.assign(net.topo.node_count, vms[0]);
    if ((int)vms.size() != net.topo.node_count)
        throw CliError("config error: key 'vms' needs 1 or node-count values");
    net.vm_capacity = vms;
    net.guardband = to_int("guard", p.at("guard"));
    double alpha = to_double("alpha", p.at("alpha"));
    double beta = to_double("beta", p.at("beta"));
    std::string alg = p.at("alg");
    if (alg != "ff" && alg != "ca")
        throw CliError("config error: key 'alg' must be ff|ca, got '" + alg + "'");
    std::string mode = p.at("mode");
    uint64_t seed = (uint64_t)to_ll("seed", p.at("seed"));
    int njobs = to_int("jobs", p.at("jobs"));

    std::vector<Job> jobs;
    if (!p.at("jobs_file").empty()) {
        jobs = load_jobs_file(p.at("jobs_file"));
    } else {
        JobParams jp;
        std::vector<int> tasks = to_int_list("tasks", p.at("tasks"));
        std::vector<int> work = to_int_list("work", p.at("work"));
        std::vector<int> data = to_int_list("data", p.at("data"));
        if (tasks.size() != 2 || work.size() != 2 || data.size() != 2)
            throw CliError("config error: 'tasks', 'work', 'data' need min,max pairs");
        jp.min_tasks = tasks[0];
        jp.max_tasks = tasks[1];
        jp.work_min = work[0];
        jp.work_max = work[1];
        jp.data_min = data[0];
        jp.data_max = data[1];
        Rng rng(seed, 13);
        for (int i = 0; i < njobs; ++i) jobs.push_back(random_job(i, jp, rng));
    }

    TrialResult r;
    r.id_values = {alg, mode, std::to_string(jobs.size()), p.at("seed")};
    if (mode == "static") {
        Schedule s = alg == "ca" ? schedule_ca(jobs, net, alpha, beta) : schedule_ff(jobs, net);
        auto viol = validate_schedule(s, jobs, net);
        for (const auto& v : viol)
            log(LogLevel::Error, std::string("schedule violation ") + v.code + ": " + v.message);
        r.metrics = {{"admitted", (double)jobs.size()},
                     {"blocked", 0.0},
                     {"makespan", (double)s.makespan}};
    } else if (mode == "dynamic") {
        double p_new = to_double("arrival_prob", p.at("arrival_prob"));
        DynamicScheduler sched(net, alg == "ca", alpha, beta);
        Rng arrivals(seed, 17);
        long long slot = 0;
        for (const Job& job : jobs) {
            while (arrivals.next_double() >= p_new) ++slot;
            sched.admit(job, slot);
            ++slot;
        }
        r.metrics = {{"admitted", (double)sched.admitted()},
                     {"blocked", (double)sched.blocked()},
                     {"makespan", (double)sched.committed().makespan}};
    } else {
        throw CliError("config error: key 'mode' must be static|dynamic, got '" + mode + "'");
    }
    return r;
}

const std::map<std::string, CommandDef>& command_defs() {
    static const std::map<std::string, CommandDef> defs = {
        {"waveband",
         {{"strategy", "requests", "seed"},
          {"original_bands", "optimized_bands", "swn"},
          run_waveband}},
        {"oxc",
         {{"arch", "d", "f", "w", "k", "p", "trials", "seed"},
          {"analytic_bp", "mc_bp", "mc_ci95"},
          run_oxc}},
        {"rfbsa",
         {{"alg", "requests", "seed"}, {"blocked", "msu_max", "msu_avg"}, run_rfbsa}},
        {"placement",
         {{"scheme", "budget", "requests", "seed"},
          {"n_flex_nodes", "blocked", "msu_avg", "dbr"},
          run_placement}},
        {"dyn-rsa",
         {{"policy", "routing", "load", "requests", "seed"},
          {"offered_bw", "blocked_bw", "dbr"},
          run_dynrsa}},
        {"cosched",
         {{"alg", "mode", "jobs", "seed"}, {"admitted", "blocked", "makespan"}, run_cosched}},
    };
    return defs;
}

// ----------------------------------------------------------------- driver

int execute(const std::string& command, const RawConfig& raw) {
    validate_keys(command, raw);
    const CommandDef& def = command_defs().at(command);
    std::vector<Params> trials = expand_trials(command, raw);
    int threads = 1;
    if (raw.count("threads")) threads = to_int("threads", raw.at("threads").front());
    threads = std::max(1, std::min<int>(threads, (int)trials.size()));
    log(LogLevel::Info, "running " + std::to_string(trials.size()) + " trial(s) on " +
                            std::to_string(threads) + " thread(s)");

    std::vector<TrialResult> results(trials.size());
    std::vector<std::string> errors(trials.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= trials.size()) return;
            auto t0 = std::chrono::steady_clock::now();
            try {
                results[i] = def.run(trials[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
            results[i].wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const std::string& e : errors)
        if (!e.empty()) throw CliError(e);

    std::string out = raw.count("out") ? raw.at("out").front() : command + ".csv";
    std::error_code ec;
    auto parent = std::filesystem::path(out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream csv(out, std::ios::trunc);
    if (!csv) throw CliError("cannot write output file: " + out);
    for (size_t c = 0; c < def.id_columns.size(); ++c) csv << def.id_columns[c] << ",";
    for (const std::string& m : def.metric_columns) csv << m << ",";
    csv << "wall_ms\n";
    for (const TrialResult& r : results) {
        for (const std::string& v : r.id_values) csv << v << ",";
        for (const auto& [name, value] : r.metrics) csv << fmt(value) << ",";
        csv << fmt(r.wall_ms) << "\n";
    }
    csv.close();

    // aggregate across trials, recomputable from the per-trial rows
    nlohmann::json agg;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  (unsigned long long)config_hash(command, raw));
    agg["version"] = kVersion;
    agg["command"] = command;
    agg["config_hash"] = hash;
    agg["trials"] = trials.size();
    for (size_t m = 0; m < def.metric_columns.size(); ++m) {
        std::vector<double> xs;
        for (const TrialResult& r : results) xs.push_back(r.metrics[m].second);
        mgon::MeanCi ci = mgon::mean_ci(xs);
        agg["metrics"][def.metric_columns[m]] = {{"mean", ci.mean}, {"ci95", ci.ci95}};
        std::cout << "metric " << def.metric_columns[m] << " mean " << fmt(ci.mean) << " ci95 "
                  << fmt(ci.ci95) << "\n";
    }
    std::ofstream js(out + ".json", std::ios::trunc);
    js << agg.dump(2) << "\n";
    std::cout << "wrote " << trials.size() << " trial(s) to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network experiment toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // run: config-file mode
    std::string config_path, run_out;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a config file");
    run_cmd->add_option("config", config_path, "config file path")->required();
    run_cmd->add_option("--out", run_out, "override the output CSV path");

    // flag mode: one subcommand per experiment family
    struct SubState {
        CLI::App* cmd;
        std::map<std::string, std::string> values;
        long long seed = 1;
        int threads = 1;
        std::string out;
    };
    std::map<std::string, std::shared_ptr<SubState>> subs;
    for (const auto& [name, schema] : command_schemas()) {
        auto st = std::make_shared<SubState>();
        st->cmd = app.add_subcommand(name, name + " experiment");
        for (const KeySpec& ks : schema) {
            st->values[ks.key] = ks.def;
            std::string flag = "--" + ks.key;
            for (char& c : flag)
                if (c == '_') c = '-';
            auto* opt = st->cmd->add_option(flag, st->values[ks.key]);
            if (ks.required) opt->required();
        }
        st->cmd->add_option("--seed", st->seed, "trial seed");
        st->cmd->add_option("--threads", st->threads, "worker threads");
        st->cmd->add_option("--out", st->out, "output CSV path");
        subs[name] = st;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            ParsedConfig cfg = parse_config_file(config_path);
            if (!run_out.empty()) cfg.raw["out"] = {run_out};
            return execute(cfg.command, cfg.raw);
        }
        for (const auto& [name, st] : subs) {
            if (!st->cmd->parsed()) continue;
            RawConfig raw;
            for (const auto& [key, value] : st->values)
                if (!value.empty()) raw[key] = {value};
            raw["seeds"] = {std::to_string(st->seed)};
            raw["threads"] = {std::to_string(st->threads)};
            if (!st->out.empty()) raw["out"] = {st->out};
            return execute(name, raw);
        }
        throw CliError("no subcommand given");
    } catch (const std::exception& e) {
        log(LogLevel::Error, e.what());
        std::cerr << "mgon: error: " << e.what() << "\n";
        return 1;
    }
}
