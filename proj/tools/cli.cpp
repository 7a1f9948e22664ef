#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "srcp/error.hpp"
#include "srcp/hierarchy.hpp"
#include "srcp/metrics.hpp"
#include "srcp/trace.hpp"

namespace srcp::cli {
namespace {

namespace fs = std::filesystem;

// Writes next to the destination and renames, so readers never see a partial file.
void write_atomically(const std::string& path, const std::string& content) {
    const fs::path dest(path);
    fs::path tmp = dest;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failure on " + tmp.string());
    }
    fs::rename(tmp, dest);
}

std::string fmt_cycles(long double v) {
    char buf[64];
    if (v == std::floor(v))
        std::snprintf(buf, sizeof buf, "%.0Lf", v);
    else
        std::snprintf(buf, sizeof buf, "%.3Lf", v);
    return buf;
}

std::string fmt_rate(const CoreStats& s, Level level) {
    const auto acc = level == Level::L1 ? s.l1_hits + s.l1_misses : s.llc_hits + s.llc_misses;
    if (acc == 0) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", hit_rate(s, level));
    return buf;
}

// Flags shared by simulate and sweep. Unset optionals leave the config file
// (or the built-in defaults) untouched.
struct ConfigFlags {
    std::string config_path;
    std::optional<std::string> policy;
    std::optional<std::uint32_t> cores, sets, ways, block, l1_sets, l1_ways, afc_bits, gcount_bits;
    std::optional<std::uint64_t> lat_l1, lat_llc, lat_mem, seed;
    std::optional<double> alpha;
    std::optional<std::string> aging;
    bool unpartitioned = false;
    bool self_check = false;

    void add_to(CLI::App* app, bool with_policy) {
        app->add_option("--config", config_path, "SimConfig JSON file")->check(CLI::ExistingFile);
        if (with_policy) app->add_option("--policy", policy, "srcp | lru | tadrrip");
        app->add_option("--cores", cores);
        app->add_option("--sets", sets, "LLC sets");
        app->add_option("--ways", ways, "LLC associativity");
        app->add_option("--block", block, "block size in bytes");
        app->add_option("--l1-sets", l1_sets);
        app->add_option("--l1-ways", l1_ways);
        app->add_option("--afc-bits", afc_bits, "AFC counter width k");
        app->add_option("--gcount-bits", gcount_bits, "GCount width (default ceil(log2(cores)))");
        app->add_option("--lat-l1", lat_l1, "L1 hit cycles");
        app->add_option("--lat-llc", lat_llc, "LLC hit cycles");
        app->add_option("--lat-mem", lat_mem, "memory cycles");
        app->add_option("--alpha", alpha, "per-contending-core miss inflation")->check(CLI::NonNegativeNumber);
        app->add_option("--aging", aging, "set-local | partition-global");
        app->add_flag("--unpartitioned", unpartitioned, "baselines evict across the whole set");
        app->add_option("--seed", seed, "seed for BRRIP insertion draws");
        app->add_flag("--self-check", self_check, "assert hierarchy invariants after every access (slow)");
    }

    SimConfig resolve() const {
        SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
        if (policy) cfg.policy = parse_policy(*policy);
        if (cores) cfg.cores = *cores;
        if (sets) cfg.llc.sets = *sets;
        if (ways) cfg.llc.ways = *ways;
        if (block) cfg.llc.block_size = *block;
        if (l1_sets) cfg.l1.sets = *l1_sets;
        if (l1_ways) cfg.l1.ways = *l1_ways;
        if (afc_bits) cfg.afc_bits = *afc_bits;
        if (gcount_bits) cfg.gcount_bits = *gcount_bits;
        if (lat_l1) cfg.latency.l1_hit_cycles = *lat_l1;
        if (lat_llc) cfg.latency.llc_hit_cycles = *lat_llc;
        if (lat_mem) cfg.latency.mem_cycles = *lat_mem;
        if (alpha) cfg.latency.interference_alpha = *alpha;
        if (aging) cfg.aging = parse_aging_scope(*aging);
        if (unpartitioned) cfg.partitioned = false;
        if (seed) cfg.seed = *seed;
        validate(cfg);
        return cfg;
    }
};

void print_summary(std::ostream& out, const SimStats& s) {
    const auto& t = s.total;
    out << "policy " << s.policy << ": " << t.refs << " refs on " << s.config.cores << " cores\n"
        << "  l1 hit rate   " << fmt_rate(t, Level::L1) << "\n"
        << "  llc hit rate  " << fmt_rate(t, Level::LLC) << " (" << t.llc_hits << " hits, " << t.llc_misses
        << " misses)\n"
        << "  fills/bypasses/llc-direct  " << t.fill_l1 << "/" << t.bypass_l1 << "/" << t.write_llc_direct << "\n"
        << "  estimated cycles  " << t.estimated_cycles << " (latency-model proxy, not IPC)\n"
        << "  wcet shared=" << fmt_cycles(wcet_shared(t.llc_hits, t.llc_misses, s.config.latency, s.config.cores))
        << " partitioned=" << fmt_cycles(wcet_srcp(t.llc_hits, t.llc_misses, s.config.latency)) << "\n";
}

int cmd_generate(const WorkloadSpec& spec, const std::string& path, std::ostream& out) {
    Trace t{{spec.cores, spec.block_size}, gen_synthetic(spec)};
    std::ostringstream text;
    emit_trace(t.header, t.refs, text);
    write_atomically(path, text.str());
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.4f", sharing_ratio(t.refs, spec.block_size));
    out << "wrote " << t.refs.size() << " refs (" << to_string(spec.pattern) << ", " << spec.cores
        << " cores) to " << path << "; sharing ratio " << ratio << "\n";
    return kOk;
}

SimStats simulate_one(const SimConfig& cfg, const Trace& trace, bool self_check) {
    return run(cfg, trace, self_check);
}

int cmd_simulate(const ConfigFlags& flags, const std::string& trace_path, const std::string& out_path,
                 std::ostream& out) {
    const SimConfig cfg = flags.resolve();
    const Trace trace = parse_trace_file(trace_path);
    const auto stats = simulate_one(cfg, trace, flags.self_check);
    write_atomically(out_path, stats_to_json(stats));
    print_summary(out, stats);
    out << "stats written to " << out_path << "\n";
    return kOk;
}

void print_reports(std::ostream& out, const std::vector<Report>& reports, const std::string& csv_path) {
    std::string csv = report_csv_header();
    for (const auto& r : reports) {
        out << report_to_text(r);
        csv += report_to_csv_rows(r);
    }
    out << "ehc: not implemented, no comparison row\n";
    if (csv_path.empty()) {
        out << "\n" << csv;
    } else {
        write_atomically(csv_path, csv);
        out << "csv written to " << csv_path << "\n";
    }
}

int cmd_compare(const std::string& base_path, const std::vector<std::string>& cand_paths,
                const std::string& csv_path, std::ostream& out) {
    const auto base = load_stats(base_path);
    std::vector<Report> reports;
    for (const auto& p : cand_paths) reports.push_back(compare_runs(base, load_stats(p)));
    print_reports(out, reports, csv_path);
    return kOk;
}

struct WcetFlags {
    std::string stats_path;
    std::optional<std::uint64_t> hits, misses, lhit, lmiss;
    std::optional<std::uint32_t> cores;
    std::optional<double> alpha;
};

int cmd_wcet(const WcetFlags& f, std::ostream& out) {
    std::optional<SimStats> stats;
    if (!f.stats_path.empty()) stats = load_stats(f.stats_path);
    if (!stats && (!f.hits || !f.misses)) throw CLI::ValidationError("wcet", "needs --stats or both --hits and --misses");

    const LatencyModel defaults;
    // Each input comes from a flag (measured/user-supplied), the stats file, or a default (assumed).
    auto pick = [&](const auto& flag, auto from_stats, auto fallback, const char*& origin) {
        if (flag) {
            origin = "flag";
            return *flag;
        }
        if (stats) {
            origin = "stats";
            return from_stats(*stats);
        }
        origin = "assumed default";
        return fallback;
    };
    const char *o_hits, *o_misses, *o_lhit, *o_lmiss, *o_cores, *o_alpha;
    const auto hits = pick(f.hits, [](const SimStats& s) { return s.total.llc_hits; }, std::uint64_t{0}, o_hits);
    const auto misses = pick(f.misses, [](const SimStats& s) { return s.total.llc_misses; }, std::uint64_t{0}, o_misses);
    const auto lhit = pick(f.lhit, [](const SimStats& s) { return s.config.latency.llc_hit_cycles; },
                           defaults.llc_hit_cycles, o_lhit);
    const auto lmiss = pick(f.lmiss, [](const SimStats& s) { return s.config.latency.mem_cycles; },
                            defaults.mem_cycles, o_lmiss);
    const auto cores = pick(f.cores, [](const SimStats& s) { return s.config.cores; }, SimConfig{}.cores, o_cores);
    const auto alpha = pick(f.alpha, [](const SimStats& s) { return s.config.latency.interference_alpha; },
                            defaults.interference_alpha, o_alpha);
    if (cores == 0) throw CLI::ValidationError("--cores", "must be >= 1");

    const auto shared = wcet_shared(hits, misses, lhit, lmiss, cores, alpha);
    const auto part = wcet_srcp(hits, misses, lhit, lmiss);
    out << "inputs (LLC-level counts; L_hit = LLC hit latency, L_miss = memory latency):\n"
        << "  hits    " << hits << " [" << o_hits << "]\n"
        << "  misses  " << misses << " [" << o_misses << "]\n"
        << "  L_hit   " << lhit << " [" << o_lhit << "]\n"
        << "  L_miss  " << lmiss << " [" << o_lmiss << "]\n"
        << "  cores   " << cores << " [" << o_cores << "]\n"
        << "  alpha   " << alpha << " [" << o_alpha << "]\n";
    out << "shared=" << fmt_cycles(shared) << " srcp=" << fmt_cycles(part);
    if (part > 0) {
        char ratio[32];
        std::snprintf(ratio, sizeof ratio, "%.6Lf", shared / part);
        out << " ratio=" << ratio;
    }
    out << "\n";
    return kOk;
}

int cmd_sweep(const ConfigFlags& flags, const std::string& trace_path, const std::vector<std::string>& policies,
              const std::string& out_dir, unsigned jobs, std::ostream& out) {
    const SimConfig base_cfg = flags.resolve();
    const Trace trace = parse_trace_file(trace_path);
    std::vector<SimConfig> configs;
    for (const auto& name : policies) {
        SimConfig cfg = base_cfg;
        cfg.policy = parse_policy(name);
        validate(cfg);
        configs.push_back(cfg);
    }
    fs::create_directories(out_dir);

    std::vector<std::optional<SimStats>> results(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next == configs.size()) return;
                i = next++;
            }
            try {
                results[i] = simulate_one(configs[i], trace, flags.self_check);
                write_atomically((fs::path(out_dir) / (policies[i] + ".json")).string(), stats_to_json(*results[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < std::max(1u, std::min<unsigned>(jobs, configs.size())); ++j) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (const auto& r : results) print_summary(out, *r);
    const auto lru = std::find(policies.begin(), policies.end(), "lru");
    if (lru != policies.end()) {
        const auto& base = *results[lru - policies.begin()];
        std::vector<Report> reports;
        for (std::size_t i = 0; i < results.size(); ++i)
            if (policies[i] != "lru") reports.push_back(compare_runs(base, *results[i]));
        print_reports(out, reports, (fs::path(out_dir) / "comparison.csv").string());
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trace-driven simulator for a shared, way-partitioned LLC with sharing-aware replacement"};
    app.require_subcommand(1);

    WorkloadSpec spec;
    std::string pattern = "shared-zipf";
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a seeded synthetic trace");
    gen->add_option("--pattern", pattern, "private-stream | shared-zipf | ping-pong | mixed");
    gen->add_option("--cores", spec.cores);
    gen->add_option("--refs", spec.refs);
    gen->add_option("--shared-fraction", spec.shared_fraction)->check(CLI::Range(0.0, 1.0));
    gen->add_option("--footprint", spec.footprint_blocks, "blocks per region");
    gen->add_option("--zipf-s", spec.zipf_s)->check(CLI::NonNegativeNumber);
    gen->add_option("--write-fraction", spec.write_fraction)->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", spec.seed);
    gen->add_option("--block", spec.block_size);
    gen->add_option("-o,--out", gen_out, "trace file to write")->required();

    ConfigFlags sim_flags;
    std::string sim_trace, sim_out;
    auto* sim = app.add_subcommand("simulate", "run one policy over a trace");
    sim_flags.add_to(sim, true);
    sim->add_option("--trace", sim_trace)->required()->check(CLI::ExistingFile);
    sim->add_option("-o,--out", sim_out, "stats JSON to write")->required();

    std::string cmp_base, cmp_csv;
    std::vector<std::string> cmp_cands;
    auto* cmp = app.add_subcommand("compare", "compare candidate runs against a baseline run");
    cmp->add_option("base", cmp_base, "baseline stats JSON")->required()->check(CLI::ExistingFile);
    cmp->add_option("candidates", cmp_cands, "candidate stats JSON files")->required()->check(CLI::ExistingFile);
    cmp->add_option("--csv", cmp_csv, "write the comparison table as CSV");

    WcetFlags wf;
    auto* wcet = app.add_subcommand("wcet", "shared-cache and partitioned WCET bounds");
    wcet->add_option("--stats", wf.stats_path, "stats JSON supplying counts and latencies")->check(CLI::ExistingFile);
    wcet->add_option("--hits", wf.hits);
    wcet->add_option("--misses", wf.misses);
    wcet->add_option("--lhit", wf.lhit, "hit latency in cycles");
    wcet->add_option("--lmiss", wf.lmiss, "stand-alone miss latency in cycles");
    wcet->add_option("--cores", wf.cores);
    wcet->add_option("--alpha", wf.alpha, "per-contending-core miss inflation")->check(CLI::NonNegativeNumber);

    ConfigFlags sweep_flags;
    std::string sweep_trace, sweep_dir;
    std::vector<std::string> sweep_policies{"lru", "srcp", "tadrrip"};
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "run several policies over one trace in parallel");
    sweep_flags.add_to(sweep, false);
    sweep->add_option("--trace", sweep_trace)->required()->check(CLI::ExistingFile);
    sweep->add_option("--policies", sweep_policies)->delimiter(',');
    sweep->add_option("--out-dir", sweep_dir)->required();
    sweep->add_option("-j,--jobs", jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            spec.pattern = parse_pattern(pattern);
            return cmd_generate(spec, gen_out, out);
        }
        if (*sim) return cmd_simulate(sim_flags, sim_trace, sim_out, out);
        if (*cmp) return cmd_compare(cmp_base, cmp_cands, cmp_csv, out);
        if (*wcet) return cmd_wcet(wf, out);
        if (*sweep) return cmd_sweep(sweep_flags, sweep_trace, sweep_policies, sweep_dir, jobs, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvariantError& e) {
        err << "internal invariant failure: " << e.what() << "\n";
        return kInternal;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}

}  // namespace srcp::cli
