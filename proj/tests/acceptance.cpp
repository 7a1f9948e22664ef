// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// runtime budget. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>

#include "cli.hpp"
#include "reference_sim.hpp"
#include "srcp/error.hpp"
#include "srcp/hierarchy.hpp"
#include "srcp/metrics.hpp"
#include "srcp/srcp_policy.hpp"
#include "srcp/trace.hpp"

namespace fs = std::filesystem;
using namespace srcp;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

Result fail(std::string why) { return {false, std::move(why)}; }

// ---------------------------------------------------------------------------

Result partition_map_exact() {
    const auto pm = PartitionMap::build(16, 4);
    for (std::uint32_t c = 0; c < 4; ++c)
        if (pm.range(c) != WayRange{4 * c, 4 * c + 4}) return fail("16/4 map wrong for core " + std::to_string(c));
    int checked = 0;
    for (std::uint32_t ways = 1; ways <= 64; ++ways) {
        for (std::uint32_t cores = 1; cores <= ways; ++cores) {
            if (ways % cores != 0) continue;
            const auto m = PartitionMap::build(ways, cores);
            std::vector<int> cover(ways, 0);
            for (std::uint32_t c = 0; c < cores; ++c) {
                const auto r = m.range(c);
                if (r.size() != ways / cores) return fail("unequal width");
                for (auto w = r.start; w < r.end; ++w) {
                    ++cover[w];
                    if (m.owner_of(w) != c) return fail("owner_of disagrees with range");
                }
            }
            if (std::any_of(cover.begin(), cover.end(), [](int n) { return n != 1; }))
                return fail("ranges do not tile [0," + std::to_string(ways) + ")");
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " (ways, cores) pairs tile exactly"};
}

Result initial_afc_exact() {
    if (initial_afc(8) != 128) return fail("initial_afc(8) = " + std::to_string(initial_afc(8)));
    for (std::uint32_t k = 1; k <= 16; ++k) {
        const double max = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
        const auto expected = static_cast<std::uint32_t>(std::ceil((max + 0.0) / 2.0));
        if (initial_afc(k) != expected) return fail("k=" + std::to_string(k));
    }
    return {true, "initial_afc(8) = 128; k = 1..16 match ceil((2^k-1)/2)"};
}

Result classification_tables() {
    for (std::uint32_t afc = 0; afc <= 255; ++afc) {
        const auto expected = afc >= 128 ? FreqClass::FreqUsed : FreqClass::LessFreqUsed;
        if (classify_frequency(afc, 128) != expected) return fail("afc=" + std::to_string(afc));
    }
    for (std::uint32_t g = 0; g <= 3; ++g) {
        const auto expected = g >= 1 ? ShareClass::Shared : ShareClass::Private;
        if (classify_sharing(g) != expected) return fail("gcount=" + std::to_string(g));
    }
    if (classify_frequency(128, 128) != FreqClass::FreqUsed) return fail("afc=128 boundary");
    if (classify_sharing(1) != ShareClass::Shared) return fail("gcount=1 boundary");
    return {true, "256 afc values, 4 gcount values"};
}

// Brute force: enumerate all ways, keep one that nothing beats under the key.
std::uint32_t brute_force_victim(const std::vector<LineState>& set) {
    std::uint32_t best = 0;
    for (std::uint32_t w = 1; w < set.size(); ++w) {
        const std::array<std::uint64_t, 4> kw{set[w].afc, set[w].gcount, set[w].last_local_touch, w};
        const std::array<std::uint64_t, 4> kb{set[best].afc, set[best].gcount, set[best].last_local_touch, best};
        if (kw < kb) best = w;
    }
    return best;
}

Result victim_oracle() {
    std::array<std::uint64_t, 4> perm{1, 2, 3, 4};
    std::vector<LineState> set(4);
    std::uint64_t states = 0;
    do {
        for (int code = 0; code < 6561; ++code) {
            int c = code;
            for (std::uint32_t w = 0; w < 4; ++w) {
                set[w].valid = true;
                set[w].afc = c % 3;
                c /= 3;
                set[w].gcount = c % 3;
                c /= 3;
                set[w].last_local_touch = perm[w];
            }
            const auto got = select_victim(set, {0, 4});
            if (got != brute_force_victim(set)) return fail("mismatch at state " + std::to_string(states));
            ++states;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {states == 6561 * 24, std::to_string(states) + " states, exact match"};
}

Result partition_isolation() {
    SimConfig cfg;
    cfg.llc = {64, 16, 64};
    cfg.l1 = {16, 4};
    const Pattern patterns[] = {Pattern::PrivateStream, Pattern::SharedZipf, Pattern::PingPong, Pattern::Mixed};
    const Policy policies[] = {Policy::Srcp, Policy::Lru, Policy::TaDrrip};
    std::uint64_t fills = 0, violations = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        WorkloadSpec w;
        w.pattern = patterns[seed % 4];
        w.refs = 100000;
        w.seed = seed;
        w.footprint_blocks = 2048;
        w.shared_fraction = 0.5;
        w.write_fraction = 0.3;
        const auto refs = gen_synthetic(w);
        for (auto policy : policies) {
            cfg.policy = policy;
            Simulator sim(cfg);
            for (const auto& r : refs) {
                const auto out = sim.access(r);
                if (!out.fill_way) continue;
                ++fills;
                if (!sim.partitions().range(r.core).contains(*out.fill_way)) ++violations;
            }
        }
    }
    if (violations != 0) return fail(std::to_string(violations) + " fills outside the requester's partition");
    return {fills > 0, std::to_string(fills) + " LLC fills over 100 traces x 3 policies, 0 outside partition"};
}

Result single_copy() {
    WorkloadSpec w;
    w.pattern = Pattern::PingPong;
    w.refs = 100000;
    w.seed = 7;
    w.footprint_blocks = 512;
    SimConfig cfg;
    cfg.llc = {64, 16, 64};
    cfg.l1 = {16, 4};
    Simulator sim(cfg);
    sim.set_self_check(true);
    std::uint64_t shared_writes = 0, violations = 0;
    try {
        for (const auto& r : gen_synthetic(w)) {
            sim.access(r);
            if (r.op != Op::Write) continue;
            const auto* line = sim.llc_line(r.addr);
            if (line == nullptr || classify_sharing(line->gcount) != ShareClass::Shared) continue;
            ++shared_writes;
            if (sim.l1_holders(r.addr) != 0) ++violations;
        }
    } catch (const InvariantError& e) {
        return fail(std::string("self-check: ") + e.what());
    }
    if (violations) return fail(std::to_string(violations) + " shared writes left L1 copies");
    return {shared_writes > 0, std::to_string(shared_writes) + " writes to shared lines, 0 violations"};
}

Result reference_equivalence() {
    SimConfig cfg;
    cfg.llc = {32, 16, 64};
    cfg.l1 = {8, 2};
    std::uint64_t accesses = 0;
    for (auto policy : {Policy::Srcp, Policy::Lru}) {
        cfg.policy = policy;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            WorkloadSpec w;
            w.pattern = static_cast<Pattern>(seed % 4);
            w.refs = 10000;
            w.seed = seed * 31;
            w.footprint_blocks = 1024;
            w.write_fraction = 0.3;
            Simulator sim(cfg);
            testing::ReferenceSim ref(cfg);
            for (const auto& r : gen_synthetic(w)) {
                const auto a = sim.access(r);
                const auto b = ref.access(r);
                if (!(a == b))
                    return fail(std::string(to_string(policy)) + " seed " + std::to_string(seed) + " diverges at seq " +
                                std::to_string(r.seq));
                ++accesses;
            }
        }
    }
    return {true, std::to_string(accesses) + " accesses, identical outcomes"};
}

Result wcet_dominance() {
    if (wcet_shared(900, 100, 17, 154, 4, 1.0) != 76900.0L) return fail("worked shared bound");
    if (wcet_srcp(900, 100, 17, 154) != 30700.0L) return fail("worked partitioned bound");
    Rng rng(20240501);
    for (int i = 0; i < 10000; ++i) {
        const auto hits = rng.next_below(1'000'000);
        const auto misses = 1 + rng.next_below(1'000'000);
        const auto l_hit = 1 + rng.next_below(200);
        const auto l_miss = l_hit + rng.next_below(2000);
        const auto n = static_cast<std::uint32_t>(2 + rng.next_below(7));
        const double alpha = 2.0 * (1.0 - rng.next_unit());
        if (!(wcet_shared(hits, misses, l_hit, l_miss, n, alpha) > wcet_srcp(hits, misses, l_hit, l_miss)))
            return fail("dominance broken at tuple " + std::to_string(i));
    }
    return {true, "76900 vs 30700; 10^4 random tuples dominated"};
}

// Scenario for the directional hit-rate check: 1 MiB 16-way LLC (256 KiB per
// partition) against a 1 MiB shared region, default 32 KiB L1s.
SimConfig directional_config(Policy p) {
    SimConfig cfg;
    cfg.llc = {1024, 16, 64};
    cfg.policy = p;
    return cfg;
}

Result directional_hit_rate(const fs::path& golden) {
    WorkloadSpec w;
    w.pattern = Pattern::SharedZipf;
    w.cores = 4;
    w.shared_fraction = 0.6;
    w.zipf_s = 1.0;
    w.refs = 1'000'000;
    w.seed = 42;
    w.footprint_blocks = 16384;
    const Trace t{{4, 64}, gen_synthetic(w)};
    const auto lru = run(directional_config(Policy::Lru), t);
    const auto srcp = run(directional_config(Policy::Srcp), t);
    const double lru_rate = hit_rate(lru.total, Level::LLC);
    const double srcp_rate = hit_rate(srcp.total, Level::LLC);
    const double delta = srcp_rate - lru_rate;
    char buf[160];
    std::snprintf(buf, sizeof buf, "srcp %.4f vs lru %.4f (delta %+.4f)", srcp_rate, lru_rate, delta);
    std::string detail = buf;
    if (srcp_rate < lru_rate) return fail(detail + ": srcp below lru");

    constexpr double kTolerance = 0.005;
    if (!fs::exists(golden)) {
        nlohmann::json j{{"scenario", "shared-zipf cores=4 shared_fraction=0.6 zipf_s=1.0 refs=1e6 seed=42 "
                                      "footprint=16384 llc=1024x16x64"},
                         {"lru_llc_hit_rate", lru_rate},
                         {"srcp_llc_hit_rate", srcp_rate},
                         {"delta", delta}};
        std::ofstream(golden) << j.dump(2) << "\n";
        return {true, detail + "; golden recorded at " + golden.string()};
    }
    std::ifstream in(golden);
    const auto j = nlohmann::json::parse(in);
    const double recorded = j.at("delta").get<double>();
    if (std::abs(delta - recorded) > kTolerance) {
        std::snprintf(buf, sizeof buf, "; regressed from recorded delta %+.4f", recorded);
        return fail(detail + buf);
    }
    std::snprintf(buf, sizeof buf, "; within 0.005 of recorded %+.4f", recorded);
    return {true, detail + buf};
}

int cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"srcpsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return srcp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result determinism() {
    const fs::path dir = fs::temp_directory_path() / ("srcp_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string stats[2];
    std::string traces[2];
    for (int i = 0; i < 2; ++i) {
        const auto trace = (dir / ("t" + std::to_string(i) + ".trc")).string();
        const auto out = (dir / ("s" + std::to_string(i) + ".json")).string();
        if (cli({"generate", "--pattern", "mixed", "--cores", "4", "--refs", "200000", "--seed", "42", "-o", trace}) != 0)
            return fail("generate failed");
        if (cli({"simulate", "--trace", trace, "--sets", "256", "-o", out}) != 0) return fail("simulate failed");
        traces[i] = slurp(trace);
        stats[i] = slurp(out);
    }
    fs::remove_all(dir);
    if (traces[0] != traces[1]) return fail("traces differ");
    if (stats[0] != stats[1]) return fail("stats JSON differs");
    return {true, "traces and stats JSON byte-identical (" + std::to_string(stats[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path golden = argc > 1 ? fs::path(argv[1]) : fs::path("directional_hit_rate.json");
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Result()> check;
    };
    const std::vector<Criterion> criteria = {
        {"partition-map exactness", 1, partition_map_exact},
        {"initial AFC exactness", 1, initial_afc_exact},
        {"frequency/sharing classification tables", 1, classification_tables},
        {"victim-selection oracle", 10, victim_oracle},
        {"partition isolation", 60, partition_isolation},
        {"single-copy shared data", 60, single_copy},
        {"reference-model equivalence", 60, reference_equivalence},
        {"WCET dominance", 5, wcet_dominance},
        {"directional LLC hit rate vs LRU", 120, [&] { return directional_hit_rate(golden); }},
        {"end-to-end determinism", 60, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.check();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            r.pass = false;
            r.detail += " [over budget]";
        }
        std::printf("%s  %-42s %8.3fs / %4.0fs  %s\n", r.pass ? "PASS" : "FAIL", c.name, secs, c.budget_s,
                    r.detail.c_str());
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
