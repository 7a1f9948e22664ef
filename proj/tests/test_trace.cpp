#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "srcp/error.hpp"
#include "srcp/rng.hpp"
#include "srcp/trace.hpp"

namespace srcp {
namespace {

Trace parse(const std::string& text) {
    std::istringstream in(text);
    return parse_trace(in);
}

TEST(ParseTrace, DataLineMapsFieldsDirectly) {
    const auto t = parse("# cores=4 block=64\n7 2 W 0x1f40\n");
    ASSERT_EQ(t.refs.size(), 1u);
    EXPECT_EQ(t.refs[0], (MemRef{7, 2, Op::Write, 0x1f40}));
    EXPECT_EQ(t.header, (TraceHeader{4, 64}));
}

TEST(ParseTrace, HeaderOnlyIsEmpty) {
    const auto t = parse("# header lines start with '#'\n# cores=2 block=32\n");
    EXPECT_TRUE(t.refs.empty());
    EXPECT_EQ(t.header.cores, 2u);
    EXPECT_EQ(t.header.block_size, 32u);
}

TEST(ParseTrace, CoreOutOfRangeIsValidationError) {
    EXPECT_THROW(parse("# cores=4 block=64\n7 9 R 0x0\n"), ValidationError);
}

TEST(ParseTrace, NonMonotonicSeqIsValidationError) {
    EXPECT_THROW(parse("# cores=4 block=64\n7 0 R 0x0\n7 1 R 0x40\n"), ValidationError);
    EXPECT_THROW(parse("# cores=4 block=64\n7 0 R 0x0\n3 1 R 0x40\n"), ValidationError);
}

TEST(ParseTrace, MalformedLinesReportLineNumber) {
    const char* bad[] = {
        "# cores=4 block=64\n1 0 R 0x0\n2 0 X 0x40\n",  // op
        "# cores=4 block=64\n1 0 R 0x0\n2 0 R 40\n",    // no 0x prefix
        "# cores=4 block=64\n1 0 R 0x0\n2 0 R 0xAB\n",  // uppercase hex
        "# cores=4 block=64\n1 0 R 0x0\n2  0 R 0x40\n", // doubled space
        "# cores=4 block=64\n1 0 R 0x0\n2 0 R\n",       // missing field
        "# cores=4 block=64\n1 0 R 0x0\n-2 0 R 0x40\n", // negative seq
        "# cores=4 block=64\n1 0 R 0x0\n2 0 R 0x40\r\n",
    };
    for (const char* text : bad) {
        try {
            parse(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), 3u) << text;
        }
    }
}

TEST(ParseTrace, MissingHeaderIsParseError) {
    EXPECT_THROW(parse("1 0 R 0x0\n"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("# cores=4\n"), ParseError);
}

TEST(EmitTrace, EmptyIsHeaderOnly) {
    std::ostringstream out;
    emit_trace({4, 64}, {}, out);
    EXPECT_EQ(out.str(), "# cores=4 block=64\n");
}

TEST(EmitTrace, OneRefIsBitExact) {
    std::ostringstream out;
    emit_trace({4, 64}, {{7, 2, Op::Write, 0x1f40}}, out);
    EXPECT_EQ(out.str(), "# cores=4 block=64\n7 2 W 0x1f40\n");
}

TEST(EmitTrace, RandomTracesRoundTrip) {
    Rng rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        Trace t;
        t.header = {static_cast<std::uint32_t>(1 + rng.next_below(8)), 64};
        std::uint64_t seq = rng.next_below(100);
        for (int i = 0; i < 1000; ++i) {
            seq += 1 + rng.next_below(5);
            t.refs.push_back({seq, static_cast<std::uint32_t>(rng.next_below(t.header.cores)),
                              rng.next_below(2) ? Op::Write : Op::Read, rng.next_u64()});
        }
        std::stringstream ss;
        emit_trace(t.header, t.refs, ss);
        EXPECT_EQ(parse_trace(ss), t);
    }
}

WorkloadSpec spec_of(Pattern p) {
    WorkloadSpec s;
    s.pattern = p;
    return s;
}

std::map<std::uint64_t, std::set<std::uint32_t>> cores_per_addr(const std::vector<MemRef>& refs) {
    std::map<std::uint64_t, std::set<std::uint32_t>> m;
    for (const auto& r : refs) m[r.addr].insert(r.core);
    return m;
}

TEST(GenSynthetic, PrivateStreamIsDisjointAcrossCores) {
    auto s = spec_of(Pattern::PrivateStream);
    s.cores = 2;
    s.refs = 8;
    s.footprint_blocks = 4;
    const auto refs = gen_synthetic(s);
    ASSERT_EQ(refs.size(), 8u);
    for (const auto& [addr, cores] : cores_per_addr(refs)) EXPECT_EQ(cores.size(), 1u) << std::hex << addr;
}

TEST(GenSynthetic, SharedZipfWithoutSharingIsDisjoint) {
    auto s = spec_of(Pattern::SharedZipf);
    s.cores = 4;
    s.refs = 5000;
    s.shared_fraction = 0.0;
    for (const auto& [addr, cores] : cores_per_addr(gen_synthetic(s))) EXPECT_EQ(cores.size(), 1u);
}

TEST(GenSynthetic, SharedZipfProducesCrossCoreAddresses) {
    auto s = spec_of(Pattern::SharedZipf);
    s.cores = 4;
    s.shared_fraction = 0.5;
    s.refs = 10000;
    s.seed = 42;
    std::size_t shared = 0;
    for (const auto& [addr, cores] : cores_per_addr(gen_synthetic(s))) shared += cores.size() >= 2 ? 1 : 0;
    EXPECT_GE(shared, 1u);
}

TEST(GenSynthetic, PingPongPairsAlternateOnCommonBlocks) {
    auto s = spec_of(Pattern::PingPong);
    s.cores = 2;
    s.refs = 2000;
    s.footprint_blocks = 16;
    const auto refs = gen_synthetic(s);
    std::size_t writes = 0;
    for (const auto& [addr, cores] : cores_per_addr(refs)) EXPECT_EQ(cores.size(), 2u);
    for (const auto& r : refs) writes += r.op == Op::Write;
    EXPECT_NEAR(static_cast<double>(writes) / refs.size(), 0.5, 0.01);
}

TEST(GenSynthetic, PingPongNeedsTwoCores) {
    auto s = spec_of(Pattern::PingPong);
    s.cores = 1;
    EXPECT_THROW(gen_synthetic(s), ConfigError);
}

TEST(GenSynthetic, RejectsBadFractions) {
    auto s = spec_of(Pattern::SharedZipf);
    s.shared_fraction = 1.5;
    EXPECT_THROW(gen_synthetic(s), ConfigError);
    s.shared_fraction = 0.5;
    s.write_fraction = -0.1;
    EXPECT_THROW(gen_synthetic(s), ConfigError);
    s.write_fraction = 0.1;
    s.refs = 0;
    EXPECT_THROW(gen_synthetic(s), ConfigError);
}

TEST(GenSynthetic, DeterministicAlignedAndMonotonic) {
    for (auto p : {Pattern::PrivateStream, Pattern::SharedZipf, Pattern::PingPong, Pattern::Mixed}) {
        auto s = spec_of(p);
        s.refs = 3000;
        s.seed = 99;
        const auto a = gen_synthetic(s);
        const auto b = gen_synthetic(s);
        EXPECT_EQ(a, b) << to_string(p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].addr % s.block_size, 0u);
            EXPECT_LT(a[i].core, s.cores);
            if (i > 0) EXPECT_GT(a[i].seq, a[i - 1].seq);
        }
        s.seed = 100;
        EXPECT_NE(gen_synthetic(s), a) << "seed must matter for " << to_string(p);
    }
}

TEST(GenSynthetic, ZipfSkewConcentratesOnLowRanks) {
    auto s = spec_of(Pattern::SharedZipf);
    s.shared_fraction = 1.0;
    s.footprint_blocks = 1000;
    s.refs = 20000;
    s.zipf_s = 1.0;
    std::size_t top = 0;
    for (const auto& r : gen_synthetic(s)) top += r.addr / s.block_size < 10;
    // P(rank < 10) = H_10 / H_1000 ~= 0.39 for s = 1.
    EXPECT_NEAR(static_cast<double>(top) / s.refs, 2.928968 / 7.485471, 0.02);
}

TEST(SharingRatio, CountsReferencesToMultiCoreBlocks) {
    std::vector<MemRef> refs = {{0, 0, Op::Read, 0}, {1, 1, Op::Read, 0}, {2, 0, Op::Read, 64}, {3, 0, Op::Read, 64}};
    EXPECT_DOUBLE_EQ(sharing_ratio(refs, 64), 0.5);
    EXPECT_DOUBLE_EQ(sharing_ratio({}, 64), 0.0);
}

TEST(Pattern, NamesRoundTrip) {
    for (auto p : {Pattern::PrivateStream, Pattern::SharedZipf, Pattern::PingPong, Pattern::Mixed})
        EXPECT_EQ(parse_pattern(to_string(p)), p);
    EXPECT_THROW(parse_pattern("zipf"), ConfigError);
}

}  // namespace
}  // namespace srcp
