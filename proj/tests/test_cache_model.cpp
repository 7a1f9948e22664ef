#include <gtest/gtest.h>

#include "srcp/cache_model.hpp"
#include "srcp/error.hpp"
#include "srcp/rng.hpp"

namespace srcp {
namespace {

TEST(PartitionMap, SixteenWaysFourCores) {
    const auto pm = PartitionMap::build(16, 4);
    EXPECT_EQ(pm.range(0), (WayRange{0, 4}));
    EXPECT_EQ(pm.range(1), (WayRange{4, 8}));
    EXPECT_EQ(pm.range(2), (WayRange{8, 12}));
    EXPECT_EQ(pm.range(3), (WayRange{12, 16}));
    EXPECT_EQ(pm.owner_of(5), 1u);
}

TEST(PartitionMap, OneWayPerCore) {
    const auto pm = PartitionMap::build(8, 8);
    for (std::uint32_t c = 0; c < 8; ++c) EXPECT_EQ(pm.range(c), (WayRange{c, c + 1}));
}

TEST(PartitionMap, RejectsNonDivisible) {
    EXPECT_THROW(PartitionMap::build(16, 3), ConfigError);
    EXPECT_THROW(PartitionMap::build(16, 0), ConfigError);
    EXPECT_THROW(PartitionMap::build(0, 1), ConfigError);
}

TEST(Geometry, Validation) {
    EXPECT_NO_THROW(validate(Geometry{64, 16, 64}));
    EXPECT_THROW(validate(Geometry{48, 16, 64}), ConfigError);
    EXPECT_THROW(validate(Geometry{64, 0, 64}), ConfigError);
    EXPECT_THROW(validate(Geometry{64, 16, 48}), ConfigError);
}

TEST(Decompose, ZeroAndWrap) {
    const Geometry g{64, 16, 64};
    EXPECT_EQ(decompose(0, g), (SetTag{0, 0}));
    EXPECT_EQ(decompose(std::uint64_t{g.block_size} * g.sets, g), (SetTag{0, 1}));
    EXPECT_EQ(decompose(65, g), (SetTag{1, 0}));
}

TEST(Decompose, RecomposesRandomAddresses) {
    Rng rng(7);
    for (const Geometry g : {Geometry{1, 4, 64}, Geometry{64, 16, 64}, Geometry{4096, 16, 32}}) {
        for (int i = 0; i < 10000; ++i) {
            const std::uint64_t addr = rng.next_u64() >> 8;
            const auto st = decompose(addr, g);
            EXPECT_LT(st.set, g.sets);
            EXPECT_EQ(block_address(st, g), addr & ~std::uint64_t{g.block_size - 1});
        }
    }
}

TEST(Probe, EmptySetFindsNothing) {
    std::vector<LineState> set(4);
    EXPECT_FALSE(probe(set, 0));
}

TEST(Probe, FindsValidTagOnly) {
    std::vector<LineState> set(4);
    set[2].valid = true;
    set[2].tag = 9;
    set[1].tag = 9;  // invalid line with a stale tag
    EXPECT_EQ(probe(set, 9), 2u);
    EXPECT_FALSE(probe(set, 5));
}

TEST(Probe, InstallThenProbeRoundTrip) {
    Rng rng(11);
    std::vector<LineState> set(8);
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t way = static_cast<std::uint32_t>(rng.next_below(8));
        const std::uint64_t tag = rng.next_below(1 << 20);
        if (auto existing = probe(set, tag)) set[*existing] = LineState{};
        set[way] = LineState{};
        set[way].valid = true;
        set[way].tag = tag;
        const auto found = probe(set, tag);
        ASSERT_TRUE(found);
        EXPECT_EQ(*found, way);
        EXPECT_TRUE(set[*found].valid);
    }
}

}  // namespace
}  // namespace srcp
