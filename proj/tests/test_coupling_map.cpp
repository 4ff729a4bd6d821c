#include "flowec/coupling_map.hpp"
#include "flowec/errors.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using flowec::CouplingMap;

TEST(CouplingMap, LondonEdges) {
    const auto m = CouplingMap::preset("london");
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->num_qubits(), 5U);
    EXPECT_EQ(m->edges().size(), 4U);
    EXPECT_TRUE(m->adjacent(0, 1));
    EXPECT_TRUE(m->adjacent(3, 1));
    EXPECT_FALSE(m->adjacent(0, 2));
    EXPECT_TRUE(m->connected());
}

TEST(CouplingMap, ShortestPathLowestIndexFirst) {
    const auto m = *CouplingMap::preset("london");
    EXPECT_EQ(*m.shortest_path(0, 2), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(*m.shortest_path(4, 0), (std::vector<std::size_t>{4, 3, 1, 0}));
    const CouplingMap square("square", 4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
    EXPECT_EQ(*square.shortest_path(0, 3), (std::vector<std::size_t>{0, 1, 3}));
    const CouplingMap split("split", 4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(split.shortest_path(0, 3).has_value());
    EXPECT_FALSE(split.connected());
}

TEST(CouplingMap, RejectsBadEdges) {
    EXPECT_THROW(CouplingMap("bad", 2, {{0, 2}}), flowec::Error);
    EXPECT_THROW(CouplingMap("bad", 2, {{1, 1}}), flowec::Error);
}

TEST(CouplingMap, PresetsConnected) {
    for (const auto& name : CouplingMap::preset_names()) {
        const auto m = CouplingMap::preset(name);
        ASSERT_TRUE(m.has_value()) << name;
        EXPECT_TRUE(m->connected()) << name;
    }
    EXPECT_EQ(CouplingMap::preset("boeblingen")->num_qubits(), 20U);
    EXPECT_EQ(CouplingMap::preset("rochester")->num_qubits(), 53U);
    EXPECT_FALSE(CouplingMap::preset("nowhere").has_value());
}

TEST(CouplingMap, JsonRoundTrip) {
    const auto m = *CouplingMap::preset("boeblingen");
    const auto back = CouplingMap::from_json(m.to_json());
    EXPECT_EQ(back.edges(), m.edges());
    EXPECT_EQ(back.num_qubits(), 20U);
    EXPECT_THROW((void)CouplingMap::from_json("{\"edges\": 3}"), flowec::Error);
}

TEST(CouplingMap, ShippedDataMatchesPresets) {
    for (const auto& name : CouplingMap::preset_names()) {
        const std::string path = "data/architectures/" + name + ".json";
        std::ifstream in(path);
        ASSERT_TRUE(in.good()) << path;
        const auto file = CouplingMap::resolve(path);
        const auto preset = *CouplingMap::preset(name);
        EXPECT_EQ(file.edges(), preset.edges()) << name;
        EXPECT_EQ(file.num_qubits(), preset.num_qubits()) << name;
    }
    EXPECT_THROW((void)CouplingMap::resolve("no-such-device"), flowec::Error);
}
