/*
 *   Copyright 2026 The LogicENN Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "logicenn/errors.hpp"
#include "logicenn/kg.hpp"

using namespace logicenn;

TEST(KgLoad, CountsEntitiesAndRelations) {
    KnowledgeGraph g;
    const auto rep = parse_triples("a\tr\tb\nb\tr\tc\n", g, Split::Train);
    EXPECT_EQ(rep.added, 2u);
    EXPECT_EQ(g.triples(Split::Train).size(), 2u);
    EXPECT_EQ(g.num_entities(), 3u);
    EXPECT_EQ(g.num_relations(), 1u);
}

TEST(KgLoad, EmptyInputLeavesVocabulary) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\n", g, Split::Train);
    const auto rep = parse_triples("", g, Split::Valid);
    EXPECT_EQ(rep.added, 0u);
    EXPECT_EQ(g.num_entities(), 2u);
    EXPECT_TRUE(g.triples(Split::Valid).empty());
}

TEST(KgLoad, WrongFieldCountNamesLine) {
    KnowledgeGraph g;
    try {
        parse_triples("a r\n", g, Split::Train, {}, "f.txt");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("f.txt:1"), std::string::npos) << e.what();
    }
}

TEST(KgLoad, CarriageReturnsStripped) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\r\n", g, Split::Train);
    EXPECT_TRUE(g.entities().find("b").has_value());
}

TEST(KgLoad, DuplicatesCountedOrRejected) {
    KnowledgeGraph g;
    const auto rep = parse_triples("a\tr\tb\na\tr\tb\n", g, Split::Train);
    EXPECT_EQ(rep.added, 1u);
    EXPECT_EQ(rep.duplicates, 1u);
    KnowledgeGraph strict;
    LoadOptions opts;
    opts.deduplicate = false;
    EXPECT_THROW(parse_triples("a\tr\tb\na\tr\tb\n", strict, Split::Train, opts), DataError);
}

TEST(KgLoad, UnseenEntitiesReported) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\n", g, Split::Train);
    const auto rep = parse_triples("a\tr\tz\n", g, Split::Test);
    EXPECT_EQ(rep.unseen_entities, 1u);
}

TEST(KgGraph, AdjacencySumsToTrain) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\nb\ts\tc\nc\tr\ta\na\ts\ta\n", g, Split::Train);
    std::size_t total = 0;
    for (std::size_t r = 0; r < g.num_relations(); ++r) total += g.adjacency(static_cast<RelationId>(r)).size();
    EXPECT_EQ(total, g.triples(Split::Train).size());
}

TEST(KgGraph, KnownTailsSpanSplits) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\n", g, Split::Train);
    parse_triples("a\tr\tc\n", g, Split::Test);
    parse_triples("a\tr\tc\n", g, Split::Valid);
    const auto a = *g.entities().find("a");
    const auto r = *g.relations().find("r");
    EXPECT_EQ(g.known_tails(a, r).size(), 2u);
    EXPECT_EQ(g.train_tails(a, r).size(), 1u);
    EXPECT_TRUE(g.is_known({a, r, *g.entities().find("c")}));
    EXPECT_FALSE(g.contains(Split::Train, {a, r, *g.entities().find("c")}));
}

TEST(KgGraph, AddRejectsBadIds) {
    KnowledgeGraph g;
    g.entities().intern("a");
    g.relations().intern("r");
    EXPECT_THROW(g.add(Split::Train, {0, 0, 5}), ArgumentError);
    EXPECT_TRUE(g.add(Split::Train, {0, 0, 0}));
    EXPECT_FALSE(g.add(Split::Train, {0, 0, 0}));
}

TEST(KgGraph, RoundTripThroughFile) {
    KnowledgeGraph g;
    parse_triples("x\tp\ty\ny\tq\tz\nz\tp\tx\n", g, Split::Train);
    const auto path = std::filesystem::temp_directory_path() / "logicenn_kg_roundtrip.txt";
    write_triples(path, g, Split::Train);
    KnowledgeGraph h;
    load_triples(path, h, Split::Train);
    std::filesystem::remove(path);
    ASSERT_EQ(h.triples(Split::Train).size(), g.triples(Split::Train).size());
    for (const auto& t : g.triples(Split::Train)) {
        const Triple mapped{*h.entities().find(g.entities().name(t.head)),
                            *h.relations().find(g.relations().name(t.relation)),
                            *h.entities().find(g.entities().name(t.tail))};
        EXPECT_TRUE(h.contains(Split::Train, mapped));
    }
}

TEST(KgLoad, MissingFileIsDataError) {
    KnowledgeGraph g;
    EXPECT_THROW(load_triples("/nonexistent/file.txt", g, Split::Train), DataError);
}
