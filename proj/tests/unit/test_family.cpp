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

#include <algorithm>

#include "logicenn/errors.hpp"
#include "logicenn/family.hpp"
#include "logicenn/testkit/oracles.hpp"

using namespace logicenn;

namespace {
TripleSet all_splits(const KnowledgeGraph& g) {
    TripleSet s;
    for (const auto split : {Split::Train, Split::Valid, Split::Test})
        for (const auto& t : g.triples(split)) s.insert(t);
    return s;
}
}  // namespace

TEST(Family, SingleFamilySpouseBothDirections) {
    FamilyOptions opts;
    opts.num_families = 1;
    opts.seed = 7;
    const auto kg = generate_family_kg(opts);
    const auto spouse = *kg.graph.relations().find("spouse");
    const auto all = all_splits(kg.graph);
    std::size_t spouse_facts = 0;
    for (const auto& t : all) {
        if (t.relation != spouse) continue;
        ++spouse_facts;
        EXPECT_TRUE(all.count({t.tail, spouse, t.head}));
    }
    EXPECT_EQ(spouse_facts, 2u);
    EXPECT_EQ(kg.graph.num_entities(), 4u);
}

TEST(Family, CoreRelationsAndRules) {
    FamilyOptions opts;
    opts.extended_relations = false;
    const auto kg = generate_family_kg(opts);
    for (const auto* name : {"spouse", "parentOf", "childOf", "grandparentOf", "siblingOf"})
        EXPECT_TRUE(kg.graph.relations().find(name).has_value()) << name;
    EXPECT_EQ(kg.graph.num_relations(), 5u);
    ASSERT_EQ(kg.rules.size(), 5u);
    std::vector<RuleKind> kinds;
    for (const auto& r : kg.rules) kinds.push_back(r.kind);
    for (const auto k : {RuleKind::Symmetric, RuleKind::Inverse, RuleKind::Composition, RuleKind::Irreflexive})
        EXPECT_NE(std::find(kinds.begin(), kinds.end(), k), kinds.end());
}

TEST(Family, SameSeedByteIdentical) {
    FamilyOptions opts;
    opts.num_families = 6;
    opts.seed = 3;
    const auto a = generate_family_kg(opts);
    const auto b = generate_family_kg(opts);
    for (const auto split : {Split::Train, Split::Valid, Split::Test})
        EXPECT_EQ(format_triples(a.graph, split), format_triples(b.graph, split));
    EXPECT_EQ(format_rules(a.rules, a.graph), format_rules(b.rules, b.graph));
}

TEST(Family, ZeroFamiliesIsError) {
    FamilyOptions opts;
    opts.num_families = 0;
    EXPECT_THROW(generate_family_kg(opts), ArgumentError);
}

TEST(Family, SplitsEqualBruteForceClosure) {
    for (std::uint64_t seed : {1u, 2u, 5u}) {
        FamilyOptions opts;
        opts.num_families = 8;
        opts.seed = seed;
        const auto kg = generate_family_kg(opts);
        TripleSet base(kg.base_facts.begin(), kg.base_facts.end());
        const auto closure = testkit::brute_force_closure(base, kg.rules, kg.graph.num_entities());
        EXPECT_EQ(all_splits(kg.graph), closure);
        for (const auto split : {Split::Valid, Split::Test})
            for (const auto& t : kg.graph.triples(split)) EXPECT_FALSE(base.count(t));
        EXPECT_FALSE(kg.graph.triples(Split::Test).empty());
    }
}

TEST(Family, IrreflexiveHolds) {
    FamilyOptions opts;
    opts.num_families = 10;
    const auto kg = generate_family_kg(opts);
    const auto parent = *kg.graph.relations().find("parentOf");
    for (const auto& t : all_splits(kg.graph))
        if (t.relation == parent) EXPECT_NE(t.head, t.tail);
}
