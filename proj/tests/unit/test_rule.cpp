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

#include "logicenn/errors.hpp"
#include "logicenn/kg.hpp"
#include "logicenn/rule.hpp"

using namespace logicenn;

namespace {
KnowledgeGraph graph_with(std::initializer_list<const char*> relations) {
    KnowledgeGraph g;
    for (const auto* r : relations) g.relations().intern(r);
    return g;
}
}  // namespace

TEST(RuleParse, ImplicationAboveThreshold) {
    const auto g = graph_with({"bornIn", "nationality"});
    const auto res = parse_rules("implication\tbornIn\tnationality\t0.9\n", g, 0.8);
    ASSERT_EQ(res.rules.size(), 1u);
    EXPECT_EQ(res.rules[0].kind, RuleKind::Implication);
    EXPECT_EQ(res.rules[0].relation(0), 0);
    EXPECT_EQ(res.rules[0].relation(1), 1);
    EXPECT_DOUBLE_EQ(res.rules[0].confidence, 0.9);
}

TEST(RuleParse, BelowThresholdFiltered) {
    const auto g = graph_with({"spouse"});
    const auto res = parse_rules("symmetric\tspouse\t0.7\n", g, 0.8);
    EXPECT_TRUE(res.rules.empty());
    EXPECT_EQ(res.below_threshold, 1u);
}

TEST(RuleParse, ArityMismatchIsError) {
    const auto g = graph_with({"r1", "r2"});
    EXPECT_THROW(parse_rules("composition\tr1\tr2\t0.9\n", g, 0.8), DataError);
}

TEST(RuleParse, UnknownKindIsError) {
    const auto g = graph_with({"r"});
    EXPECT_THROW(parse_rules("bogus\tr\t0.9\n", g, 0.8), DataError);
}

TEST(RuleParse, UnknownRelationSkipped) {
    const auto g = graph_with({"r"});
    const auto res = parse_rules("# comment\nsymmetric\tmissing\t1\nsymmetric\tr\t1\n", g, 0.8);
    EXPECT_EQ(res.rules.size(), 1u);
    EXPECT_EQ(res.skipped_unknown, 1u);
}

TEST(RuleParse, FormatRoundTrip) {
    const auto g = graph_with({"a", "b", "c"});
    std::vector<Rule> rules;
    for (const auto kind : kAllRuleKinds) rules.push_back({kind, {0, 1, 2}, 0.85});
    for (auto& r : rules)
        for (std::size_t i = r.arity(); i < 3; ++i) r.relations[i] = 0;
    const auto back = parse_rules(format_rules(rules, g), g, 0.0);
    ASSERT_EQ(back.rules.size(), rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) EXPECT_EQ(back.rules[i], rules[i]);
}

TEST(RuleKinds, NamesRoundTripAndArity) {
    for (const auto kind : kAllRuleKinds) {
        EXPECT_EQ(parse_rule_kind(rule_kind_name(kind)), kind);
        const auto a = rule_arity(kind);
        EXPECT_TRUE(a >= 1 && a <= 3);
    }
    EXPECT_EQ(rule_arity(RuleKind::Composition), 3u);
    EXPECT_EQ(rule_arity(RuleKind::Symmetric), 1u);
    EXPECT_EQ(rule_arity(RuleKind::Inverse), 2u);
    EXPECT_FALSE(parse_rule_kind("nope").has_value());
}
