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

#ifndef LOGICENN_RULE_HPP
#define LOGICENN_RULE_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logicenn/kg.hpp"

namespace logicenn {

enum class RuleKind {
    Equivalence,
    Implication,
    Symmetric,
    Antisymmetric,
    Inverse,
    Transitive,
    Composition,
    Negation,
    Reflexive,
    Irreflexive,
};

inline constexpr std::size_t kNumRuleKinds = 10;

inline constexpr std::array<RuleKind, kNumRuleKinds> kAllRuleKinds = {
    RuleKind::Equivalence, RuleKind::Implication, RuleKind::Symmetric,  RuleKind::Antisymmetric,
    RuleKind::Inverse,     RuleKind::Transitive,  RuleKind::Composition, RuleKind::Negation,
    RuleKind::Reflexive,   RuleKind::Irreflexive,
};

/// Lower-case token used in rule files ("implication", "composition", ...).
std::string_view rule_kind_name(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(std::string_view token);

/// Number of relations a rule of this kind mentions (1, 2 or 3).
std::size_t rule_arity(RuleKind kind);

/// A logical rule over relation ids.
///
/// Readings, with x, y, z universally quantified:
///   Equivalence(r1, r2):      (x,r1,y) <=> (x,r2,y)
///   Implication(r1, r2):      (x,r1,y)  => (x,r2,y)
///   Symmetric(r):             (x,r,y)   => (y,r,x)
///   Antisymmetric(r):         (x,r,y)   => not (y,r,x)
///   Inverse(r1, r2):          (x,r1,y) <=> (y,r2,x)
///   Transitive(r):            (x,r,y) and (y,r,z) => (x,r,z)
///   Composition(r1, r2, r3):  (x,r1,y) and (y,r2,z) => (x,r3,z)
///   Negation(r1, r2):         (x,r1,y)  => not (x,r2,y)
///   Reflexive(r):             (x,r,x)
///   Irreflexive(r):           not (x,r,x)
struct Rule {
    RuleKind kind = RuleKind::Symmetric;
    std::array<RelationId, 3> relations{0, 0, 0};
    double confidence = 1.0;

    std::size_t arity() const { return rule_arity(kind); }
    RelationId relation(std::size_t i) const { return relations.at(i); }

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Checks arity-independent invariants: confidence in [0,1], ids in range.
void validate_rule(const Rule& rule, std::size_t num_relations);

struct RuleLoadResult {
    std::vector<Rule> rules;
    /// Rules dropped because a relation name is not in the graph vocabulary.
    std::size_t skipped_unknown = 0;
    /// Rules dropped by the confidence threshold.
    std::size_t below_threshold = 0;
};

/// Reads `kind\trel1[\trel2[\trel3]]\tconfidence` lines.
RuleLoadResult load_rules(const std::filesystem::path& path, const KnowledgeGraph& graph,
                          double min_confidence);
RuleLoadResult parse_rules(std::string_view text, const KnowledgeGraph& graph,
                           double min_confidence, std::string_view source = "<memory>");

std::string format_rules(std::span<const Rule> rules, const KnowledgeGraph& graph);
void write_rules(const std::filesystem::path& path, std::span<const Rule> rules,
                 const KnowledgeGraph& graph);

}  // namespace logicenn

#endif  // LOGICENN_RULE_HPP
