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

#ifndef LOGICENN_FAMILY_HPP
#define LOGICENN_FAMILY_HPP

#include <cstdint>
#include <vector>

#include "logicenn/kg.hpp"
#include "logicenn/rule.hpp"

namespace logicenn {

struct FamilyOptions {
    int num_families = 1;
    std::uint64_t seed = 0;
    /// Fraction of rule-derived facts withheld from train.
    double holdout_fraction = 0.4;
    /// Share of the withheld facts that go to valid; the rest go to test.
    double valid_share = 0.5;
    /// Probability that a new family's first parent is an unmarried child of
    /// an earlier family (which creates grandparent chains).
    double link_probability = 0.85;
    /// Adds marriedTo (equivalent to spouse) and ancestorOf (implied by
    /// parentOf and grandparentOf) so implication/equivalence rules exist.
    bool extended_relations = true;
};

struct SyntheticKg {
    KnowledgeGraph graph;
    std::vector<Rule> rules;
    /// Facts asserted by the generator before any rule is applied.
    std::vector<Triple> base_facts;
};

/// Deterministic synthetic family graph. Every family has two married
/// parents and two children; families are chained through marriages of
/// earlier children. The closure of the base facts under the emitted rules
/// is split so that only rule-derived facts are withheld.
SyntheticKg generate_family_kg(const FamilyOptions& options);

/// Forward-chains the positive rules (equivalence, implication, symmetric,
/// inverse, transitive, composition) to a fixpoint.
TripleSet forward_closure(const TripleSet& facts, std::span<const Rule> rules);

}  // namespace logicenn

#endif  // LOGICENN_FAMILY_HPP
