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

#ifndef LOGICENN_RULES_ENGINE_HPP
#define LOGICENN_RULES_ENGINE_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "logicenn/kg.hpp"
#include "logicenn/model.hpp"
#include "logicenn/rule.hpp"

namespace logicenn {

/// One instantiation of a rule. Premises are observed train triples and the
/// conclusion is not in train. For negative rules (antisymmetric, negation,
/// irreflexive) the conclusion is the atom asserted to be false.
struct Grounding {
    RuleKind kind = RuleKind::Symmetric;
    std::uint32_t rule_index = 0;
    std::array<EntityId, 3> bindings{0, 0, 0};
    std::uint8_t binding_count = 0;
    std::array<Triple, 2> premises{};
    std::uint8_t premise_count = 0;
    Triple conclusion{};

    std::span<const Triple> premise_triples() const { return {premises.data(), premise_count}; }
    auto operator<=>(const Grounding&) const = default;
};

/// One nonnegative slack per rule kind.
class SlackConfig {
   public:
    double get(RuleKind kind) const { return values_[static_cast<std::size_t>(kind)]; }
    void set(RuleKind kind, double value);

   private:
    std::array<double, kNumRuleKinds> values_{};
};

/// True when the kind has a relation-vector-only penalty (implication,
/// equivalence).
bool supports_grounding_free(RuleKind kind);

/// Groundings of one rule against the train split. Implication and
/// equivalence return nothing when `grounding_free` is set.
std::vector<Grounding> ground_rule(const Rule& rule, const KnowledgeGraph& graph,
                                   bool grounding_free = true);

struct PenaltyResult {
    double value = 0.0;
    Gradients grads;
};

/// sum over groundings of max(0, violation - slack). Adds `scale` times the
/// gradient into `grads` when non-null. Returns the unscaled sum.
double accumulate_penalty(RuleKind kind, const ModelParameters& params,
                          std::span<const Grounding> groundings, double slack, double scale,
                          Gradients* grads);
PenaltyResult penalty(RuleKind kind, const ModelParameters& params,
                      std::span<const Grounding> groundings, double slack);

/// Relation-vector penalty: implication sum_i max(0, b1_i - b2_i - slack),
/// equivalence sum_i max(0, |b1_i - b2_i| - slack). Requires nonnegative
/// final features.
double accumulate_grounding_free(RuleKind kind, const ModelParameters& params, RelationId r1,
                                 RelationId r2, double slack, double scale, Gradients* grads);
PenaltyResult penalty_grounding_free(RuleKind kind, const ModelParameters& params, RelationId r1,
                                     RelationId r2, double slack);

/// Rules with their groundings materialized once against a graph.
struct PreparedRules {
    std::vector<Rule> rules;
    std::vector<std::vector<Grounding>> groundings;  // parallel to rules
    bool grounding_free = true;

    std::size_t grounding_count(RuleKind kind) const;
};

PreparedRules prepare_rules(std::span<const Rule> rules, const KnowledgeGraph& graph,
                            bool grounding_free);

struct RegularizerValue {
    /// Per kind: sum over rules of confidence * R_i / N_i.
    std::array<double, kNumRuleKinds> per_kind{};
    double total = 0.0;
};

/// The rule regularizer sum_i confidence_i * R_i / N_i, with N_i the number of
/// groundings used (vector width for grounding-free terms). At most `cap`
/// groundings per rule are sampled uniformly without replacement; cap == 0
/// uses all. Adds `lambda` times the gradient into `grads` when non-null.
RegularizerValue accumulate_regularizer(const PreparedRules& prepared, const ModelParameters& params,
                                        const SlackConfig& slack, double lambda, std::size_t cap,
                                        std::mt19937_64* rng, Gradients* grads);

struct DeltaStat {
    std::size_t pair_id = 0;
    RuleKind kind = RuleKind::Implication;
    RelationId r1 = 0;
    RelationId r2 = 0;
    double mean = 0.0;
    double variance = 0.0;  // population variance over the L elements
};

struct RulePair {
    RuleKind kind;
    RelationId r1;
    RelationId r2;
};

/// Mean and variance of the elements of relations[r1] - relations[r2].
std::vector<DeltaStat> delta_statistics(const ModelParameters& params, std::span<const RulePair> pairs);
std::vector<RulePair> implication_equivalence_pairs(std::span<const Rule> rules);

/// `pair_id\tkind\tmean\tvariance` with a header line.
std::string format_delta_table(std::span<const DeltaStat> stats);

struct KindPenalty {
    /// Sum of max(0, violation - slack) over the evaluated groundings.
    double sum = 0.0;
    std::size_t groundings = 0;
    std::size_t evaluated = 0;
    /// Relation-vector penalty summed over implication/equivalence rules.
    double grounding_free = 0.0;
};

struct PenaltyReport {
    std::array<KindPenalty, kNumRuleKinds> kinds{};
    std::vector<DeltaStat> deltas;

    const KindPenalty& at(RuleKind kind) const { return kinds[static_cast<std::size_t>(kind)]; }
    double total() const;
};

}  // namespace logicenn

#endif  // LOGICENN_RULES_ENGINE_HPP
