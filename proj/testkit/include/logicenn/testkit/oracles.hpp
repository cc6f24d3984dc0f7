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

#ifndef LOGICENN_TESTKIT_ORACLES_HPP
#define LOGICENN_TESTKIT_ORACLES_HPP

// Slow, loop-based reference implementations used to cross-check the
// production paths. Nothing here calls the production scoring, grounding,
// ranking or aggregation code; only the data types are shared.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "logicenn/kg.hpp"
#include "logicenn/model.hpp"
#include "logicenn/rule.hpp"
#include "logicenn/rules_engine.hpp"

namespace logicenn::testkit {

/// Straight-line forward pass over the raw parameter arrays, accumulated in
/// extended precision.
long double reference_score(const ModelParameters& params, EntityId h, RelationId r, EntityId t);
double reference_forward(const ModelParameters& params, EntityId h, RelationId r, EntityId t);

/// Sum of weight * log(1 + exp(-label * f)) in extended precision.
long double reference_data_loss(const ModelParameters& params, std::span<const LabeledTriple> batch);

/// Pre-activation values of every hidden unit for the pair (h, t).
std::vector<double> reference_pre_activations(const ModelParameters& params, EntityId h, EntityId t);

/// True when any ReLU pre-activation for the given pairs lies within `tol`
/// of zero (a kink where finite differences are unreliable).
bool near_relu_kink(const ModelParameters& params, std::span<const Triple> triples, double tol = 1e-3);

/// Losses are returned in extended precision so that central differences of
/// gradients that cancel to zero stay far below the comparison floor.
using LossClosure = std::function<long double(const ModelParameters&)>;

/// Central differences (f(x+eps) - f(x-eps)) / 2eps for every parameter.
Gradients finite_difference_grads(const ModelParameters& params, const LossClosure& loss, double eps);

/// max over parameters of |a - f| / max(1e-8, |a| + |f|).
double max_relative_error(const Gradients& analytic, const Gradients& numeric);

/// Scalar central difference, for sanity checks on closed-form functions.
double finite_difference(const std::function<double(double)>& f, double x, double eps);

/// Raw violation of one grounding computed from reference_forward: the
/// quantity the hinge compares with the slack. `abs_form` reports whether
/// the violation is an absolute value (kink at zero).
struct ReferenceViolation {
    long double value = 0.0L;
    bool abs_form = false;
    long double inner = 0.0L;  // argument of |.| when abs_form
};
ReferenceViolation reference_violation(RuleKind kind, const ModelParameters& params, const Grounding& g);

/// Sum of max(0, violation - slack) over the groundings.
long double reference_penalty(RuleKind kind, const ModelParameters& params,
                              std::span<const Grounding> groundings, double slack);

/// True when any grounding sits within `tol` of a hinge or |.| kink, or any
/// involved pair is near a ReLU kink.
bool penalty_near_kink(RuleKind kind, const ModelParameters& params, std::span<const Grounding> groundings,
                       double slack, double tol = 1e-4);

/// Nested-loop enumeration of all groundings of one rule (grounded mode,
/// implication and equivalence included).
std::vector<Grounding> brute_force_groundings(const Rule& rule, const KnowledgeGraph& graph);

/// Fixpoint of the positive rules by repeated enumeration over all entity
/// tuples.
TripleSet brute_force_closure(const TripleSet& facts, std::span<const Rule> rules, std::size_t num_entities);

/// Rank by sorting every candidate score (computed with reference_forward)
/// and locating the true entity's tie group. Average tie handling.
double brute_force_rank(const ModelParameters& params, const KnowledgeGraph& graph, const Triple& triple,
                        bool tail_side, bool filtered);

struct AggregateOracle {
    double mr = 0.0;
    double mrr = 0.0;
    std::vector<double> hits;
};
AggregateOracle aggregate_oracle(std::span<const double> ranks, std::span<const int> hits_at);

/// Two-pass population mean and variance.
std::pair<double, double> two_pass_mean_variance(std::span<const double> values);

/// Complete truth assignment over every (h, r, t) of a tiny graph.
struct GroundTruthTable {
    std::size_t num_entities = 0;
    std::size_t num_relations = 0;
    std::vector<bool> cells;  // index (r * N_e + h) * N_e + t

    bool at(EntityId h, RelationId r, EntityId t) const;
    std::size_t true_facts() const;
};

GroundTruthTable random_table(std::size_t num_entities, std::size_t num_relations, double p_true,
                              std::uint64_t seed);

/// Graph with entities e0.. and relations r0.., `num_triples` distinct
/// uniform train triples (fewer if the space is smaller).
KnowledgeGraph random_graph(std::size_t num_entities, std::size_t num_relations, std::size_t num_triples,
                            std::uint64_t seed);

/// Rule of the given kind over uniformly drawn relations.
Rule random_rule(RuleKind kind, std::size_t num_relations, std::mt19937_64& rng);

struct MemorizationConfig {
    std::size_t embedding_dim = 8;
    std::vector<std::size_t> hidden{64, 64};
    ActivationPlan activation = ActivationPlan::ReluAll;
    std::size_t epochs = 3000;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;
    /// Stop early once every cell is classified correctly.
    bool stop_when_separated = true;
};

struct MemorizationReport {
    double accuracy = 0.0;
    /// min(positive scores) - max(negative scores); > 0 means separable at
    /// some threshold.
    double margin = 0.0;
    std::size_t epochs_run = 0;
};

/// Full-batch training on every cell of the table (positives +1, negatives
/// -1, no rules, no sampling), then classification at threshold 0.
MemorizationReport memorization_test(const GroundTruthTable& table, const MemorizationConfig& config);

}  // namespace logicenn::testkit

#endif  // LOGICENN_TESTKIT_ORACLES_HPP
