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

#ifndef LOGICENN_EVALUATOR_HPP
#define LOGICENN_EVALUATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicenn/kg.hpp"
#include "logicenn/model.hpp"
#include "logicenn/rule.hpp"
#include "logicenn/rules_engine.hpp"

namespace logicenn {

enum class Side { Head, Tail };
enum class Protocol { Raw, Filtered };

/// Average gives tied candidates the mean of their positions; Pessimistic
/// ranks the true entity below every tied candidate.
enum class TiePolicy { Average, Pessimistic };

std::string_view side_name(Side side);
TiePolicy parse_tie_policy(std::string_view name);

/// Rank of the true entity among every candidate for the missing side. The
/// filtered protocol drops candidates forming a known triple in any split,
/// except the query triple itself.
double rank_triple(const ModelParameters& params, const KnowledgeGraph& graph, const Triple& triple,
                   Side side, Protocol protocol, TiePolicy tie = TiePolicy::Average);

/// Rank of scores[truth]; candidates listed in `excluded` (other than truth)
/// are ignored. Duplicates in `excluded` are tolerated.
double rank_from_scores(std::span<const double> scores, EntityId truth,
                        std::span<const EntityId> excluded, TiePolicy tie);

struct QueryRank {
    Triple triple;
    Side side = Side::Tail;
    double raw = 0.0;
    double filtered = 0.0;
};

struct MetricSet {
    double mr = 0.0;
    double mrr = 0.0;
    std::vector<double> hits;  // parallel to the requested k values
};

struct Aggregates {
    std::vector<int> hits_at;
    MetricSet raw;
    MetricSet filtered;
    std::size_t queries = 0;
};

struct RankingReport {
    std::vector<QueryRank> queries;
    Aggregates aggregates;
};

struct EvalOptions {
    std::vector<int> hits_at{1, 3, 10};
    TiePolicy tie = TiePolicy::Average;
    std::size_t threads = 1;
};

/// Pools head and tail queries. Throws ArgumentError on empty input.
Aggregates aggregate(std::span<const QueryRank> queries, std::span<const int> hits_at);

/// Head and tail queries for every triple, in triple order (tail first).
RankingReport evaluate(const ModelParameters& params, const KnowledgeGraph& graph,
                       std::span<const Triple> triples, const EvalOptions& options = {});

double filtered_mrr(const ModelParameters& params, const KnowledgeGraph& graph,
                    std::span<const Triple> triples, std::size_t threads = 1);

/// `metric\tprotocol\tvalue` lines.
std::string format_metrics(const Aggregates& aggregates);
/// `head\trel\ttail\tside\traw\tfiltered` lines.
std::string format_rank_dump(const RankingReport& report, const KnowledgeGraph& graph);

struct SatisfactionOptions {
    /// Groundings per rule evaluated; 0 means all of them.
    std::size_t sample_cap = 0;
    std::uint64_t seed = 0;
};

/// Every rule's penalty at zero slack over its full groundings (implication
/// and equivalence grounded too), the relation-vector penalties, and delta
/// statistics for implication/equivalence pairs.
PenaltyReport rule_satisfaction_report(const ModelParameters& params, const KnowledgeGraph& graph,
                                       std::span<const Rule> rules,
                                       const SatisfactionOptions& options = {});

std::string format_penalty_report(const PenaltyReport& report);

}  // namespace logicenn

#endif  // LOGICENN_EVALUATOR_HPP
