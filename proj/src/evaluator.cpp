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

#include "logicenn/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>
#include <thread>

#include "logicenn/errors.hpp"

namespace logicenn {

std::string_view side_name(Side side) { return side == Side::Head ? "head" : "tail"; }

TiePolicy parse_tie_policy(std::string_view name) {
    if (name == "average") return TiePolicy::Average;
    if (name == "pessimistic") return TiePolicy::Pessimistic;
    throw ArgumentError("unknown tie policy '" + std::string(name) + "' (expected average|pessimistic)");
}

double rank_from_scores(std::span<const double> scores, EntityId truth,
                        std::span<const EntityId> excluded, TiePolicy tie) {
    if (truth < 0 || static_cast<std::size_t>(truth) >= scores.size())
        throw ArgumentError("true entity outside the candidate range");
    const double target = scores[static_cast<std::size_t>(truth)];
    std::size_t higher = 0;
    std::size_t ties = 0;  // includes the true entity
    for (const double s : scores) {
        if (s > target)
            ++higher;
        else if (s == target)
            ++ties;
    }
    std::vector<EntityId> drop(excluded.begin(), excluded.end());
    std::sort(drop.begin(), drop.end());
    drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
    for (const auto c : drop) {
        if (c == truth || c < 0 || static_cast<std::size_t>(c) >= scores.size()) continue;
        const double s = scores[static_cast<std::size_t>(c)];
        if (s > target)
            --higher;
        else if (s == target)
            --ties;
    }
    const auto h = static_cast<double>(higher);
    const auto t = static_cast<double>(ties);
    return tie == TiePolicy::Average ? h + (t + 1.0) / 2.0 : h + t;
}

namespace {

QueryRank rank_query(const CandidateScorer& scorer, const KnowledgeGraph& graph, const Triple& triple,
                     Side side, TiePolicy tie) {
    const Vector scores = side == Side::Tail ? scorer.tails(triple.head, triple.relation)
                                             : scorer.heads(triple.relation, triple.tail);
    const std::span<const double> view(scores.data(), static_cast<std::size_t>(scores.size()));
    const EntityId truth = side == Side::Tail ? triple.tail : triple.head;
    const auto known = side == Side::Tail ? graph.known_tails(triple.head, triple.relation)
                                          : graph.known_heads(triple.relation, triple.tail);
    QueryRank q;
    q.triple = triple;
    q.side = side;
    q.raw = rank_from_scores(view, truth, {}, tie);
    q.filtered = rank_from_scores(view, truth, known, tie);
    return q;
}

}  // namespace

double rank_triple(const ModelParameters& params, const KnowledgeGraph& graph, const Triple& triple,
                   Side side, Protocol protocol, TiePolicy tie) {
    if (side != Side::Head && side != Side::Tail) throw ArgumentError("invalid ranking side");
    const CandidateScorer scorer(params);
    const auto q = rank_query(scorer, graph, triple, side, tie);
    return protocol == Protocol::Raw ? q.raw : q.filtered;
}

Aggregates aggregate(std::span<const QueryRank> queries, std::span<const int> hits_at) {
    if (queries.empty()) throw ArgumentError("cannot aggregate an empty rank list");
    Aggregates a;
    a.hits_at.assign(hits_at.begin(), hits_at.end());
    a.queries = queries.size();
    a.raw.hits.assign(hits_at.size(), 0.0);
    a.filtered.hits.assign(hits_at.size(), 0.0);
    for (const auto& q : queries) {
        a.raw.mr += q.raw;
        a.raw.mrr += 1.0 / q.raw;
        a.filtered.mr += q.filtered;
        a.filtered.mrr += 1.0 / q.filtered;
        for (std::size_t k = 0; k < hits_at.size(); ++k) {
            if (q.raw <= hits_at[k]) a.raw.hits[k] += 1.0;
            if (q.filtered <= hits_at[k]) a.filtered.hits[k] += 1.0;
        }
    }
    const auto n = static_cast<double>(queries.size());
    for (auto* m : {&a.raw, &a.filtered}) {
        m->mr /= n;
        m->mrr /= n;
        for (auto& h : m->hits) h /= n;
    }
    return a;
}

RankingReport evaluate(const ModelParameters& params, const KnowledgeGraph& graph,
                       std::span<const Triple> triples, const EvalOptions& options) {
    RankingReport report;
    report.queries.resize(2 * triples.size());
    if (triples.empty()) return report;
    const CandidateScorer scorer(params);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            report.queries[2 * i] = rank_query(scorer, graph, triples[i], Side::Tail, options.tie);
            report.queries[2 * i + 1] = rank_query(scorer, graph, triples[i], Side::Head, options.tie);
        }
    };
    const auto threads = std::max<std::size_t>(1, std::min(options.threads, triples.size()));
    if (threads == 1) {
        work(0, triples.size());
    } else {
        std::vector<std::thread> pool;
        const auto chunk = (triples.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const auto begin = t * chunk;
            const auto end = std::min(triples.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    report.aggregates = aggregate(report.queries, options.hits_at);
    return report;
}

double filtered_mrr(const ModelParameters& params, const KnowledgeGraph& graph,
                    std::span<const Triple> triples, std::size_t threads) {
    EvalOptions options;
    options.hits_at = {};
    options.threads = threads;
    return evaluate(params, graph, triples, options).aggregates.filtered.mrr;
}

namespace {
std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}
}  // namespace

std::string format_metrics(const Aggregates& a) {
    std::string out;
    for (const auto& [name, m] : {std::pair{"raw", &a.raw}, std::pair{"filtered", &a.filtered}}) {
        out += std::string("MR\t") + name + '\t' + num(m->mr) + '\n';
        out += std::string("MRR\t") + name + '\t' + num(m->mrr) + '\n';
        for (std::size_t k = 0; k < a.hits_at.size(); ++k)
            out += "Hits@" + std::to_string(a.hits_at[k]) + '\t' + name + '\t' + num(m->hits[k]) + '\n';
    }
    return out;
}

std::string format_rank_dump(const RankingReport& report, const KnowledgeGraph& graph) {
    std::string out;
    for (const auto& q : report.queries) {
        out += graph.entities().name(q.triple.head) + '\t' + graph.relations().name(q.triple.relation) +
               '\t' + graph.entities().name(q.triple.tail) + '\t' + std::string(side_name(q.side)) +
               '\t' + num(q.raw) + '\t' + num(q.filtered) + '\n';
    }
    return out;
}

PenaltyReport rule_satisfaction_report(const ModelParameters& params, const KnowledgeGraph& graph,
                                       std::span<const Rule> rules, const SatisfactionOptions& options) {
    PenaltyReport report;
    std::mt19937_64 rng(options.seed);
    for (const auto& rule : rules) {
        auto& slot = report.kinds[static_cast<std::size_t>(rule.kind)];
        auto groundings = ground_rule(rule, graph, /*grounding_free=*/false);
        slot.groundings += groundings.size();
        if (options.sample_cap > 0 && groundings.size() > options.sample_cap) {
            std::shuffle(groundings.begin(), groundings.end(), rng);
            groundings.resize(options.sample_cap);
        }
        slot.evaluated += groundings.size();
        slot.sum += accumulate_penalty(rule.kind, params, groundings, 0.0, 0.0, nullptr);
        if (supports_grounding_free(rule.kind) && params.final_features_nonnegative())
            slot.grounding_free += accumulate_grounding_free(rule.kind, params, rule.relations[0],
                                                             rule.relations[1], 0.0, 0.0, nullptr);
    }
    const auto pairs = implication_equivalence_pairs(rules);
    report.deltas = delta_statistics(params, pairs);
    return report;
}

std::string format_penalty_report(const PenaltyReport& report) {
    std::string out = "kind\tgroundings\tevaluated\tpenalty\tgrounding_free\n";
    for (std::size_t k = 0; k < kNumRuleKinds; ++k) {
        const auto& s = report.kinds[k];
        out += std::string(rule_kind_name(kAllRuleKinds[k])) + '\t' + std::to_string(s.groundings) + '\t' +
               std::to_string(s.evaluated) + '\t' + num(s.sum) + '\t' + num(s.grounding_free) + '\n';
    }
    return out;
}

}  // namespace logicenn
