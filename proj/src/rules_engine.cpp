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

#include "logicenn/rules_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "logicenn/errors.hpp"

namespace logicenn {

void SlackConfig::set(RuleKind kind, double value) {
    if (!(value >= 0.0)) throw ConfigError("slack values must be nonnegative");
    values_[static_cast<std::size_t>(kind)] = value;
}

bool supports_grounding_free(RuleKind kind) {
    return kind == RuleKind::Implication || kind == RuleKind::Equivalence;
}

namespace {

Grounding make(RuleKind kind, std::initializer_list<EntityId> bindings,
               std::initializer_list<Triple> premises, Triple conclusion) {
    Grounding g;
    g.kind = kind;
    for (auto b : bindings) g.bindings[g.binding_count++] = b;
    for (auto p : premises) g.premises[g.premise_count++] = p;
    g.conclusion = conclusion;
    return g;
}

}  // namespace

std::vector<Grounding> ground_rule(const Rule& rule, const KnowledgeGraph& graph, bool grounding_free) {
    validate_rule(rule, graph.num_relations());
    const auto kind = rule.kind;
    const auto r1 = rule.relations[0];
    const auto r2 = rule.relations[1];
    const auto r3 = rule.relations[2];
    std::vector<Grounding> out;
    auto absent = [&](const Triple& t) { return !graph.contains(Split::Train, t); };

    // Premise (h, from, t) implies conclusion (h or t, to, t or h).
    auto pairwise = [&](RelationId from, RelationId to, bool swap) {
        for (const auto& [h, t] : graph.adjacency(from)) {
            const Triple premise{h, from, t};
            const Triple conclusion = swap ? Triple{t, to, h} : Triple{h, to, t};
            if (absent(conclusion)) out.push_back(make(kind, {h, t}, {premise}, conclusion));
        }
    };

    switch (kind) {
        case RuleKind::Equivalence:
            if (grounding_free) break;
            pairwise(r1, r2, false);
            pairwise(r2, r1, false);
            break;
        case RuleKind::Implication:
            if (grounding_free) break;
            pairwise(r1, r2, false);
            break;
        case RuleKind::Symmetric:
        case RuleKind::Antisymmetric:
            pairwise(r1, r1, true);
            break;
        case RuleKind::Inverse:
            pairwise(r1, r2, true);
            pairwise(r2, r1, true);
            break;
        case RuleKind::Negation:
            pairwise(r1, r2, false);
            break;
        case RuleKind::Transitive:
        case RuleKind::Composition: {
            const auto first = r1;
            const auto second = kind == RuleKind::Transitive ? r1 : r2;
            const auto target = kind == RuleKind::Transitive ? r1 : r3;
            for (const auto& [h, t] : graph.adjacency(first)) {
                for (const auto s : graph.train_tails(t, second)) {
                    const Triple conclusion{h, target, s};
                    if (absent(conclusion))
                        out.push_back(make(kind, {h, t, s}, {Triple{h, first, t}, Triple{t, second, s}},
                                           conclusion));
                }
            }
            break;
        }
        case RuleKind::Reflexive:
        case RuleKind::Irreflexive: {
            std::set<EntityId> seen;
            for (const auto& [h, t] : graph.adjacency(r1)) {
                seen.insert(h);
                seen.insert(t);
            }
            for (const auto e : seen) {
                const Triple conclusion{e, r1, e};
                if (absent(conclusion)) out.push_back(make(kind, {e}, {}, conclusion));
            }
            break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct Violation {
    double value;
    std::array<double, 3> grad;  // d value / d score, per atom (premises then conclusion)
};

Violation violation(RuleKind kind, std::span<const double> f) {
    auto sign = [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); };
    switch (kind) {
        case RuleKind::Equivalence:
        case RuleKind::Symmetric:
        case RuleKind::Inverse: {
            const double diff = f[0] - f[1];
            return {std::abs(diff), {sign(diff), -sign(diff), 0.0}};
        }
        case RuleKind::Implication:
            return {f[0] - f[1], {1.0, -1.0, 0.0}};
        case RuleKind::Antisymmetric: {
            const double a = sigmoid(f[0]);
            const double b = sigmoid(f[1]);
            return {a * b, {a * (1 - a) * b, a * b * (1 - b), 0.0}};
        }
        case RuleKind::Transitive:
        case RuleKind::Composition: {
            const double a = sigmoid(f[0]);
            const double b = sigmoid(f[1]);
            const double c = sigmoid(f[2]);
            return {a * b - c, {a * (1 - a) * b, a * b * (1 - b), -c * (1 - c)}};
        }
        case RuleKind::Negation: {
            const double a = sigmoid(f[0]);
            const double b = sigmoid(f[1]);
            const double inner = a + b - 1.0;
            const double s = sign(inner);
            return {std::abs(inner), {s * a * (1 - a), s * b * (1 - b), 0.0}};
        }
        case RuleKind::Reflexive: {
            const double c = sigmoid(f[0]);
            return {1.0 - c, {-c * (1 - c), 0.0, 0.0}};
        }
        case RuleKind::Irreflexive: {
            const double c = sigmoid(f[0]);
            return {c, {c * (1 - c), 0.0, 0.0}};
        }
    }
    return {0.0, {0.0, 0.0, 0.0}};
}

std::size_t expected_premises(RuleKind kind) {
    switch (kind) {
        case RuleKind::Transitive:
        case RuleKind::Composition:
            return 2;
        case RuleKind::Reflexive:
        case RuleKind::Irreflexive:
            return 0;
        default:
            return 1;
    }
}

}  // namespace

double accumulate_penalty(RuleKind kind, const ModelParameters& params,
                          std::span<const Grounding> groundings, double slack, double scale,
                          Gradients* grads) {
    if (!(slack >= 0.0)) throw ArgumentError("slack must be nonnegative");
    if (groundings.empty()) return 0.0;
    const auto atoms_per = expected_premises(kind) + 1;

    std::vector<Triple> atoms;
    atoms.reserve(groundings.size() * atoms_per);
    for (const auto& g : groundings) {
        if (g.kind != kind || g.premise_count != expected_premises(kind))
            throw InternalError("grounding of kind " + std::string(rule_kind_name(g.kind)) +
                                " passed to " + std::string(rule_kind_name(kind)) + " penalty");
        for (const auto& p : g.premise_triples()) atoms.push_back(p);
        atoms.push_back(g.conclusion);
    }
    const auto tape = record_scores(params, atoms);
    const auto& scores = tape.scores;

    double total = 0.0;
    std::vector<double> upstream(atoms.size(), 0.0);
    for (std::size_t i = 0; i < groundings.size(); ++i) {
        const std::span<const double> f(scores.data() + i * atoms_per, atoms_per);
        const auto v = violation(kind, f);
        const double hinge = v.value - slack;
        if (hinge <= 0.0) continue;
        total += hinge;
        for (std::size_t a = 0; a < atoms_per; ++a) upstream[i * atoms_per + a] = scale * v.grad[a];
    }
    if (grads != nullptr && total > 0.0) accumulate_score_gradients(params, tape, upstream, *grads);
    return total;
}

PenaltyResult penalty(RuleKind kind, const ModelParameters& params,
                      std::span<const Grounding> groundings, double slack) {
    PenaltyResult result{0.0, params.zeros_like()};
    result.value = accumulate_penalty(kind, params, groundings, slack, 1.0, &result.grads);
    return result;
}

double accumulate_grounding_free(RuleKind kind, const ModelParameters& params, RelationId r1,
                                 RelationId r2, double slack, double scale, Gradients* grads) {
    if (!supports_grounding_free(kind))
        throw ArgumentError(std::string(rule_kind_name(kind)) + " has no grounding-free penalty");
    if (!params.final_features_nonnegative())
        throw ConfigError(
            "grounding-free penalties need a nonnegative (ReLU) final hidden activation");
    if (!(slack >= 0.0)) throw ArgumentError("slack must be nonnegative");
    check_relation(params, r1);
    check_relation(params, r2);

    double total = 0.0;
    const auto width = params.relations.cols();
    for (Eigen::Index i = 0; i < width; ++i) {
        const double diff = params.relations(r1, i) - params.relations(r2, i);
        double g = 0.0;
        if (kind == RuleKind::Implication) {
            if (diff - slack > 0.0) {
                total += diff - slack;
                g = 1.0;
            }
        } else if (std::abs(diff) - slack > 0.0) {
            total += std::abs(diff) - slack;
            g = diff > 0 ? 1.0 : -1.0;
        }
        if (grads != nullptr && g != 0.0) {
            grads->relations(r1, i) += scale * g;
            grads->relations(r2, i) -= scale * g;
        }
    }
    return total;
}

PenaltyResult penalty_grounding_free(RuleKind kind, const ModelParameters& params, RelationId r1,
                                     RelationId r2, double slack) {
    PenaltyResult result{0.0, params.zeros_like()};
    result.value = accumulate_grounding_free(kind, params, r1, r2, slack, 1.0, &result.grads);
    return result;
}

std::size_t PreparedRules::grounding_count(RuleKind kind) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].kind == kind) n += groundings[i].size();
    return n;
}

PreparedRules prepare_rules(std::span<const Rule> rules, const KnowledgeGraph& graph, bool grounding_free) {
    PreparedRules prepared;
    prepared.grounding_free = grounding_free;
    prepared.rules.assign(rules.begin(), rules.end());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        auto g = ground_rule(rules[i], graph, grounding_free);
        for (auto& x : g) x.rule_index = static_cast<std::uint32_t>(i);
        prepared.groundings.push_back(std::move(g));
    }
    return prepared;
}

RegularizerValue accumulate_regularizer(const PreparedRules& prepared, const ModelParameters& params,
                                        const SlackConfig& slack, double lambda, std::size_t cap,
                                        std::mt19937_64* rng, Gradients* grads) {
    RegularizerValue out;
    std::vector<Grounding> sample;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < prepared.rules.size(); ++i) {
        const auto& rule = prepared.rules[i];
        const double xi = slack.get(rule.kind);
        double term = 0.0;
        if (prepared.grounding_free && supports_grounding_free(rule.kind)) {
            const double n = static_cast<double>(params.feature_width());
            const double scale = lambda * rule.confidence / n;
            term = rule.confidence *
                   accumulate_grounding_free(rule.kind, params, rule.relations[0], rule.relations[1],
                                             xi, scale, grads) /
                   n;
        } else {
            const auto& all = prepared.groundings[i];
            if (all.empty()) continue;
            std::span<const Grounding> used = all;
            if (cap > 0 && all.size() > cap) {
                if (rng == nullptr) throw InternalError("grounding subsampling needs an rng");
                index.resize(all.size());
                std::iota(index.begin(), index.end(), std::size_t{0});
                sample.clear();
                for (std::size_t k = 0; k < cap; ++k) {
                    std::uniform_int_distribution<std::size_t> pick(k, index.size() - 1);
                    std::swap(index[k], index[pick(*rng)]);
                    sample.push_back(all[index[k]]);
                }
                used = sample;
            }
            const double n = static_cast<double>(used.size());
            const double scale = lambda * rule.confidence / n;
            term = rule.confidence * accumulate_penalty(rule.kind, params, used, xi, scale, grads) / n;
        }
        out.per_kind[static_cast<std::size_t>(rule.kind)] += term;
        out.total += term;
    }
    return out;
}

std::vector<DeltaStat> delta_statistics(const ModelParameters& params, std::span<const RulePair> pairs) {
    std::vector<DeltaStat> out;
    const auto width = params.relations.cols();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& pair = pairs[k];
        if (!supports_grounding_free(pair.kind))
            throw ArgumentError("delta statistics are defined for implication and equivalence only");
        check_relation(params, pair.r1);
        check_relation(params, pair.r2);
        DeltaStat s{k, pair.kind, pair.r1, pair.r2, 0.0, 0.0};
        if (width > 0) {
            const Vector delta = (params.relations.row(pair.r1) - params.relations.row(pair.r2)).transpose();
            s.mean = delta.mean();
            s.variance = (delta.array() - s.mean).square().mean();
        }
        out.push_back(s);
    }
    return out;
}

std::vector<RulePair> implication_equivalence_pairs(std::span<const Rule> rules) {
    std::vector<RulePair> pairs;
    for (const auto& r : rules)
        if (supports_grounding_free(r.kind)) pairs.push_back({r.kind, r.relations[0], r.relations[1]});
    return pairs;
}

std::string format_delta_table(std::span<const DeltaStat> stats) {
    auto num = [](double v) {
        char buf[64];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, end);
    };
    std::string out = "pair_id\tkind\tmean\tvariance\n";
    for (const auto& s : stats) {
        out += std::to_string(s.pair_id) + '\t' + std::string(rule_kind_name(s.kind)) + '\t' +
               num(s.mean) + '\t' + num(s.variance) + '\n';
    }
    return out;
}

double PenaltyReport::total() const {
    double t = 0.0;
    for (const auto& k : kinds) t += k.sum + k.grounding_free;
    return t;
}

}  // namespace logicenn
