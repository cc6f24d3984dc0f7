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

#include "logicenn/testkit/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "logicenn/trainer.hpp"

namespace logicenn::testkit {

namespace {

using Real = long double;

Real relu(Real x) { return x > 0.0L ? x : 0.0L; }
Real logistic(Real x) { return 1.0L / (1.0L + std::exp(-x)); }
Real softplus_ref(Real x) { return x > 0.0L ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Hidden activations layer by layer in extended precision; pre receives
// every pre-activation together with whether that unit uses ReLU.
std::vector<Real> forward_loops(const ModelParameters& p, EntityId h, EntityId t,
                                std::vector<std::pair<double, bool>>* pre) {
    const std::size_t d = static_cast<std::size_t>(p.entities.cols());
    std::vector<Real> x(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        x[i] = p.entities.data()[static_cast<std::size_t>(h) * d + i];
        x[d + i] = p.entities.data()[static_cast<std::size_t>(t) * d + i];
    }
    for (const auto& layer : p.layers) {
        const std::size_t rows = static_cast<std::size_t>(layer.weight.rows());
        const std::size_t cols = static_cast<std::size_t>(layer.weight.cols());
        std::vector<Real> y(rows);
        for (std::size_t o = 0; o < rows; ++o) {
            Real z = 0.0L;
            for (std::size_t i = 0; i < cols; ++i) z += static_cast<Real>(layer.weight.data()[o * cols + i]) * x[i];
            z += layer.bias.data()[o];
            const bool is_relu = layer.activation == Activation::ReLU;
            if (pre != nullptr) pre->emplace_back(static_cast<double>(z), is_relu);
            y[o] = is_relu ? relu(z) : logistic(z);
        }
        x = std::move(y);
    }
    return x;
}

}  // namespace

long double reference_score(const ModelParameters& params, EntityId h, RelationId r, EntityId t) {
    const auto phi = forward_loops(params, h, t, nullptr);
    const std::size_t width = static_cast<std::size_t>(params.relations.cols());
    Real s = 0.0L;
    for (std::size_t i = 0; i < width; ++i)
        s += phi[i] * static_cast<Real>(params.relations.data()[static_cast<std::size_t>(r) * width + i]);
    return s;
}

double reference_forward(const ModelParameters& params, EntityId h, RelationId r, EntityId t) {
    return static_cast<double>(reference_score(params, h, r, t));
}

long double reference_data_loss(const ModelParameters& params, std::span<const LabeledTriple> batch) {
    Real total = 0.0L;
    for (const auto& s : batch) {
        const Real f = reference_score(params, s.triple.head, s.triple.relation, s.triple.tail);
        total += static_cast<Real>(s.weight) * softplus_ref(-static_cast<Real>(s.label) * f);
    }
    return total;
}

std::vector<double> reference_pre_activations(const ModelParameters& params, EntityId h, EntityId t) {
    std::vector<std::pair<double, bool>> pre;
    forward_loops(params, h, t, &pre);
    std::vector<double> out;
    for (const auto& [z, is_relu] : pre) out.push_back(z);
    return out;
}

bool near_relu_kink(const ModelParameters& params, std::span<const Triple> triples, double tol) {
    for (const auto& t : triples) {
        std::vector<std::pair<double, bool>> pre;
        forward_loops(params, t.head, t.tail, &pre);
        for (const auto& [z, is_relu] : pre)
            if (is_relu && std::abs(z) < tol) return true;
    }
    return false;
}

Gradients finite_difference_grads(const ModelParameters& params, const LossClosure& loss, double eps) {
    ModelParameters probe = params;
    Gradients out = params.zeros_like();
    auto probe_tensors = probe.tensors();
    auto out_tensors = out.tensors();
    for (std::size_t k = 0; k < probe_tensors.size(); ++k) {
        for (std::size_t i = 0; i < probe_tensors[k].size(); ++i) {
            const double saved = probe_tensors[k][i];
            probe_tensors[k][i] = saved + eps;
            const double plus = saved + eps;
            const double minus = saved - eps;
            probe_tensors[k][i] = plus;
            const long double up = loss(probe);
            probe_tensors[k][i] = minus;
            const long double down = loss(probe);
            probe_tensors[k][i] = saved;
            const long double step = static_cast<long double>(plus) - static_cast<long double>(minus);
            out_tensors[k][i] = static_cast<double>((up - down) / step);
        }
    }
    return out;
}

double max_relative_error(const Gradients& analytic, const Gradients& numeric) {
    const auto a = analytic.tensors();
    const auto n = numeric.tensors();
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i < a[k].size(); ++i) {
            const double err = std::abs(a[k][i] - n[k][i]) /
                               std::max(1e-8, std::abs(a[k][i]) + std::abs(n[k][i]));
            worst = std::max(worst, err);
        }
    return worst;
}

double finite_difference(const std::function<double(double)>& f, double x, double eps) {
    return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

ReferenceViolation reference_violation(RuleKind kind, const ModelParameters& params, const Grounding& g) {
    std::vector<Real> f;
    for (std::size_t i = 0; i < g.premise_count; ++i)
        f.push_back(reference_score(params, g.premises[i].head, g.premises[i].relation, g.premises[i].tail));
    f.push_back(reference_score(params, g.conclusion.head, g.conclusion.relation, g.conclusion.tail));
    ReferenceViolation v;
    switch (kind) {
        case RuleKind::Equivalence:
        case RuleKind::Symmetric:
        case RuleKind::Inverse:
            v.abs_form = true;
            v.inner = f.at(0) - f.at(1);
            v.value = std::abs(v.inner);
            break;
        case RuleKind::Implication:
            v.value = f.at(0) - f.at(1);
            break;
        case RuleKind::Antisymmetric:
            v.value = logistic(f.at(0)) * logistic(f.at(1));
            break;
        case RuleKind::Transitive:
        case RuleKind::Composition:
            v.value = logistic(f.at(0)) * logistic(f.at(1)) - logistic(f.at(2));
            break;
        case RuleKind::Negation:
            v.abs_form = true;
            v.inner = logistic(f.at(0)) + logistic(f.at(1)) - 1.0L;
            v.value = std::abs(v.inner);
            break;
        case RuleKind::Reflexive:
            v.value = 1.0L - logistic(f.at(0));
            break;
        case RuleKind::Irreflexive:
            v.value = logistic(f.at(0));
            break;
    }
    return v;
}

long double reference_penalty(RuleKind kind, const ModelParameters& params,
                              std::span<const Grounding> groundings, double slack) {
    Real total = 0.0L;
    for (const auto& g : groundings)
        total += std::max(0.0L, reference_violation(kind, params, g).value - static_cast<Real>(slack));
    return total;
}

bool penalty_near_kink(RuleKind kind, const ModelParameters& params, std::span<const Grounding> groundings,
                       double slack, double tol) {
    for (const auto& g : groundings) {
        const auto v = reference_violation(kind, params, g);
        if (std::abs(v.value - static_cast<Real>(slack)) < tol) return true;
        if (v.abs_form && std::abs(v.inner) < tol) return true;
        std::vector<Triple> atoms(g.premises.begin(), g.premises.begin() + g.premise_count);
        atoms.push_back(g.conclusion);
        if (near_relu_kink(params, atoms, tol)) return true;
    }
    return false;
}

KnowledgeGraph random_graph(std::size_t num_entities, std::size_t num_relations, std::size_t num_triples,
                            std::uint64_t seed) {
    KnowledgeGraph g;
    for (std::size_t i = 0; i < num_entities; ++i) g.entities().intern("e" + std::to_string(i));
    for (std::size_t i = 0; i < num_relations; ++i) g.relations().intern("r" + std::to_string(i));
    const std::size_t space = num_entities * num_entities * num_relations;
    num_triples = std::min(num_triples, space);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<EntityId> ent(0, static_cast<EntityId>(num_entities) - 1);
    std::uniform_int_distribution<RelationId> rel(0, static_cast<RelationId>(num_relations) - 1);
    while (g.triples(Split::Train).size() < num_triples) g.add(Split::Train, {ent(rng), rel(rng), ent(rng)});
    return g;
}

Rule random_rule(RuleKind kind, std::size_t num_relations, std::mt19937_64& rng) {
    std::uniform_int_distribution<RelationId> rel(0, static_cast<RelationId>(num_relations) - 1);
    Rule rule{kind, {0, 0, 0}, 1.0};
    for (std::size_t i = 0; i < rule_arity(kind); ++i) rule.relations[i] = rel(rng);
    return rule;
}

std::vector<Grounding> brute_force_groundings(const Rule& rule, const KnowledgeGraph& graph) {
    const auto n = static_cast<EntityId>(graph.num_entities());
    auto in_train = [&](EntityId h, RelationId r, EntityId t) {
        return graph.contains(Split::Train, Triple{h, r, t});
    };
    const auto r1 = rule.relations[0];
    const auto r2 = rule.relations[1];
    const auto r3 = rule.relations[2];
    std::vector<Grounding> out;
    auto add = [&](std::vector<EntityId> b, std::vector<Triple> prem, Triple concl) {
        Grounding g;
        g.kind = rule.kind;
        for (auto e : b) g.bindings[g.binding_count++] = e;
        for (auto p : prem) g.premises[g.premise_count++] = p;
        g.conclusion = concl;
        out.push_back(g);
    };
    // premise (h, a, t) and conclusion (h, b, t) or (t, b, h)
    auto two_atom = [&](RelationId a, RelationId b, bool swap) {
        for (EntityId h = 0; h < n; ++h)
            for (EntityId t = 0; t < n; ++t) {
                if (!in_train(h, a, t)) continue;
                const Triple c = swap ? Triple{t, b, h} : Triple{h, b, t};
                if (!in_train(c.head, c.relation, c.tail)) add({h, t}, {Triple{h, a, t}}, c);
            }
    };
    switch (rule.kind) {
        case RuleKind::Equivalence:
            two_atom(r1, r2, false);
            two_atom(r2, r1, false);
            break;
        case RuleKind::Implication:
        case RuleKind::Negation:
            two_atom(r1, r2, false);
            break;
        case RuleKind::Symmetric:
        case RuleKind::Antisymmetric:
            two_atom(r1, r1, true);
            break;
        case RuleKind::Inverse:
            two_atom(r1, r2, true);
            two_atom(r2, r1, true);
            break;
        case RuleKind::Transitive:
        case RuleKind::Composition: {
            const bool tr = rule.kind == RuleKind::Transitive;
            const RelationId a = r1, b = tr ? r1 : r2, c = tr ? r1 : r3;
            for (EntityId h = 0; h < n; ++h)
                for (EntityId t = 0; t < n; ++t)
                    for (EntityId s = 0; s < n; ++s)
                        if (in_train(h, a, t) && in_train(t, b, s) && !in_train(h, c, s))
                            add({h, t, s}, {Triple{h, a, t}, Triple{t, b, s}}, Triple{h, c, s});
            break;
        }
        case RuleKind::Reflexive:
        case RuleKind::Irreflexive:
            for (EntityId e = 0; e < n; ++e) {
                bool appears = false;
                for (EntityId x = 0; x < n && !appears; ++x)
                    appears = in_train(e, r1, x) || in_train(x, r1, e);
                if (appears && !in_train(e, r1, e)) add({e}, {}, Triple{e, r1, e});
            }
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TripleSet brute_force_closure(const TripleSet& facts, std::span<const Rule> rules, std::size_t num_entities) {
    TripleSet closure = facts;
    const auto n = static_cast<EntityId>(num_entities);
    auto has = [&](EntityId h, RelationId r, EntityId t) { return closure.contains(Triple{h, r, t}); };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Triple> fresh;
        for (const auto& rule : rules) {
            const auto a = rule.relations[0], b = rule.relations[1], c = rule.relations[2];
            for (EntityId x = 0; x < n; ++x)
                for (EntityId y = 0; y < n; ++y) {
                    switch (rule.kind) {
                        case RuleKind::Equivalence:
                            if (has(x, a, y)) fresh.push_back({x, b, y});
                            if (has(x, b, y)) fresh.push_back({x, a, y});
                            break;
                        case RuleKind::Implication:
                            if (has(x, a, y)) fresh.push_back({x, b, y});
                            break;
                        case RuleKind::Symmetric:
                            if (has(x, a, y)) fresh.push_back({y, a, x});
                            break;
                        case RuleKind::Inverse:
                            if (has(x, a, y)) fresh.push_back({y, b, x});
                            if (has(x, b, y)) fresh.push_back({y, a, x});
                            break;
                        case RuleKind::Transitive:
                            for (EntityId z = 0; z < n; ++z)
                                if (has(x, a, y) && has(y, a, z)) fresh.push_back({x, a, z});
                            break;
                        case RuleKind::Composition:
                            for (EntityId z = 0; z < n; ++z)
                                if (has(x, a, y) && has(y, b, z)) fresh.push_back({x, c, z});
                            break;
                        default:
                            break;
                    }
                }
        }
        for (const auto& t : fresh) changed |= closure.insert(t).second;
    }
    return closure;
}

double brute_force_rank(const ModelParameters& params, const KnowledgeGraph& graph, const Triple& triple,
                        bool tail_side, bool filtered) {
    const auto n = static_cast<EntityId>(params.entities.rows());
    const EntityId truth = tail_side ? triple.tail : triple.head;
    std::vector<std::pair<double, EntityId>> candidates;
    for (EntityId e = 0; e < n; ++e) {
        const Triple c = tail_side ? Triple{triple.head, triple.relation, e} : Triple{e, triple.relation, triple.tail};
        if (filtered && e != truth &&
            (graph.contains(Split::Train, c) || graph.contains(Split::Valid, c) || graph.contains(Split::Test, c)))
            continue;
        candidates.emplace_back(reference_forward(params, c.head, c.relation, c.tail), e);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t pos = 0;
    while (candidates[pos].second != truth) ++pos;
    const double target = candidates[pos].first;
    std::size_t first = pos, last = pos;
    while (first > 0 && candidates[first - 1].first == target) --first;
    while (last + 1 < candidates.size() && candidates[last + 1].first == target) ++last;
    return (static_cast<double>(first + 1) + static_cast<double>(last + 1)) / 2.0;
}

AggregateOracle aggregate_oracle(std::span<const double> ranks, std::span<const int> hits_at) {
    AggregateOracle out;
    out.hits.assign(hits_at.size(), 0.0);
    for (std::size_t k = 0; k < hits_at.size(); ++k) {
        std::size_t count = 0;
        for (const double r : ranks)
            if (r <= hits_at[k]) ++count;
        out.hits[k] = static_cast<double>(count) / static_cast<double>(ranks.size());
    }
    double sum = 0.0, inv = 0.0;
    for (const double r : ranks) sum += r;
    for (const double r : ranks) inv += 1.0 / r;
    out.mr = sum / static_cast<double>(ranks.size());
    out.mrr = inv / static_cast<double>(ranks.size());
    return out;
}

std::pair<double, double> two_pass_mean_variance(std::span<const double> values) {
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    return {mean, var / static_cast<double>(values.size())};
}

bool GroundTruthTable::at(EntityId h, RelationId r, EntityId t) const {
    return cells[(static_cast<std::size_t>(r) * num_entities + static_cast<std::size_t>(h)) * num_entities +
                 static_cast<std::size_t>(t)];
}

std::size_t GroundTruthTable::true_facts() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), true));
}

GroundTruthTable random_table(std::size_t num_entities, std::size_t num_relations, double p_true,
                              std::uint64_t seed) {
    GroundTruthTable table{num_entities, num_relations, {}};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p_true);
    table.cells.resize(num_entities * num_entities * num_relations);
    for (std::size_t i = 0; i < table.cells.size(); ++i) table.cells[i] = coin(rng);
    return table;
}

MemorizationReport memorization_test(const GroundTruthTable& table, const MemorizationConfig& config) {
    ModelShape shape;
    shape.num_entities = table.num_entities;
    shape.num_relations = table.num_relations;
    shape.embedding_dim = config.embedding_dim;
    shape.hidden = config.hidden;
    shape.activations = activation_tags(config.activation, config.hidden.size());
    auto params = init_parameters(shape, config.seed);

    const auto ne = static_cast<EntityId>(table.num_entities);
    const auto nr = static_cast<RelationId>(table.num_relations);
    std::vector<LabeledTriple> batch;
    const double w = 1.0 / static_cast<double>(table.cells.size());
    for (RelationId r = 0; r < nr; ++r)
        for (EntityId h = 0; h < ne; ++h)
            for (EntityId t = 0; t < ne; ++t) batch.push_back({{h, r, t}, table.at(h, r, t) ? 1.0 : -1.0, w});

    std::vector<Triple> triples;
    for (const auto& s : batch) triples.push_back(s.triple);
    auto measure = [&](const ModelParameters& p) {
        const auto f = score_triples(p, triples);
        MemorizationReport rep;
        std::size_t correct = 0;
        double min_pos = INFINITY, max_neg = -INFINITY;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const double s = f(static_cast<Eigen::Index>(i));
            const bool positive = batch[i].label > 0;
            if ((s > 0.0) == positive) ++correct;
            if (positive)
                min_pos = std::min(min_pos, s);
            else
                max_neg = std::max(max_neg, s);
        }
        rep.accuracy = static_cast<double>(correct) / static_cast<double>(batch.size());
        if (std::isinf(min_pos) || std::isinf(max_neg))
            rep.margin = INFINITY;
        else
            rep.margin = min_pos - max_neg;
        return rep;
    };

    auto adam = AdamState::for_params(params);
    const AdamHyper hyper{config.learning_rate, 0.9, 0.999, 1e-8};
    std::size_t epoch = 0;
    for (; epoch < config.epochs; ++epoch) {
        if (config.stop_when_separated && epoch % 50 == 0 && measure(params).accuracy == 1.0) break;
        auto step = backward(params, batch);
        adam_step(params, step.grads, adam, hyper);
        project_entities(params);
    }
    auto report = measure(params);
    report.epochs_run = epoch;
    return report;
}

}  // namespace logicenn::testkit
