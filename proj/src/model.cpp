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

#include "logicenn/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "logicenn/errors.hpp"

namespace logicenn {

std::string_view activation_name(Activation a) {
    return a == Activation::ReLU ? "relu" : "sigmoid";
}

std::string_view activation_plan_name(ActivationPlan plan) {
    return plan == ActivationPlan::ReluAll ? "relu" : "sigmoid";
}

ActivationPlan parse_activation_plan(std::string_view name) {
    if (name == "relu") return ActivationPlan::ReluAll;
    if (name == "sigmoid") return ActivationPlan::SigmoidFinalRelu;
    throw ConfigError("unknown activation plan '" + std::string(name) + "' (expected relu|sigmoid)");
}

std::vector<Activation> activation_tags(ActivationPlan plan, std::size_t num_layers) {
    std::vector<Activation> tags(num_layers, plan == ActivationPlan::ReluAll ? Activation::ReLU
                                                                              : Activation::Sigmoid);
    if (!tags.empty()) tags.back() = Activation::ReLU;
    return tags;
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

ModelShape ModelParameters::shape() const {
    ModelShape s;
    s.num_entities = num_entities();
    s.num_relations = num_relations();
    s.embedding_dim = embedding_dim();
    s.hidden.clear();
    for (const auto& layer : layers) {
        s.hidden.push_back(static_cast<std::size_t>(layer.weight.rows()));
        s.activations.push_back(layer.activation);
    }
    return s;
}

std::size_t ModelParameters::parameter_count() const {
    std::size_t n = static_cast<std::size_t>(entities.size() + relations.size());
    for (const auto& layer : layers) n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    return n;
}

void ModelParameters::validate() const {
    if (layers.empty()) throw InternalError("model has no hidden layers");
    auto in = static_cast<Eigen::Index>(2 * embedding_dim());
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& layer = layers[k];
        if (layer.weight.cols() != in)
            throw InternalError("layer " + std::to_string(k) + " expects input width " +
                                std::to_string(layer.weight.cols()) + ", previous width is " +
                                std::to_string(in));
        if (layer.bias.size() != layer.weight.rows())
            throw InternalError("layer " + std::to_string(k) + " bias width mismatch");
        in = layer.weight.rows();
    }
    if (relations.cols() != in)
        throw InternalError("relation outputs have width " + std::to_string(relations.cols()) +
                            ", last hidden width is " + std::to_string(in));
}

bool ModelParameters::final_features_nonnegative() const {
    return !layers.empty() && layers.back().activation == Activation::ReLU;
}

ModelParameters ModelParameters::zeros_like() const {
    ModelParameters z;
    z.entities = RowMatrix::Zero(entities.rows(), entities.cols());
    z.relations = RowMatrix::Zero(relations.rows(), relations.cols());
    z.layers.reserve(layers.size());
    for (const auto& layer : layers)
        z.layers.push_back({RowMatrix::Zero(layer.weight.rows(), layer.weight.cols()),
                            Vector::Zero(layer.bias.size()), layer.activation});
    return z;
}

std::vector<std::span<double>> ModelParameters::tensors() {
    std::vector<std::span<double>> out;
    out.emplace_back(entities.data(), static_cast<std::size_t>(entities.size()));
    for (auto& layer : layers) {
        out.emplace_back(layer.weight.data(), static_cast<std::size_t>(layer.weight.size()));
        out.emplace_back(layer.bias.data(), static_cast<std::size_t>(layer.bias.size()));
    }
    out.emplace_back(relations.data(), static_cast<std::size_t>(relations.size()));
    return out;
}

std::vector<std::span<const double>> ModelParameters::tensors() const {
    std::vector<std::span<const double>> out;
    for (auto s : const_cast<ModelParameters*>(this)->tensors()) out.emplace_back(s.data(), s.size());
    return out;
}

ModelParameters init_parameters(const ModelShape& shape, std::uint64_t seed) {
    if (shape.embedding_dim == 0) throw ConfigError("embedding dimension must be positive");
    if (shape.hidden.empty()) throw ConfigError("at least one hidden layer is required");
    if (shape.activations.size() != shape.hidden.size())
        throw ConfigError("one activation tag per hidden layer is required");
    for (auto w : shape.hidden)
        if (w == 0) throw ConfigError("hidden widths must be positive");

    std::mt19937_64 rng(seed);
    auto glorot = [&](Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        RowMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
        return m;
    };

    const auto ne = static_cast<Eigen::Index>(shape.num_entities);
    const auto nr = static_cast<Eigen::Index>(shape.num_relations);
    const auto d = static_cast<Eigen::Index>(shape.embedding_dim);

    ModelParameters p;
    p.entities = glorot(ne, d, static_cast<double>(ne), static_cast<double>(d));
    auto in = 2 * d;
    for (std::size_t k = 0; k < shape.hidden.size(); ++k) {
        const auto out = static_cast<Eigen::Index>(shape.hidden[k]);
        DenseLayer layer;
        layer.weight = glorot(out, in, static_cast<double>(in), static_cast<double>(out));
        layer.bias = Vector::Zero(out);
        layer.activation = shape.activations[k];
        p.layers.push_back(std::move(layer));
        in = out;
    }
    p.relations = glorot(nr, in, static_cast<double>(in), 1.0);
    project_entities(p);
    return p;
}

std::size_t project_entities(ModelParameters& params) {
    std::size_t replaced = 0;
    for (Eigen::Index i = 0; i < params.entities.rows(); ++i) {
        auto row = params.entities.row(i);
        const double norm = row.norm();
        if (norm > 0.0 && std::isfinite(norm)) {
            row /= norm;
        } else {
            row.setZero();
            if (row.size() > 0) row(0) = 1.0;
            ++replaced;
        }
    }
    return replaced;
}

void check_entity(const ModelParameters& params, EntityId e) {
    if (e < 0 || static_cast<std::size_t>(e) >= params.num_entities())
        throw ArgumentError("entity id " + std::to_string(e) + " out of range [0, " +
                            std::to_string(params.num_entities()) + ")");
}

void check_relation(const ModelParameters& params, RelationId r) {
    if (r < 0 || static_cast<std::size_t>(r) >= params.num_relations())
        throw ArgumentError("relation id " + std::to_string(r) + " out of range [0, " +
                            std::to_string(params.num_relations()) + ")");
}

namespace {

void activate(Activation a, const RowMatrix& pre, RowMatrix& post) {
    if (a == Activation::ReLU)
        post = pre.cwiseMax(0.0);
    else
        post = pre.unaryExpr([](double x) { return sigmoid(x); });
}

/// Per-layer activations for a batch; post[0] is the concatenated input.
struct ForwardCache {
    std::vector<RowMatrix> pre;
    std::vector<RowMatrix> post;
};

ForwardCache forward_batch(const ModelParameters& params, std::span<const Triple> triples) {
    const auto d = static_cast<Eigen::Index>(params.embedding_dim());
    const auto b = static_cast<Eigen::Index>(triples.size());
    ForwardCache cache;
    cache.post.reserve(params.layers.size() + 1);
    cache.pre.reserve(params.layers.size());

    RowMatrix input(b, 2 * d);
    for (Eigen::Index i = 0; i < b; ++i) {
        const auto& t = triples[static_cast<std::size_t>(i)];
        input.row(i).head(d) = params.entities.row(t.head);
        input.row(i).tail(d) = params.entities.row(t.tail);
    }
    cache.post.push_back(std::move(input));
    for (const auto& layer : params.layers) {
        RowMatrix z = cache.post.back() * layer.weight.transpose();
        z.rowwise() += layer.bias.transpose();
        RowMatrix a;
        activate(layer.activation, z, a);
        cache.pre.push_back(std::move(z));
        cache.post.push_back(std::move(a));
    }
    return cache;
}

Vector scores_from(const ModelParameters& params, const RowMatrix& phi, std::span<const Triple> triples) {
    Vector s(static_cast<Eigen::Index>(triples.size()));
    for (std::size_t i = 0; i < triples.size(); ++i)
        s(static_cast<Eigen::Index>(i)) =
            phi.row(static_cast<Eigen::Index>(i)).dot(params.relations.row(triples[i].relation));
    return s;
}

void check_triples(const ModelParameters& params, std::span<const Triple> triples) {
    for (const auto& t : triples) {
        check_entity(params, t.head);
        check_relation(params, t.relation);
        check_entity(params, t.tail);
    }
}

}  // namespace

Vector features(const ModelParameters& params, EntityId h, EntityId t) {
    check_entity(params, h);
    check_entity(params, t);
    const Triple triple{h, 0, t};
    auto cache = forward_batch(params, std::span<const Triple>(&triple, 1));
    return cache.post.back().row(0).transpose();
}

double score(const ModelParameters& params, EntityId h, RelationId r, EntityId t) {
    check_relation(params, r);
    return features(params, h, t).dot(params.relations.row(r));
}

Vector score_triples(const ModelParameters& params, std::span<const Triple> triples) {
    check_triples(params, triples);
    if (triples.empty()) return Vector();
    auto cache = forward_batch(params, triples);
    return scores_from(params, cache.post.back(), triples);
}

ScoreTape record_scores(const ModelParameters& params, std::span<const Triple> triples) {
    check_triples(params, triples);
    ScoreTape tape;
    tape.triples.assign(triples.begin(), triples.end());
    if (triples.empty()) return tape;
    auto cache = forward_batch(params, triples);
    tape.scores = scores_from(params, cache.post.back(), triples);
    tape.pre = std::move(cache.pre);
    tape.post = std::move(cache.post);
    return tape;
}

CandidateScorer::CandidateScorer(const ModelParameters& params) : params_(params) {
    params.validate();
    const auto d = static_cast<Eigen::Index>(params.embedding_dim());
    const auto& w = params.layers.front().weight;
    head_part_ = params.entities * w.leftCols(d).transpose();
    tail_part_ = params.entities * w.rightCols(d).transpose();
}

Vector CandidateScorer::finish(RowMatrix pre, RelationId r) const {
    pre.rowwise() += params_.layers.front().bias.transpose();
    RowMatrix a;
    activate(params_.layers.front().activation, pre, a);
    for (std::size_t k = 1; k < params_.layers.size(); ++k) {
        const auto& layer = params_.layers[k];
        RowMatrix z = a * layer.weight.transpose();
        z.rowwise() += layer.bias.transpose();
        activate(layer.activation, z, a);
    }
    return a * params_.relations.row(r).transpose();
}

Vector CandidateScorer::tails(EntityId h, RelationId r) const {
    check_entity(params_, h);
    check_relation(params_, r);
    RowMatrix pre = tail_part_;
    pre.rowwise() += head_part_.row(h);
    return finish(std::move(pre), r);
}

Vector CandidateScorer::heads(RelationId r, EntityId t) const {
    check_entity(params_, t);
    check_relation(params_, r);
    RowMatrix pre = head_part_;
    pre.rowwise() += tail_part_.row(t);
    return finish(std::move(pre), r);
}

Vector score_all_tails(const ModelParameters& params, EntityId h, RelationId r) {
    return CandidateScorer(params).tails(h, r);
}

Vector score_all_heads(const ModelParameters& params, RelationId r, EntityId t) {
    return CandidateScorer(params).heads(r, t);
}

void accumulate_score_gradients(const ModelParameters& params, std::span<const Triple> triples,
                                std::span<const double> upstream, Gradients& grads) {
    accumulate_score_gradients(params, record_scores(params, triples), upstream, grads);
}

void accumulate_score_gradients(const ModelParameters& params, const ScoreTape& tape,
                                std::span<const double> upstream, Gradients& grads) {
    const auto& triples = tape.triples;
    if (upstream.size() != triples.size())
        throw InternalError("upstream gradient count does not match triple count");
    if (grads.layers.size() != params.layers.size() || grads.entities.rows() != params.entities.rows() ||
        grads.relations.rows() != params.relations.rows() ||
        grads.relations.cols() != params.relations.cols())
        throw InternalError("gradient container shape mismatch");
    if (triples.empty()) return;
    if (tape.post.size() != params.layers.size() + 1) throw InternalError("score tape does not match model");

    const auto b = static_cast<Eigen::Index>(triples.size());
    const auto d = static_cast<Eigen::Index>(params.embedding_dim());

    RowMatrix delta(b, static_cast<Eigen::Index>(params.feature_width()));
    const auto& phi = tape.post.back();
    for (Eigen::Index i = 0; i < b; ++i) {
        const auto& t = triples[static_cast<std::size_t>(i)];
        const double g = upstream[static_cast<std::size_t>(i)];
        delta.row(i) = g * params.relations.row(t.relation);
        grads.relations.row(t.relation) += g * phi.row(i);
    }

    for (std::size_t k = params.layers.size(); k-- > 0;) {
        const auto& layer = params.layers[k];
        if (layer.activation == Activation::ReLU) {
            delta = delta.cwiseProduct(
                tape.pre[k].unaryExpr([](double z) { return z > 0.0 ? 1.0 : 0.0; }));
        } else {
            const auto& s = tape.post[k + 1];
            delta = delta.cwiseProduct(s.cwiseProduct((1.0 - s.array()).matrix()));
        }
        grads.layers[k].weight.noalias() += delta.transpose() * tape.post[k];
        grads.layers[k].bias += delta.colwise().sum().transpose();
        delta = (delta * layer.weight).eval();
    }

    for (Eigen::Index i = 0; i < b; ++i) {
        const auto& t = triples[static_cast<std::size_t>(i)];
        grads.entities.row(t.head) += delta.row(i).head(d);
        grads.entities.row(t.tail) += delta.row(i).tail(d);
    }
}

double data_loss(const ModelParameters& params, std::span<const LabeledTriple> batch) {
    std::vector<Triple> triples;
    triples.reserve(batch.size());
    for (const auto& s : batch) triples.push_back(s.triple);
    const auto f = score_triples(params, triples);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i)
        loss += batch[i].weight * softplus(-batch[i].label * f(static_cast<Eigen::Index>(i)));
    return loss;
}

BackwardResult backward(const ModelParameters& params, std::span<const LabeledTriple> batch,
                        const Gradients* extra) {
    BackwardResult result{0.0, params.zeros_like()};
    if (!batch.empty()) {
        std::vector<Triple> triples;
        triples.reserve(batch.size());
        for (const auto& s : batch) {
            if (s.label != 1.0 && s.label != -1.0) throw ArgumentError("labels must be +1 or -1");
            if (!(s.weight >= 0.0)) throw ArgumentError("sample weights must be nonnegative");
            triples.push_back(s.triple);
        }
        const auto tape = record_scores(params, triples);
        const auto& f = tape.scores;
        std::vector<double> upstream(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const double y = batch[i].label;
            const double fi = f(static_cast<Eigen::Index>(i));
            result.loss += batch[i].weight * softplus(-y * fi);
            // d/df log(1 + exp(-y f)) = -y * sigmoid(-y f)
            upstream[i] = -batch[i].weight * y * sigmoid(-y * fi);
        }
        accumulate_score_gradients(params, tape, upstream, result.grads);
    }
    if (extra != nullptr) {
        auto dst = result.grads.tensors();
        const auto src = extra->tensors();
        if (dst.size() != src.size()) throw InternalError("penalty gradient shape mismatch");
        for (std::size_t k = 0; k < dst.size(); ++k) {
            if (dst[k].size() != src[k].size()) throw InternalError("penalty gradient shape mismatch");
            for (std::size_t i = 0; i < dst[k].size(); ++i) dst[k][i] += src[k][i];
        }
    }
    return result;
}

}  // namespace logicenn
