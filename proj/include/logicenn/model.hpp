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

#ifndef LOGICENN_MODEL_HPP
#define LOGICENN_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "logicenn/kg.hpp"

namespace logicenn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Activation : std::uint8_t { ReLU = 0, Sigmoid = 1 };

std::string_view activation_name(Activation a);

/// Two architectures are supported: ReLU on every hidden layer, or Sigmoid on
/// every hidden layer except a ReLU on the last one. Both keep the final
/// feature vector nonnegative.
enum class ActivationPlan { ReluAll, SigmoidFinalRelu };

std::string_view activation_plan_name(ActivationPlan plan);
ActivationPlan parse_activation_plan(std::string_view name);
std::vector<Activation> activation_tags(ActivationPlan plan, std::size_t num_layers);

struct ModelShape {
    std::size_t num_entities = 0;
    std::size_t num_relations = 0;
    std::size_t embedding_dim = 32;
    std::vector<std::size_t> hidden{64, 128, 32};
    std::vector<Activation> activations;  // one per hidden layer
};

struct DenseLayer {
    RowMatrix weight;  // out x in
    Vector bias;       // out
    Activation activation = Activation::ReLU;
};

/// Every trainable tensor of the network. The same type doubles as the
/// gradient container, so gradients are always shaped like the parameters.
///
/// score(h, r, t) = Phi(h, t) . relations.row(r), where Phi is the last hidden
/// activation on the concatenated input [entities.row(h), entities.row(t)].
struct ModelParameters {
    RowMatrix entities;              // N_e x d
    std::vector<DenseLayer> layers;  // first layer input width 2d
    RowMatrix relations;             // N_r x L, one output vector per relation

    std::size_t num_entities() const { return static_cast<std::size_t>(entities.rows()); }
    std::size_t num_relations() const { return static_cast<std::size_t>(relations.rows()); }
    std::size_t embedding_dim() const { return static_cast<std::size_t>(entities.cols()); }
    std::size_t feature_width() const { return static_cast<std::size_t>(relations.cols()); }

    ModelShape shape() const;
    std::size_t parameter_count() const;
    /// Throws InternalError when layer widths do not chain.
    void validate() const;
    bool final_features_nonnegative() const;

    /// Same shapes and activation tags, every value zero.
    ModelParameters zeros_like() const;

    /// Flat views over every tensor in storage order: entities, then
    /// (weight, bias) per layer, then relations.
    std::vector<std::span<double>> tensors();
    std::vector<std::span<const double>> tensors() const;
};

using Gradients = ModelParameters;

/// Glorot-uniform weights and embeddings; entities projected to unit norm.
ModelParameters init_parameters(const ModelShape& shape, std::uint64_t seed);

/// Divides each entity row by its norm. Zero rows become the first basis
/// vector; returns how many were replaced.
std::size_t project_entities(ModelParameters& params);

double sigmoid(double x);
/// log(1 + exp(x)) without overflow.
double softplus(double x);

/// Final hidden features for one entity pair.
Vector features(const ModelParameters& params, EntityId h, EntityId t);
double score(const ModelParameters& params, EntityId h, RelationId r, EntityId t);
Vector score_triples(const ModelParameters& params, std::span<const Triple> triples);

/// Scores against every candidate entity, reusing the first-layer projection
/// of all entities across queries.
class CandidateScorer {
   public:
    explicit CandidateScorer(const ModelParameters& params);
    Vector tails(EntityId h, RelationId r) const;
    Vector heads(RelationId r, EntityId t) const;

   private:
    Vector finish(RowMatrix pre_activation, RelationId r) const;

    const ModelParameters& params_;
    RowMatrix head_part_;  // entities * W1[:, :d]^T
    RowMatrix tail_part_;  // entities * W1[:, d:]^T
};

Vector score_all_tails(const ModelParameters& params, EntityId h, RelationId r);
Vector score_all_heads(const ModelParameters& params, RelationId r, EntityId t);

/// Forward pass kept for a later backward pass over the same triples.
struct ScoreTape {
    std::vector<Triple> triples;
    Vector scores;
    std::vector<RowMatrix> pre;   // per layer, before activation
    std::vector<RowMatrix> post;  // post[0] is the [h; t] input
};
ScoreTape record_scores(const ModelParameters& params, std::span<const Triple> triples);

/// Adds sum_b upstream[b] * d score(triples[b]) / d theta into grads.
void accumulate_score_gradients(const ModelParameters& params, std::span<const Triple> triples,
                                std::span<const double> upstream, Gradients& grads);
void accumulate_score_gradients(const ModelParameters& params, const ScoreTape& tape,
                                std::span<const double> upstream, Gradients& grads);

struct LabeledTriple {
    Triple triple;
    double label = 1.0;   // +1 or -1
    double weight = 1.0;  // alpha, >= 0
};

struct BackwardResult {
    double loss = 0.0;
    Gradients grads;
};

/// Loss sum_b weight_b * log(1 + exp(-label_b * score_b)) and its gradient,
/// plus `extra` (already-computed penalty gradients) when given.
BackwardResult backward(const ModelParameters& params, std::span<const LabeledTriple> batch,
                        const Gradients* extra = nullptr);

/// Sum of weighted logistic losses, without gradients.
double data_loss(const ModelParameters& params, std::span<const LabeledTriple> batch);

void check_entity(const ModelParameters& params, EntityId e);
void check_relation(const ModelParameters& params, RelationId r);

}  // namespace logicenn

#endif  // LOGICENN_MODEL_HPP
