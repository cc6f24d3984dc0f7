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

#ifndef LOGICENN_TRAINER_HPP
#define LOGICENN_TRAINER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logicenn/kg.hpp"
#include "logicenn/model.hpp"
#include "logicenn/rule.hpp"
#include "logicenn/rules_engine.hpp"

namespace logicenn {

/// Desk-scale slacks: 0.1 for equivalence, 0 elsewhere.
SlackConfig desk_slack();

struct TrainingConfig {
    std::size_t embedding_dim = 32;
    std::vector<std::size_t> hidden{64, 128, 32};
    ActivationPlan activation = ActivationPlan::ReluAll;
    double learning_rate = 0.005;
    std::size_t negatives = 8;
    double adversarial_temperature = 1.0;
    double lambda = 0.05;
    SlackConfig slack = desk_slack();
    std::size_t batches_per_epoch = 10;
    std::size_t max_epochs = 200;
    std::size_t validation_period = 25;
    std::size_t patience = 10;
    std::uint64_t seed = 0;
    bool use_rules = true;
    bool grounding_free = true;
    /// Groundings sampled per rule per epoch, spread over the batches.
    std::size_t grounding_cap = 512;
    double min_rule_confidence = 0.8;
    std::size_t negative_retries = 10;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t threads = 1;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/// Known presets: fb15k-relu, fb15k-sigmoid, wn18-relu, wn18-sigmoid (the
/// published optima, 3 hidden layers of 1000/2000/200) and desk (defaults).
TrainingConfig training_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Sets one `key = value` entry; throws ConfigError on unknown keys or bad
/// values. Keys: preset, dim, hidden, activation, learning_rate, negatives,
/// temperature, lambda, slack.<kind>, batches, epochs, validation_period,
/// patience, seed, rules, grounding_free, grounding_cap, min_confidence,
/// negative_retries, adam_beta1, adam_beta2, adam_epsilon, threads.
void apply_config_entry(TrainingConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines, `#` comments. A `preset` key resets to that preset
/// before later lines apply.
TrainingConfig parse_config(std::string_view text, TrainingConfig base = {});
TrainingConfig load_config(const std::filesystem::path& path, TrainingConfig base = {});
std::string format_config(const TrainingConfig& config);

ModelShape model_shape(const TrainingConfig& config, const KnowledgeGraph& graph);

/// k corruptions of `triple`, replacing head or tail (fair coin) with a
/// uniform entity. Corruptions that hit a train triple (or the triple itself)
/// are redrawn up to `max_retries` times, then kept; `kept_collisions` counts
/// those.
std::vector<Triple> sample_negatives(const Triple& triple, const KnowledgeGraph& graph, std::size_t k,
                                     std::mt19937_64& rng, std::size_t max_retries = 10,
                                     std::size_t* kept_collisions = nullptr);

/// Softmax of temperature * scores (max-shifted). Treated as constants.
std::vector<double> adversarial_weights(std::span<const double> scores, double temperature);

struct AdamHyper {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Gradients first_moment;
    Gradients second_moment;
    std::uint64_t step = 0;

    static AdamState for_params(const ModelParameters& params);
};

/// One bias-corrected Adam update of every tensor. Throws TrainingError on a
/// non-finite gradient.
void adam_step(ModelParameters& params, const Gradients& grads, AdamState& state, const AdamHyper& hyper);

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double data_loss = 0.0;
    std::array<double, kNumRuleKinds> penalties{};
    double total_loss = 0.0;
    double valid_mrr = -1.0;  // -1 when not evaluated this epoch
    double seconds = 0.0;
};

struct TrainingTrace {
    std::vector<EpochRecord> epochs;
    std::vector<std::pair<std::size_t, double>> validations;  // (epoch, filtered MRR)
    std::size_t best_epoch = 0;
    std::size_t kept_collisions = 0;
    std::size_t replaced_zero_rows = 0;
};

/// Tab-separated epoch log with a header line.
std::string format_trace(const TrainingTrace& trace);

struct TrainResult {
    ModelParameters params;
    TrainingTrace trace;
};

/// Optional per-epoch observer (for progress output).
using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minimizes the mean self-adversarial logistic loss plus lambda times the
/// rule regularizer, projecting entities to the unit sphere after every
/// step. Returns the parameters of the best validation epoch (or the last
/// epoch when there is no validation split).
TrainResult train(const KnowledgeGraph& graph, std::span<const Rule> rules, const TrainingConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace logicenn

#endif  // LOGICENN_TRAINER_HPP
