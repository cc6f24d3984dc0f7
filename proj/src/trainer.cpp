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

#include "logicenn/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "logicenn/errors.hpp"
#include "logicenn/evaluator.hpp"

namespace logicenn {

void TrainingConfig::validate() const {
    if (embedding_dim == 0) throw ConfigError("dim must be positive");
    if (hidden.empty()) throw ConfigError("hidden needs at least one layer width");
    for (auto w : hidden)
        if (w == 0) throw ConfigError("hidden widths must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (!(adversarial_temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
    if (batches_per_epoch < 1) throw ConfigError("batches must be >= 1");
    if (validation_period < 1) throw ConfigError("validation_period must be >= 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw ConfigError("adam betas must lie in [0,1)");
    if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be > 0");
    if (!(min_rule_confidence >= 0.0 && min_rule_confidence <= 1.0))
        throw ConfigError("min_confidence must lie in [0,1]");
}

namespace {

TrainingConfig large_scale(double lambda, std::size_t negatives, ActivationPlan plan) {
    TrainingConfig c;
    c.slack = SlackConfig{};
    c.embedding_dim = 200;
    c.hidden = {1000, 2000, 200};
    c.activation = plan;
    c.learning_rate = 0.001;
    c.negatives = negatives;
    c.lambda = lambda;
    c.batches_per_epoch = 100;
    c.max_epochs = 2000;
    return c;
}

}  // namespace

SlackConfig desk_slack() {
    SlackConfig s;
    s.set(RuleKind::Equivalence, 0.1);
    return s;
}

TrainingConfig training_preset(std::string_view name) {
    if (name == "desk") return TrainingConfig{};
    if (name == "fb15k-relu") {
        auto c = large_scale(0.05, 8, ActivationPlan::ReluAll);
        c.slack.set(RuleKind::Equivalence, 1.0);
        c.slack.set(RuleKind::Symmetric, 0.5);
        c.slack.set(RuleKind::Implication, 5.0);
        c.slack.set(RuleKind::Composition, 0.1);
        c.slack.set(RuleKind::Inverse, 3.0);
        return c;
    }
    if (name == "fb15k-sigmoid") {
        auto c = large_scale(0.05, 8, ActivationPlan::SigmoidFinalRelu);
        c.slack.set(RuleKind::Equivalence, 0.5);
        c.slack.set(RuleKind::Symmetric, 0.1);
        c.slack.set(RuleKind::Implication, 3.0);
        c.slack.set(RuleKind::Composition, 0.1);
        c.slack.set(RuleKind::Inverse, 3.0);
        return c;
    }
    if (name == "wn18-relu") {
        auto c = large_scale(0.01, 5, ActivationPlan::ReluAll);
        c.slack.set(RuleKind::Inverse, 0.1);
        return c;
    }
    if (name == "wn18-sigmoid") {
        auto c = large_scale(0.005, 5, ActivationPlan::SigmoidFinalRelu);
        c.slack.set(RuleKind::Inverse, 0.1);
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
    return {"desk", "fb15k-relu", "fb15k-sigmoid", "wn18-relu", "wn18-sigmoid"};
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("bad value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("bad boolean '" + std::string(value) + "' for " + std::string(key));
}

std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

void apply_config_entry(TrainingConfig& c, std::string_view key, std::string_view raw) {
    const auto value = trim(raw);
    if (key == "preset") {
        const auto threads = c.threads;
        c = training_preset(value);
        c.threads = threads;
    } else if (key == "dim") {
        c.embedding_dim = parse_number<std::size_t>(key, value);
    } else if (key == "hidden") {
        c.hidden.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            c.hidden.push_back(parse_number<std::size_t>(key, item));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    } else if (key == "activation") {
        c.activation = parse_activation_plan(value);
    } else if (key == "learning_rate") {
        c.learning_rate = parse_number<double>(key, value);
    } else if (key == "negatives") {
        c.negatives = parse_number<std::size_t>(key, value);
    } else if (key == "temperature") {
        c.adversarial_temperature = parse_number<double>(key, value);
    } else if (key == "lambda") {
        c.lambda = parse_number<double>(key, value);
    } else if (key.starts_with("slack.")) {
        const auto kind = parse_rule_kind(key.substr(6));
        if (!kind) throw ConfigError("unknown slack key '" + std::string(key) + "'");
        c.slack.set(*kind, parse_number<double>(key, value));
    } else if (key == "batches") {
        c.batches_per_epoch = parse_number<std::size_t>(key, value);
    } else if (key == "epochs") {
        c.max_epochs = parse_number<std::size_t>(key, value);
    } else if (key == "validation_period") {
        c.validation_period = parse_number<std::size_t>(key, value);
    } else if (key == "patience") {
        c.patience = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "rules") {
        c.use_rules = parse_bool(key, value);
    } else if (key == "grounding_free") {
        c.grounding_free = parse_bool(key, value);
    } else if (key == "grounding_cap") {
        c.grounding_cap = parse_number<std::size_t>(key, value);
    } else if (key == "min_confidence") {
        c.min_rule_confidence = parse_number<double>(key, value);
    } else if (key == "negative_retries") {
        c.negative_retries = parse_number<std::size_t>(key, value);
    } else if (key == "adam_beta1") {
        c.adam_beta1 = parse_number<double>(key, value);
    } else if (key == "adam_beta2") {
        c.adam_beta2 = parse_number<double>(key, value);
    } else if (key == "adam_epsilon") {
        c.adam_epsilon = parse_number<double>(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<std::size_t>(key, value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

TrainingConfig parse_config(std::string_view text, TrainingConfig base) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        try {
            apply_config_entry(base, trim(std::string_view(content).substr(0, eq)),
                               std::string_view(content).substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

TrainingConfig load_config(const std::filesystem::path& path, TrainingConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base));
}

std::string format_config(const TrainingConfig& c) {
    std::string hidden;
    for (std::size_t i = 0; i < c.hidden.size(); ++i) hidden += (i ? "," : "") + std::to_string(c.hidden[i]);
    std::string out;
    auto line = [&](std::string_view k, const std::string& v) {
        out += std::string(k) + " = " + v + '\n';
    };
    line("dim", std::to_string(c.embedding_dim));
    line("hidden", hidden);
    line("activation", std::string(activation_plan_name(c.activation)));
    line("learning_rate", num(c.learning_rate));
    line("negatives", std::to_string(c.negatives));
    line("temperature", num(c.adversarial_temperature));
    line("lambda", num(c.lambda));
    for (const auto kind : kAllRuleKinds)
        line("slack." + std::string(rule_kind_name(kind)), num(c.slack.get(kind)));
    line("batches", std::to_string(c.batches_per_epoch));
    line("epochs", std::to_string(c.max_epochs));
    line("validation_period", std::to_string(c.validation_period));
    line("patience", std::to_string(c.patience));
    line("seed", std::to_string(c.seed));
    line("rules", c.use_rules ? "true" : "false");
    line("grounding_free", c.grounding_free ? "true" : "false");
    line("grounding_cap", std::to_string(c.grounding_cap));
    line("min_confidence", num(c.min_rule_confidence));
    line("negative_retries", std::to_string(c.negative_retries));
    line("adam_beta1", num(c.adam_beta1));
    line("adam_beta2", num(c.adam_beta2));
    line("adam_epsilon", num(c.adam_epsilon));
    line("threads", std::to_string(c.threads));
    return out;
}

ModelShape model_shape(const TrainingConfig& config, const KnowledgeGraph& graph) {
    ModelShape shape;
    shape.num_entities = graph.num_entities();
    shape.num_relations = graph.num_relations();
    shape.embedding_dim = config.embedding_dim;
    shape.hidden = config.hidden;
    shape.activations = activation_tags(config.activation, config.hidden.size());
    return shape;
}

std::vector<Triple> sample_negatives(const Triple& triple, const KnowledgeGraph& graph, std::size_t k,
                                     std::mt19937_64& rng, std::size_t max_retries,
                                     std::size_t* kept_collisions) {
    if (k < 1) throw ArgumentError("negative count must be >= 1");
    const auto n = graph.num_entities();
    if (n == 0) throw ArgumentError("graph has no entities");
    std::bernoulli_distribution coin(0.5);
    // Draw among the n - 1 entities other than the one being replaced.
    auto draw = [&](EntityId current) -> EntityId {
        if (n == 1) return current;
        std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(n - 2));
        const auto e = pick(rng);
        return e >= current ? e + 1 : e;
    };
    std::vector<Triple> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Triple corrupt = triple;
        for (std::size_t attempt = 0;; ++attempt) {
            corrupt = triple;
            if (coin(rng))
                corrupt.head = draw(triple.head);
            else
                corrupt.tail = draw(triple.tail);
            const bool collides = corrupt == triple || graph.contains(Split::Train, corrupt);
            if (!collides) break;
            if (attempt >= max_retries) {
                if (kept_collisions != nullptr) ++*kept_collisions;
                break;
            }
        }
        out.push_back(corrupt);
    }
    return out;
}

std::vector<double> adversarial_weights(std::span<const double> scores, double temperature) {
    if (scores.empty()) throw ArgumentError("adversarial weights need at least one score");
    if (!(temperature >= 0.0)) throw ArgumentError("temperature must be >= 0");
    const double top = *std::max_element(scores.begin(), scores.end());
    std::vector<double> w(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        w[i] = std::exp(temperature * (scores[i] - top));
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

AdamState AdamState::for_params(const ModelParameters& params) {
    return AdamState{params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(ModelParameters& params, const Gradients& grads, AdamState& state, const AdamHyper& hyper) {
    auto p = params.tensors();
    const auto g = grads.tensors();
    auto m = state.first_moment.tensors();
    auto v = state.second_moment.tensors();
    if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size())
        throw InternalError("adam state does not match parameter shapes");
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (g[k].size() != p[k].size() || m[k].size() != p[k].size() || v[k].size() != p[k].size())
            throw InternalError("adam state does not match parameter shapes");
        for (const double x : g[k])
            if (!std::isfinite(x)) throw TrainingError("non-finite gradient");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(hyper.beta1, t);
    const double c2 = 1.0 - std::pow(hyper.beta2, t);
    for (std::size_t k = 0; k < p.size(); ++k) {
        for (std::size_t i = 0; i < p[k].size(); ++i) {
            const double gi = g[k][i];
            m[k][i] = hyper.beta1 * m[k][i] + (1.0 - hyper.beta1) * gi;
            v[k][i] = hyper.beta2 * v[k][i] + (1.0 - hyper.beta2) * gi * gi;
            const double m_hat = m[k][i] / c1;
            const double v_hat = v[k][i] / c2;
            p[k][i] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
        }
    }
}

std::string format_trace(const TrainingTrace& trace) {
    std::string out = "epoch\tdata_loss";
    for (const auto kind : kAllRuleKinds) out += "\tpenalty_" + std::string(rule_kind_name(kind));
    out += "\ttotal_loss\tvalid_mrr\tseconds\n";
    for (const auto& e : trace.epochs) {
        out += std::to_string(e.epoch) + '\t' + num(e.data_loss);
        for (const double p : e.penalties) out += '\t' + num(p);
        out += '\t' + num(e.total_loss) + '\t' + (e.valid_mrr < 0 ? std::string("-") : num(e.valid_mrr)) +
               '\t' + num(e.seconds) + '\n';
    }
    return out;
}

TrainResult train(const KnowledgeGraph& graph, std::span<const Rule> rules, const TrainingConfig& config,
                  const EpochCallback& on_epoch) {
    config.validate();
    const auto& train_triples = graph.triples(Split::Train);
    if (train_triples.empty()) throw ArgumentError("train split is empty");
    for (const auto& rule : rules) validate_rule(rule, graph.num_relations());

    std::mt19937_64 rng(config.seed);
    TrainResult result{init_parameters(model_shape(config, graph), rng()), {}};
    auto& params = result.params;
    auto& trace = result.trace;

    const bool rules_active = config.use_rules && config.lambda > 0.0 && !rules.empty();
    PreparedRules prepared;
    if (rules_active) {
        if (config.grounding_free && !params.final_features_nonnegative())
            throw ConfigError("grounding-free penalties need a ReLU final hidden layer");
        prepared = prepare_rules(rules, graph, config.grounding_free);
    }
    const std::size_t batches = std::min(config.batches_per_epoch, train_triples.size());
    const std::size_t cap_per_batch =
        config.grounding_cap == 0 ? 0 : (config.grounding_cap + batches - 1) / batches;

    AdamState adam = AdamState::for_params(params);
    const AdamHyper hyper{config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_epsilon};
    const auto& valid = graph.triples(Split::Valid);

    ModelParameters best = params;
    double best_mrr = -1.0;
    std::size_t stale = 0;

    std::vector<std::size_t> order(train_triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<LabeledTriple> samples;
    std::vector<Triple> negatives_flat;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), rng);
        EpochRecord record;
        record.epoch = epoch;

        for (std::size_t b = 0; b < batches; ++b) {
            const auto begin = b * order.size() / batches;
            const auto end = (b + 1) * order.size() / batches;
            const double inv = 1.0 / static_cast<double>(end - begin);

            negatives_flat.clear();
            for (std::size_t i = begin; i < end; ++i) {
                auto negs = sample_negatives(train_triples[order[i]], graph, config.negatives, rng,
                                             config.negative_retries, &trace.kept_collisions);
                negatives_flat.insert(negatives_flat.end(), negs.begin(), negs.end());
            }
            const auto neg_scores = score_triples(params, negatives_flat);
            if (!neg_scores.allFinite())
                throw TrainingError("non-finite scores at epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(b + 1));

            samples.clear();
            for (std::size_t i = begin; i < end; ++i) {
                samples.push_back({train_triples[order[i]], 1.0, inv});
                const auto offset = (i - begin) * config.negatives;
                const std::span<const double> s(neg_scores.data() + offset, config.negatives);
                const auto w = adversarial_weights(s, config.adversarial_temperature);
                for (std::size_t j = 0; j < config.negatives; ++j)
                    samples.push_back({negatives_flat[offset + j], -1.0, inv * w[j]});
            }

            Gradients penalty_grads;
            RegularizerValue reg;
            if (rules_active) {
                penalty_grads = params.zeros_like();
                reg = accumulate_regularizer(prepared, params, config.slack, config.lambda, cap_per_batch,
                                             &rng, &penalty_grads);
            }
            auto step = backward(params, samples, rules_active ? &penalty_grads : nullptr);
            const double total = step.loss + config.lambda * reg.total;
            if (!std::isfinite(total))
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(b + 1));
            try {
                adam_step(params, step.grads, adam, hyper);
            } catch (const TrainingError& e) {
                throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                                    ", batch " + std::to_string(b + 1));
            }
            trace.replaced_zero_rows += project_entities(params);

            record.data_loss += step.loss;
            for (std::size_t k = 0; k < kNumRuleKinds; ++k) record.penalties[k] += reg.per_kind[k];
        }
        const double nb = static_cast<double>(batches);
        record.data_loss /= nb;
        double penalty_sum = 0.0;
        for (auto& p : record.penalties) {
            p /= nb;
            penalty_sum += p;
        }
        record.total_loss = record.data_loss + config.lambda * penalty_sum;

        const bool validate_now =
            !valid.empty() && (epoch % config.validation_period == 0 || epoch == config.max_epochs);
        bool stop = false;
        if (validate_now) {
            record.valid_mrr = filtered_mrr(params, graph, valid, config.threads);
            trace.validations.emplace_back(epoch, record.valid_mrr);
            if (record.valid_mrr > best_mrr) {
                best_mrr = record.valid_mrr;
                best = params;
                trace.best_epoch = epoch;
                stale = 0;
            } else if (++stale >= config.patience) {
                stop = true;
            }
        }
        record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        trace.epochs.push_back(record);
        if (on_epoch) on_epoch(record);
        if (stop) break;
    }

    if (valid.empty() || trace.validations.empty()) {
        trace.best_epoch = trace.epochs.empty() ? 0 : trace.epochs.back().epoch;
    } else {
        params = std::move(best);
    }
    return result;
}

}  // namespace logicenn
