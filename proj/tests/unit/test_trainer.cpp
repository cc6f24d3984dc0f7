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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "logicenn/checkpoint.hpp"
#include "logicenn/errors.hpp"
#include "logicenn/family.hpp"
#include "logicenn/trainer.hpp"

using namespace logicenn;

namespace {

TrainingConfig quick_config() {
    TrainingConfig c;
    c.embedding_dim = 8;
    c.hidden = {16, 8};
    c.negatives = 4;
    c.batches_per_epoch = 2;
    c.max_epochs = 30;
    c.validation_period = 10;
    c.learning_rate = 0.01;
    return c;
}

ModelParameters scalar_model(double value) {
    ModelParameters p;
    p.entities = RowMatrix::Zero(0, 0);
    p.relations = RowMatrix::Constant(1, 1, value);
    return p;
}

}  // namespace

TEST(AdversarialWeights, EqualScores) {
    const std::vector<double> s{0.3, 0.3};
    const auto w = adversarial_weights(s, 1.0);
    EXPECT_DOUBLE_EQ(w[0], 0.5);
    EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(AdversarialWeights, ZeroTemperatureUniform) {
    const std::vector<double> s{5.0, -2.0, 1.0, 0.0};
    for (double w : adversarial_weights(s, 0.0)) EXPECT_DOUBLE_EQ(w, 0.25);
}

TEST(AdversarialWeights, TenAndZero) {
    const std::vector<double> s{10.0, 0.0};
    const auto w = adversarial_weights(s, 1.0);
    EXPECT_NEAR(w[0], 0.9999546021312976, 1e-15);
    EXPECT_NEAR(w[1], 4.5397868702434395e-05, 1e-18);
}

TEST(AdversarialWeights, SumToOneAndPermutationEquivariant) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s(7);
        for (auto& x : s) x = n(rng);
        const auto w = adversarial_weights(s, 1.3);
        double sum = 0.0;
        for (double x : w) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        std::vector<double> rev(s.rbegin(), s.rend());
        const auto wr = adversarial_weights(rev, 1.3);
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(wr[i], w[s.size() - 1 - i], 1e-15);
    }
    EXPECT_THROW(adversarial_weights({}, 1.0), ArgumentError);
}

TEST(NegativeSampling, TwoEntityCandidates) {
    KnowledgeGraph g;
    parse_triples("a\tr\tb\n", g, Split::Train);
    std::mt19937_64 rng(3);
    const std::set<Triple> allowed{{1, 0, 1}, {0, 0, 0}};
    for (int i = 0; i < 50; ++i)
        for (const auto& t : sample_negatives({0, 0, 1}, g, 5, rng)) EXPECT_TRUE(allowed.count(t));
}

TEST(NegativeSampling, ExactCountAndBalancedSides) {
    const auto kg = generate_family_kg({.num_families = 5});
    std::mt19937_64 rng(4);
    const auto& pos = kg.graph.triples(Split::Train).front();
    std::size_t heads = 0, total = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto negs = sample_negatives(pos, kg.graph, 5, rng);
        ASSERT_EQ(negs.size(), 5u);
        for (const auto& n : negs) {
            EXPECT_TRUE(n.head == pos.head || n.tail == pos.tail);
            EXPECT_NE(n, pos);
            heads += n.head != pos.head;
            ++total;
        }
    }
    const double ratio = static_cast<double>(heads) / static_cast<double>(total);
    EXPECT_GE(ratio, 0.48);
    EXPECT_LE(ratio, 0.52);
}

TEST(Adam, ZeroGradientLeavesParameters) {
    auto p = scalar_model(0.7);
    auto state = AdamState::for_params(p);
    adam_step(p, p.zeros_like(), state, {});
    EXPECT_EQ(p.relations(0, 0), 0.7);
    EXPECT_EQ(state.step, 1u);
}

TEST(Adam, FirstStepMagnitude) {
    auto p = scalar_model(0.0);
    auto g = p.zeros_like();
    g.relations(0, 0) = 1.0;
    auto state = AdamState::for_params(p);
    adam_step(p, g, state, {0.1, 0.9, 0.999, 1e-8});
    EXPECT_NEAR(p.relations(0, 0), -0.1 / (1.0 + 1e-8), 1e-15);
}

TEST(Adam, MatchesReferenceOver100Steps) {
    auto p = scalar_model(0.3);
    auto state = AdamState::for_params(p);
    const AdamHyper hyper{0.05, 0.9, 0.999, 1e-8};
    double x = 0.3, m = 0.0, v = 0.0;
    for (int t = 1; t <= 100; ++t) {
        const double grad = 2.0 * (x - 1.5) + std::sin(t);
        auto g = p.zeros_like();
        g.relations(0, 0) = 2.0 * (p.relations(0, 0) - 1.5) + std::sin(t);
        adam_step(p, g, state, hyper);
        m = 0.9 * m + 0.1 * grad;
        v = 0.999 * v + 0.001 * grad * grad;
        const double mh = m / (1.0 - std::pow(0.9, t));
        const double vh = v / (1.0 - std::pow(0.999, t));
        x -= 0.05 * mh / (std::sqrt(vh) + 1e-8);
        EXPECT_NEAR(p.relations(0, 0), x, 1e-10) << "step " << t;
    }
}

TEST(Adam, NonFiniteGradientIsTrainingError) {
    auto p = scalar_model(0.0);
    auto g = p.zeros_like();
    g.relations(0, 0) = std::nan("");
    auto state = AdamState::for_params(p);
    EXPECT_THROW(adam_step(p, g, state, {}), TrainingError);
}

TEST(Config, PresetsMatchPublishedOptima) {
    const auto r = training_preset("fb15k-relu");
    EXPECT_EQ(r.embedding_dim, 200u);
    EXPECT_EQ(r.hidden, (std::vector<std::size_t>{1000, 2000, 200}));
    EXPECT_EQ(r.activation, ActivationPlan::ReluAll);
    EXPECT_DOUBLE_EQ(r.learning_rate, 0.001);
    EXPECT_EQ(r.negatives, 8u);
    EXPECT_DOUBLE_EQ(r.lambda, 0.05);
    EXPECT_DOUBLE_EQ(r.slack.get(RuleKind::Equivalence), 1.0);
    EXPECT_DOUBLE_EQ(r.slack.get(RuleKind::Symmetric), 0.5);
    EXPECT_DOUBLE_EQ(r.slack.get(RuleKind::Implication), 5.0);
    EXPECT_DOUBLE_EQ(r.slack.get(RuleKind::Composition), 0.1);
    EXPECT_DOUBLE_EQ(r.slack.get(RuleKind::Inverse), 3.0);
    const auto s = training_preset("fb15k-sigmoid");
    EXPECT_EQ(s.activation, ActivationPlan::SigmoidFinalRelu);
    EXPECT_DOUBLE_EQ(s.slack.get(RuleKind::Equivalence), 0.5);
    EXPECT_DOUBLE_EQ(s.slack.get(RuleKind::Symmetric), 0.1);
    EXPECT_DOUBLE_EQ(s.slack.get(RuleKind::Implication), 3.0);
    const auto w = training_preset("wn18-relu");
    EXPECT_EQ(w.negatives, 5u);
    EXPECT_DOUBLE_EQ(w.lambda, 0.01);
    EXPECT_DOUBLE_EQ(w.slack.get(RuleKind::Inverse), 0.1);
    EXPECT_DOUBLE_EQ(training_preset("wn18-sigmoid").lambda, 0.005);
    EXPECT_THROW(training_preset("nope"), ConfigError);
}

TEST(Config, ParseOverridesAndRoundTrip) {
    const auto c = parse_config("# comment\npreset = fb15k-relu\nlambda = 0.2\nslack.inverse = 1.5\nepochs = 7\n");
    EXPECT_EQ(c.embedding_dim, 200u);
    EXPECT_DOUBLE_EQ(c.lambda, 0.2);
    EXPECT_DOUBLE_EQ(c.slack.get(RuleKind::Inverse), 1.5);
    EXPECT_EQ(c.max_epochs, 7u);
    const auto back = parse_config(format_config(c));
    EXPECT_EQ(format_config(back), format_config(c));
}

TEST(Config, BadEntriesRejected) {
    EXPECT_THROW(parse_config("unknown = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("lambda 1\n"), ConfigError);
    EXPECT_THROW(parse_config("negatives = many\n"), ConfigError);
    EXPECT_THROW(parse_config("slack.bogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("rules = maybe\n"), ConfigError);
    TrainingConfig c;
    c.learning_rate = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Training, LossDecreasesWithoutRules) {
    FamilyOptions fo;
    fo.num_families = 1;
    const auto kg = generate_family_kg(fo);
    auto c = quick_config();
    c.lambda = 0.0;
    c.max_epochs = 200;
    c.patience = 1000;
    const auto res = train(kg.graph, kg.rules, c);
    ASSERT_EQ(res.trace.epochs.size(), 200u);
    EXPECT_LT(res.trace.epochs.back().data_loss, res.trace.epochs.front().data_loss);
    for (const auto& e : res.trace.epochs)
        for (double p : e.penalties) EXPECT_EQ(p, 0.0);
}

TEST(Training, EntitiesStayOnUnitSphere) {
    const auto kg = generate_family_kg({.num_families = 3, .seed = 2});
    const auto res = train(kg.graph, kg.rules, quick_config());
    for (Eigen::Index i = 0; i < res.params.entities.rows(); ++i)
        EXPECT_NEAR(res.params.entities.row(i).norm(), 1.0, 1e-9);
    EXPECT_FALSE(res.trace.validations.empty());
    EXPECT_GT(res.trace.best_epoch, 0u);
}

TEST(Training, RulesContributePenalties) {
    const auto kg = generate_family_kg({.num_families = 3, .seed = 2});
    auto c = quick_config();
    c.max_epochs = 3;
    const auto res = train(kg.graph, kg.rules, c);
    double total = 0.0;
    for (double p : res.trace.epochs.front().penalties) total += p;
    EXPECT_GT(total, 0.0);
}

TEST(Training, DeterministicCheckpoints) {
    const auto kg = generate_family_kg({.num_families = 3, .seed = 9});
    const auto a = train(kg.graph, kg.rules, quick_config());
    const auto b = train(kg.graph, kg.rules, quick_config());
    EXPECT_EQ(encode_checkpoint(a.params), encode_checkpoint(b.params));
    ASSERT_EQ(a.trace.epochs.size(), b.trace.epochs.size());
    for (std::size_t i = 0; i < a.trace.epochs.size(); ++i) {
        EXPECT_EQ(a.trace.epochs[i].total_loss, b.trace.epochs[i].total_loss);
        EXPECT_EQ(a.trace.epochs[i].valid_mrr, b.trace.epochs[i].valid_mrr);
    }
}

TEST(Training, ThreadCountDoesNotChangeResult) {
    const auto kg = generate_family_kg({.num_families = 3, .seed = 9});
    auto c = quick_config();
    const auto a = train(kg.graph, kg.rules, c);
    c.threads = 3;
    const auto b = train(kg.graph, kg.rules, c);
    EXPECT_EQ(encode_checkpoint(a.params), encode_checkpoint(b.params));
}

TEST(Training, EmptyTrainRejected) {
    KnowledgeGraph g;
    g.entities().intern("a");
    g.relations().intern("r");
    EXPECT_THROW(train(g, {}, quick_config()), ArgumentError);
}

TEST(Training, DivergenceReported) {
    const auto kg = generate_family_kg({.num_families = 2});
    auto c = quick_config();
    c.learning_rate = 1e300;
    c.max_epochs = 50;
    c.lambda = 0.0;
    try {
        train(kg.graph, kg.rules, c);
        FAIL() << "expected TrainingError";
    } catch (const TrainingError& e) {
        EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
    }
}
