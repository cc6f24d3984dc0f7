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

#include "logicenn/testkit/oracles.hpp"

using namespace logicenn;

TEST(Oracles, QuadraticDerivative) {
    EXPECT_NEAR(testkit::finite_difference([](double x) { return x * x; }, 3.0, 1e-5), 6.0, 1e-9);
}

TEST(Oracles, ReferenceForwardTrivialCases) {
    ModelParameters p;
    p.entities = RowMatrix::Identity(2, 2);
    DenseLayer layer;
    layer.weight = RowMatrix::Zero(1, 4);
    layer.bias = Vector::Ones(1);
    layer.activation = Activation::ReLU;
    p.layers.push_back(layer);
    p.relations = RowMatrix::Constant(1, 1, 2.0);
    EXPECT_EQ(testkit::reference_forward(p, 0, 0, 1), 2.0);
    p.relations.setZero();
    EXPECT_EQ(testkit::reference_forward(p, 1, 0, 0), 0.0);
}

TEST(Oracles, BruteForceGroundingsEmptyGraph) {
    KnowledgeGraph g;
    g.relations().intern("r");
    for (const auto kind : kAllRuleKinds)
        EXPECT_TRUE(testkit::brute_force_groundings({kind, {0, 0, 0}, 1.0}, g).empty());
}

TEST(Oracles, TwoPassMeanVariance) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto [m, var] = testkit::two_pass_mean_variance(v);
    EXPECT_DOUBLE_EQ(m, 2.5);
    EXPECT_DOUBLE_EQ(var, 1.25);
}

TEST(Oracles, RandomTableDensity) {
    const auto t = testkit::random_table(10, 3, 0.5, 1);
    EXPECT_EQ(t.cells.size(), 300u);
    EXPECT_GT(t.true_facts(), 100u);
    EXPECT_LT(t.true_facts(), 200u);
}

TEST(Memorization, AllFalseTable) {
    auto t = testkit::random_table(10, 3, 0.0, 1);
    ASSERT_EQ(t.true_facts(), 0u);
    testkit::MemorizationConfig c;
    c.epochs = 300;
    const auto r = testkit::memorization_test(t, c);
    EXPECT_GE(r.accuracy, 0.99);
}

TEST(Memorization, SmallTableSeparates) {
    const auto t = testkit::random_table(6, 2, 0.5, 3);
    testkit::MemorizationConfig c;
    const auto r = testkit::memorization_test(t, c);
    EXPECT_GE(r.accuracy, 0.99);
    EXPECT_GT(r.margin, 0.0);
}
