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

#include <cstring>
#include <filesystem>

#include "logicenn/checkpoint.hpp"
#include "logicenn/errors.hpp"

using namespace logicenn;

namespace {
ModelParameters sample_model() {
    ModelShape s;
    s.num_entities = 5;
    s.num_relations = 2;
    s.embedding_dim = 3;
    s.hidden = {4, 2};
    s.activations = activation_tags(ActivationPlan::SigmoidFinalRelu, 2);
    return init_parameters(s, 42);
}

bool bitwise_equal(const ModelParameters& a, const ModelParameters& b) {
    const auto ta = a.tensors();
    const auto tb = b.tensors();
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i].size() != tb[i].size() || std::memcmp(ta[i].data(), tb[i].data(), ta[i].size_bytes()) != 0)
            return false;
    return true;
}
}  // namespace

TEST(Checkpoint, RoundTripBitwise) {
    const auto p = sample_model();
    const auto path = std::filesystem::temp_directory_path() / "logicenn_ckpt_test.bin";
    save_checkpoint(p, path);
    const auto q = load_checkpoint(path);
    std::filesystem::remove(path);
    EXPECT_TRUE(bitwise_equal(p, q));
    ASSERT_EQ(q.layers.size(), 2u);
    EXPECT_EQ(q.layers[0].activation, Activation::Sigmoid);
    EXPECT_EQ(q.layers[1].activation, Activation::ReLU);
}

TEST(Checkpoint, HeaderLayout) {
    const auto bytes = encode_checkpoint(sample_model());
    ASSERT_GE(bytes.size(), 4u);
    EXPECT_EQ(bytes.substr(0, 4), "LENN");
    std::uint32_t version = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    EXPECT_EQ(version, 1u);
    // magic, version, d, K, 2 widths, 2 tags, N_e, N_r
    const std::size_t header = 4 + 4 + 4 + 4 + 2 * 4 + 2 + 8 + 8;
    EXPECT_EQ(bytes.size(), header + sample_model().parameter_count() * 8);
}

TEST(Checkpoint, BadMagic) {
    auto bytes = encode_checkpoint(sample_model());
    bytes[0] = 'X';
    EXPECT_THROW(decode_checkpoint(bytes), FormatError);
}

TEST(Checkpoint, BadVersion) {
    auto bytes = encode_checkpoint(sample_model());
    bytes[4] = 9;
    EXPECT_THROW(decode_checkpoint(bytes), FormatError);
}

TEST(Checkpoint, TruncatedNamesMissingBytes) {
    const auto bytes = encode_checkpoint(sample_model());
    try {
        decode_checkpoint(bytes.substr(0, bytes.size() - 20));
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("20 bytes"), std::string::npos) << e.what();
    }
}

TEST(Checkpoint, TrailingBytesRejected) {
    EXPECT_THROW(decode_checkpoint(encode_checkpoint(sample_model()) + "x"), FormatError);
}

TEST(Checkpoint, MissingFile) {
    EXPECT_THROW(load_checkpoint("/nonexistent/ckpt"), DataError);
}
