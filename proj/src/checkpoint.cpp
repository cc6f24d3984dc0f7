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

#include "logicenn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "logicenn/errors.hpp"

namespace logicenn {

namespace {

template <typename T>
void put(std::string& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
   public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        need(sizeof(T), what);
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big)
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(raw[i], raw[sizeof(T) - 1 - i]);
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }

    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n)
            throw FormatError(std::string("checkpoint truncated in ") + what + ": missing " +
                              std::to_string(n - (bytes_.size() - pos_)) + " bytes");
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

   private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const ModelParameters& params) {
    params.validate();
    std::string out;
    out.append(kCheckpointMagic, 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.embedding_dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.layers.size()));
    for (const auto& layer : params.layers) put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.weight.rows()));
    for (const auto& layer : params.layers) put<std::uint8_t>(out, static_cast<std::uint8_t>(layer.activation));
    put<std::uint64_t>(out, params.num_entities());
    put<std::uint64_t>(out, params.num_relations());
    for (const auto tensor : params.tensors())
        for (const double v : tensor) put<double>(out, v);
    return out;
}

ModelParameters decode_checkpoint(const std::string& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0)
        throw FormatError("not a checkpoint: bad magic");
    Reader in(bytes);
    in.get<std::uint32_t>("magic");
    const auto version = in.get<std::uint32_t>("header");
    if (version != kCheckpointVersion)
        throw FormatError("unsupported checkpoint version " + std::to_string(version));

    ModelShape shape;
    shape.embedding_dim = in.get<std::uint32_t>("header");
    const auto num_layers = in.get<std::uint32_t>("header");
    if (shape.embedding_dim == 0 || num_layers == 0) throw FormatError("checkpoint header has empty shape");
    in.need(static_cast<std::size_t>(num_layers) * 5, "header");
    shape.hidden.clear();
    for (std::uint32_t k = 0; k < num_layers; ++k) shape.hidden.push_back(in.get<std::uint32_t>("header"));
    for (std::uint32_t k = 0; k < num_layers; ++k) {
        const auto tag = in.get<std::uint8_t>("header");
        if (tag > 1) throw FormatError("unknown activation tag " + std::to_string(tag));
        shape.activations.push_back(static_cast<Activation>(tag));
    }
    shape.num_entities = in.get<std::uint64_t>("header");
    shape.num_relations = in.get<std::uint64_t>("header");

    std::size_t total = shape.num_entities * shape.embedding_dim;
    std::size_t width = 2 * shape.embedding_dim;
    for (const auto w : shape.hidden) {
        total += w * width + w;
        width = w;
    }
    total += shape.num_relations * width;
    in.need(total * sizeof(double), "payload");

    ModelParameters p;
    const auto d = static_cast<Eigen::Index>(shape.embedding_dim);
    p.entities.resize(static_cast<Eigen::Index>(shape.num_entities), d);
    auto in_width = 2 * d;
    for (std::size_t k = 0; k < shape.hidden.size(); ++k) {
        const auto out_width = static_cast<Eigen::Index>(shape.hidden[k]);
        DenseLayer layer;
        layer.weight.resize(out_width, in_width);
        layer.bias.resize(out_width);
        layer.activation = shape.activations[k];
        p.layers.push_back(std::move(layer));
        in_width = out_width;
    }
    p.relations.resize(static_cast<Eigen::Index>(shape.num_relations), in_width);

    for (auto tensor : p.tensors())
        for (double& v : tensor) v = in.get<double>("payload");
    if (in.remaining() != 0)
        throw FormatError("checkpoint has " + std::to_string(in.remaining()) + " trailing bytes");
    return p;
}

void save_checkpoint(const ModelParameters& params, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(params);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed for " + path.string());
}

ModelParameters load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return decode_checkpoint(buffer.str());
}

}  // namespace logicenn
