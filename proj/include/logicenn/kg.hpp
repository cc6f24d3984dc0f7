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

#ifndef LOGICENN_KG_HPP
#define LOGICENN_KG_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace logicenn {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

struct Triple {
    EntityId head = 0;
    RelationId relation = 0;
    EntityId tail = 0;

    auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::uint64_t x = static_cast<std::uint32_t>(t.head);
        x = x * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(t.relation);
        x = x * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(t.tail);
        x ^= x >> 31;
        return static_cast<std::size_t>(x * 0xBF58476D1CE4E5B9ULL);
    }
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

enum class Split { Train, Valid, Test };

std::string_view split_name(Split split);

/// Bidirectional string <-> dense id map. Ids are contiguous from 0.
class Vocabulary {
   public:
    std::int32_t intern(std::string_view name);
    std::optional<std::int32_t> find(std::string_view name) const;
    const std::string& name(std::int32_t id) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::int32_t> ids_;
};

/// Entity and relation vocabularies plus train/valid/test splits and the
/// indexes the rest of the library queries. Mutated only while loading.
class KnowledgeGraph {
   public:
    Vocabulary& entities() { return entities_; }
    const Vocabulary& entities() const { return entities_; }
    Vocabulary& relations() { return relations_; }
    const Vocabulary& relations() const { return relations_; }

    std::size_t num_entities() const { return entities_.size(); }
    std::size_t num_relations() const { return relations_.size(); }

    /// Appends to a split. Returns false (and leaves the graph untouched)
    /// if the triple is already present in that split.
    bool add(Split split, const Triple& triple);

    const std::vector<Triple>& triples(Split split) const;
    bool contains(Split split, const Triple& triple) const;
    /// Membership over train, valid and test together.
    bool is_known(const Triple& triple) const;

    /// (head, tail) pairs of relation r in the train split.
    std::span<const std::pair<EntityId, EntityId>> adjacency(RelationId r) const;
    /// Train tails t with (h, r, t) in train.
    std::span<const EntityId> train_tails(EntityId h, RelationId r) const;

    /// Tails / heads completing a triple in any split; used by filtered ranking.
    std::span<const EntityId> known_tails(EntityId h, RelationId r) const;
    std::span<const EntityId> known_heads(RelationId r, EntityId t) const;

    /// Entities occurring in the train split (as head or tail).
    std::vector<bool> train_entity_mask() const;

   private:
    static std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }

    Vocabulary entities_;
    Vocabulary relations_;
    std::vector<Triple> splits_[3];
    TripleSet members_[3];
    std::vector<std::vector<std::pair<EntityId, EntityId>>> adjacency_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> train_tails_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> known_tails_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> known_heads_;
};

struct LoadOptions {
    /// Drop repeated triples with a warning count; otherwise repeated triples
    /// are a DataError.
    bool deduplicate = true;
};

struct LoadReport {
    std::size_t lines = 0;
    std::size_t added = 0;
    std::size_t duplicates = 0;
    /// Entities first seen in this file when loading into valid/test.
    std::size_t unseen_entities = 0;
};

/// Reads `head\trelation\ttail` lines into a split, interning names.
LoadReport load_triples(const std::filesystem::path& path, KnowledgeGraph& graph, Split split,
                        const LoadOptions& options = {});

/// Same grammar as load_triples, reading from memory. `source` names the
/// input in error messages.
LoadReport parse_triples(std::string_view text, KnowledgeGraph& graph, Split split,
                         const LoadOptions& options = {}, std::string_view source = "<memory>");

void write_triples(const std::filesystem::path& path, const KnowledgeGraph& graph, Split split);
std::string format_triples(const KnowledgeGraph& graph, Split split);

/// Splits a line on tabs. Trailing '\r' is stripped first.
std::vector<std::string_view> split_tabs(std::string_view line);

}  // namespace logicenn

#endif  // LOGICENN_KG_HPP
