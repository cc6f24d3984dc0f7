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

#include "logicenn/kg.hpp"

#include <fstream>
#include <sstream>

#include "logicenn/errors.hpp"

namespace logicenn {

std::string_view split_name(Split split) {
    switch (split) {
        case Split::Train:
            return "train";
        case Split::Valid:
            return "valid";
        case Split::Test:
            return "test";
    }
    return "?";
}

std::int32_t Vocabulary::intern(std::string_view name) {
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<std::int32_t> Vocabulary::find(std::string_view name) const {
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    return std::nullopt;
}

const std::string& Vocabulary::name(std::int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size())
        throw ArgumentError("vocabulary id " + std::to_string(id) + " out of range");
    return names_[static_cast<std::size_t>(id)];
}

bool KnowledgeGraph::add(Split split, const Triple& triple) {
    if (triple.head < 0 || static_cast<std::size_t>(triple.head) >= num_entities() ||
        triple.tail < 0 || static_cast<std::size_t>(triple.tail) >= num_entities() ||
        triple.relation < 0 || static_cast<std::size_t>(triple.relation) >= num_relations())
        throw ArgumentError("triple references an id outside the vocabularies");

    const auto s = static_cast<std::size_t>(split);
    if (!members_[s].insert(triple).second) return false;
    splits_[s].push_back(triple);

    const bool new_fact = [&] {
        for (std::size_t other = 0; other < 3; ++other)
            if (other != s && members_[other].contains(triple)) return false;
        return true;
    }();
    if (new_fact) {
        known_tails_[pair_key(triple.head, triple.relation)].push_back(triple.tail);
        known_heads_[pair_key(triple.relation, triple.tail)].push_back(triple.head);
    }

    if (split == Split::Train) {
        if (adjacency_.size() < num_relations()) adjacency_.resize(num_relations());
        adjacency_[static_cast<std::size_t>(triple.relation)].emplace_back(triple.head, triple.tail);
        train_tails_[pair_key(triple.head, triple.relation)].push_back(triple.tail);
    }
    return true;
}

const std::vector<Triple>& KnowledgeGraph::triples(Split split) const {
    return splits_[static_cast<std::size_t>(split)];
}

bool KnowledgeGraph::contains(Split split, const Triple& triple) const {
    return members_[static_cast<std::size_t>(split)].contains(triple);
}

bool KnowledgeGraph::is_known(const Triple& triple) const {
    return members_[0].contains(triple) || members_[1].contains(triple) ||
           members_[2].contains(triple);
}

std::span<const std::pair<EntityId, EntityId>> KnowledgeGraph::adjacency(RelationId r) const {
    if (r < 0 || static_cast<std::size_t>(r) >= num_relations())
        throw ArgumentError("relation id " + std::to_string(r) + " out of range");
    if (static_cast<std::size_t>(r) >= adjacency_.size()) return {};
    return adjacency_[static_cast<std::size_t>(r)];
}

namespace {
std::span<const EntityId> lookup(const std::unordered_map<std::uint64_t, std::vector<EntityId>>& index,
                                 std::uint64_t key) {
    if (auto it = index.find(key); it != index.end()) return it->second;
    return {};
}
}  // namespace

std::span<const EntityId> KnowledgeGraph::train_tails(EntityId h, RelationId r) const {
    return lookup(train_tails_, pair_key(h, r));
}

std::span<const EntityId> KnowledgeGraph::known_tails(EntityId h, RelationId r) const {
    return lookup(known_tails_, pair_key(h, r));
}

std::span<const EntityId> KnowledgeGraph::known_heads(RelationId r, EntityId t) const {
    return lookup(known_heads_, pair_key(r, t));
}

std::vector<bool> KnowledgeGraph::train_entity_mask() const {
    std::vector<bool> mask(num_entities(), false);
    for (const auto& t : triples(Split::Train)) {
        mask[static_cast<std::size_t>(t.head)] = true;
        mask[static_cast<std::size_t>(t.tail)] = true;
    }
    return mask;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

LoadReport parse_triples(std::string_view text, KnowledgeGraph& graph, Split split,
                         const LoadOptions& options, std::string_view source) {
    LoadReport report;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        ++report.lines;

        const auto fields = split_tabs(line);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty())
            throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                            ": expected 3 tab-separated fields, got " +
                            std::to_string(fields.size()));

        const auto before = graph.num_entities();
        Triple t;
        t.head = graph.entities().intern(fields[0]);
        t.relation = graph.relations().intern(fields[1]);
        t.tail = graph.entities().intern(fields[2]);
        if (split != Split::Train) report.unseen_entities += graph.num_entities() - before;

        if (graph.add(split, t)) {
            ++report.added;
        } else if (options.deduplicate) {
            ++report.duplicates;
        } else {
            throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                            ": duplicate triple in " + std::string(split_name(split)) + " split");
        }
    }
    return report;
}

LoadReport load_triples(const std::filesystem::path& path, KnowledgeGraph& graph, Split split,
                        const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_triples(buffer.str(), graph, split, options, path.string());
}

std::string format_triples(const KnowledgeGraph& graph, Split split) {
    std::string out;
    for (const auto& t : graph.triples(split)) {
        out += graph.entities().name(t.head);
        out += '\t';
        out += graph.relations().name(t.relation);
        out += '\t';
        out += graph.entities().name(t.tail);
        out += '\n';
    }
    return out;
}

void write_triples(const std::filesystem::path& path, const KnowledgeGraph& graph, Split split) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << format_triples(graph, split);
    if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace logicenn
