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

#include "logicenn/rule.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "logicenn/errors.hpp"

namespace logicenn {

namespace {
constexpr std::array<std::string_view, kNumRuleKinds> kKindNames = {
    "equivalence", "implication", "symmetric", "antisymmetric", "inverse",
    "transitive",  "composition", "negation",  "reflexive",     "irreflexive",
};

std::string shortest(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}
}  // namespace

std::string_view rule_kind_name(RuleKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<RuleKind> parse_rule_kind(std::string_view token) {
    for (std::size_t i = 0; i < kNumRuleKinds; ++i)
        if (kKindNames[i] == token) return kAllRuleKinds[i];
    return std::nullopt;
}

std::size_t rule_arity(RuleKind kind) {
    switch (kind) {
        case RuleKind::Symmetric:
        case RuleKind::Antisymmetric:
        case RuleKind::Transitive:
        case RuleKind::Reflexive:
        case RuleKind::Irreflexive:
            return 1;
        case RuleKind::Equivalence:
        case RuleKind::Implication:
        case RuleKind::Inverse:
        case RuleKind::Negation:
            return 2;
        case RuleKind::Composition:
            return 3;
    }
    return 0;
}

void validate_rule(const Rule& rule, std::size_t num_relations) {
    if (!(rule.confidence >= 0.0 && rule.confidence <= 1.0))
        throw ArgumentError("rule confidence must lie in [0,1]");
    for (std::size_t i = 0; i < rule.arity(); ++i) {
        const auto r = rule.relations[i];
        if (r < 0 || static_cast<std::size_t>(r) >= num_relations)
            throw ArgumentError("rule references unknown relation id " + std::to_string(r));
    }
}

RuleLoadResult parse_rules(std::string_view text, const KnowledgeGraph& graph,
                           double min_confidence, std::string_view source) {
    RuleLoadResult result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;

        const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        const auto fields = split_tabs(line);
        const auto kind = parse_rule_kind(fields.front());
        if (!kind) throw DataError(where + "unknown rule kind '" + std::string(fields.front()) + "'");

        const auto arity = rule_arity(*kind);
        if (fields.size() != arity + 2)
            throw DataError(where + std::string(rule_kind_name(*kind)) + " expects " +
                            std::to_string(arity) + " relation(s) and a confidence, got " +
                            std::to_string(fields.size()) + " fields");

        Rule rule;
        rule.kind = *kind;
        const auto conf_text = fields.back();
        const auto [ptr, ec] =
            std::from_chars(conf_text.data(), conf_text.data() + conf_text.size(), rule.confidence);
        if (ec != std::errc{} || ptr != conf_text.data() + conf_text.size())
            throw DataError(where + "bad confidence '" + std::string(conf_text) + "'");
        if (!(rule.confidence >= 0.0 && rule.confidence <= 1.0))
            throw DataError(where + "confidence outside [0,1]");

        bool known = true;
        for (std::size_t i = 0; i < arity; ++i) {
            const auto id = graph.relations().find(fields[i + 1]);
            if (!id) {
                known = false;
                break;
            }
            rule.relations[i] = *id;
        }
        if (!known) {
            ++result.skipped_unknown;
            continue;
        }
        if (rule.confidence < min_confidence) {
            ++result.below_threshold;
            continue;
        }
        result.rules.push_back(rule);
    }
    return result;
}

RuleLoadResult load_rules(const std::filesystem::path& path, const KnowledgeGraph& graph,
                          double min_confidence) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_rules(buffer.str(), graph, min_confidence, path.string());
}

std::string format_rules(std::span<const Rule> rules, const KnowledgeGraph& graph) {
    std::string out;
    for (const auto& rule : rules) {
        out += rule_kind_name(rule.kind);
        for (std::size_t i = 0; i < rule.arity(); ++i) {
            out += '\t';
            out += graph.relations().name(rule.relations[i]);
        }
        out += '\t';
        out += shortest(rule.confidence);
        out += '\n';
    }
    return out;
}

void write_rules(const std::filesystem::path& path, std::span<const Rule> rules,
                 const KnowledgeGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << format_rules(rules, graph);
    if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace logicenn
