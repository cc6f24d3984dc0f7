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

#include "logicenn/family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "logicenn/errors.hpp"

namespace logicenn {

namespace {

void derive(const Rule& rule, const std::vector<Triple>& facts, const TripleSet& known,
            std::vector<Triple>& out) {
    const auto r0 = rule.relations[0];
    const auto r1 = rule.relations[1];
    const auto r2 = rule.relations[2];
    auto emit = [&](Triple t) {
        if (!known.contains(t)) out.push_back(t);
    };
    switch (rule.kind) {
        case RuleKind::Equivalence:
            for (const auto& f : facts) {
                if (f.relation == r0) emit({f.head, r1, f.tail});
                if (f.relation == r1) emit({f.head, r0, f.tail});
            }
            break;
        case RuleKind::Implication:
            for (const auto& f : facts)
                if (f.relation == r0) emit({f.head, r1, f.tail});
            break;
        case RuleKind::Symmetric:
            for (const auto& f : facts)
                if (f.relation == r0) emit({f.tail, r0, f.head});
            break;
        case RuleKind::Inverse:
            for (const auto& f : facts) {
                if (f.relation == r0) emit({f.tail, r1, f.head});
                if (f.relation == r1) emit({f.tail, r0, f.head});
            }
            break;
        case RuleKind::Transitive:
        case RuleKind::Composition: {
            const auto first = r0;
            const auto second = rule.kind == RuleKind::Transitive ? r0 : r1;
            const auto target = rule.kind == RuleKind::Transitive ? r0 : r2;
            for (const auto& a : facts) {
                if (a.relation != first) continue;
                for (const auto& b : facts)
                    if (b.relation == second && b.head == a.tail) emit({a.head, target, b.tail});
            }
            break;
        }
        default:
            break;  // negative and unary-constraint rules derive nothing
    }
}

}  // namespace

TripleSet forward_closure(const TripleSet& facts, std::span<const Rule> rules) {
    TripleSet closure = facts;
    while (true) {
        std::vector<Triple> current(closure.begin(), closure.end());
        std::sort(current.begin(), current.end());
        std::vector<Triple> fresh;
        for (const auto& rule : rules) derive(rule, current, closure, fresh);
        std::size_t added = 0;
        for (const auto& t : fresh) added += closure.insert(t).second ? 1 : 0;
        if (added == 0) return closure;
    }
}

SyntheticKg generate_family_kg(const FamilyOptions& options) {
    if (options.num_families < 1) throw ArgumentError("num_families must be >= 1");
    if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction <= 1.0))
        throw ArgumentError("holdout_fraction must lie in [0,1]");
    if (!(options.valid_share >= 0.0 && options.valid_share <= 1.0))
        throw ArgumentError("valid_share must lie in [0,1]");

    std::mt19937_64 rng(options.seed);
    SyntheticKg out;
    auto& graph = out.graph;

    const auto spouse = graph.relations().intern("spouse");
    const auto parent_of = graph.relations().intern("parentOf");
    const auto child_of = graph.relations().intern("childOf");
    const auto grandparent_of = graph.relations().intern("grandparentOf");
    const auto sibling_of = graph.relations().intern("siblingOf");

    out.rules = {
        {RuleKind::Symmetric, {spouse, 0, 0}, 1.0},
        {RuleKind::Symmetric, {sibling_of, 0, 0}, 1.0},
        {RuleKind::Inverse, {parent_of, child_of, 0}, 1.0},
        {RuleKind::Composition, {parent_of, parent_of, grandparent_of}, 1.0},
        {RuleKind::Irreflexive, {parent_of, 0, 0}, 1.0},
    };
    if (options.extended_relations) {
        const auto married_to = graph.relations().intern("marriedTo");
        const auto ancestor_of = graph.relations().intern("ancestorOf");
        out.rules.push_back({RuleKind::Equivalence, {spouse, married_to, 0}, 1.0});
        out.rules.push_back({RuleKind::Implication, {parent_of, ancestor_of, 0}, 1.0});
        out.rules.push_back({RuleKind::Implication, {grandparent_of, ancestor_of, 0}, 1.0});
    }

    std::vector<EntityId> unmarried_children;
    TripleSet base;
    std::bernoulli_distribution link(options.link_probability);
    for (int k = 0; k < options.num_families; ++k) {
        const auto prefix = "f" + std::to_string(k) + "_";
        EntityId first_parent;
        if (!unmarried_children.empty() && link(rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, unmarried_children.size() - 1);
            const auto idx = pick(rng);
            first_parent = unmarried_children[idx];
            unmarried_children.erase(unmarried_children.begin() + static_cast<std::ptrdiff_t>(idx));
        } else {
            first_parent = graph.entities().intern(prefix + "p0");
        }
        const auto second_parent = graph.entities().intern(prefix + "p1");
        const auto c0 = graph.entities().intern(prefix + "c0");
        const auto c1 = graph.entities().intern(prefix + "c1");

        if (std::bernoulli_distribution(0.5)(rng))
            base.insert({first_parent, spouse, second_parent});
        else
            base.insert({second_parent, spouse, first_parent});
        for (const auto p : {first_parent, second_parent})
            for (const auto c : {c0, c1}) base.insert({p, parent_of, c});
        base.insert({c0, sibling_of, c1});
        unmarried_children.push_back(c0);
        unmarried_children.push_back(c1);
    }

    const auto closure = forward_closure(base, out.rules);
    std::vector<Triple> base_sorted(base.begin(), base.end());
    std::sort(base_sorted.begin(), base_sorted.end());
    std::vector<Triple> derived;
    for (const auto& t : closure)
        if (!base.contains(t)) derived.push_back(t);
    std::sort(derived.begin(), derived.end());
    std::shuffle(derived.begin(), derived.end(), rng);

    const auto held = static_cast<std::size_t>(
        std::llround(options.holdout_fraction * static_cast<double>(derived.size())));
    const auto to_valid =
        static_cast<std::size_t>(std::llround(options.valid_share * static_cast<double>(held)));

    std::vector<Triple> train = base_sorted;
    train.insert(train.end(), derived.begin() + static_cast<std::ptrdiff_t>(held), derived.end());
    std::sort(train.begin(), train.end());
    for (const auto& t : train) graph.add(Split::Train, t);
    for (std::size_t i = 0; i < held; ++i)
        graph.add(i < to_valid ? Split::Valid : Split::Test, derived[i]);

    out.base_facts = std::move(base_sorted);
    return out;
}

}  // namespace logicenn
