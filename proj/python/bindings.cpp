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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "logicenn/checkpoint.hpp"
#include "logicenn/errors.hpp"
#include "logicenn/evaluator.hpp"
#include "logicenn/family.hpp"
#include "logicenn/kg.hpp"
#include "logicenn/model.hpp"
#include "logicenn/rule.hpp"
#include "logicenn/rules_engine.hpp"
#include "logicenn/trainer.hpp"

namespace py = pybind11;
using namespace logicenn;

namespace {

using NamedTriple = std::tuple<std::string, std::string, std::string>;

NamedTriple named(const KnowledgeGraph& g, const Triple& t) {
    return {g.entities().name(t.head), g.relations().name(t.relation), g.entities().name(t.tail)};
}

Triple resolve(const KnowledgeGraph& g, const NamedTriple& t) {
    const auto h = g.entities().find(std::get<0>(t));
    const auto r = g.relations().find(std::get<1>(t));
    const auto tl = g.entities().find(std::get<2>(t));
    if (!h || !r || !tl)
        throw ArgumentError("unknown name in triple (" + std::get<0>(t) + ", " + std::get<1>(t) + ", " +
                            std::get<2>(t) + ")");
    return {*h, *r, *tl};
}

Split parse_split(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "valid") return Split::Valid;
    if (name == "test") return Split::Test;
    throw ArgumentError("unknown split '" + name + "' (expected train, valid or test)");
}

py::dict metric_dict(const MetricSet& m, const std::vector<int>& hits_at) {
    py::dict d;
    d["mr"] = m.mr;
    d["mrr"] = m.mrr;
    for (std::size_t k = 0; k < hits_at.size(); ++k) d[("hits@" + std::to_string(hits_at[k])).c_str()] = m.hits[k];
    return d;
}

std::vector<Triple> split_or_triples(const KnowledgeGraph& g, const py::object& which) {
    if (py::isinstance<py::str>(which)) return g.triples(parse_split(which.cast<std::string>()));
    std::vector<Triple> out;
    for (const auto& t : which.cast<std::vector<NamedTriple>>()) out.push_back(resolve(g, t));
    return out;
}

}  // namespace

PYBIND11_MODULE(_logicenn, m) {
    m.doc() = "Neural knowledge-graph embeddings with rule injection.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", data.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<TrainingError>(m, "TrainingError", base.ptr());
    py::register_exception<InternalError>(m, "InternalError", base.ptr());

    py::class_<KnowledgeGraph>(m, "KnowledgeGraph")
        .def(py::init<>())
        .def(
            "load",
            [](KnowledgeGraph& g, const std::filesystem::path& path, const std::string& split) {
                return load_triples(path, g, parse_split(split)).added;
            },
            py::arg("path"), py::arg("split") = "train", "Reads a TSV file into a split; returns triples added.")
        .def(
            "parse",
            [](KnowledgeGraph& g, const std::string& text, const std::string& split) {
                return parse_triples(text, g, parse_split(split)).added;
            },
            py::arg("text"), py::arg("split") = "train")
        .def(
            "add",
            [](KnowledgeGraph& g, const std::string& h, const std::string& r, const std::string& t,
               const std::string& split) {
                const Triple triple{g.entities().intern(h), g.relations().intern(r), g.entities().intern(t)};
                return g.add(parse_split(split), triple);
            },
            py::arg("head"), py::arg("relation"), py::arg("tail"), py::arg("split") = "train")
        .def_property_readonly("num_entities", &KnowledgeGraph::num_entities)
        .def_property_readonly("num_relations", &KnowledgeGraph::num_relations)
        .def_property_readonly("entities", [](const KnowledgeGraph& g) { return g.entities().names(); })
        .def_property_readonly("relations", [](const KnowledgeGraph& g) { return g.relations().names(); })
        .def(
            "triples",
            [](const KnowledgeGraph& g, const std::string& split) {
                std::vector<NamedTriple> out;
                for (const auto& t : g.triples(parse_split(split))) out.push_back(named(g, t));
                return out;
            },
            py::arg("split") = "train")
        .def("__len__", [](const KnowledgeGraph& g) {
            return g.triples(Split::Train).size() + g.triples(Split::Valid).size() + g.triples(Split::Test).size();
        });

    py::class_<Rule>(m, "Rule")
        .def_property_readonly("kind", [](const Rule& r) { return std::string(rule_kind_name(r.kind)); })
        .def_property_readonly("relations",
                               [](const Rule& r) {
                                   return std::vector<RelationId>(r.relations.begin(),
                                                                  r.relations.begin() + r.arity());
                               })
        .def_readonly("confidence", &Rule::confidence)
        .def("__repr__", [](const Rule& r) {
            return "<Rule " + std::string(rule_kind_name(r.kind)) + " conf=" + std::to_string(r.confidence) + ">";
        });

    m.def(
        "parse_rules",
        [](const std::string& text, const KnowledgeGraph& g, double min_confidence) {
            return parse_rules(text, g, min_confidence).rules;
        },
        py::arg("text"), py::arg("graph"), py::arg("min_confidence") = 0.8);
    m.def(
        "load_rules",
        [](const std::filesystem::path& path, const KnowledgeGraph& g, double min_confidence) {
            return load_rules(path, g, min_confidence).rules;
        },
        py::arg("path"), py::arg("graph"), py::arg("min_confidence") = 0.8);
    m.def(
        "format_rules", [](const std::vector<Rule>& rules, const KnowledgeGraph& g) { return format_rules(rules, g); },
        py::arg("rules"), py::arg("graph"));

    m.def(
        "generate_family",
        [](std::size_t num_families, std::uint64_t seed, double holdout_fraction, bool extended_relations) {
            FamilyOptions o;
            o.num_families = num_families;
            o.seed = seed;
            o.holdout_fraction = holdout_fraction;
            o.extended_relations = extended_relations;
            auto kg = generate_family_kg(o);
            return py::make_tuple(std::move(kg.graph), std::move(kg.rules));
        },
        py::arg("num_families") = 20, py::arg("seed") = 0, py::arg("holdout_fraction") = FamilyOptions{}.holdout_fraction,
        py::arg("extended_relations") = true, "Synthetic family graph and its rules as (graph, rules).");

    py::class_<TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_static("preset", &training_preset, py::arg("name"))
        .def_static("presets", &preset_names)
        .def_static(
            "parse", [](const std::string& text) { return parse_config(text); }, py::arg("text"))
        .def_static(
            "load", [](const std::filesystem::path& path) { return load_config(path); }, py::arg("path"))
        .def(
            "set",
            [](TrainingConfig& c, const std::string& key, const py::object& value) {
                apply_config_entry(c, key, py::str(value).cast<std::string>());
            },
            py::arg("key"), py::arg("value"), "Applies one `key = value` setting.")
        .def("validate", &TrainingConfig::validate)
        .def_readwrite("embedding_dim", &TrainingConfig::embedding_dim)
        .def_readwrite("hidden", &TrainingConfig::hidden)
        .def_readwrite("learning_rate", &TrainingConfig::learning_rate)
        .def_readwrite("negatives", &TrainingConfig::negatives)
        .def_readwrite("lambda_", &TrainingConfig::lambda)
        .def_readwrite("batches_per_epoch", &TrainingConfig::batches_per_epoch)
        .def_readwrite("max_epochs", &TrainingConfig::max_epochs)
        .def_readwrite("validation_period", &TrainingConfig::validation_period)
        .def_readwrite("patience", &TrainingConfig::patience)
        .def_readwrite("seed", &TrainingConfig::seed)
        .def_readwrite("use_rules", &TrainingConfig::use_rules)
        .def_readwrite("grounding_free", &TrainingConfig::grounding_free)
        .def_readwrite("threads", &TrainingConfig::threads)
        .def_property(
            "activation", [](const TrainingConfig& c) { return std::string(activation_plan_name(c.activation)); },
            [](TrainingConfig& c, const std::string& v) { c.activation = parse_activation_plan(v); })
        .def(
            "slack",
            [](const TrainingConfig& c, const std::string& kind) {
                const auto k = parse_rule_kind(kind);
                if (!k) throw ArgumentError("unknown rule kind '" + kind + "'");
                return c.slack.get(*k);
            },
            py::arg("kind"))
        .def("__str__", &format_config);

    py::class_<ModelParameters>(m, "Model")
        .def_static("load", &load_checkpoint, py::arg("path"))
        .def("save", [](const ModelParameters& p, const std::filesystem::path& path) { save_checkpoint(p, path); },
             py::arg("path"))
        .def_property_readonly("num_entities", &ModelParameters::num_entities)
        .def_property_readonly("num_relations", &ModelParameters::num_relations)
        .def_property_readonly("embedding_dim", &ModelParameters::embedding_dim)
        .def_property_readonly("feature_width", &ModelParameters::feature_width)
        .def_property_readonly("parameter_count", &ModelParameters::parameter_count)
        .def_property_readonly("entity_embeddings", [](const ModelParameters& p) { return p.entities; })
        .def_property_readonly("relation_vectors", [](const ModelParameters& p) { return p.relations; })
        .def(
            "score", [](const ModelParameters& p, EntityId h, RelationId r, EntityId t) { return score(p, h, r, t); },
            py::arg("head"), py::arg("relation"), py::arg("tail"))
        .def(
            "score_named",
            [](const ModelParameters& p, const KnowledgeGraph& g, const std::string& h, const std::string& r,
               const std::string& t) {
                const auto triple = resolve(g, {h, r, t});
                return score(p, triple.head, triple.relation, triple.tail);
            },
            py::arg("graph"), py::arg("head"), py::arg("relation"), py::arg("tail"));

    m.def(
        "train",
        [](const KnowledgeGraph& g, const std::vector<Rule>& rules, const TrainingConfig& config,
           const std::function<void(std::size_t, double)>& on_epoch) {
            EpochCallback cb;
            if (on_epoch) cb = [&](const EpochRecord& rec) {
                py::gil_scoped_acquire gil;
                on_epoch(rec.epoch, rec.total_loss);
            };
            TrainResult result;
            {
                py::gil_scoped_release release;
                result = train(g, rules, config, cb);
            }
            py::list losses, valid;
            for (const auto& e : result.trace.epochs) losses.append(e.total_loss);
            for (const auto& [epoch, mrr] : result.trace.validations) valid.append(py::make_tuple(epoch, mrr));
            py::dict trace;
            trace["losses"] = losses;
            trace["validations"] = valid;
            trace["best_epoch"] = result.trace.best_epoch;
            return py::make_tuple(std::move(result.params), trace);
        },
        py::arg("graph"), py::arg("rules"), py::arg("config") = TrainingConfig{}, py::arg("on_epoch") = nullptr,
        "Trains a model; returns (model, trace).");

    m.def(
        "evaluate",
        [](const ModelParameters& p, const KnowledgeGraph& g, const py::object& which, std::vector<int> hits_at,
           const std::string& tie, std::size_t threads) {
            const auto triples = split_or_triples(g, which);
            EvalOptions o;
            o.hits_at = hits_at;
            o.tie = parse_tie_policy(tie);
            o.threads = threads;
            RankingReport report;
            {
                py::gil_scoped_release release;
                report = evaluate(p, g, triples, o);
            }
            py::dict d;
            d["raw"] = metric_dict(report.aggregates.raw, hits_at);
            d["filtered"] = metric_dict(report.aggregates.filtered, hits_at);
            d["queries"] = report.aggregates.queries;
            return d;
        },
        py::arg("model"), py::arg("graph"), py::arg("triples") = "test", py::arg("hits_at") = std::vector<int>{1, 3, 10},
        py::arg("tie") = "average", py::arg("threads") = 1,
        "Link-prediction metrics over a split name or a list of (head, relation, tail) names.");

    m.def(
        "ground",
        [](const Rule& rule, const KnowledgeGraph& g, bool grounding_free) {
            py::list out;
            for (const auto& gr : ground_rule(rule, g, grounding_free)) {
                py::list premises;
                for (const auto& t : gr.premise_triples()) premises.append(named(g, t));
                out.append(py::make_tuple(premises, named(g, gr.conclusion)));
            }
            return out;
        },
        py::arg("rule"), py::arg("graph"), py::arg("grounding_free") = true,
        "Groundings as (premises, conclusion) pairs of named triples.");

    m.def(
        "rule_penalties",
        [](const ModelParameters& p, const KnowledgeGraph& g, const std::vector<Rule>& rules) {
            const auto report = rule_satisfaction_report(p, g, rules);
            py::dict d;
            for (const auto kind : kAllRuleKinds) {
                const auto& k = report.at(kind);
                if (k.groundings == 0 && k.grounding_free == 0.0) continue;
                d[py::str(std::string(rule_kind_name(kind)))] = k.sum;
            }
            return d;
        },
        py::arg("model"), py::arg("graph"), py::arg("rules"), "Zero-slack penalty per rule kind.");

    m.def(
        "delta_statistics",
        [](const ModelParameters& p, const std::vector<Rule>& rules) {
            py::list out;
            for (const auto& s : delta_statistics(p, implication_equivalence_pairs(rules))) {
                py::dict d;
                d["kind"] = std::string(rule_kind_name(s.kind));
                d["r1"] = s.r1;
                d["r2"] = s.r2;
                d["mean"] = s.mean;
                d["variance"] = s.variance;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("rules"),
        "Mean and variance of relation-vector differences for implication and equivalence rules.");
}
