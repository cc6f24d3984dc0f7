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

// Command-line front end: generate, train, evaluate, ground, diagnose.
//
// Exit codes: 0 ok, 1 usage, 2 data/format, 3 training divergence.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "logicenn/checkpoint.hpp"
#include "logicenn/errors.hpp"
#include "logicenn/evaluator.hpp"
#include "logicenn/family.hpp"
#include "logicenn/kg.hpp"
#include "logicenn/rule.hpp"
#include "logicenn/rules_engine.hpp"
#include "logicenn/trainer.hpp"

namespace fs = std::filesystem;
using namespace logicenn;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kTrain = 3 };

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

fs::path sidecar(const fs::path& ckpt, const std::string& suffix) {
    return fs::path(ckpt.string() + suffix);
}

void write_vocab(const fs::path& path, const Vocabulary& vocab) {
    std::string text;
    for (const auto& name : vocab.names()) text += name + '\n';
    write_file(path, text);
}

void read_vocab(const fs::path& path, Vocabulary& vocab) {
    const auto text = read_file(path);
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        vocab.intern(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
    }
}

/// Graph whose vocabularies match a checkpoint's sidecar files.
KnowledgeGraph graph_for_checkpoint(const fs::path& ckpt, const ModelParameters& params) {
    KnowledgeGraph graph;
    read_vocab(sidecar(ckpt, ".entities"), graph.entities());
    read_vocab(sidecar(ckpt, ".relations"), graph.relations());
    if (graph.num_entities() != params.num_entities() || graph.num_relations() != params.num_relations())
        throw DataError("vocabulary sidecars do not match checkpoint dimensions");
    return graph;
}

std::size_t default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct GenerateArgs {
    int families = 1;
    std::uint64_t seed = 0;
    std::string out;
    double holdout = FamilyOptions{}.holdout_fraction;
    bool basic = false;
};

int run_generate(const GenerateArgs& a) {
    FamilyOptions options;
    options.num_families = a.families;
    options.seed = a.seed;
    options.holdout_fraction = a.holdout;
    options.extended_relations = !a.basic;
    const auto kg = generate_family_kg(options);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_triples(dir / "train.txt", kg.graph, Split::Train);
    write_triples(dir / "valid.txt", kg.graph, Split::Valid);
    write_triples(dir / "test.txt", kg.graph, Split::Test);
    write_rules(dir / "rules.txt", kg.rules, kg.graph);
    std::cout << "entities\t" << kg.graph.num_entities() << "\nrelations\t" << kg.graph.num_relations()
              << "\ntrain\t" << kg.graph.triples(Split::Train).size() << "\nvalid\t"
              << kg.graph.triples(Split::Valid).size() << "\ntest\t" << kg.graph.triples(Split::Test).size()
              << "\nrules\t" << kg.rules.size() << '\n';
    return kOk;
}

struct TrainArgs {
    std::string train, valid, test, rules, config, out, preset;
    std::map<std::string, std::string> overrides;
    bool no_rules = false;
    bool quiet = false;
};

int run_train(const TrainArgs& a) {
    TrainingConfig config;
    config.threads = default_threads();
    if (!a.preset.empty()) apply_config_entry(config, "preset", a.preset);
    if (!a.config.empty()) config = load_config(a.config, config);
    for (const auto& [key, value] : a.overrides) apply_config_entry(config, key, value);
    if (a.no_rules) config.use_rules = false;
    config.validate();

    KnowledgeGraph graph;
    const auto tr = load_triples(a.train, graph, Split::Train);
    if (tr.duplicates) std::cerr << "warning: " << tr.duplicates << " duplicate train triples dropped\n";
    if (!a.valid.empty()) {
        const auto rep = load_triples(a.valid, graph, Split::Valid);
        if (rep.unseen_entities)
            std::cerr << "warning: " << rep.unseen_entities << " valid entities not seen in train\n";
    }
    if (!a.test.empty()) {
        const auto rep = load_triples(a.test, graph, Split::Test);
        if (rep.unseen_entities)
            std::cerr << "warning: " << rep.unseen_entities << " test entities not seen in train\n";
    }
    std::vector<Rule> rules;
    if (!a.rules.empty() && config.use_rules) {
        auto loaded = load_rules(a.rules, graph, config.min_rule_confidence);
        if (loaded.skipped_unknown)
            std::cerr << "warning: " << loaded.skipped_unknown << " rules reference unknown relations\n";
        rules = std::move(loaded.rules);
    }

    const auto result = train(graph, rules, config, [&](const EpochRecord& e) {
        if (!a.quiet && (e.valid_mrr >= 0 || e.epoch == 1))
            std::cerr << "epoch " << e.epoch << " loss " << e.total_loss
                      << (e.valid_mrr >= 0 ? " valid_mrr " + std::to_string(e.valid_mrr) : "") << '\n';
    });
    if (result.trace.kept_collisions)
        std::cerr << "note: " << result.trace.kept_collisions << " negatives kept after collision retries\n";

    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_checkpoint(result.params, out);
    write_vocab(sidecar(out, ".entities"), graph.entities());
    write_vocab(sidecar(out, ".relations"), graph.relations());
    write_file(sidecar(out, ".trace.tsv"), format_trace(result.trace));
    write_file(sidecar(out, ".meta"), format_config(config));
    std::cout << "best_epoch\t" << result.trace.best_epoch << "\nepochs\t" << result.trace.epochs.size() << '\n';
    return kOk;
}

std::vector<int> parse_hits(const std::string& text) {
    std::vector<int> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int k = std::stoi(item, &used);
            if (used != item.size() || k < 1) throw std::invalid_argument(item);
            ks.push_back(k);
        } catch (const std::exception&) {
            throw ArgumentError("bad --hits entry '" + item + "'");
        }
    }
    return ks;
}

struct EvaluateArgs {
    std::string ckpt, test, ranks, hits = "1,3,10", tie = "average";
    std::vector<std::string> filter_with;
    std::size_t threads = default_threads();
};

int run_evaluate(const EvaluateArgs& a) {
    const auto params = load_checkpoint(a.ckpt);
    auto graph = graph_for_checkpoint(a.ckpt, params);
    const auto vocab_entities = graph.num_entities();
    const auto vocab_relations = graph.num_relations();
    load_triples(a.test, graph, Split::Test);
    for (const auto& f : a.filter_with) load_triples(f, graph, Split::Train);

    std::vector<Triple> queries;
    std::size_t skipped = 0;
    for (const auto& t : graph.triples(Split::Test)) {
        if (static_cast<std::size_t>(t.head) < vocab_entities && static_cast<std::size_t>(t.tail) < vocab_entities &&
            static_cast<std::size_t>(t.relation) < vocab_relations)
            queries.push_back(t);
        else
            ++skipped;
    }
    if (skipped) std::cerr << "warning: " << skipped << " test triples use names unknown to the checkpoint\n";
    if (queries.empty()) throw DataError("no evaluable test triples");

    EvalOptions options;
    options.hits_at = parse_hits(a.hits);
    options.tie = parse_tie_policy(a.tie);
    options.threads = a.threads;
    const auto report = evaluate(params, graph, queries, options);
    std::cout << format_metrics(report.aggregates);
    if (!a.ranks.empty()) write_file(a.ranks, format_rank_dump(report, graph));
    return kOk;
}

struct GroundArgs {
    std::string train, rules, out;
    bool grounding_free = false;
    double min_confidence = 0.8;
};

int run_ground(const GroundArgs& a) {
    KnowledgeGraph graph;
    load_triples(a.train, graph, Split::Train);
    const auto loaded = load_rules(a.rules, graph, a.min_confidence);
    if (loaded.skipped_unknown)
        std::cerr << "warning: " << loaded.skipped_unknown << " rules reference unknown relations\n";
    std::string text = "rule\tkind\tconclusion_head\tconclusion_rel\tconclusion_tail\tpremises\n";
    auto triple_cols = [&](const Triple& t) {
        return graph.entities().name(t.head) + '\t' + graph.relations().name(t.relation) + '\t' +
               graph.entities().name(t.tail);
    };
    std::array<std::size_t, kNumRuleKinds> counts{};
    for (std::size_t i = 0; i < loaded.rules.size(); ++i) {
        for (const auto& g : ground_rule(loaded.rules[i], graph, a.grounding_free)) {
            text += std::to_string(i) + '\t' + std::string(rule_kind_name(g.kind)) + '\t' + triple_cols(g.conclusion);
            for (const auto& p : g.premise_triples()) text += '\t' + triple_cols(p);
            text += '\n';
            ++counts[static_cast<std::size_t>(g.kind)];
        }
    }
    write_file(a.out, text);
    for (std::size_t k = 0; k < kNumRuleKinds; ++k)
        if (counts[k]) std::cout << rule_kind_name(kAllRuleKinds[k]) << '\t' << counts[k] << '\n';
    return kOk;
}

struct DiagnoseArgs {
    std::string ckpt, rules, out, train;
    std::size_t sample_cap = 0;
    std::uint64_t seed = 0;
};

int run_diagnose(const DiagnoseArgs& a) {
    const auto params = load_checkpoint(a.ckpt);
    auto graph = graph_for_checkpoint(a.ckpt, params);
    if (!a.train.empty()) load_triples(a.train, graph, Split::Train);

    TrainingConfig config;
    const auto meta_path = sidecar(a.ckpt, ".meta");
    if (fs::exists(meta_path)) config = load_config(meta_path, config);
    const auto loaded = load_rules(a.rules, graph, config.min_rule_confidence);

    SatisfactionOptions options;
    options.sample_cap = a.sample_cap;
    options.seed = a.seed;
    const auto report = rule_satisfaction_report(params, graph, loaded.rules, options);
    write_file(a.out, format_delta_table(report.deltas));

    // The regularizer exactly as training weighed it, over all groundings.
    const double lambda = config.use_rules ? config.lambda : 0.0;
    const bool grounding_free = config.grounding_free && params.final_features_nonnegative();
    const auto prepared = prepare_rules(loaded.rules, graph, grounding_free);
    const auto reg = accumulate_regularizer(prepared, params, config.slack, lambda, 0, nullptr, nullptr);

    std::cout << format_penalty_report(report);
    std::cout << "regularizer\t" << reg.total << "\nlambda\t" << lambda << "\nlambda_term\t" << lambda * reg.total
              << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LogicENN knowledge-graph embeddings with logical rules"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic family graph and its rules");
    generate->add_option("--families", gen.families, "Number of families")->required();
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--out", gen.out, "Output directory")->required();
    generate->add_option("--holdout", gen.holdout, "Fraction of rule-derived facts withheld");
    generate->add_flag("--basic", gen.basic, "Only the five core relations (no marriedTo/ancestorOf)");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    train_cmd->add_option("--train", tr.train, "Train triples")->required();
    train_cmd->add_option("--valid", tr.valid, "Validation triples (early stopping on filtered MRR)");
    train_cmd->add_option("--test", tr.test, "Test triples (only interned so their entities get embeddings)");
    train_cmd->add_option("--rules", tr.rules, "Rule file");
    train_cmd->add_option("--config", tr.config, "key = value config file; flags override it");
    train_cmd->add_option("--preset", tr.preset, "Start from a preset (desk, fb15k-relu, fb15k-sigmoid, wn18-relu, wn18-sigmoid)");
    train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
    train_cmd->add_flag("--no-rules", tr.no_rules, "Ignore rules (lambda term is zero)");
    train_cmd->add_flag("--quiet", tr.quiet, "No progress output");
    std::map<std::string, std::pair<std::string, std::string>> passthrough = {
        {"--seed", {"seed", "Random seed"}},
        {"--epochs", {"epochs", "Maximum epochs"}},
        {"--lambda", {"lambda", "Rule regularizer weight"}},
        {"--lr", {"learning_rate", "Adam learning rate"}},
        {"--dim", {"dim", "Entity embedding dimension"}},
        {"--hidden", {"hidden", "Comma-separated hidden widths"}},
        {"--activation", {"activation", "relu | sigmoid (sigmoid keeps ReLU on the last layer)"}},
        {"--negatives", {"negatives", "Negatives per positive"}},
        {"--temperature", {"temperature", "Self-adversarial temperature"}},
        {"--batches", {"batches", "Mini-batches per epoch"}},
        {"--validation-period", {"validation_period", "Epochs between validations"}},
        {"--patience", {"patience", "Validations without improvement before stopping"}},
        {"--min-confidence", {"min_confidence", "Drop rules below this confidence"}},
        {"--threads", {"threads", "Worker threads for validation ranking"}},
    };
    const TrainingConfig defaults;
    std::map<std::string, std::string> default_values;
    {
        std::istringstream in(format_config(defaults));
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find(" = ");
            default_values[line.substr(0, eq)] = line.substr(eq + 3);
        }
        default_values["threads"] = std::to_string(default_threads());
    }
    std::map<std::string, std::string> passthrough_values;
    for (const auto& [flag, entry] : passthrough) {
        passthrough_values[entry.first] = default_values[entry.first];
        train_cmd->add_option(flag, passthrough_values[entry.first], entry.second);
    }
    bool grounding_free = defaults.grounding_free;
    auto* grounding_free_opt = train_cmd->add_flag(
        "--grounding-free,!--no-grounding-free", grounding_free,
        "Relation-vector penalties for implication/equivalence instead of groundings");

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Link-prediction metrics for a checkpoint");
    evaluate_cmd->add_option("--ckpt", ev.ckpt, "Checkpoint path")->required();
    evaluate_cmd->add_option("--test", ev.test, "Query triples")->required();
    evaluate_cmd->add_option("--filter-with", ev.filter_with, "Known-triple files for the filtered protocol")
        ->delimiter(',');
    evaluate_cmd->add_option("--hits", ev.hits, "Comma-separated k values for Hits@k");
    evaluate_cmd->add_option("--tie", ev.tie, "Tie policy: average | pessimistic");
    evaluate_cmd->add_option("--threads", ev.threads, "Worker threads");
    evaluate_cmd->add_option("--ranks", ev.ranks, "Write per-query ranks to this file");

    GroundArgs gr;
    auto* ground_cmd = app.add_subcommand("ground", "Dump rule groundings");
    ground_cmd->add_option("--train", gr.train, "Train triples")->required();
    ground_cmd->add_option("--rules", gr.rules, "Rule file")->required();
    ground_cmd->add_option("--out", gr.out, "Output TSV")->required();
    ground_cmd->add_flag("--grounding-free", gr.grounding_free, "Skip implication/equivalence groundings");
    ground_cmd->add_option("--min-confidence", gr.min_confidence, "Drop rules below this confidence");

    DiagnoseArgs dg;
    auto* diagnose_cmd = app.add_subcommand("diagnose", "Rule penalties and relation-difference statistics");
    diagnose_cmd->add_option("--ckpt", dg.ckpt, "Checkpoint path")->required();
    diagnose_cmd->add_option("--rules", dg.rules, "Rule file")->required();
    diagnose_cmd->add_option("--out", dg.out, "Delta statistics TSV")->required();
    diagnose_cmd->add_option("--train", dg.train, "Train triples (needed for grounded penalties)");
    diagnose_cmd->add_option("--sample-cap", dg.sample_cap, "Groundings per rule to evaluate (0 = all)");
    diagnose_cmd->add_option("--seed", dg.seed, "Sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[usage]: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*train_cmd) {
            for (const auto& [flag, entry] : passthrough)
                if (train_cmd->count(flag) > 0) tr.overrides[entry.first] = passthrough_values[entry.first];
            if (grounding_free_opt->count() > 0) tr.overrides["grounding_free"] = grounding_free ? "true" : "false";
            return run_train(tr);
        }
        if (*evaluate_cmd) return run_evaluate(ev);
        if (*ground_cmd) return run_ground(gr);
        if (*diagnose_cmd) return run_diagnose(dg);
    } catch (const TrainingError& e) {
        std::cerr << "error[train]: " << e.what() << '\n';
        return kTrain;
    } catch (const ConfigError& e) {
        std::cerr << "error[usage]: " << e.what() << '\n';
        return kUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "error[usage]: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error[data]: " << e.what() << '\n';
        return kData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error[data]: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
