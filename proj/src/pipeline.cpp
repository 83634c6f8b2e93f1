#include "scog/pipeline.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>

namespace scog {

using nlohmann::ordered_json;

ModelConfig RunConfig::model_config() const
{
    ModelConfig cfg;
    cfg.window = window;
    cfg.core = core;
    cfg.validate();
    return cfg;
}

AucResult score_distributions(std::span<const VoteDistribution> dists, std::span<const std::string> truth,
                              std::span<const std::string> label_order,
                              const std::optional<std::string>& positive_label)
{
    std::vector<std::string> classes(label_order.begin(), label_order.end());
    for (const auto& t : truth)
        if (std::find(classes.begin(), classes.end(), t) == classes.end())
            classes.push_back(t);

    AucResult out;
    if (classes.size() == 2) {
        const auto positive = positive_label ? *positive_label : classes.back();
        if (std::find(classes.begin(), classes.end(), positive) == classes.end())
            throw InvalidInput("positive label '" + positive + "' is not one of the classes");
        std::vector<double> scores;
        const auto flags = std::make_unique<bool[]>(truth.size());
        for (std::size_t i = 0; i < dists.size(); ++i) {
            scores.push_back(dists[i].prob(positive));
            flags[i] = truth[i] == positive;
        }
        out.method = "binary";
        out.positive_label = positive;
        out.auc = roc_auc_binary(scores, std::span<const bool>(flags.get(), truth.size()));
        return out;
    }
    const auto macro = roc_auc_macro_ovr(dists, truth);
    out.method = "macro-ovr";
    out.auc = macro.macro;
    out.per_class = macro.per_class;
    return out;
}

Model train_model(const LabeledSequenceSet& train, const ModelConfig& config)
{
    Model m(config);
    train_sequences(m, train.records);
    return m;
}

EvalReport evaluate(const Model& model, const LabeledSequenceSet& test, const RunConfig& run,
                    std::span<const std::string> label_order)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> order(label_order.begin(), label_order.end());
    if (order.empty())
        order = model.label_order();
    for (const auto& label : test.label_order)
        if (std::find(order.begin(), order.end(), label) == order.end())
            order.push_back(label);

    const auto sequences = test.sequences();
    const auto truth = test.labels();
    const auto dists = classify_sequences(model, sequences, order, run.classify, run.threads);
    const auto auc = score_distributions(dists, truth, order, run.positive_label);

    EvalReport report;
    report.dataset = test.name;
    report.config = model.config();
    report.auc_method = auc.method;
    report.positive_label = auc.positive_label;
    report.auc = auc.auc;
    report.per_class_auc = auc.per_class;
    report.n_test_samples = test.records.size();
    for (const auto& d : dists)
        report.n_test_windows += d.total();
    report.n_train_windows = model.trained_count();
    report.n_representations = model.size();
    report.n_leaves = model.leaves().size();
    if (run.verbose) {
        report.samples.reserve(dists.size());
        for (std::size_t i = 0; i < dists.size(); ++i)
            report.samples.push_back({truth[i], dists[i]});
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ordered_json config_json(const ModelConfig& config)
{
    ordered_json j;
    j["window"] = config.window.n;
    j["stride"] = config.window.stride;
    j["merge_threshold"] = config.core.merge_threshold;
    j["branch_threshold"] = config.core.branch_threshold;
    if (config.core.max_representations)
        j["max_representations"] = *config.core.max_representations;
    else
        j["max_representations"] = "unbounded";
    j["bits_per_symbol"] = config.codebook.bits_per_symbol();
    return j;
}

ordered_json to_json(const EvalReport& r)
{
    ordered_json j;
    j["dataset"] = r.dataset;
    j["config"] = config_json(r.config);
    j["auc_method"] = r.auc_method;
    if (r.positive_label)
        j["positive_label"] = *r.positive_label;
    j["auc"] = r.auc;
    if (!r.per_class_auc.empty()) {
        ordered_json per = ordered_json::object();
        for (const auto& [label, auc] : r.per_class_auc)
            per[label] = auc;
        j["per_class_auc"] = per;
    }
    j["n_test_samples"] = r.n_test_samples;
    j["n_test_windows"] = r.n_test_windows;
    j["n_train_windows"] = r.n_train_windows;
    j["n_representations"] = r.n_representations;
    j["n_leaves"] = r.n_leaves;
    j["wall_seconds"] = r.wall_seconds;
    if (!r.samples.empty()) {
        ordered_json samples = ordered_json::array();
        for (const auto& s : r.samples) {
            ordered_json row;
            row["truth"] = s.truth;
            row["predicted"] = s.votes.predicted;
            ordered_json counts = ordered_json::object(), probs = ordered_json::object();
            for (std::size_t i = 0; i < s.votes.labels.size(); ++i) {
                counts[s.votes.labels[i]] = s.votes.counts[i];
                probs[s.votes.labels[i]] = s.votes.probs[i];
            }
            row["counts"] = counts;
            row["probs"] = probs;
            samples.push_back(std::move(row));
        }
        j["samples"] = std::move(samples);
    }
    return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

} // namespace scog
