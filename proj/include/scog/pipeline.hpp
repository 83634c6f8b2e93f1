#pragma once

#include "scog/core.hpp"
#include "scog/datasets.hpp"
#include "scog/episodic.hpp"
#include "scog/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace scog {

struct RunConfig {
    WindowConfig window;
    CoreConfig core;
    ClassifyOptions classify;
    std::uint64_t seed = 7;
    std::optional<std::string> positive_label;
    std::filesystem::path out_dir;
    bool verbose = false;
    unsigned threads = 0;

    ModelConfig model_config() const;
};

struct SampleResult {
    std::string truth;
    VoteDistribution votes;
};

struct EvalReport {
    std::string dataset;
    ModelConfig config;
    std::string auc_method; // "binary" or "macro-ovr"
    std::optional<std::string> positive_label;
    double auc = 0.0;
    std::vector<std::pair<std::string, double>> per_class_auc;
    std::size_t n_test_samples = 0;
    std::uint64_t n_test_windows = 0;
    std::uint64_t n_train_windows = 0;
    std::size_t n_representations = 0;
    std::size_t n_leaves = 0;
    double wall_seconds = 0.0;
    std::vector<SampleResult> samples; // filled in verbose mode
};

struct AucResult {
    std::string method;
    std::optional<std::string> positive_label;
    double auc = 0.0;
    std::vector<std::pair<std::string, double>> per_class;
};

// Binary AUC on the positive class's probability when exactly two classes are
// known, macro one-vs-rest otherwise. Without an explicit positive label the
// last label of `label_order` is positive.
AucResult score_distributions(std::span<const VoteDistribution> dists, std::span<const std::string> truth,
                              std::span<const std::string> label_order,
                              const std::optional<std::string>& positive_label);

// Fresh model trained on every record of `train`, in file order.
Model train_model(const LabeledSequenceSet& train, const ModelConfig& config);

// Classifies `test` and scores it. `label_order` defaults to the model's.
EvalReport evaluate(const Model& model, const LabeledSequenceSet& test, const RunConfig& run,
                    std::span<const std::string> label_order = {});

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json config_json(const ModelConfig& config);

// Writes `doc` followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

} // namespace scog
