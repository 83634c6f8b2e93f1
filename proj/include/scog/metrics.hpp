#pragma once

#include "scog/episodic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scog {

// Task x model grid of scores in [0, 1]; std::nullopt marks a missing cell.
struct ScoreMatrix {
    std::vector<std::string> tasks;
    std::vector<std::string> models;
    std::vector<std::vector<std::optional<double>>> scores; // [task][model]

    void validate() const; // dimensions agree, scores in [0, 1]
    bool complete() const noexcept;
    std::optional<std::size_t> task_index(std::string_view task) const noexcept;
    std::optional<std::size_t> model_index(std::string_view model) const noexcept;
    void add_task(std::string task, std::vector<std::optional<double>> row);

    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;
};

// CSV with header `task,<model>,...`; empty cells are missing, lines starting
// with '#' are comments.
ScoreMatrix read_score_matrix(std::istream& in);
ScoreMatrix read_score_matrix(const std::filesystem::path& path);
void write_score_matrix(std::ostream& out, const ScoreMatrix& sm);

// Mann-Whitney form of the ROC AUC: (ordered pairs + 0.5 * tied pairs) / (pos * neg).
// Throws UndefinedAuc unless both classes are present.
double roc_auc_binary(std::span<const double> scores, std::span<const bool> positive);

struct MulticlassAuc {
    double macro = 0.0;
    std::vector<std::pair<std::string, double>> per_class; // classes present in the labels
};

// Unweighted mean of one-vs-rest AUCs over the classes that occur in `labels`,
// scoring each sample by its probability for that class.
MulticlassAuc roc_auc_macro_ovr(std::span<const VoteDistribution> dists, std::span<const std::string> labels);

enum class RankMethod {
    Fractional,  // tied scores share the mean of the ranks they span
    Competition, // tied scores share the best rank they span ("1224")
};

struct ModelRank {
    std::string model;
    std::size_t wins = 0;
    double win_fraction = 0.0;
    double average_rank = 0.0;
};

// Ranks models per task by descending score and averages over tasks. The win
// for a task goes to the earliest-listed model holding the maximum.
std::vector<ModelRank> rank_table(const ScoreMatrix& sm, RankMethod method = RankMethod::Fractional);

// Per-task ranks (1 = best) under `method`.
std::vector<double> rank_row(std::span<const double> row, RankMethod method);

struct TaskGroup {
    std::string name;
    std::vector<std::string> members;
};

// Replaces each group's member rows with one row holding their unweighted mean,
// placed where the group's first member sat. A cell is missing if any member's is.
ScoreMatrix group_average(const ScoreMatrix& sm, std::span<const TaskGroup> groups);

struct ModelSummary {
    std::string model;
    double mean = 0.0;
    double stddev = 0.0; // population
};

std::vector<ModelSummary> summary_stats(const ScoreMatrix& sm);

// Plot-ready rows: `model,wins,win_fraction,average_rank` and `model,mean,std`.
void write_rank_csv(std::ostream& out, std::span<const ModelRank> ranks);
void write_summary_csv(std::ostream& out, std::span<const ModelSummary> summary);

} // namespace scog
