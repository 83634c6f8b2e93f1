#include "scog/metrics.hpp"

#include "scog/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>

namespace scog {

// --- ScoreMatrix ------------------------------------------------------------

void ScoreMatrix::validate() const
{
    if (scores.size() != tasks.size())
        throw InvalidInput("score matrix: row count does not match task list");
    for (std::size_t t = 0; t < scores.size(); ++t) {
        if (scores[t].size() != models.size())
            throw InvalidInput("score matrix: row '" + tasks[t] + "' has the wrong number of cells");
        for (const auto& cell : scores[t])
            if (cell && !(*cell >= 0.0 && *cell <= 1.0))
                throw InvalidInput("score matrix: score outside [0, 1] in row '" + tasks[t] + "'");
    }
}

bool ScoreMatrix::complete() const noexcept
{
    for (const auto& row : scores)
        for (const auto& cell : row)
            if (!cell)
                return false;
    return true;
}

std::optional<std::size_t> ScoreMatrix::task_index(std::string_view task) const noexcept
{
    const auto it = std::find(tasks.begin(), tasks.end(), task);
    if (it == tasks.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - tasks.begin());
}

std::optional<std::size_t> ScoreMatrix::model_index(std::string_view model) const noexcept
{
    const auto it = std::find(models.begin(), models.end(), model);
    if (it == models.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - models.begin());
}

void ScoreMatrix::add_task(std::string task, std::vector<std::optional<double>> row)
{
    if (row.size() != models.size())
        throw InvalidInput("score matrix: row '" + task + "' has the wrong number of cells");
    tasks.push_back(std::move(task));
    scores.push_back(std::move(row));
}

ScoreMatrix read_score_matrix(std::istream& in)
{
    ScoreMatrix sm;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto fields = detail::split(line, ',');
        if (!header) {
            if (fields.size() < 2 || fields[0] != "task")
                throw DataError("score matrix line " + std::to_string(line_no) + ": expected header 'task,<model>...'");
            sm.models.assign(fields.begin() + 1, fields.end());
            header = true;
            continue;
        }
        if (fields.size() != sm.models.size() + 1)
            throw DataError("score matrix line " + std::to_string(line_no) + ": expected " +
                            std::to_string(sm.models.size() + 1) + " fields");
        std::vector<std::optional<double>> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                row.emplace_back();
                continue;
            }
            const auto v = detail::parse_number<double>(fields[i]);
            if (!v)
                throw DataError("score matrix line " + std::to_string(line_no) + ": bad score '" + fields[i] + "'");
            row.emplace_back(*v);
        }
        sm.tasks.push_back(fields[0]);
        sm.scores.push_back(std::move(row));
    }
    if (!header)
        throw DataError("score matrix: missing header");
    try {
        sm.validate();
    } catch (const InvalidInput& e) {
        throw DataError(e.what());
    }
    return sm;
}

ScoreMatrix read_score_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open score matrix '" + path.string() + "'");
    return read_score_matrix(in);
}

void write_score_matrix(std::ostream& out, const ScoreMatrix& sm)
{
    out << "task";
    for (const auto& m : sm.models)
        out << ',' << m;
    out << '\n';
    for (std::size_t t = 0; t < sm.tasks.size(); ++t) {
        out << sm.tasks[t];
        for (const auto& cell : sm.scores[t]) {
            out << ',';
            if (cell)
                out << detail::format_double(*cell);
        }
        out << '\n';
    }
}

// --- AUC --------------------------------------------------------------------

double roc_auc_binary(std::span<const double> scores, std::span<const bool> positive)
{
    if (scores.size() != positive.size())
        throw InvalidInput("auc: score and label counts differ");
    const auto n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
    const auto n_neg = positive.size() - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedAuc("auc needs at least one positive and one negative sample");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of positive ranks with tied blocks sharing their mean rank. Twice
    // the rank sum is an integer, so the numerator below is exact.
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]])
            ++j;
        const std::uint64_t twice_mean_rank = (i + 1) + j; // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            if (positive[order[k]])
                twice_rank_sum += twice_mean_rank;
        i = j;
    }
    const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MulticlassAuc roc_auc_macro_ovr(std::span<const VoteDistribution> dists, std::span<const std::string> labels)
{
    if (dists.size() != labels.size())
        throw InvalidInput("auc: distribution and label counts differ");

    std::vector<std::string> classes;
    for (const auto& d : dists)
        for (const auto& c : d.labels)
            if (std::find(classes.begin(), classes.end(), c) == classes.end())
                classes.push_back(c);
    for (const auto& c : labels)
        if (std::find(classes.begin(), classes.end(), c) == classes.end())
            classes.push_back(c);

    MulticlassAuc out;
    std::vector<double> scores(dists.size());
    // std::vector<bool> cannot back a span, hence the plain array.
    const auto is_class = std::make_unique<bool[]>(labels.size());
    const std::span<const bool> flags(is_class.get(), labels.size());
    for (const auto& c : classes) {
        const auto present = std::count(labels.begin(), labels.end(), c);
        if (present == 0)
            continue;
        if (static_cast<std::size_t>(present) == labels.size())
            throw UndefinedAuc("auc needs at least two classes in the labels");
        for (std::size_t i = 0; i < dists.size(); ++i) {
            scores[i] = dists[i].prob(c);
            is_class[i] = labels[i] == c;
        }
        out.per_class.emplace_back(c, roc_auc_binary(scores, flags));
    }
    if (out.per_class.empty())
        throw UndefinedAuc("auc needs labelled samples");
    double sum = 0.0;
    for (const auto& [c, auc] : out.per_class)
        sum += auc;
    out.macro = sum / static_cast<double>(out.per_class.size());
    return out;
}

// --- rank analytics ---------------------------------------------------------

std::vector<double> rank_row(std::span<const double> row, RankMethod method)
{
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<double> ranks(row.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && row[order[j]] == row[order[i]])
            ++j;
        const double shared = method == RankMethod::Fractional ? (static_cast<double>(i + 1 + j)) / 2.0
                                                               : static_cast<double>(i + 1);
        for (std::size_t k = i; k < j; ++k)
            ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

static std::vector<double> complete_row(const ScoreMatrix& sm, std::size_t t)
{
    std::vector<double> row;
    row.reserve(sm.models.size());
    for (const auto& cell : sm.scores[t]) {
        if (!cell)
            throw IncompleteMatrix("score matrix has a missing cell in row '" + sm.tasks[t] + "'");
        row.push_back(*cell);
    }
    return row;
}

std::vector<ModelRank> rank_table(const ScoreMatrix& sm, RankMethod method)
{
    sm.validate();
    if (sm.tasks.empty() || sm.models.empty())
        throw IncompleteMatrix("score matrix is empty");
    std::vector<ModelRank> out(sm.models.size());
    for (std::size_t m = 0; m < sm.models.size(); ++m)
        out[m].model = sm.models[m];

    for (std::size_t t = 0; t < sm.tasks.size(); ++t) {
        const auto row = complete_row(sm, t);
        const auto ranks = rank_row(row, method);
        for (std::size_t m = 0; m < row.size(); ++m)
            out[m].average_rank += ranks[m];
        // max_element returns the first maximum, i.e. the earliest-listed model.
        ++out[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())].wins;
    }
    const auto tasks = static_cast<double>(sm.tasks.size());
    for (auto& r : out) {
        r.average_rank /= tasks;
        r.win_fraction = static_cast<double>(r.wins) / tasks;
    }
    return out;
}

ScoreMatrix group_average(const ScoreMatrix& sm, std::span<const TaskGroup> groups)
{
    sm.validate();
    std::vector<std::optional<std::size_t>> group_of(sm.tasks.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].members.empty())
            throw IncompleteGroup("group '" + groups[g].name + "' has no members");
        for (const auto& member : groups[g].members) {
            const auto t = sm.task_index(member);
            if (!t)
                throw IncompleteGroup("group '" + groups[g].name + "' member '" + member + "' is not in the matrix");
            if (group_of[*t])
                throw IncompleteGroup("task '" + member + "' belongs to more than one group");
            group_of[*t] = g;
        }
    }

    ScoreMatrix out;
    out.models = sm.models;
    std::vector<bool> emitted(groups.size(), false);
    for (std::size_t t = 0; t < sm.tasks.size(); ++t) {
        if (!group_of[t]) {
            out.add_task(sm.tasks[t], sm.scores[t]);
            continue;
        }
        const auto g = *group_of[t];
        if (emitted[g])
            continue;
        emitted[g] = true;
        std::vector<std::optional<double>> row(sm.models.size());
        for (std::size_t m = 0; m < sm.models.size(); ++m) {
            double sum = 0.0;
            bool missing = false;
            for (const auto& member : groups[g].members) {
                const auto& cell = sm.scores[*sm.task_index(member)][m];
                if (!cell) {
                    missing = true;
                    break;
                }
                sum += *cell;
            }
            if (!missing)
                row[m] = sum / static_cast<double>(groups[g].members.size());
        }
        out.add_task(groups[g].name, std::move(row));
    }
    return out;
}

std::vector<ModelSummary> summary_stats(const ScoreMatrix& sm)
{
    sm.validate();
    if (sm.tasks.empty() || sm.models.empty())
        throw IncompleteMatrix("score matrix is empty");
    std::vector<ModelSummary> out;
    for (std::size_t m = 0; m < sm.models.size(); ++m) {
        std::vector<double> column;
        for (std::size_t t = 0; t < sm.tasks.size(); ++t) {
            const auto& cell = sm.scores[t][m];
            if (!cell)
                throw IncompleteMatrix("missing score for model '" + sm.models[m] + "' on '" + sm.tasks[t] + "'");
            column.push_back(*cell);
        }
        const auto n = static_cast<double>(column.size());
        const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
        double ss = 0.0;
        for (auto v : column)
            ss += (v - mean) * (v - mean);
        out.push_back({sm.models[m], mean, std::sqrt(ss / n)});
    }
    return out;
}

void write_rank_csv(std::ostream& out, std::span<const ModelRank> ranks)
{
    out << "model,wins,win_fraction,average_rank\n";
    for (const auto& r : ranks)
        out << r.model << ',' << r.wins << ',' << detail::format_double(r.win_fraction) << ','
            << detail::format_double(r.average_rank) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const ModelSummary> summary)
{
    out << "model,mean,std\n";
    for (const auto& s : summary)
        out << s.model << ',' << detail::format_double(s.mean) << ',' << detail::format_double(s.stddev) << '\n';
}

} // namespace scog
