#include "scog/cli.hpp"

#include "scog/baselines.hpp"
#include "scog/error.hpp"
#include "scog/model_io.hpp"
#include "scog/pipeline.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#ifndef SCOG_DEFAULT_FIXTURE_DIR
#define SCOG_DEFAULT_FIXTURE_DIR "data/fixtures"
#endif

namespace scog::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* out_dir_env = "SCOG_OUT_DIR";
constexpr const char* fixture_dir_env = "SCOG_FIXTURE_DIR";
constexpr const char* run_column = "SynthCog-run";
constexpr const char* reported_column = "SynthCog";

int exit_code(const Error& e)
{
    return e.kind() == ErrorKind::Capacity ? CapacityFailure : DataFailure;
}

fs::path default_out_dir()
{
    if (const char* env = std::getenv(out_dir_env); env != nullptr && *env != '\0')
        return env;
    return "scog-out";
}

fs::path default_fixture_dir()
{
    if (const char* env = std::getenv(fixture_dir_env); env != nullptr && *env != '\0')
        return env;
    return SCOG_DEFAULT_FIXTURE_DIR;
}

// Options shared by every command that builds or checks a model configuration.
struct ConfigFlags {
    std::uint32_t window = 5;
    std::uint32_t stride = 1;
    double merge_threshold = CoreConfig{}.merge_threshold;
    double branch_threshold = CoreConfig{}.branch_threshold;
    std::string max_reps = std::to_string(CoreConfig::default_max_representations);
    std::string out;
    std::optional<std::string> positive_label;
    std::string harmonization = "majority";
    std::string trigger_label;
    bool weighted = false;
    bool verbose = false;
    unsigned threads = 0;

    CLI::Option* window_opt = nullptr;
    CLI::Option* stride_opt = nullptr;
    CLI::Option* merge_opt = nullptr;
    CLI::Option* branch_opt = nullptr;
    CLI::Option* max_reps_opt = nullptr;

    void add_model_flags(CLI::App& app)
    {
        window_opt = app.add_option("--window", window, "window length n")->check(CLI::PositiveNumber);
        stride_opt = app.add_option("--stride", stride, "window stride")->check(CLI::PositiveNumber);
        merge_opt = app.add_option("--merge-threshold", merge_threshold, "similarity at which an input merges into a leaf")
                        ->check(CLI::Range(0.0, 1.0));
        branch_opt = app.add_option("--branch-threshold", branch_threshold,
                                    "similarity at which a new leaf joins the best leaf's parent")
                         ->check(CLI::Range(0.0, 1.0));
        max_reps_opt = app.add_option("--max-reps", max_reps, "representation limit, or 'unbounded'");
    }

    void add_output_flags(CLI::App& app)
    {
        app.add_option("--out", out, std::string("output directory (default $") + out_dir_env + " or ./scog-out)");
    }

    void add_eval_flags(CLI::App& app)
    {
        app.add_option("--positive-label", positive_label, "positive class for binary AUC");
        app.add_flag("--verbose", verbose, "include per-sample vote distributions in reports");
        app.add_option("--harmonize", harmonization, "majority | any-trigger")
            ->check(CLI::IsMember({"majority", "any-trigger"}));
        app.add_option("--trigger-label", trigger_label, "class selected by any-trigger harmonization");
        app.add_flag("--weighted", weighted, "weight window votes by match similarity");
        app.add_option("--threads", threads, "evaluation threads (0 = all cores)");
    }

    std::optional<std::uint64_t> parse_max_reps() const
    {
        if (max_reps == "unbounded")
            return std::nullopt;
        const auto v = detail::parse_number<std::uint64_t>(max_reps);
        if (!v || *v == 0)
            throw InvalidInput("--max-reps must be a positive integer or 'unbounded'");
        return *v;
    }

    RunConfig run_config() const
    {
        RunConfig run;
        run.window = {window, stride};
        run.core.merge_threshold = merge_threshold;
        run.core.branch_threshold = branch_threshold;
        run.core.max_representations = parse_max_reps();
        run.positive_label = positive_label;
        run.out_dir = out.empty() ? default_out_dir() : fs::path(out);
        run.verbose = verbose;
        run.threads = threads;
        run.classify.similarity_weighted = weighted;
        if (harmonization == "any-trigger") {
            if (trigger_label.empty())
                throw InvalidInput("--harmonize any-trigger needs --trigger-label");
            run.classify.mode = Harmonization::AnyTrigger;
            run.classify.trigger_label = trigger_label;
        }
        return run;
    }

    // Flags given explicitly must agree with the model they are applied to.
    void check_against(const ModelConfig& cfg) const
    {
        auto mismatch = [](const std::string& what, const std::string& given, const std::string& stored) {
            throw ConfigMismatch(what + " " + given + " does not match the model's " + stored);
        };
        if (window_opt->count() > 0 && window != cfg.window.n)
            mismatch("--window", std::to_string(window), std::to_string(cfg.window.n));
        if (stride_opt->count() > 0 && stride != cfg.window.stride)
            mismatch("--stride", std::to_string(stride), std::to_string(cfg.window.stride));
        if (merge_opt->count() > 0 && merge_threshold != cfg.core.merge_threshold)
            mismatch("--merge-threshold", detail::format_double(merge_threshold),
                     detail::format_double(cfg.core.merge_threshold));
        if (branch_opt->count() > 0 && branch_threshold != cfg.core.branch_threshold)
            mismatch("--branch-threshold", detail::format_double(branch_threshold),
                     detail::format_double(cfg.core.branch_threshold));
        if (max_reps_opt->count() > 0 && parse_max_reps() != cfg.core.max_representations)
            mismatch("--max-reps", max_reps, "limit");
    }
};

std::vector<std::string> effective_label_order(const DatasetManifest& manifest, const Model& model)
{
    return manifest.label_order.empty() ? model.label_order() : manifest.label_order;
}

std::optional<std::string> positive_for(const RunConfig& run, const DatasetManifest& manifest)
{
    return run.positive_label ? run.positive_label : manifest.positive_label;
}

ordered_json train_summary(const DatasetManifest& manifest, const LabeledSequenceSet& train, const Model& model,
                           double seconds)
{
    ordered_json j;
    j["dataset"] = manifest.name;
    j["config"] = config_json(model.config());
    j["n_train_samples"] = train.records.size();
    j["n_train_windows"] = model.trained_count();
    j["n_representations"] = model.size();
    j["n_leaves"] = model.leaves().size();
    j["n_roots"] = model.roots().size();
    j["labels"] = model.label_order();
    j["wall_seconds"] = seconds;
    return j;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_ranks(std::ostream& out, std::span<const ModelRank> ranks)
{
    out << std::left << std::setw(16) << "model" << std::right << std::setw(6) << "wins" << std::setw(10) << "win%"
        << std::setw(10) << "avg_rank" << '\n';
    for (const auto& r : ranks)
        out << std::left << std::setw(16) << r.model << std::right << std::setw(6) << r.wins << std::setw(10)
            << std::fixed << std::setprecision(2) << 100.0 * r.win_fraction << std::setw(10) << std::setprecision(3)
            << r.average_rank << '\n';
    out << std::defaultfloat;
}

void print_summary(std::ostream& out, std::span<const ModelSummary> summary)
{
    out << std::left << std::setw(16) << "model" << std::right << std::setw(10) << "mean" << std::setw(10) << "std"
        << '\n';
    for (const auto& s : summary)
        out << std::left << std::setw(16) << s.model << std::right << std::fixed << std::setprecision(4)
            << std::setw(10) << s.mean << std::setw(10) << s.stddev << '\n';
    out << std::defaultfloat;
}

template <class Writer>
void write_text(const fs::path& path, Writer&& writer)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw DataError("cannot write '" + path.string() + "'");
    writer(file);
}

// Rank and summary analytics over a complete matrix, printed and optionally saved.
void analyse(const ScoreMatrix& sm, RankMethod method, std::ostream& out, const std::optional<fs::path>& dir)
{
    const auto ranks = rank_table(sm, method);
    const auto summary = summary_stats(sm);
    out << "tasks: " << sm.tasks.size() << "\n";
    print_ranks(out, ranks);
    print_summary(out, summary);
    if (dir) {
        write_text(*dir / "ranks.csv", [&](std::ostream& f) { write_rank_csv(f, ranks); });
        write_text(*dir / "summary.csv", [&](std::ostream& f) { write_summary_csv(f, summary); });
    }
}

RankMethod parse_rank_method(const std::string& name)
{
    return name == "competition" ? RankMethod::Competition : RankMethod::Fractional;
}

// --- commands ---------------------------------------------------------------

int cmd_synth(std::ostream& out, const fs::path& dir, std::uint64_t seed, const SyntheticSpec& spec)
{
    fs::create_directories(dir);
    auto [train, test] = make_synthetic(spec, seed);
    const auto train_path = dir / (spec.name + ".train.csv");
    const auto test_path = dir / (spec.name + ".test.csv");
    save_dataset(train, train_path);
    save_dataset(test, test_path);
    DatasetManifest manifest;
    manifest.name = spec.name;
    manifest.train_path = train_path;
    manifest.test_path = test_path;
    manifest.alphabet = "ACGTN";
    manifest.label_order = train.label_order;
    manifest.positive_label = train.label_order.front();
    manifest.declared.train_samples = train.records.size();
    manifest.declared.test_samples = test.records.size();
    manifest.declared.max_length = spec.length;
    manifest.declared.avg_length = static_cast<double>(spec.length);
    const auto manifest_path = dir / (spec.name + ".json");
    save_manifest(manifest, manifest_path);
    out << "wrote " << manifest_path.string() << '\n';
    return Success;
}

int cmd_train(std::ostream& out, const fs::path& manifest_path, const ConfigFlags& flags,
              const std::string& model_path)
{
    const auto run = flags.run_config();
    const auto manifest = load_manifest(manifest_path);
    const auto train = load_dataset(manifest, Split::Train);
    const auto start = std::chrono::steady_clock::now();
    Model model = train_model(train, run.model_config());
    const auto seconds = seconds_since(start);

    fs::create_directories(run.out_dir);
    const fs::path target = model_path.empty() ? run.out_dir / (manifest.name + ".model") : fs::path(model_path);
    save_model(model, target);
    write_json(run.out_dir / (manifest.name + ".train.json"), train_summary(manifest, train, model, seconds));
    out << manifest.name << ": trained " << model.trained_count() << " windows from " << train.records.size()
        << " sequences into " << model.size() << " representations (" << model.leaves().size() << " leaves) -> "
        << target.string() << '\n';
    return Success;
}

int cmd_eval(std::ostream& out, const fs::path& model_path, const fs::path& manifest_path, const ConfigFlags& flags)
{
    auto run = flags.run_config();
    const auto model = load_model(model_path);
    flags.check_against(model.config());
    const auto manifest = load_manifest(manifest_path);
    const auto test = load_dataset(manifest, Split::Test);
    run.positive_label = positive_for(run, manifest);

    const auto order = effective_label_order(manifest, model);
    const auto report = evaluate(model, test, run, order);
    fs::create_directories(run.out_dir);
    const auto target = run.out_dir / (manifest.name + ".report.json");
    write_json(target, to_json(report));
    out << manifest.name << ": auc=" << detail::format_double(report.auc) << " (" << report.auc_method << ") over "
        << report.n_test_samples << " samples -> " << target.string() << '\n';
    return Success;
}

struct BenchOptions {
    std::vector<std::string> manifests;
    std::vector<std::uint32_t> sweep;
    bool merge_fixture = false;
    bool fixtures_only = false;
    bool baselines = false;
    std::string fixture_dir;
    std::string rank_method = "fractional";
};

int cmd_bench(std::ostream& out, std::ostream& err, const BenchOptions& opts, const ConfigFlags& flags)
{
    const auto run = flags.run_config();
    const fs::path fixture_dir = opts.fixture_dir.empty() ? default_fixture_dir() : fs::path(opts.fixture_dir);
    const auto method = parse_rank_method(opts.rank_method);
    fs::create_directories(run.out_dir);

    if (opts.fixtures_only) {
        const auto table = read_score_matrix(fixture_dir / "table2_scores.csv");
        out << "fixture analytics (" << (fixture_dir / "table2_scores.csv").string() << ")\n";
        analyse(table, method, out, run.out_dir);
        return Success;
    }
    if (opts.manifests.empty())
        throw InvalidInput("bench needs at least one --manifest (or --fixtures-only)");

    std::optional<ScoreMatrix> reference;
    if (fs::exists(fixture_dir / "table2_scores.csv"))
        reference = read_score_matrix(fixture_dir / "table2_scores.csv");
    else if (opts.merge_fixture)
        throw DataError("fixture '" + (fixture_dir / "table2_scores.csv").string() + "' not found");

    const auto windows = opts.sweep.empty() ? std::vector<std::uint32_t>{run.window.n} : opts.sweep;
    const bool tagged = windows.size() > 1 || !opts.sweep.empty();
    auto tag = [&](const std::string& name, std::uint32_t n) {
        return tagged ? name + "@n=" + std::to_string(n) : name;
    };

    ScoreMatrix matrix;
    matrix.models = {run_column};
    if (opts.baselines)
        matrix.models.insert(matrix.models.end(), {"majority", "kmer5-centroid"});

    std::map<std::string, TaskGroup> groups; // tagged group name -> tagged members
    std::vector<std::string> group_order;
    int status = Success;

    struct Comparison {
        std::string task;
        std::uint32_t window;
        double achieved;
        std::optional<double> reference;
    };
    std::vector<Comparison> comparisons;

    for (const auto& manifest_path : opts.manifests) {
        for (const auto n : windows) {
            const auto label = manifest_path + " (n=" + std::to_string(n) + ")";
            try {
                const auto manifest = load_manifest(manifest_path);
                const auto train = load_dataset(manifest, Split::Train);
                const auto test = load_dataset(manifest, Split::Test);

                RunConfig local = run;
                local.window.n = n;
                local.positive_label = positive_for(run, manifest);
                const auto start = std::chrono::steady_clock::now();
                const Model model = train_model(train, local.model_config());
                const auto train_seconds = seconds_since(start);
                const auto order = effective_label_order(manifest, model);
                const auto report = evaluate(model, test, local, order);

                const auto stem = manifest.name + ".n" + std::to_string(n);
                auto doc = to_json(report);
                doc["train_wall_seconds"] = train_seconds;
                write_json(run.out_dir / (stem + ".report.json"), doc);

                std::vector<std::optional<double>> row{report.auc};
                if (opts.baselines) {
                    const auto truth = test.labels();
                    const auto maj = majority_baseline(train, test);
                    row.push_back(score_distributions(maj, truth, order, local.positive_label).auc);
                    const auto km = kmer_centroid(train, test, 5);
                    row.push_back(score_distributions(km, truth, order, local.positive_label).auc);
                }
                const auto task = tag(manifest.name, n);
                matrix.add_task(task, std::move(row));

                const auto group = tag(manifest.group(), n);
                if (!groups.contains(group)) {
                    groups[group].name = group;
                    group_order.push_back(group);
                }
                groups[group].members.push_back(task);

                std::optional<double> ref;
                if (reference) {
                    const auto t = reference->task_index(manifest.group());
                    const auto m = reference->model_index(reported_column);
                    if (t && m)
                        ref = reference->scores[*t][*m];
                }
                comparisons.push_back({manifest.name, n, report.auc, ref});
                out << manifest.name << " n=" << n << ": auc=" << std::fixed << std::setprecision(4) << report.auc
                    << std::defaultfloat;
                if (ref)
                    out << " (reported " << detail::format_double(*ref) << ")";
                out << ", " << model.size() << " representations, train " << std::setprecision(3) << train_seconds
                    << "s, eval " << report.wall_seconds << "s" << std::setprecision(6) << '\n';
            } catch (const Error& e) {
                err << "bench: " << label << " failed [" << to_string(e.kind()) << "]: " << e.what() << '\n';
                if (status == Success)
                    status = exit_code(e);
            }
        }
    }

    write_text(run.out_dir / "matrix.csv", [&](std::ostream& f) { write_score_matrix(f, matrix); });
    write_text(run.out_dir / "comparison.csv", [&](std::ostream& f) {
        f << "task,window,achieved_auc,reported_auc\n";
        for (const auto& c : comparisons) {
            f << c.task << ',' << c.window << ',' << detail::format_double(c.achieved) << ',';
            if (c.reference)
                f << detail::format_double(*c.reference);
            f << '\n';
        }
    });

    std::vector<TaskGroup> group_list;
    for (const auto& g : group_order)
        group_list.push_back(groups[g]);
    const auto grouped = group_average(matrix, group_list);
    write_text(run.out_dir / "grouped_matrix.csv", [&](std::ostream& f) { write_score_matrix(f, grouped); });

    if (opts.merge_fixture && reference) {
        ScoreMatrix merged;
        std::vector<std::size_t> foundation;
        for (std::size_t m = 0; m < reference->models.size(); ++m)
            if (reference->models[m] != reported_column) {
                merged.models.push_back(reference->models[m]);
                foundation.push_back(m);
            }
        merged.models.push_back(run_column);
        for (std::size_t t = 0; t < grouped.tasks.size(); ++t) {
            const auto& task = grouped.tasks[t];
            const auto base = task.substr(0, task.rfind("@n="));
            const auto ref_row = reference->task_index(tagged ? base : task);
            if (!ref_row)
                continue;
            std::vector<std::optional<double>> row;
            for (auto m : foundation)
                row.push_back(reference->scores[*ref_row][m]);
            row.push_back(grouped.scores[t][0]);
            merged.add_task(task, std::move(row));
        }
        write_text(run.out_dir / "merged_matrix.csv", [&](std::ostream& f) { write_score_matrix(f, merged); });
        if (!merged.tasks.empty() && merged.complete()) {
            out << "merged with fixture columns:\n";
            analyse(merged, method, out, run.out_dir);
        } else {
            out << "no benchmark task matched the fixture; skipping merged analytics\n";
        }
    } else if (!grouped.tasks.empty() && grouped.complete()) {
        analyse(grouped, method, out, run.out_dir);
    }
    return status;
}

int cmd_report(std::ostream& out, const std::string& matrix_path, const std::string& fixture_dir,
               const std::string& rank_method, const std::string& out_dir)
{
    const fs::path path = matrix_path.empty()
                              ? (fixture_dir.empty() ? default_fixture_dir() : fs::path(fixture_dir)) /
                                    "table2_scores.csv"
                              : fs::path(matrix_path);
    const auto sm = read_score_matrix(path);
    std::optional<fs::path> dir;
    if (!out_dir.empty()) {
        dir = out_dir;
        fs::create_directories(*dir);
    }
    out << "report for " << path.string() << '\n';
    analyse(sm, parse_rank_method(rank_method), out, dir);
    return Success;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Episodic prototype-tree sequence classifier"};
    app.require_subcommand(1);

    ConfigFlags flags;
    std::string manifest;
    std::string model_path;

    auto* train = app.add_subcommand("train", "train a model on a dataset's train split");
    train->add_option("--manifest", manifest, "dataset manifest (JSON)")->required();
    train->add_option("--model", model_path, "model output path (default <out>/<name>.model)");
    flags.add_model_flags(*train);
    flags.add_output_flags(*train);

    auto* eval = app.add_subcommand("eval", "evaluate a trained model on a dataset's test split");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--manifest", manifest, "dataset manifest (JSON)")->required();
    ConfigFlags eval_flags;
    eval_flags.add_model_flags(*eval);
    eval_flags.add_output_flags(*eval);
    eval_flags.add_eval_flags(*eval);

    BenchOptions bench_opts;
    std::string sweep;
    auto* bench = app.add_subcommand("bench", "train and evaluate each dataset with a fresh model");
    bench->add_option("--manifest", bench_opts.manifests, "dataset manifests (repeatable)");
    bench->add_option("--sweep", sweep, "comma-separated window sizes, e.g. 5,10");
    bench->add_flag("--merge-fixture", bench_opts.merge_fixture, "rank against the bundled published scores");
    bench->add_flag("--fixtures-only", bench_opts.fixtures_only, "analyse the bundled published scores only");
    bench->add_flag("--baselines", bench_opts.baselines, "add majority and 5-mer centroid baseline columns");
    bench->add_option("--fixture-dir", bench_opts.fixture_dir, "directory holding table2_scores.csv");
    bench->add_option("--rank-method", bench_opts.rank_method, "fractional | competition")
        ->check(CLI::IsMember({"fractional", "competition"}));
    ConfigFlags bench_flags;
    bench_flags.add_model_flags(*bench);
    bench_flags.add_output_flags(*bench);
    bench_flags.add_eval_flags(*bench);

    std::string matrix_path, report_fixture_dir, report_rank = "fractional", report_out;
    auto* report = app.add_subcommand("report", "rank and summary analytics for a score matrix");
    report->add_option("--matrix", matrix_path, "score matrix CSV (default: bundled published scores)");
    report->add_option("--fixture-dir", report_fixture_dir, "directory holding table2_scores.csv");
    report->add_option("--rank-method", report_rank, "fractional | competition")
        ->check(CLI::IsMember({"fractional", "competition"}));
    report->add_option("--out", report_out, "write ranks.csv and summary.csv here");

    std::string synth_out;
    std::uint64_t seed = 7;
    SyntheticSpec synth_spec = planted_motif_spec();
    auto* synth = app.add_subcommand("synth", "write the planted-motif dataset and its manifest");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--train-size", synth_spec.train_size, "training records");
    synth->add_option("--test-size", synth_spec.test_size, "test records");
    synth->add_option("--length", synth_spec.length, "sequence length");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : Usage;
    }

    try {
        if (train->parsed())
            return cmd_train(out, manifest, flags, model_path);
        if (eval->parsed())
            return cmd_eval(out, model_path, manifest, eval_flags);
        if (bench->parsed()) {
            if (!sweep.empty()) {
                for (const auto& item : detail::split(sweep, ',')) {
                    const auto n = detail::parse_number<std::uint32_t>(item);
                    if (!n || *n == 0) {
                        err << "error: --sweep expects positive integers, got '" << item << "'\n";
                        return Usage;
                    }
                    bench_opts.sweep.push_back(*n);
                }
            }
            return cmd_bench(out, err, bench_opts, bench_flags);
        }
        if (report->parsed())
            return cmd_report(out, matrix_path, report_fixture_dir, report_rank, report_out);
        if (synth->parsed())
            return cmd_synth(out, synth_out, seed, synth_spec);
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return InternalFailure;
    }
    return Usage;
}

} // namespace scog::cli
