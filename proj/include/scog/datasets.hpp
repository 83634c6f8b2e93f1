#pragma once

#include "scog/episodic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace scog {

enum class Split { Train, Test };
const char* to_string(Split split);

struct SequenceStats {
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    double mean_length = 0.0;
};

struct LabeledSequenceSet {
    std::string name;
    Split split = Split::Train;
    std::vector<LabeledSequence> records;
    std::vector<std::string> label_order;
    SequenceStats stats;

    std::vector<std::string> sequences() const;
    std::vector<std::string> labels() const;
};

// Table-1 style declared figures; every field is optional.
struct DeclaredStats {
    std::optional<std::size_t> train_samples;
    std::optional<std::size_t> test_samples;
    std::optional<std::size_t> max_length;
    std::optional<double> avg_length;
};

// Symbols accepted in record files when a manifest does not say otherwise:
// nucleotides plus the IUPAC ambiguity codes.
inline constexpr std::string_view default_alphabet = "ACGTNRYSWKMBDHV";

struct DatasetManifest {
    std::string name;
    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::string alphabet = std::string(default_alphabet);
    std::vector<std::string> label_order; // empty: first appearance in the file
    std::optional<std::string> positive_label;
    std::string task_group; // empty: the dataset is its own group
    DeclaredStats declared;

    const std::string& group() const noexcept { return task_group.empty() ? name : task_group; }
};

// Reads a JSON manifest. Relative record paths resolve against the manifest's
// directory. Throws DataError on missing files or fields.
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Record file: header line `sequence,label`, then one `SEQUENCE,LABEL` per
// line. No quoting; sequences are upper-cased on load. Errors name the line.
LabeledSequenceSet load_dataset(const DatasetManifest& manifest, Split split);
LabeledSequenceSet read_records(const std::filesystem::path& path, std::string_view alphabet,
                                std::span<const std::string> label_order = {});
void save_dataset(const LabeledSequenceSet& set, const std::filesystem::path& path);

SequenceStats compute_stats(std::span<const LabeledSequence> records);

enum class CheckStatus { Pass, Warn };

struct ValidationCheck {
    std::string field;
    std::string declared;
    std::string observed;
    CheckStatus status = CheckStatus::Pass;
};

struct ValidationReport {
    std::string dataset;
    std::vector<ValidationCheck> checks;

    bool ok() const noexcept;
    std::string summary() const; // one "PASS|WARN field declared observed" line per check
};

// Compares observed counts and lengths with the manifest's declared values.
// Declared averages are matched after rounding to the nearest integer.
ValidationReport validate_dataset(const LabeledSequenceSet& set, const DatasetManifest& manifest);

struct PlantedClass {
    std::string label;
    std::vector<std::string> motifs;
};

struct SyntheticSpec {
    std::string name = "planted_motif";
    std::vector<PlantedClass> classes;
    std::size_t train_size = 200; // records per split, dealt round-robin over classes
    std::size_t test_size = 200;
    std::size_t length = 40;
    std::string background = "ACGT";
};

// The two-class planted-motif fixture: AAAAA vs TTTTT, 200/200 records of length 40.
SyntheticSpec planted_motif_spec();

// Every record of class c contains at least one motif of c and no motif of
// any other class. Output depends only on (spec, seed).
// Throws InvalidSpec for overlapping motif sets or impossible lengths.
std::pair<LabeledSequenceSet, LabeledSequenceSet> make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// One row of the bundled dataset inventory.
struct InventoryEntry {
    std::string dataset;
    DeclaredStats declared;
    std::uint64_t total_train_size = 0;
    std::string task_group;
};

std::vector<InventoryEntry> load_inventory(const std::filesystem::path& path);

} // namespace scog
