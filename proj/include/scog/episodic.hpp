#pragma once

#include "scog/core.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scog {

// Per-class vote tally for one sequence. `labels`, `counts` and `probs` are
// parallel; probabilities are frequencies unless similarity weighting is on.
struct VoteDistribution {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::vector<double> probs;
    std::string predicted;

    std::uint64_t total() const noexcept;
    double prob(std::string_view label) const noexcept; // 0 for labels not listed
    std::uint64_t count(std::string_view label) const noexcept;
};

enum class Harmonization {
    Majority,   // most repeated class wins
    AnyTrigger, // trigger class wins as soon as one window votes for it
};

struct ClassifyOptions {
    Harmonization mode = Harmonization::Majority;
    std::string trigger_label; // used by AnyTrigger
    bool similarity_weighted = false;
};

// Frequency tally of `votes` over `label_order`; ties go to the earliest label.
VoteDistribution harmonize(std::span<const std::string> votes, std::span<const std::string> label_order);

// Encodes every window of `sequence` and trains on it with `label`. All
// windows are encoded before the first one is trained, so symbol errors leave
// the model untouched.
void train_sequence(Model& m, std::string_view sequence, std::string_view label);

// One prediction per window, harmonized. An empty `label_order` uses the
// model's; labels the model knows but the order omits are appended.
VoteDistribution classify_sequence(const Model& m, std::string_view sequence,
                                   std::span<const std::string> label_order = {},
                                   const ClassifyOptions& options = {});

// Window labels predicted for `sequence`, in window order.
std::vector<std::string> window_votes(const Model& m, std::string_view sequence,
                                      std::span<const std::string> label_order = {});

struct LabeledSequence {
    std::string sequence;
    std::string label;

    friend bool operator==(const LabeledSequence&, const LabeledSequence&) = default;
};

// Trains records in order. Errors are rethrown with the record index prepended.
void train_sequences(Model& m, std::span<const LabeledSequence> records);

// Classifies each sequence, spreading the work over `threads` workers
// (0 = hardware concurrency). Output order matches input order.
std::vector<VoteDistribution> classify_sequences(const Model& m, std::span<const std::string> sequences,
                                                 std::span<const std::string> label_order = {},
                                                 const ClassifyOptions& options = {}, unsigned threads = 0);

} // namespace scog
