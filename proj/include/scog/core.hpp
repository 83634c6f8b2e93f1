#pragma once

#include "scog/encoder.hpp"
#include "scog/sdr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scog {

using NodeId = std::uint32_t;
using LabelCounts = std::map<std::string, std::uint64_t, std::less<>>;

// A stored prototype. Leaves absorb training inputs; interior nodes are the
// bitwise OR of their children and carry the sum of their label histograms.
struct Representation {
    NodeId id = 0;
    Sdr sdr;
    LabelCounts label_counts;
    std::vector<NodeId> children;
    std::optional<NodeId> parent;

    bool is_leaf() const noexcept { return children.empty(); }
    std::uint64_t total() const noexcept;

    friend bool operator==(const Representation&, const Representation&) = default;
};

struct CoreConfig {
    static constexpr std::uint64_t default_max_representations = 5'000'000;

    double merge_threshold = 0.8;
    double branch_threshold = 0.4;
    // std::nullopt means unbounded.
    std::optional<std::uint64_t> max_representations = default_max_representations;

    void validate() const; // 0 <= branch <= merge <= 1, max_representations > 0
    friend bool operator==(const CoreConfig&, const CoreConfig&) = default;
};

struct ModelConfig {
    CoreConfig core;
    WindowConfig window;
    Codebook codebook = Codebook::one_hot_dna();

    std::uint32_t input_width() const noexcept { return window.n * codebook.bits_per_symbol(); }
    void validate() const;
    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct Match {
    NodeId id = 0;
    double similarity = 0.0;
};

class Model {
public:
    explicit Model(ModelConfig config = {});

    const ModelConfig& config() const noexcept { return config_; }
    std::uint32_t input_width() const noexcept { return config_.input_width(); }

    std::span<const Representation> nodes() const noexcept { return nodes_; }
    const Representation& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<NodeId>& roots() const noexcept { return roots_; }
    const std::vector<NodeId>& leaves() const noexcept { return leaves_; }
    std::uint64_t trained_count() const noexcept { return trained_count_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return leaves_.empty(); }

    // Labels in order of first appearance during training.
    const std::vector<std::string>& label_order() const noexcept { return label_order_; }

    // Absorbs one input. Returns the id of the leaf that took it. Leaves the
    // model untouched when it throws (InvalidInput on width mismatch,
    // CapacityError when growth would exceed max_representations).
    NodeId train(const Sdr& x, std::string_view label);

    // Exhaustive scan over leaves; ties go to the lowest id.
    Match identify(const Sdr& x) const;

    // Majority label of the identified leaf. Ties go to the label listed
    // earliest in `label_order`; labels missing from it rank after all listed
    // ones, lexicographically. An empty order falls back to the model's own.
    std::string predict_label(const Sdr& x, std::span<const std::string> label_order = {}) const;

    // Rebuilds a model from a serialized node table. Verifies every structural
    // invariant and throws MalformedFile when one is violated.
    static Model restore(ModelConfig config, std::vector<Representation> nodes, std::vector<NodeId> roots,
                         std::vector<std::string> label_order, std::uint64_t trained_count);

    friend bool operator==(const Model& a, const Model& b)
    {
        return a.config_ == b.config_ && a.nodes_ == b.nodes_ && a.roots_ == b.roots_ &&
               a.label_order_ == b.label_order_ && a.trained_count_ == b.trained_count_;
    }

private:
    void require_width(const Sdr& x) const;
    void cache_leaf(NodeId id);
    void refresh_leaf_cache(NodeId id);
    void propagate_up(std::optional<NodeId> from, const Sdr& x, std::string_view label);
    void note_label(std::string_view label);

    ModelConfig config_;
    std::vector<Representation> nodes_;
    std::vector<NodeId> roots_;
    std::vector<NodeId> leaves_;
    std::vector<std::string> label_order_;
    std::uint64_t trained_count_ = 0;

    // Dense bit images of the leaves, leaves_.size() * words_ words, plus popcounts.
    std::size_t words_ = 0;
    std::vector<std::uint64_t> leaf_bits_;
    std::vector<std::uint32_t> leaf_pop_;
    std::vector<std::size_t> leaf_slot_; // node id -> index into leaves_, or npos
};

// Free-function forms of the model operations.
NodeId train_one(Model& m, const Sdr& x, std::string_view label);
Match identify(const Model& m, const Sdr& x);
std::string predict_window_label(const Model& m, const Sdr& x, std::span<const std::string> label_order = {});

// Picks the argmax of `counts`, breaking ties by position in `label_order`.
std::string majority_label(const LabelCounts& counts, std::span<const std::string> label_order);

} // namespace scog
