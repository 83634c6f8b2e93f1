#include "scog/core.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace scog {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// Exact comparison of two Jaccard ratios inter/uni without rounding.
bool more_similar(std::uint64_t inter_a, std::uint64_t uni_a, std::uint64_t inter_b, std::uint64_t uni_b)
{
    return inter_a * uni_b > inter_b * uni_a;
}

} // namespace

std::uint64_t Representation::total() const noexcept
{
    std::uint64_t sum = 0;
    for (const auto& [label, count] : label_counts)
        sum += count;
    return sum;
}

void CoreConfig::validate() const
{
    if (!(merge_threshold >= 0.0 && merge_threshold <= 1.0))
        throw InvalidInput("merge threshold must lie in [0, 1]");
    if (!(branch_threshold >= 0.0 && branch_threshold <= merge_threshold))
        throw InvalidInput("branch threshold must lie in [0, merge threshold]");
    if (max_representations && *max_representations == 0)
        throw InvalidInput("max representations must be positive");
}

void ModelConfig::validate() const
{
    core.validate();
    window.validate();
}

Model::Model(ModelConfig config) : config_(std::move(config))
{
    config_.validate();
    words_ = Sdr::word_count(config_.input_width());
}

void Model::require_width(const Sdr& x) const
{
    if (x.width() != input_width())
        throw InvalidInput("input width " + std::to_string(x.width()) + " does not match model width " +
                           std::to_string(input_width()));
}

void Model::cache_leaf(NodeId id)
{
    if (leaf_slot_.size() <= id)
        leaf_slot_.resize(id + 1, npos);
    leaf_slot_[id] = leaves_.size();
    leaves_.push_back(id);
    leaf_bits_.resize(leaf_bits_.size() + words_, 0);
    leaf_pop_.push_back(0);
    refresh_leaf_cache(id);
}

void Model::refresh_leaf_cache(NodeId id)
{
    const auto slot = leaf_slot_[id];
    auto* words = leaf_bits_.data() + slot * words_;
    std::fill(words, words + words_, 0);
    for (auto bit : nodes_[id].sdr.active())
        words[bit / 64] |= std::uint64_t{1} << (bit % 64);
    leaf_pop_[slot] = static_cast<std::uint32_t>(nodes_[id].sdr.size());
}

void Model::note_label(std::string_view label)
{
    if (std::find(label_order_.begin(), label_order_.end(), label) == label_order_.end())
        label_order_.emplace_back(label);
}

void Model::propagate_up(std::optional<NodeId> from, const Sdr& x, std::string_view label)
{
    // Children only ever grow, so OR-ing the new input into each ancestor keeps
    // every interior node equal to the composition of its children.
    for (auto cur = from; cur; cur = nodes_[*cur].parent) {
        auto& node = nodes_[*cur];
        node.sdr = aggregate(node.sdr, x);
        ++node.label_counts[std::string(label)];
    }
}

NodeId Model::train(const Sdr& x, std::string_view label)
{
    require_width(x);

    auto make_leaf = [&](NodeId id) {
        Representation leaf;
        leaf.id = id;
        leaf.sdr = x;
        leaf.label_counts.emplace(std::string(label), 1);
        return leaf;
    };
    auto require_room = [&](std::size_t extra) {
        const auto& cap = config_.core.max_representations;
        if (cap && nodes_.size() + extra > *cap)
            throw CapacityError("representation limit " + std::to_string(*cap) + " reached (" +
                                std::to_string(nodes_.size()) + " stored, " + std::to_string(extra) +
                                " more needed)");
    };

    if (leaves_.empty()) {
        require_room(1);
        nodes_.push_back(make_leaf(0));
        roots_.push_back(0);
        cache_leaf(0);
        note_label(label);
        ++trained_count_;
        return 0;
    }

    const auto best = identify(x);
    const auto& core = config_.core;

    if (best.similarity >= core.merge_threshold) {
        auto& leaf = nodes_[best.id];
        leaf.sdr = aggregate(leaf.sdr, x);
        ++leaf.label_counts[std::string(label)];
        refresh_leaf_cache(best.id);
        propagate_up(leaf.parent, x, label);
        note_label(label);
        ++trained_count_;
        return best.id;
    }

    const auto leaf_id = static_cast<NodeId>(nodes_.size());
    if (best.similarity < core.branch_threshold) {
        require_room(1);
        nodes_.push_back(make_leaf(leaf_id));
        roots_.push_back(leaf_id);
    } else if (const auto parent = nodes_[best.id].parent) {
        require_room(1);
        nodes_.push_back(make_leaf(leaf_id));
        nodes_[leaf_id].parent = parent;
        nodes_[*parent].children.push_back(leaf_id);
        propagate_up(parent, x, label);
    } else {
        // best is a root leaf: give it and the new leaf a composing parent.
        require_room(2);
        const auto parent_id = leaf_id + 1;
        Representation composite;
        composite.id = parent_id;
        composite.sdr = aggregate(nodes_[best.id].sdr, x);
        composite.label_counts = nodes_[best.id].label_counts;
        ++composite.label_counts[std::string(label)];
        composite.children = {best.id, leaf_id};

        nodes_.push_back(make_leaf(leaf_id));
        nodes_[leaf_id].parent = parent_id;
        nodes_[best.id].parent = parent_id;
        nodes_.push_back(std::move(composite));
        std::replace(roots_.begin(), roots_.end(), best.id, parent_id);
    }
    cache_leaf(leaf_id);
    note_label(label);
    ++trained_count_;
    return leaf_id;
}

Match Model::identify(const Sdr& x) const
{
    require_width(x);
    if (leaves_.empty())
        throw UntrainedModel();

    const auto query = x.to_words();
    const std::uint64_t query_pop = x.size();
    std::uint64_t best_inter = 0, best_uni = 1;
    std::size_t best_slot = npos;

    for (std::size_t slot = 0; slot < leaves_.size(); ++slot) {
        const auto* words = leaf_bits_.data() + slot * words_;
        std::uint64_t inter = 0;
        for (std::size_t w = 0; w < words_; ++w)
            inter += static_cast<std::uint64_t>(std::popcount(words[w] & query[w]));
        std::uint64_t uni = leaf_pop_[slot] + query_pop - inter;
        if (uni == 0) {
            inter = 1;
            uni = 1;
        }
        if (best_slot == npos || more_similar(inter, uni, best_inter, best_uni)) {
            best_slot = slot;
            best_inter = inter;
            best_uni = uni;
        }
    }
    return {leaves_[best_slot], static_cast<double>(best_inter) / static_cast<double>(best_uni)};
}

std::string majority_label(const LabelCounts& counts, std::span<const std::string> label_order)
{
    auto rank = [&](const std::string& label) {
        const auto it = std::find(label_order.begin(), label_order.end(), label);
        return static_cast<std::size_t>(it - label_order.begin());
    };
    const std::string* best = nullptr;
    std::uint64_t best_count = 0;
    std::size_t best_rank = 0;
    for (const auto& [label, count] : counts) {
        const auto r = rank(label);
        // counts iterate lexicographically, so unlisted labels tie-break that way.
        if (best == nullptr || count > best_count || (count == best_count && r < best_rank)) {
            best = &label;
            best_count = count;
            best_rank = r;
        }
    }
    if (best == nullptr)
        throw InvalidInput("empty label histogram");
    return *best;
}

std::string Model::predict_label(const Sdr& x, std::span<const std::string> label_order) const
{
    const auto match = identify(x);
    if (label_order.empty())
        label_order = label_order_;
    return majority_label(nodes_[match.id].label_counts, label_order);
}

Model Model::restore(ModelConfig config, std::vector<Representation> nodes, std::vector<NodeId> roots,
                     std::vector<std::string> label_order, std::uint64_t trained_count)
{
    Model m(std::move(config));
    const auto width = m.input_width();
    const auto count = nodes.size();
    auto fail = [](const std::string& why) { throw MalformedFile("model node table: " + why); };

    if (m.config_.core.max_representations && count > *m.config_.core.max_representations)
        fail("more nodes than max_representations");
    for (std::size_t i = 0; i < count; ++i) {
        const auto& node = nodes[i];
        if (node.id != i)
            fail("node ids must equal their position");
        if (node.sdr.width() != width)
            fail("node " + std::to_string(i) + " has width " + std::to_string(node.sdr.width()));
        if (node.parent) {
            if (*node.parent >= count)
                fail("node " + std::to_string(i) + " has dangling parent");
            const auto& siblings = nodes[*node.parent].children;
            if (std::count(siblings.begin(), siblings.end(), node.id) != 1)
                fail("node " + std::to_string(i) + " missing from its parent's children");
        }
        for (auto child : node.children) {
            if (child >= count || nodes[child].parent != node.id)
                fail("node " + std::to_string(i) + " lists a child that does not point back");
        }
        for (const auto& [label, c] : node.label_counts) {
            if (std::find(label_order.begin(), label_order.end(), label) == label_order.end())
                fail("label '" + label + "' missing from label order");
            if (c == 0)
                fail("zero label count");
        }
    }

    std::vector<NodeId> expected_roots;
    for (const auto& node : nodes)
        if (!node.parent)
            expected_roots.push_back(node.id);
    auto sorted_roots = roots;
    std::sort(sorted_roots.begin(), sorted_roots.end());
    if (sorted_roots != expected_roots)
        fail("root list does not match parentless nodes");

    // Depth-first walk from the roots must reach every node exactly once.
    std::vector<bool> seen(count, false);
    std::vector<NodeId> stack(roots.begin(), roots.end());
    std::size_t visited = 0;
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        if (seen[id])
            fail("cycle or shared child at node " + std::to_string(id));
        seen[id] = true;
        ++visited;
        for (auto child : nodes[id].children)
            stack.push_back(child);
    }
    if (visited != count)
        fail("unreachable nodes");

    std::uint64_t leaf_total = 0;
    for (const auto& node : nodes) {
        if (node.is_leaf()) {
            leaf_total += node.total();
            continue;
        }
        Sdr composed(width);
        LabelCounts summed;
        for (auto child : node.children) {
            composed = aggregate(composed, nodes[child].sdr);
            for (const auto& [label, c] : nodes[child].label_counts)
                summed[label] += c;
        }
        if (composed != node.sdr || summed != node.label_counts)
            fail("interior node " + std::to_string(node.id) + " is not the composition of its children");
    }
    if (leaf_total != trained_count)
        fail("leaf label totals do not sum to trained count");

    m.nodes_ = std::move(nodes);
    m.roots_ = std::move(roots);
    m.label_order_ = std::move(label_order);
    m.trained_count_ = trained_count;
    for (const auto& node : m.nodes_)
        if (node.is_leaf())
            m.cache_leaf(node.id);
    return m;
}

NodeId train_one(Model& m, const Sdr& x, std::string_view label)
{
    return m.train(x, label);
}

Match identify(const Model& m, const Sdr& x)
{
    return m.identify(x);
}

std::string predict_window_label(const Model& m, const Sdr& x, std::span<const std::string> label_order)
{
    return m.predict_label(x, label_order);
}

} // namespace scog
