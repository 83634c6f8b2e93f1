#include "scog/episodic.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace scog {

namespace {

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context)
{
    const std::string msg = context + ": " + e.what();
    switch (e.kind()) {
    case ErrorKind::UnknownSymbol: {
        const auto& u = static_cast<const UnknownSymbol&>(e);
        throw UnknownSymbol(u.symbol(), u.position(), context);
    }
    case ErrorKind::Capacity: throw CapacityError(msg);
    case ErrorKind::InvalidInput: throw InvalidInput(msg);
    case ErrorKind::UntrainedModel: throw Error(ErrorKind::UntrainedModel, msg);
    default: throw Error(e.kind(), msg);
    }
}

std::vector<std::string> effective_order(const Model& m, std::span<const std::string> label_order)
{
    std::vector<std::string> order(label_order.begin(), label_order.end());
    for (const auto& label : m.label_order())
        if (std::find(order.begin(), order.end(), label) == order.end())
            order.push_back(label);
    return order;
}

std::vector<Sdr> encode_all(const Model& m, std::string_view sequence)
{
    const auto& cfg = m.config();
    std::vector<Sdr> out;
    try {
        check_symbols(cfg.codebook, sequence);
        for (const auto& w : windows(sequence, cfg.window, cfg.codebook.pad_symbol()))
            out.push_back(encode_window(cfg.codebook, w, cfg.window.n));
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("sequence: ") + e.what());
    }
    return out;
}

std::size_t pick(std::span<const double> probs)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i)
        if (probs[i] > probs[best])
            best = i;
    return best;
}

} // namespace

std::uint64_t VoteDistribution::total() const noexcept
{
    std::uint64_t sum = 0;
    for (auto c : counts)
        sum += c;
    return sum;
}

double VoteDistribution::prob(std::string_view label) const noexcept
{
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label)
            return probs[i];
    return 0.0;
}

std::uint64_t VoteDistribution::count(std::string_view label) const noexcept
{
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label)
            return counts[i];
    return 0;
}

VoteDistribution harmonize(std::span<const std::string> votes, std::span<const std::string> label_order)
{
    if (votes.empty())
        throw InvalidInput("harmonize: empty vote list");
    VoteDistribution out;
    out.labels.assign(label_order.begin(), label_order.end());
    out.counts.assign(out.labels.size(), 0);
    for (const auto& vote : votes) {
        const auto it = std::find(out.labels.begin(), out.labels.end(), vote);
        if (it == out.labels.end())
            throw InvalidInput("harmonize: vote '" + vote + "' is not in the label order");
        ++out.counts[static_cast<std::size_t>(it - out.labels.begin())];
    }
    const auto total = static_cast<double>(votes.size());
    out.probs.reserve(out.counts.size());
    for (auto c : out.counts)
        out.probs.push_back(static_cast<double>(c) / total);

    // Compare integer counts, not the rounded ratios.
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.counts.size(); ++i)
        if (out.counts[i] > out.counts[best])
            best = i;
    out.predicted = out.labels[best];
    return out;
}

void train_sequence(Model& m, std::string_view sequence, std::string_view label)
{
    for (const auto& x : encode_all(m, sequence))
        m.train(x, label);
}

std::vector<std::string> window_votes(const Model& m, std::string_view sequence,
                                      std::span<const std::string> label_order)
{
    const auto order = effective_order(m, label_order);
    std::vector<std::string> votes;
    for (const auto& x : encode_all(m, sequence))
        votes.push_back(m.predict_label(x, order));
    return votes;
}

VoteDistribution classify_sequence(const Model& m, std::string_view sequence,
                                   std::span<const std::string> label_order, const ClassifyOptions& options)
{
    if (m.empty())
        throw UntrainedModel();
    const auto order = effective_order(m, label_order);
    const auto inputs = encode_all(m, sequence);

    std::vector<std::string> votes;
    std::vector<double> weights;
    votes.reserve(inputs.size());
    for (const auto& x : inputs) {
        const auto match = m.identify(x);
        votes.push_back(majority_label(m.node(match.id).label_counts, order));
        weights.push_back(match.similarity);
    }

    auto dist = harmonize(votes, order);

    if (options.similarity_weighted) {
        double mass = 0.0;
        std::vector<double> weighted(dist.labels.size(), 0.0);
        for (std::size_t i = 0; i < votes.size(); ++i) {
            const auto at = std::find(dist.labels.begin(), dist.labels.end(), votes[i]) - dist.labels.begin();
            weighted[static_cast<std::size_t>(at)] += weights[i];
            mass += weights[i];
        }
        if (mass > 0.0) {
            for (auto& w : weighted)
                w /= mass;
            dist.probs = std::move(weighted);
            dist.predicted = dist.labels[pick(dist.probs)];
        }
    }

    if (options.mode == Harmonization::AnyTrigger) {
        if (std::find(order.begin(), order.end(), options.trigger_label) == order.end())
            throw InvalidInput("trigger label '" + options.trigger_label + "' is not a known class");
        if (dist.count(options.trigger_label) > 0)
            dist.predicted = options.trigger_label;
    }
    return dist;
}

void train_sequences(Model& m, std::span<const LabeledSequence> records)
{
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            train_sequence(m, records[i].sequence, records[i].label);
        } catch (const Error& e) {
            rethrow_with_context(e, "record " + std::to_string(i));
        }
    }
}

std::vector<VoteDistribution> classify_sequences(const Model& m, std::span<const std::string> sequences,
                                                 std::span<const std::string> label_order,
                                                 const ClassifyOptions& options, unsigned threads)
{
    if (m.empty())
        throw UntrainedModel();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, sequences.size())));

    std::vector<VoteDistribution> out(sequences.size());
    std::vector<std::exception_ptr> errors(sequences.size());
    auto work = [&](unsigned t) {
        for (std::size_t i = t; i < sequences.size(); i += threads) {
            try {
                out[i] = classify_sequence(m, sequences[i], label_order, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(work, t);
        work(0);
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i])
            continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            rethrow_with_context(e, "sample " + std::to_string(i));
        }
    }
    return out;
}

} // namespace scog
