#include "scog/baselines.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace scog {

std::vector<VoteDistribution> majority_baseline(const LabeledSequenceSet& train, const LabeledSequenceSet& test)
{
    if (train.records.empty())
        throw InvalidInput("majority baseline: empty training set");
    std::vector<std::string> votes;
    votes.reserve(train.records.size());
    for (const auto& r : train.records)
        votes.push_back(r.label);
    auto order = train.label_order;
    for (const auto& label : test.label_order)
        if (std::find(order.begin(), order.end(), label) == order.end())
            order.push_back(label);
    const auto prior = harmonize(votes, order);
    return std::vector<VoteDistribution>(test.records.size(), prior);
}

KmerVector kmer_frequencies(std::string_view sequence, std::size_t k, std::string_view alphabet)
{
    std::array<int, 256> digit;
    digit.fill(-1);
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        digit[static_cast<unsigned char>(alphabet[i])] = static_cast<int>(i);
    const std::uint64_t base = alphabet.size();

    KmerVector counts;
    std::size_t total = 0;
    std::uint64_t code = 0;
    std::size_t run = 0; // length of the current run of valid symbols
    std::uint64_t top = 1;
    for (std::size_t i = 1; i < k; ++i)
        top *= base;
    for (char c : sequence) {
        const int d = digit[static_cast<unsigned char>(c)];
        if (d < 0) {
            run = 0;
            code = 0;
            continue;
        }
        if (run >= k)
            code %= top;
        code = code * base + static_cast<std::uint64_t>(d);
        if (++run >= k) {
            counts[code] += 1.0;
            ++total;
        }
    }
    for (auto& [kmer, v] : counts)
        v /= static_cast<double>(total);
    return counts;
}

double cosine(const KmerVector& a, const KmerVector& b)
{
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [kmer, v] : small) {
        const auto it = large.find(kmer);
        if (it != large.end())
            dot += v * it->second;
    }
    double na = 0.0, nb = 0.0;
    for (const auto& [kmer, v] : a)
        na += v * v;
    for (const auto& [kmer, v] : b)
        nb += v * v;
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / std::sqrt(na * nb);
}

static void check_k(const LabeledSequenceSet& set, std::size_t k)
{
    if (k == 0)
        throw InvalidInput("k-mer length must be positive");
    if (!set.records.empty() && k > set.stats.min_length)
        throw InvalidInput("k-mer length " + std::to_string(k) + " exceeds the shortest sequence (" +
                           std::to_string(set.stats.min_length) + ") of " + set.name);
}

CentroidModel fit_kmer_centroids(const LabeledSequenceSet& train, std::size_t k, std::string_view alphabet)
{
    if (train.records.empty())
        throw InvalidInput("k-mer centroid: empty training set");
    check_k(train, k);
    CentroidModel model;
    model.k = k;
    model.alphabet = std::string(alphabet);
    model.labels = train.label_order;
    model.centroids.resize(model.labels.size());
    std::vector<std::size_t> members(model.labels.size(), 0);
    for (const auto& r : train.records) {
        const auto c = static_cast<std::size_t>(
            std::find(model.labels.begin(), model.labels.end(), r.label) - model.labels.begin());
        for (const auto& [kmer, v] : kmer_frequencies(r.sequence, k, alphabet))
            model.centroids[c][kmer] += v;
        ++members[c];
    }
    // Renormalize instead of dividing by the member count so records without
    // any valid k-mer do not leave a centroid short of unit mass.
    for (auto& centroid : model.centroids) {
        double mass = 0.0;
        for (const auto& [kmer, v] : centroid)
            mass += v;
        if (mass > 0.0)
            for (auto& [kmer, v] : centroid)
                v /= mass;
    }
    return model;
}

VoteDistribution CentroidModel::classify(std::string_view sequence) const
{
    const auto freq = kmer_frequencies(sequence, k, alphabet);
    VoteDistribution out;
    out.labels = labels;
    out.counts.assign(labels.size(), 0);
    out.probs.reserve(labels.size());
    double mass = 0.0;
    for (const auto& centroid : centroids) {
        const double s = std::max(0.0, cosine(freq, centroid));
        out.probs.push_back(s);
        mass += s;
    }
    for (auto& p : out.probs)
        p = mass > 0.0 ? p / mass : 1.0 / static_cast<double>(labels.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.probs.size(); ++i)
        if (out.probs[i] > out.probs[best])
            best = i;
    out.predicted = labels[best];
    out.counts[best] = 1;
    return out;
}

std::vector<VoteDistribution> kmer_centroid(const LabeledSequenceSet& train, const LabeledSequenceSet& test,
                                            std::size_t k, std::string_view alphabet)
{
    check_k(test, k);
    const auto model = fit_kmer_centroids(train, k, alphabet);
    std::vector<VoteDistribution> out;
    out.reserve(test.records.size());
    for (const auto& r : test.records)
        out.push_back(model.classify(r.sequence));
    return out;
}

} // namespace scog
