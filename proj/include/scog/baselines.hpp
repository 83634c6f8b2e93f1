#pragma once

#include "scog/datasets.hpp"
#include "scog/episodic.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace scog {

// Every test sample gets the training label distribution.
std::vector<VoteDistribution> majority_baseline(const LabeledSequenceSet& train, const LabeledSequenceSet& test);

using KmerVector = std::unordered_map<std::uint64_t, double>;

// Per-class mean of normalized k-mer frequency vectors. K-mers touching a
// symbol outside `alphabet` are skipped.
struct CentroidModel {
    std::size_t k = 0;
    std::string alphabet;
    std::vector<std::string> labels;
    std::vector<KmerVector> centroids; // parallel to labels, each sums to 1

    VoteDistribution classify(std::string_view sequence) const;
};

KmerVector kmer_frequencies(std::string_view sequence, std::size_t k, std::string_view alphabet);
double cosine(const KmerVector& a, const KmerVector& b);

// Throws InvalidInput when k is 0 or exceeds the shortest training or test sequence.
CentroidModel fit_kmer_centroids(const LabeledSequenceSet& train, std::size_t k, std::string_view alphabet = "ACGT");

std::vector<VoteDistribution> kmer_centroid(const LabeledSequenceSet& train, const LabeledSequenceSet& test,
                                            std::size_t k, std::string_view alphabet = "ACGT");

} // namespace scog
