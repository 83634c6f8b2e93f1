#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace scog {

// Fixed-width sparse binary vector stored as its sorted active bit indices.
class Sdr {
public:
    Sdr() = default;
    explicit Sdr(std::uint32_t width) : width_(width) {}

    // Sorts and deduplicates `active`; throws InvalidInput when an index is >= width.
    Sdr(std::uint32_t width, std::vector<std::uint32_t> active);

    std::uint32_t width() const noexcept { return width_; }
    std::span<const std::uint32_t> active() const noexcept { return active_; }
    std::size_t size() const noexcept { return active_.size(); }
    bool empty() const noexcept { return active_.empty(); }
    bool test(std::uint32_t bit) const noexcept;

    // Dense little-endian 64-bit word image; bit i lives in word i/64.
    std::vector<std::uint64_t> to_words() const;
    static std::size_t word_count(std::uint32_t width) noexcept { return (width + 63u) / 64u; }

    friend bool operator==(const Sdr&, const Sdr&) = default;

private:
    friend Sdr aggregate(const Sdr& a, const Sdr& b);
    friend class SdrBuilder;

    std::uint32_t width_ = 0;
    std::vector<std::uint32_t> active_;
};

// Appends strictly increasing indices without re-sorting; used by the encoders.
class SdrBuilder {
public:
    explicit SdrBuilder(std::uint32_t width) { sdr_.width_ = width; }
    void reserve(std::size_t n) { sdr_.active_.reserve(n); }
    void push(std::uint32_t bit); // bit must exceed the previous one and be < width
    Sdr finish() && { return std::move(sdr_); }

private:
    Sdr sdr_;
};

std::size_t overlap(const Sdr& a, const Sdr& b);

// Jaccard index of the active sets; 1 when both are empty.
double similarity(const Sdr& a, const Sdr& b);

// Union of the active sets.
Sdr aggregate(const Sdr& a, const Sdr& b);

} // namespace scog
