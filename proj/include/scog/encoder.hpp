#pragma once

#include "scog/sdr.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scog {

struct WindowConfig {
    std::uint32_t n = 5;
    std::uint32_t stride = 1;

    void validate() const; // throws InvalidInput unless n >= 1 and stride >= 1
    friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

// Maps each symbol of an alphabet onto a set of bit indices within a band of
// `bits_per_symbol` bits. Symbols with an empty code are ambiguity symbols:
// they are accepted but contribute no active bits.
class Codebook {
public:
    using Entry = std::pair<char, std::vector<std::uint32_t>>;

    // Throws InvalidInput when an index is out of range, two non-empty codes
    // overlap, a symbol repeats, or `pad_symbol` is not an ambiguity symbol.
    Codebook(std::vector<Entry> entries, std::uint32_t bits_per_symbol, char pad_symbol = 'N');

    // A,C,G,T one-hot on 4 bits; N and the IUPAC ambiguity codes map to nothing.
    static Codebook one_hot_dna();

    std::uint32_t bits_per_symbol() const noexcept { return bits_per_symbol_; }
    char pad_symbol() const noexcept { return pad_symbol_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    bool contains(char symbol) const noexcept { return lookup_[index(symbol)] >= 0; }
    bool is_ambiguous(char symbol) const; // throws UnknownSymbol for symbols outside the alphabet

    // Code for `symbol`, or nullptr when the symbol is outside the alphabet.
    const std::vector<std::uint32_t>* code(char symbol) const noexcept;

    friend bool operator==(const Codebook& a, const Codebook& b)
    {
        return a.bits_per_symbol_ == b.bits_per_symbol_ && a.pad_symbol_ == b.pad_symbol_ &&
               a.entries_ == b.entries_;
    }

private:
    static std::size_t index(char c) noexcept { return static_cast<unsigned char>(c); }

    std::vector<Entry> entries_;
    std::uint32_t bits_per_symbol_;
    char pad_symbol_;
    std::array<int, 256> lookup_{};
};

// Number of windows a sequence of `length` elements yields (length >= 1).
std::size_t window_count(std::size_t length, const WindowConfig& cfg);

// Sliding windows of cfg.n elements advancing by cfg.stride. A sequence
// shorter than n yields one window right-padded with `pad`.
std::vector<std::string> windows(std::string_view sequence, const WindowConfig& cfg, char pad = 'N');

Sdr encode_symbol(const Codebook& cb, char symbol);

// Position p of the window occupies bits [p*bits_per_symbol, (p+1)*bits_per_symbol).
Sdr encode_window(const Codebook& cb, std::string_view window, std::uint32_t n);

// Throws UnknownSymbol naming the first offending character and its position.
void check_symbols(const Codebook& cb, std::string_view sequence);

} // namespace scog
