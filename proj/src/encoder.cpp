#include "scog/encoder.hpp"

#include "scog/error.hpp"

#include <algorithm>

namespace scog {

void WindowConfig::validate() const
{
    if (n < 1)
        throw InvalidInput("window length n must be >= 1");
    if (stride < 1)
        throw InvalidInput("window stride must be >= 1");
}

Codebook::Codebook(std::vector<Entry> entries, std::uint32_t bits_per_symbol, char pad_symbol)
    : entries_(std::move(entries)), bits_per_symbol_(bits_per_symbol), pad_symbol_(pad_symbol)
{
    if (bits_per_symbol_ == 0)
        throw InvalidInput("codebook: bits_per_symbol must be positive");
    lookup_.fill(-1);
    std::vector<bool> used(bits_per_symbol_, false);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto& [symbol, bits] = entries_[i];
        if (lookup_[index(symbol)] >= 0)
            throw InvalidInput(std::string("codebook: duplicate symbol '") + symbol + "'");
        std::sort(bits.begin(), bits.end());
        bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
        for (auto bit : bits) {
            if (bit >= bits_per_symbol_)
                throw InvalidInput(std::string("codebook: index out of range for '") + symbol + "'");
            if (used[bit])
                throw InvalidInput(std::string("codebook: code of '") + symbol + "' overlaps another symbol");
            used[bit] = true;
        }
        lookup_[index(symbol)] = static_cast<int>(i);
    }
    const auto* pad = code(pad_symbol_);
    if (pad == nullptr || !pad->empty())
        throw InvalidInput(std::string("codebook: pad symbol '") + pad_symbol_ +
                           "' must be an ambiguity symbol of the alphabet");
}

Codebook Codebook::one_hot_dna()
{
    std::vector<Entry> entries{{'A', {0}}, {'C', {1}}, {'G', {2}}, {'T', {3}}};
    for (char c : std::string_view("NRYSWKMBDHV"))
        entries.push_back({c, {}});
    return Codebook(std::move(entries), 4, 'N');
}

const std::vector<std::uint32_t>* Codebook::code(char symbol) const noexcept
{
    const int slot = lookup_[index(symbol)];
    return slot < 0 ? nullptr : &entries_[static_cast<std::size_t>(slot)].second;
}

bool Codebook::is_ambiguous(char symbol) const
{
    const auto* bits = code(symbol);
    if (bits == nullptr)
        throw UnknownSymbol(symbol, 0);
    return bits->empty();
}

std::size_t window_count(std::size_t length, const WindowConfig& cfg)
{
    cfg.validate();
    if (length == 0)
        throw InvalidInput("empty sequence");
    if (length < cfg.n)
        return 1;
    return (length - cfg.n) / cfg.stride + 1;
}

std::vector<std::string> windows(std::string_view sequence, const WindowConfig& cfg, char pad)
{
    const auto count = window_count(sequence.size(), cfg);
    std::vector<std::string> out;
    out.reserve(count);
    if (sequence.size() < cfg.n) {
        std::string padded(sequence);
        padded.resize(cfg.n, pad);
        out.push_back(std::move(padded));
        return out;
    }
    for (std::size_t k = 0; k < count; ++k)
        out.emplace_back(sequence.substr(k * cfg.stride, cfg.n));
    return out;
}

Sdr encode_symbol(const Codebook& cb, char symbol)
{
    const auto* bits = cb.code(symbol);
    if (bits == nullptr)
        throw UnknownSymbol(symbol, 0);
    return Sdr(cb.bits_per_symbol(), *bits);
}

Sdr encode_window(const Codebook& cb, std::string_view window, std::uint32_t n)
{
    if (window.size() != n)
        throw InvalidInput("window length " + std::to_string(window.size()) + " does not match n = " +
                           std::to_string(n));
    const auto band = cb.bits_per_symbol();
    SdrBuilder builder(n * band);
    builder.reserve(n);
    for (std::uint32_t p = 0; p < n; ++p) {
        const auto* bits = cb.code(window[p]);
        if (bits == nullptr)
            throw UnknownSymbol(window[p], p);
        for (auto bit : *bits)
            builder.push(p * band + bit);
    }
    return std::move(builder).finish();
}

void check_symbols(const Codebook& cb, std::string_view sequence)
{
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (!cb.contains(sequence[i]))
            throw UnknownSymbol(sequence[i], i);
    }
}

} // namespace scog
