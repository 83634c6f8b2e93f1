#include "scog/sdr.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <iterator>
#include <string>

namespace scog {

Sdr::Sdr(std::uint32_t width, std::vector<std::uint32_t> active)
    : width_(width), active_(std::move(active))
{
    std::sort(active_.begin(), active_.end());
    active_.erase(std::unique(active_.begin(), active_.end()), active_.end());
    if (!active_.empty() && active_.back() >= width_)
        throw InvalidInput("sdr bit " + std::to_string(active_.back()) + " out of range for width " +
                           std::to_string(width_));
}

bool Sdr::test(std::uint32_t bit) const noexcept
{
    return std::binary_search(active_.begin(), active_.end(), bit);
}

std::vector<std::uint64_t> Sdr::to_words() const
{
    std::vector<std::uint64_t> words(word_count(width_), 0);
    for (auto bit : active_)
        words[bit / 64] |= std::uint64_t{1} << (bit % 64);
    return words;
}

void SdrBuilder::push(std::uint32_t bit)
{
    auto& active = sdr_.active_;
    if (bit >= sdr_.width_ || (!active.empty() && bit <= active.back()))
        throw InvalidInput("sdr builder: bit " + std::to_string(bit) + " out of order or range");
    active.push_back(bit);
}

static void require_same_width(const Sdr& a, const Sdr& b)
{
    if (a.width() != b.width())
        throw InvalidInput("sdr width mismatch: " + std::to_string(a.width()) + " vs " +
                           std::to_string(b.width()));
}

std::size_t overlap(const Sdr& a, const Sdr& b)
{
    require_same_width(a, b);
    auto ia = a.active().begin(), ea = a.active().end();
    auto ib = b.active().begin(), eb = b.active().end();
    std::size_t count = 0;
    while (ia != ea && ib != eb) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

double similarity(const Sdr& a, const Sdr& b)
{
    const auto inter = overlap(a, b);
    const auto uni = a.size() + b.size() - inter;
    if (uni == 0)
        return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Sdr aggregate(const Sdr& a, const Sdr& b)
{
    require_same_width(a, b);
    Sdr out(a.width());
    out.active_.reserve(a.size() + b.size());
    std::set_union(a.active_.begin(), a.active_.end(), b.active_.begin(), b.active_.end(),
                   std::back_inserter(out.active_));
    return out;
}

} // namespace scog
