#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scog/error.hpp"
#include "scog/sdr.hpp"

#include <random>
#include <set>

using namespace scog;

namespace {

Sdr random_sdr(std::mt19937_64& rng, std::uint32_t width)
{
    std::vector<std::uint32_t> bits;
    for (std::uint32_t b = 0; b < width; ++b)
        if (rng() % 4 == 0)
            bits.push_back(b);
    return Sdr(width, bits);
}

// Set-based Jaccard used as an independent oracle.
double jaccard_oracle(const Sdr& a, const Sdr& b)
{
    std::set<std::uint32_t> sa(a.active().begin(), a.active().end());
    std::set<std::uint32_t> sb(b.active().begin(), b.active().end());
    std::set<std::uint32_t> uni = sa;
    uni.insert(sb.begin(), sb.end());
    std::size_t inter = 0;
    for (auto x : sa)
        inter += sb.count(x);
    return uni.empty() ? 1.0 : double(inter) / double(uni.size());
}

} // namespace

TEST_CASE("sdr construction sorts and dedups")
{
    Sdr s(10, {7, 2, 2, 5});
    CHECK(s.width() == 10);
    CHECK(std::vector<std::uint32_t>(s.active().begin(), s.active().end()) == std::vector<std::uint32_t>{2, 5, 7});
    CHECK(s.test(5));
    CHECK_FALSE(s.test(6));
    CHECK_THROWS_AS(Sdr(4, {4}), InvalidInput);
}

TEST_CASE("sdr builder rejects out of order bits")
{
    SdrBuilder b(8);
    b.push(1);
    b.push(3);
    CHECK_THROWS_AS(b.push(3), InvalidInput);
    CHECK_THROWS_AS(b.push(9), InvalidInput);
}

TEST_CASE("similarity examples")
{
    const Sdr x(8, {1, 3, 6});
    CHECK(similarity(x, x) == 1.0);
    CHECK(similarity(Sdr(8, {0, 1}), Sdr(8, {2, 3})) == 0.0);
    CHECK(similarity(Sdr(8, {1, 3}), Sdr(8, {3, 5})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(similarity(Sdr(8), Sdr(8)) == 1.0);
    CHECK(similarity(Sdr(8), x) == 0.0);
    CHECK_THROWS_AS(similarity(Sdr(8), Sdr(9)), InvalidInput);
}

TEST_CASE("aggregate examples")
{
    const Sdr x(12, {0, 5});
    CHECK(aggregate(x, x) == x);
    CHECK(aggregate(x, Sdr(12)) == x);
    CHECK(aggregate(x, Sdr(12, {5, 9})) == Sdr(12, {0, 5, 9}));
    CHECK_THROWS_AS(aggregate(Sdr(8), Sdr(9)), InvalidInput);
}

TEST_CASE("similarity matches set oracle and aggregate is a semilattice")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const std::uint32_t width = 1 + static_cast<std::uint32_t>(rng() % 150);
        const auto a = random_sdr(rng, width), b = random_sdr(rng, width), c = random_sdr(rng, width);
        CHECK(similarity(a, b) == jaccard_oracle(a, b));
        CHECK(similarity(a, b) == similarity(b, a));
        CHECK(aggregate(a, b) == aggregate(b, a));
        CHECK(aggregate(aggregate(a, b), c) == aggregate(a, aggregate(b, c)));
        CHECK(aggregate(a, a) == a);
        const auto words = a.to_words();
        for (auto bit : a.active())
            CHECK(((words[bit / 64] >> (bit % 64)) & 1u) == 1u);
    }
}
