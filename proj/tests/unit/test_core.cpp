#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scog/core.hpp"
#include "scog/error.hpp"

#include <random>

using namespace scog;

namespace {

// Width-4 model (window of one symbol) so tests can hand-pick bit patterns.
ModelConfig tiny_config()
{
    ModelConfig cfg;
    cfg.window = {1, 1};
    return cfg;
}

ModelConfig window_config(std::uint32_t n)
{
    ModelConfig cfg;
    cfg.window = {n, 1};
    return cfg;
}

Sdr random_window(std::mt19937_64& rng, std::uint32_t n)
{
    std::vector<std::uint32_t> bits;
    for (std::uint32_t p = 0; p < n; ++p)
        bits.push_back(p * 4 + static_cast<std::uint32_t>(rng() % 4));
    return Sdr(n * 4, bits);
}

void audit(const Model& m)
{
    std::uint64_t leaf_total = 0;
    for (const auto& node : m.nodes()) {
        if (node.is_leaf()) {
            leaf_total += node.total();
            continue;
        }
        Sdr composed(m.input_width());
        LabelCounts summed;
        for (auto c : node.children) {
            REQUIRE(m.node(c).parent == node.id);
            composed = aggregate(composed, m.node(c).sdr);
            for (const auto& [label, count] : m.node(c).label_counts)
                summed[label] += count;
        }
        CHECK(composed == node.sdr);
        CHECK(summed == node.label_counts);
    }
    CHECK(leaf_total == m.trained_count());
}

NodeId brute_force_identify(const Model& m, const Sdr& x)
{
    NodeId best = 0;
    double best_sim = -1.0;
    for (const auto& node : m.nodes()) {
        if (!node.is_leaf())
            continue;
        const double s = similarity(node.sdr, x);
        if (s > best_sim) {
            best_sim = s;
            best = node.id;
        }
    }
    return best;
}

} // namespace

TEST_CASE("first insertion creates one root leaf")
{
    Model m(tiny_config());
    CHECK(m.empty());
    CHECK(m.train(Sdr(4, {1}), "pos") == 0);
    REQUIRE(m.size() == 1);
    CHECK(m.roots() == std::vector<NodeId>{0});
    CHECK(m.node(0).label_counts == LabelCounts{{"pos", 1}});
    CHECK(m.trained_count() == 1);
}

TEST_CASE("identical inputs merge into one leaf")
{
    Model m(window_config(5));
    const Sdr x(20, {0, 5, 10, 15, 16});
    m.train(x, "pos");
    m.train(x, "pos");
    CHECK(m.size() == 1);
    CHECK(m.node(0).label_counts.at("pos") == 2);
}

TEST_CASE("disjoint inputs become separate roots")
{
    Model m(tiny_config());
    m.train(Sdr(4, {0, 1}), "a");
    CHECK(m.train(Sdr(4, {2, 3}), "b") == 1);
    CHECK(m.roots() == std::vector<NodeId>{0, 1});
    CHECK(m.leaves() == std::vector<NodeId>{0, 1});
}

TEST_CASE("branching creates a composing parent, then siblings join it")
{
    ModelConfig cfg;
    cfg.window = {1, 1};
    cfg.codebook = Codebook({{'A', {0}}, {'B', {1}}, {'C', {2}}, {'D', {3}}, {'E', {4}}, {'N', {}}}, 5);
    Model m(cfg);
    m.train(Sdr(5, {0, 1}), "a");       // leaf 0
    m.train(Sdr(5, {0, 1, 2}), "b");    // sim 2/3 in [tau, theta): leaf 1 + parent 2
    REQUIRE(m.size() == 3);
    CHECK(m.roots() == std::vector<NodeId>{2});
    CHECK(m.node(2).children == std::vector<NodeId>{0, 1});
    CHECK(m.node(2).sdr == Sdr(5, {0, 1, 2}));
    CHECK(m.node(2).label_counts == LabelCounts{{"a", 1}, {"b", 1}});

    m.train(Sdr(5, {0, 3}), "a"); // best is leaf 0 at 1/3 < tau = 0.4: new root
    CHECK(m.roots() == std::vector<NodeId>{2, 3});

    m.train(Sdr(5, {1, 2, 4}), "c"); // best leaf 1 at 2/4: joins parent 2
    CHECK(m.node(4).parent == NodeId{2});
    CHECK(m.node(2).children == std::vector<NodeId>{0, 1, 4});
    CHECK(m.node(2).sdr == Sdr(5, {0, 1, 2, 4}));

    m.train(Sdr(5, {0, 1}), "b"); // exact match on leaf 0: merge, ancestors recounted
    CHECK(m.node(0).label_counts == LabelCounts{{"a", 1}, {"b", 1}});
    CHECK(m.node(2).label_counts == LabelCounts{{"a", 1}, {"b", 2}, {"c", 1}});
    audit(m);
}

TEST_CASE("identify examples")
{
    Model m(tiny_config());
    CHECK_THROWS_AS(m.identify(Sdr(4, {0})), UntrainedModel);
    m.train(Sdr(4, {0, 1}), "A");
    m.train(Sdr(4, {2, 3}), "B");

    const auto exact = m.identify(Sdr(4, {2, 3}));
    CHECK(exact.id == 1);
    CHECK(exact.similarity == 1.0);

    const auto tie = m.identify(Sdr(4, {1, 2}));
    CHECK(tie.id == 0);
    CHECK(tie.similarity == doctest::Approx(1.0 / 3.0));

    Model disjoint(window_config(2));
    disjoint.train(Sdr(8, {0, 4}), "x");
    disjoint.train(Sdr(8, {1, 5}), "y");
    const auto none = disjoint.identify(Sdr(8, {2, 6}));
    CHECK(none.id == 0);
    CHECK(none.similarity == 0.0);

    CHECK_THROWS_AS(m.identify(Sdr(8, {0})), InvalidInput);
}

TEST_CASE("predict_window_label tie rules")
{
    Model m(tiny_config());
    const Sdr x(4, {0});
    for (int i = 0; i < 3; ++i)
        m.train(x, "pos");
    m.train(x, "neg");
    CHECK(m.predict_label(x) == "pos");

    Model tied(tiny_config());
    tied.train(x, "pos");
    tied.train(x, "pos");
    tied.train(x, "neg");
    tied.train(x, "neg");
    const std::vector<std::string> order{"neg", "pos"};
    CHECK(predict_window_label(tied, x, order) == "neg");
    CHECK(predict_window_label(tied, x) == "pos"); // model order: first seen

    Model single(tiny_config());
    single.train(x, "L");
    CHECK(single.predict_label(Sdr(4, {3})) == "L");
}

TEST_CASE("majority label ranks unlisted labels after listed ones")
{
    const LabelCounts counts{{"b", 2}, {"z", 2}, {"a", 2}};
    const std::vector<std::string> order{"z"};
    CHECK(majority_label(counts, order) == "z");
    CHECK(majority_label(counts, {}) == "a");
}

TEST_CASE("capacity errors are explicit and leave the model unchanged")
{
    ModelConfig cfg = tiny_config();
    cfg.core.max_representations = 1;
    Model m(cfg);
    m.train(Sdr(4, {0, 1}), "a");
    const Model before = m;
    CHECK_THROWS_AS(m.train(Sdr(4, {2, 3}), "b"), CapacityError);
    CHECK(m == before);
    m.train(Sdr(4, {0, 1}), "b"); // merging needs no room
    CHECK(m.trained_count() == 2);

    // A branch into a root leaf needs two slots.
    cfg.core.max_representations = 2;
    Model two(cfg);
    two.train(Sdr(4, {0, 1}), "a");
    CHECK_THROWS_AS(two.train(Sdr(4, {0, 1, 2}), "a"), CapacityError);
    CHECK(two.size() == 1);
}

TEST_CASE("config validation")
{
    ModelConfig cfg;
    cfg.core.branch_threshold = 0.9;
    CHECK_THROWS_AS(Model{cfg}, InvalidInput);
    cfg = {};
    cfg.core.merge_threshold = 1.5;
    CHECK_THROWS_AS(Model{cfg}, InvalidInput);
    cfg = {};
    cfg.core.max_representations = 0;
    CHECK_THROWS_AS(Model{cfg}, InvalidInput);
    cfg = {};
    cfg.window.n = 0;
    CHECK_THROWS_AS(Model{cfg}, InvalidInput);
    Model ok{ModelConfig{}};
    CHECK_THROWS_AS(ok.train(Sdr(4, {0}), "x"), InvalidInput);
}

TEST_CASE("random training keeps the tree consistent and identify optimal")
{
    std::mt19937_64 rng(2024);
    for (std::uint32_t n : {2u, 3u, 5u}) {
        Model m(window_config(n));
        const std::vector<std::string> labels{"a", "b", "c"};
        for (int i = 0; i < 400; ++i)
            m.train(random_window(rng, n), labels[rng() % 3]);
        audit(m);
        for (int q = 0; q < 200; ++q) {
            const auto x = random_window(rng, n);
            const auto got = m.identify(x);
            CHECK(got.id == brute_force_identify(m, x));
            CHECK(got.similarity == similarity(m.node(got.id).sdr, x));
        }
    }
}

TEST_CASE("identical insertion order gives identical models")
{
    std::mt19937_64 a(9), b(9);
    Model ma(window_config(4)), mb(window_config(4));
    for (int i = 0; i < 300; ++i) {
        ma.train(random_window(a, 4), (a() & 1) ? "x" : "y");
        mb.train(random_window(b, 4), (b() & 1) ? "x" : "y");
    }
    CHECK(ma == mb);
}

TEST_CASE("pairwise disjoint inputs give one leaf each")
{
    Model m(window_config(8)); // width 32
    for (std::uint32_t i = 0; i < 32; ++i)
        m.train(Sdr(32, {i}), "l");
    CHECK(m.leaves().size() == 32);
    CHECK(m.roots().size() == 32);
}
