#include "scog/datasets.hpp"

#include "scog/error.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace scog {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Split split)
{
    return split == Split::Train ? "train" : "test";
}

std::vector<std::string> LabeledSequenceSet::sequences() const
{
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back(r.sequence);
    return out;
}

std::vector<std::string> LabeledSequenceSet::labels() const
{
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back(r.label);
    return out;
}

SequenceStats compute_stats(std::span<const LabeledSequence> records)
{
    SequenceStats s;
    if (records.empty())
        return s;
    s.min_length = records.front().sequence.size();
    std::size_t sum = 0;
    for (const auto& r : records) {
        s.min_length = std::min(s.min_length, r.sequence.size());
        s.max_length = std::max(s.max_length, r.sequence.size());
        sum += r.sequence.size();
    }
    s.mean_length = static_cast<double>(sum) / static_cast<double>(records.size());
    return s;
}

// --- manifests --------------------------------------------------------------

DatasetManifest load_manifest(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open manifest '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("manifest '" + path.string() + "': " + e.what());
    }

    auto fail = [&](const std::string& why) -> DataError {
        return DataError("manifest '" + path.string() + "': " + why);
    };
    auto required = [&](const char* key) -> std::string {
        if (!doc.contains(key) || !doc[key].is_string())
            throw fail(std::string("missing string field '") + key + "'");
        return doc[key].get<std::string>();
    };

    DatasetManifest m;
    const auto base = path.parent_path();
    try {
        m.name = required("name");
        m.train_path = base / required("train");
        m.test_path = base / required("test");
        if (doc.contains("alphabet"))
            m.alphabet = doc["alphabet"].get<std::string>();
        if (doc.contains("label_order"))
            m.label_order = doc["label_order"].get<std::vector<std::string>>();
        if (doc.contains("positive_label"))
            m.positive_label = doc["positive_label"].get<std::string>();
        if (doc.contains("task_group"))
            m.task_group = doc["task_group"].get<std::string>();
        if (doc.contains("declared")) {
            const auto& d = doc["declared"];
            if (d.contains("train_samples"))
                m.declared.train_samples = d["train_samples"].get<std::size_t>();
            if (d.contains("test_samples"))
                m.declared.test_samples = d["test_samples"].get<std::size_t>();
            if (d.contains("max_length"))
                m.declared.max_length = d["max_length"].get<std::size_t>();
            if (d.contains("avg_length"))
                m.declared.avg_length = d["avg_length"].get<double>();
        }
    } catch (const json::exception& e) {
        throw fail(e.what());
    }
    for (const auto* p : {&m.train_path, &m.test_path})
        if (!fs::exists(*p))
            throw fail("record file '" + p->string() + "' does not exist");
    return m;
}

void save_manifest(const DatasetManifest& m, const fs::path& path)
{
    json doc;
    doc["name"] = m.name;
    const auto base = path.parent_path();
    doc["train"] = m.train_path.lexically_proximate(base).generic_string();
    doc["test"] = m.test_path.lexically_proximate(base).generic_string();
    doc["alphabet"] = m.alphabet;
    if (!m.label_order.empty())
        doc["label_order"] = m.label_order;
    if (m.positive_label)
        doc["positive_label"] = *m.positive_label;
    if (!m.task_group.empty())
        doc["task_group"] = m.task_group;
    json declared = json::object();
    if (m.declared.train_samples)
        declared["train_samples"] = *m.declared.train_samples;
    if (m.declared.test_samples)
        declared["test_samples"] = *m.declared.test_samples;
    if (m.declared.max_length)
        declared["max_length"] = *m.declared.max_length;
    if (m.declared.avg_length)
        declared["avg_length"] = *m.declared.avg_length;
    if (!declared.empty())
        doc["declared"] = declared;
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write manifest '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

// --- record files -----------------------------------------------------------

LabeledSequenceSet read_records(const fs::path& path, std::string_view alphabet,
                                std::span<const std::string> label_order)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open record file '" + path.string() + "'");
    const auto where = [&](std::size_t line_no) { return path.string() + ":" + std::to_string(line_no); };

    std::array<bool, 256> allowed{};
    for (char c : alphabet)
        allowed[static_cast<unsigned char>(c)] = true;

    LabeledSequenceSet set;
    set.name = path.stem().string();
    set.label_order.assign(label_order.begin(), label_order.end());
    const bool fixed_order = !label_order.empty();

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw DataError(path.string() + ": missing header");
    ++line_no;
    detail::strip_cr(line);
    if (line != "sequence,label")
        throw DataError(where(line_no) + ": expected header 'sequence,label', found '" + line + "'");

    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        const auto fields = detail::split(line, ',');
        if (fields.size() != 2)
            throw DataError(where(line_no) + ": malformed row, expected 2 fields, found " +
                            std::to_string(fields.size()));
        LabeledSequence rec{fields[0], fields[1]};
        if (rec.sequence.empty())
            throw DataError(where(line_no) + ": empty sequence");
        if (rec.label.empty())
            throw DataError(where(line_no) + ": empty label");
        for (std::size_t i = 0; i < rec.sequence.size(); ++i) {
            auto& c = rec.sequence[i];
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (!allowed[static_cast<unsigned char>(c)])
                throw UnknownSymbol(c, i, where(line_no));
        }
        if (std::find(set.label_order.begin(), set.label_order.end(), rec.label) == set.label_order.end()) {
            if (fixed_order)
                throw DataError(where(line_no) + ": label '" + rec.label + "' is not in the declared label order");
            set.label_order.push_back(rec.label);
        }
        set.records.push_back(std::move(rec));
    }
    if (set.records.empty())
        throw DataError(path.string() + ": empty dataset");
    set.stats = compute_stats(set.records);
    return set;
}

LabeledSequenceSet load_dataset(const DatasetManifest& manifest, Split split)
{
    const auto& path = split == Split::Train ? manifest.train_path : manifest.test_path;
    auto set = read_records(path, manifest.alphabet, manifest.label_order);
    set.name = manifest.name;
    set.split = split;
    return set;
}

void save_dataset(const LabeledSequenceSet& set, const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write record file '" + path.string() + "'");
    out << "sequence,label\n";
    for (const auto& r : set.records)
        out << r.sequence << ',' << r.label << '\n';
}

// --- validation -------------------------------------------------------------

bool ValidationReport::ok() const noexcept
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.status == CheckStatus::Pass; });
}

std::string ValidationReport::summary() const
{
    std::ostringstream out;
    for (const auto& c : checks)
        out << (c.status == CheckStatus::Pass ? "PASS " : "WARN ") << c.field << " declared=" << c.declared
            << " observed=" << c.observed << '\n';
    return out.str();
}

ValidationReport validate_dataset(const LabeledSequenceSet& set, const DatasetManifest& manifest)
{
    ValidationReport report;
    report.dataset = set.name;
    const auto& d = manifest.declared;

    auto add_exact = [&](const char* field, std::optional<std::size_t> declared, std::size_t observed) {
        if (!declared)
            return;
        report.checks.push_back({field, std::to_string(*declared), std::to_string(observed),
                                 *declared == observed ? CheckStatus::Pass : CheckStatus::Warn});
    };

    const auto declared_count = set.split == Split::Train ? d.train_samples : d.test_samples;
    add_exact(set.split == Split::Train ? "train_samples" : "test_samples", declared_count, set.records.size());
    add_exact("max_length", d.max_length, set.stats.max_length);
    if (d.avg_length) {
        const bool match = std::round(set.stats.mean_length) == std::round(*d.avg_length);
        report.checks.push_back({"avg_length", detail::format_double(*d.avg_length),
                                 detail::format_double(set.stats.mean_length),
                                 match ? CheckStatus::Pass : CheckStatus::Warn});
    }
    return report;
}

// --- synthetic planted-motif data -------------------------------------------

SyntheticSpec planted_motif_spec()
{
    SyntheticSpec spec;
    spec.classes = {{"pos", {"AAAAA"}}, {"neg", {"TTTTT"}}};
    return spec;
}

namespace {

// Unbiased draw in [0, bound) from a generator whose output sequence is fixed
// by the standard, so datasets are identical across toolchains.
std::size_t draw(std::mt19937_64& rng, std::size_t bound)
{
    const auto limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

void check_spec(const SyntheticSpec& spec)
{
    if (spec.classes.size() < 2)
        throw InvalidSpec("synthetic spec needs at least two classes");
    if (spec.background.empty())
        throw InvalidSpec("synthetic spec needs a background alphabet");
    if (spec.train_size == 0 || spec.test_size == 0)
        throw InvalidSpec("synthetic spec needs non-empty splits");
    for (std::size_t a = 0; a < spec.classes.size(); ++a) {
        const auto& ca = spec.classes[a];
        if (ca.motifs.empty())
            throw InvalidSpec("class '" + ca.label + "' has no motifs");
        for (std::size_t b = a + 1; b < spec.classes.size(); ++b)
            if (ca.label == spec.classes[b].label)
                throw InvalidSpec("duplicate class label '" + ca.label + "'");
        for (const auto& m : ca.motifs) {
            if (m.empty() || m.size() > spec.length)
                throw InvalidSpec("motif '" + m + "' does not fit in length " + std::to_string(spec.length));
            for (std::size_t b = 0; b < spec.classes.size(); ++b) {
                if (b == a)
                    continue;
                for (const auto& other : spec.classes[b].motifs)
                    if (other.find(m) != std::string::npos)
                        throw InvalidSpec("motif sets overlap: '" + m + "' (" + ca.label + ") occurs in '" + other +
                                          "' (" + spec.classes[b].label + ")");
            }
        }
    }
}

bool contains_any(const std::string& seq, const std::vector<std::string>& motifs)
{
    return std::any_of(motifs.begin(), motifs.end(),
                       [&](const std::string& m) { return seq.find(m) != std::string::npos; });
}

LabeledSequenceSet generate(const SyntheticSpec& spec, Split split, std::size_t count, std::mt19937_64& rng)
{
    LabeledSequenceSet set;
    set.name = spec.name;
    set.split = split;
    for (const auto& c : spec.classes)
        set.label_order.push_back(c.label);

    constexpr int max_attempts = 100000;
    for (std::size_t i = 0; i < count; ++i) {
        const auto cls = i % spec.classes.size();
        const auto& planted = spec.classes[cls];
        std::string seq;
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt == max_attempts)
                throw InvalidSpec("could not generate a record for class '" + planted.label +
                                  "' free of foreign motifs");
            seq.assign(spec.length, ' ');
            for (auto& ch : seq)
                ch = spec.background[draw(rng, spec.background.size())];
            const auto& motif = planted.motifs[draw(rng, planted.motifs.size())];
            const auto pos = draw(rng, spec.length - motif.size() + 1);
            seq.replace(pos, motif.size(), motif);

            bool clean = true;
            for (std::size_t other = 0; other < spec.classes.size() && clean; ++other)
                if (other != cls && contains_any(seq, spec.classes[other].motifs))
                    clean = false;
            if (clean)
                break;
        }
        set.records.push_back({std::move(seq), planted.label});
    }
    set.stats = compute_stats(set.records);
    return set;
}

} // namespace

std::pair<LabeledSequenceSet, LabeledSequenceSet> make_synthetic(const SyntheticSpec& spec, std::uint64_t seed)
{
    check_spec(spec);
    std::mt19937_64 rng(seed);
    auto train = generate(spec, Split::Train, spec.train_size, rng);
    auto test = generate(spec, Split::Test, spec.test_size, rng);
    return {std::move(train), std::move(test)};
}

// --- bundled inventory -------------------------------------------------------

std::vector<InventoryEntry> load_inventory(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open inventory '" + path.string() + "'");
    std::vector<InventoryEntry> out;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto f = detail::split(line, ',');
        auto num = [&](std::size_t i) {
            const auto v = detail::parse_number<std::uint64_t>(f[i]);
            if (!v)
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + f[i] + "'");
            return *v;
        };
        if (f.size() != 7)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 7 fields");
        InventoryEntry e;
        e.dataset = f[0];
        e.declared.train_samples = num(1);
        e.declared.test_samples = num(2);
        e.declared.max_length = num(3);
        e.declared.avg_length = static_cast<double>(num(4));
        e.total_train_size = num(5);
        e.task_group = f[6];
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace scog
