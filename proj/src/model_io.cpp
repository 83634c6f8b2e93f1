#include "scog/model_io.hpp"

#include "scog/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scog {

namespace {

constexpr std::string_view magic = "SCOGMODEL";

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::istringstream next(std::string_view expected_key)
    {
        std::string line;
        if (!std::getline(in_, line))
            fail("unexpected end of file, expected '" + std::string(expected_key) + "'");
        ++line_no_;
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key != expected_key)
            fail("expected '" + std::string(expected_key) + "', found '" + key + "'");
        return fields;
    }

    // Remainder of a "key <text>" line, verbatim.
    std::string next_text(std::string_view expected_key)
    {
        std::string line;
        if (!std::getline(in_, line))
            fail("unexpected end of file, expected '" + std::string(expected_key) + "'");
        ++line_no_;
        const std::string prefix = std::string(expected_key) + " ";
        if (line.rfind(prefix, 0) != 0)
            fail("expected '" + std::string(expected_key) + "'");
        return line.substr(prefix.size());
    }

    template <class T>
    T read(std::istringstream& fields, std::string_view what)
    {
        std::string token;
        if (!(fields >> token))
            fail("missing " + std::string(what));
        T value{};
        const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
            fail("bad " + std::string(what) + " '" + token + "'");
        return value;
    }

    std::string token(std::istringstream& fields, std::string_view what)
    {
        std::string t;
        if (!(fields >> t))
            fail("missing " + std::string(what));
        return t;
    }

    void finish(std::istringstream& fields)
    {
        std::string extra;
        if (fields >> extra)
            fail("trailing data '" + extra + "'");
    }

    [[noreturn]] void fail(const std::string& why) const
    {
        throw MalformedFile("model file line " + std::to_string(line_no_) + ": " + why);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 1; // the header line is consumed before the reader starts
};

} // namespace

void write_model(std::ostream& out, const Model& m)
{
    const auto& cfg = m.config();
    out << magic << ' ' << model_format_version << '\n';
    out << "window " << cfg.window.n << ' ' << cfg.window.stride << '\n';
    out << "merge_threshold " << format_double(cfg.core.merge_threshold) << '\n';
    out << "branch_threshold " << format_double(cfg.core.branch_threshold) << '\n';
    out << "max_representations ";
    if (cfg.core.max_representations)
        out << *cfg.core.max_representations;
    else
        out << "unbounded";
    out << '\n';

    const auto& cb = cfg.codebook;
    out << "codebook " << cb.bits_per_symbol() << ' ' << cb.pad_symbol() << ' ' << cb.entries().size() << '\n';
    for (const auto& [symbol, bits] : cb.entries()) {
        out << "symbol " << symbol << ' ' << bits.size();
        for (auto b : bits)
            out << ' ' << b;
        out << '\n';
    }

    const auto& labels = m.label_order();
    out << "labels " << labels.size() << '\n';
    for (const auto& label : labels)
        out << "label " << label << '\n';
    out << "trained_count " << m.trained_count() << '\n';

    auto label_index = [&](const std::string& label) {
        return std::find(labels.begin(), labels.end(), label) - labels.begin();
    };
    out << "nodes " << m.size() << '\n';
    for (const auto& node : m.nodes()) {
        out << "node " << node.id << ' ';
        if (node.parent)
            out << *node.parent;
        else
            out << '-';
        out << ' ' << node.children.size();
        for (auto c : node.children)
            out << ' ' << c;
        out << ' ' << node.sdr.size();
        for (auto b : node.sdr.active())
            out << ' ' << b;
        out << ' ' << node.label_counts.size();
        for (const auto& [label, count] : node.label_counts)
            out << ' ' << label_index(label) << ' ' << count;
        out << '\n';
    }
    out << "roots " << m.roots().size();
    for (auto r : m.roots())
        out << ' ' << r;
    out << "\nend\n";
}

Model read_model(std::istream& in)
{
    LineReader r(in);

    {
        std::string header;
        if (!std::getline(in, header) || header.rfind(std::string(magic) + " ", 0) != 0)
            throw MalformedFile("not a model file (missing " + std::string(magic) + " header)");
        int version = 0;
        const auto text = header.substr(magic.size() + 1);
        const auto res = std::from_chars(text.data(), text.data() + text.size(), version);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            throw MalformedFile("bad model format version '" + text + "'");
        if (version != model_format_version)
            throw VersionMismatch("model format version " + std::to_string(version) + " is not supported (expected " +
                                  std::to_string(model_format_version) + ")");
    }

    ModelConfig cfg;
    {
        auto f = r.next("window");
        cfg.window.n = r.read<std::uint32_t>(f, "window n");
        cfg.window.stride = r.read<std::uint32_t>(f, "stride");
        r.finish(f);
    }
    {
        auto f = r.next("merge_threshold");
        cfg.core.merge_threshold = r.read<double>(f, "merge threshold");
        r.finish(f);
    }
    {
        auto f = r.next("branch_threshold");
        cfg.core.branch_threshold = r.read<double>(f, "branch threshold");
        r.finish(f);
    }
    {
        auto f = r.next("max_representations");
        auto t = r.token(f, "max representations");
        if (t == "unbounded") {
            cfg.core.max_representations.reset();
        } else {
            std::istringstream one(t);
            cfg.core.max_representations = r.read<std::uint64_t>(one, "max representations");
        }
        r.finish(f);
    }
    {
        auto f = r.next("codebook");
        const auto bits = r.read<std::uint32_t>(f, "bits per symbol");
        const auto pad = r.token(f, "pad symbol");
        const auto count = r.read<std::size_t>(f, "symbol count");
        r.finish(f);
        if (pad.size() != 1)
            r.fail("pad symbol must be one character");
        std::vector<Codebook::Entry> entries;
        for (std::size_t i = 0; i < count; ++i) {
            auto s = r.next("symbol");
            const auto sym = r.token(s, "symbol");
            if (sym.size() != 1)
                r.fail("symbol must be one character");
            const auto k = r.read<std::size_t>(s, "code size");
            std::vector<std::uint32_t> code;
            for (std::size_t j = 0; j < k; ++j)
                code.push_back(r.read<std::uint32_t>(s, "code bit"));
            r.finish(s);
            entries.emplace_back(sym[0], std::move(code));
        }
        try {
            cfg.codebook = Codebook(std::move(entries), bits, pad[0]);
        } catch (const InvalidInput& e) {
            r.fail(e.what());
        }
    }

    std::vector<std::string> labels;
    {
        auto f = r.next("labels");
        const auto count = r.read<std::size_t>(f, "label count");
        r.finish(f);
        for (std::size_t i = 0; i < count; ++i)
            labels.push_back(r.next_text("label"));
    }

    std::uint64_t trained_count = 0;
    {
        auto f = r.next("trained_count");
        trained_count = r.read<std::uint64_t>(f, "trained count");
        r.finish(f);
    }

    try {
        cfg.validate();
    } catch (const InvalidInput& e) {
        r.fail(e.what());
    }
    const auto width = cfg.input_width();

    std::vector<Representation> nodes;
    {
        auto f = r.next("nodes");
        const auto count = r.read<std::size_t>(f, "node count");
        r.finish(f);
        nodes.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            auto n = r.next("node");
            Representation node;
            node.id = r.read<NodeId>(n, "node id");
            const auto parent = r.token(n, "parent");
            if (parent != "-") {
                std::istringstream one(parent);
                node.parent = r.read<NodeId>(one, "parent");
            }
            const auto nc = r.read<std::size_t>(n, "child count");
            for (std::size_t j = 0; j < nc; ++j)
                node.children.push_back(r.read<NodeId>(n, "child"));
            const auto na = r.read<std::size_t>(n, "active count");
            std::vector<std::uint32_t> active;
            for (std::size_t j = 0; j < na; ++j) {
                active.push_back(r.read<std::uint32_t>(n, "active bit"));
                if (j > 0 && active[j] <= active[j - 1])
                    r.fail("active bits must be strictly increasing");
            }
            try {
                node.sdr = Sdr(width, std::move(active));
            } catch (const InvalidInput& e) {
                r.fail(e.what());
            }
            const auto nl = r.read<std::size_t>(n, "label entry count");
            for (std::size_t j = 0; j < nl; ++j) {
                const auto idx = r.read<std::size_t>(n, "label index");
                const auto c = r.read<std::uint64_t>(n, "label count");
                if (idx >= labels.size())
                    r.fail("label index out of range");
                if (!node.label_counts.emplace(labels[idx], c).second)
                    r.fail("duplicate label entry");
            }
            r.finish(n);
            nodes.push_back(std::move(node));
        }
    }

    std::vector<NodeId> roots;
    {
        auto f = r.next("roots");
        const auto count = r.read<std::size_t>(f, "root count");
        for (std::size_t i = 0; i < count; ++i)
            roots.push_back(r.read<NodeId>(f, "root id"));
        r.finish(f);
    }
    {
        auto f = r.next("end");
        r.finish(f);
    }

    return Model::restore(std::move(cfg), std::move(nodes), std::move(roots), std::move(labels), trained_count);
}

void save_model(const Model& m, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open '" + path.string() + "' for writing");
    write_model(out, m);
    out.flush();
    if (!out)
        throw DataError("failed writing '" + path.string() + "'");
}

Model load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open model file '" + path.string() + "'");
    return read_model(in);
}

} // namespace scog
