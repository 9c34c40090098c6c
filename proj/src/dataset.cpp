#include "apb/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace apb {

void Dataset::build_dense_cache(std::size_t max_entries) {
    dense_.clear();
    const std::size_t entries = static_cast<std::size_t>(n) * static_cast<std::size_t>(K);
    if (entries == 0 || entries > max_entries) return;
    dense_.assign(entries, 0.0);
    for (int k = 1; k <= K; ++k) {
        double* col = dense_.data() + (static_cast<std::size_t>(k) - 1) * n;
        for (const auto& [i, v] : columns[static_cast<std::size_t>(k) - 1]) col[i - 1] = v;
    }
}

double Dataset::lookup(int i, int k) const {
    const auto& col = columns[static_cast<std::size_t>(k) - 1];
    auto it = std::lower_bound(col.begin(), col.end(), i,
                               [](const std::pair<int, double>& e, int idx) { return e.first < idx; });
    return (it != col.end() && it->first == i) ? it->second : 0.0;
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw ParseError("svmlight parse error at line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const char* begin, const char* end, int line_no, const char* what) {
    if (begin < end && *begin == '+') ++begin;  // from_chars rejects the +1 convention
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) fail(line_no, std::string("malformed ") + what);
    return out;
}

}  // namespace

Dataset parse_svmlight(std::istream& in, int declared_dim) {
    Dataset d;
    d.K = std::max(declared_dim, 0);
    std::string line;
    int line_no = 0;
    bool saw_example = false;
    // (example, feature, value) triples buffered until K is known.
    std::vector<std::pair<std::pair<int, int>, double>> entries;

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const char* p = line.data();
        const char* end = p + line.size();
        auto skip_ws = [&] { while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p; };
        auto token_end = [&] {
            const char* q = p;
            while (q < end && *q != ' ' && *q != '\t' && *q != '\r') ++q;
            return q;
        };

        skip_ws();
        if (p == end) continue;  // blank or comment-only line

        const char* te = token_end();
        double label = parse_number(p, te, line_no, "label");
        p = te;
        d.labels.push_back(static_cast<std::int8_t>(label > 0 ? +1 : -1));
        const int example = static_cast<int>(d.labels.size());
        saw_example = true;

        int prev_index = 0;
        for (skip_ws(); p < end; skip_ws()) {
            te = token_end();
            const char* colon = std::find(p, te, ':');
            if (colon == te) fail(line_no, "feature token missing ':'");
            int index = 0;
            auto [ptr, ec] = std::from_chars(p, colon, index);
            if (ec != std::errc{} || ptr != colon) fail(line_no, "malformed feature index");
            if (index <= 0) fail(line_no, "feature index must be positive");
            if (index <= prev_index) fail(line_no, "feature indices not strictly increasing");
            prev_index = index;
            double value = parse_number(colon + 1, te, line_no, "feature value");
            entries.push_back({{example, index}, value});
            d.K = std::max(d.K, index);
            p = te;
        }
    }
    if (!saw_example) throw ParseError("svmlight parse error: empty input");

    d.n = static_cast<int>(d.labels.size());
    d.columns.resize(static_cast<std::size_t>(d.K));
    for (const auto& [ik, v] : entries)
        d.columns[static_cast<std::size_t>(ik.second) - 1].push_back({ik.first, v});
    // Entries arrive in example order, so each column is already sorted.
    d.build_dense_cache();
    return d;
}

namespace {

std::string read_gzip(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open " + path + ": " + std::strerror(errno));
    std::string out;
    std::array<char, 1 << 16> buf;
    int got;
    while ((got = gzread(f, buf.data(), buf.size())) > 0) out.append(buf.data(), static_cast<std::size_t>(got));
    if (got < 0) {
        int zerr = 0;
        std::string msg = gzerror(f, &zerr);
        gzclose(f);
        throw IoError("gzip read failed for " + path + ": " + msg);
    }
    gzclose(f);
    return out;
}

}  // namespace

Dataset load_svmlight(const std::string& path, int declared_dim) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        std::istringstream in(read_gzip(path));
        return parse_svmlight(in, declared_dim);
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + ": " + std::strerror(errno));
    return parse_svmlight(in, declared_dim);
}

std::string serialize_svmlight(const Dataset& d) {
    // Row-major walk over the column-sparse storage.
    std::vector<std::size_t> cursor(static_cast<std::size_t>(d.K), 0);
    std::string out;
    char buf[64];
    for (int i = 1; i <= d.n; ++i) {
        out += (d.label(i) > 0 ? "+1" : "-1");
        for (int k = 1; k <= d.K; ++k) {
            const auto& col = d.columns[static_cast<std::size_t>(k) - 1];
            std::size_t& c = cursor[static_cast<std::size_t>(k) - 1];
            if (c < col.size() && col[c].first == i) {
                std::snprintf(buf, sizeof buf, " %d:%.17g", k, col[c].second);
                out += buf;
                ++c;
            }
        }
        out += '\n';
    }
    return out;
}

std::vector<std::pair<int, double>> column_values(const Dataset& d, int k, const ExampleView& view) {
    if (k < 1 || k > d.K)
        throw ArgumentError("feature index " + std::to_string(k) + " out of range [1, " +
                            std::to_string(d.K) + "]");
    std::vector<std::uint8_t> in_view(static_cast<std::size_t>(d.n) + 1, 0);
    for (int i : view.members) in_view[static_cast<std::size_t>(i)] = 1;
    std::vector<std::pair<int, double>> out;
    for (const auto& e : d.columns[static_cast<std::size_t>(k) - 1])
        if (in_view[static_cast<std::size_t>(e.first)]) out.push_back(e);
    return out;
}

std::pair<ExampleView, ExampleView> split_view(const ExampleView& view, const Stump& s) {
    const Dataset& d = *view.base;
    if (s.k < 1 || s.k > d.K)
        throw ArgumentError("stump feature " + std::to_string(s.k) + " out of range");
    ExampleView plus, minus;
    plus.base = minus.base = view.base;
    for (int i : view.members)
        (s.predict(d.value(i, s.k)) > 0 ? plus : minus).members.push_back(i);
    return {std::move(plus), std::move(minus)};
}

}  // namespace apb
