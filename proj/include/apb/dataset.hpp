#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "apb/errors.hpp"
#include "apb/stump.hpp"

namespace apb {

// Column-oriented sparse example matrix with binary labels.  Feature and
// example indices are 1-based at this interface; absent entries are zeros.
struct Dataset {
    int n = 0;  // example count
    int K = 0;  // feature count
    std::vector<std::int8_t> labels;  // labels[i-1] in {+1, -1}
    // columns[k-1]: (example index, value) pairs sorted by example index,
    // one entry per example at most, only explicit nonzeros.
    std::vector<std::vector<std::pair<int, double>>> columns;

    std::int8_t label(int i) const { return labels[static_cast<std::size_t>(i) - 1]; }

    // x_i[k] with implicit zeros.  O(1) through the dense cache when built,
    // otherwise a binary search of the column.
    double value(int i, int k) const {
        if (!dense_.empty())
            return dense_[(static_cast<std::size_t>(k) - 1) * n + (i - 1)];
        return lookup(i, k);
    }

    // Builds the column-major dense cache; skipped when n*K exceeds the cap
    // (the cache exists for fast repeated lookups at desk scale).
    void build_dense_cache(std::size_t max_entries = std::size_t(1) << 26);

private:
    double lookup(int i, int k) const;
    std::vector<double> dense_;
};

// Parses svmlight/LIBSVM text: `<label> <index>:<value> ...` per line with
// strictly increasing 1-based indices; `#` starts a comment; labels > 0 map
// to +1 and labels <= 0 to -1.  K is the max of the largest index seen and
// declared_dim.  Throws ParseError naming the line on malformed input and
// on empty input.
Dataset parse_svmlight(std::istream& in, int declared_dim = 0);

// File variant; transparently inflates gzip when the name ends in ".gz".
Dataset load_svmlight(const std::string& path, int declared_dim = 0);

// Inverse of parse_svmlight up to formatting: one example per line, explicit
// nonzeros only, values printed round-trip exact.
std::string serialize_svmlight(const Dataset& d);

// Ordered duplicate-free subset of a Dataset's examples.  Value-like; the
// base Dataset must outlive the view.
struct ExampleView {
    const Dataset* base = nullptr;
    std::vector<int> members;  // 1-based example indices

    static ExampleView full(const Dataset& d) {
        ExampleView v;
        v.base = &d;
        v.members.resize(static_cast<std::size_t>(d.n));
        for (int i = 0; i < d.n; ++i) v.members[static_cast<std::size_t>(i)] = i + 1;
        return v;
    }
};

// Explicit nonzeros of column k restricted to view members, in member order
// of the column (ascending example index).  Throws ArgumentError when k is
// out of range.
std::vector<std::pair<int, double>> column_values(const Dataset& d, int k, const ExampleView& view);

// Partitions the view by s: first result holds members with h(x) = +1,
// second those with h(x) = -1; both preserve the input member order.
std::pair<ExampleView, ExampleView> split_view(const ExampleView& view, const Stump& s);

}  // namespace apb
