#include "apb/tree_boosting.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <utility>

#include "apb/errors.hpp"
#include "apb/kernels.hpp"

namespace apb {
namespace {

std::unique_ptr<TreeNode> make_leaf(std::int8_t label) {
    auto node = std::make_unique<TreeNode>();
    node->is_leaf = true;
    node->label = label;
    return node;
}

// Weighted-majority label of the view under wv (positions align with
// view.members); exact ties fall back to the caller's side sign.
std::int8_t majority_label(const ExampleView& view, const WeightVector& wv,
                           std::int8_t fallback) {
    double pos = 0.0, neg = 0.0;
    for (std::size_t p = 0; p < view.members.size(); ++p) {
        if (view.base->label(view.members[p]) > 0)
            pos += wv.w[p];
        else
            neg += wv.w[p];
    }
    if (pos > neg) return +1;
    if (neg > pos) return -1;
    return fallback;
}

bool is_pure(const ExampleView& view) {
    if (view.members.empty()) return true;
    const std::int8_t first = view.base->label(view.members.front());
    for (int id : view.members)
        if (view.base->label(id) != first) return false;
    return true;
}

// Restricts a parent weight vector to a child view whose members are a
// subsequence of the parent's.  Ranks keep their parent relative order,
// which equals the canonical (weight desc, index asc) order because the
// parent already satisfied it.  Does not renormalize.
WeightVector restrict_weights(const ExampleView& parent_view, const WeightVector& parent_wv,
                              const ExampleView& child_view) {
    const std::size_t np = parent_view.members.size();
    const std::size_t nc = child_view.members.size();
    std::vector<int> child_pos(np + 1, 0);  // parent position -> child position, 0 = absent
    for (std::size_t pp = 0, cp = 0; pp < np && cp < nc; ++pp) {
        if (parent_view.members[pp] == child_view.members[cp]) {
            child_pos[pp + 1] = static_cast<int>(++cp);
        }
    }
    WeightVector out;
    out.w.resize(nc);
    out.order.reserve(nc);
    for (int p : parent_wv.order) {
        const int cp = child_pos[p];
        if (cp == 0) continue;
        out.w[cp - 1] = parent_wv.w[p - 1];
        out.order.push_back(cp);
    }
    out.rebuild_prefix_sums();
    return out;
}

SearchResult search_stump(const ExampleView& view, const WeightVector& wv,
                          Strategy strategy, const std::vector<int>* subset,
                          const QuickBoostParams& qb) {
    switch (strategy) {
        case Strategy::adaptive:
            return adaptive_pruning_stump(view, wv, subset);
        case Strategy::quickboost:
            return quick_boost_stump(view, wv, qb.batches, qb.init_mass, subset);
        case Strategy::exhaustive:
            return exhaustive_stump(view, wv, subset);
    }
    throw ArgumentError("unknown strategy");
}

std::unique_ptr<TreeNode> build_tree(const ExampleView& view, const WeightVector& wv,
                                     int depth_left, Strategy strategy,
                                     const std::vector<int>* subset,
                                     const QuickBoostParams& qb, std::int8_t fallback,
                                     long long& assessments) {
    if (is_pure(view) || depth_left == 0)
        return make_leaf(majority_label(view, wv, fallback));

    SearchResult found = search_stump(view, wv, strategy, subset, qb);
    assessments += found.assessments;

    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    node->stump = found.stump;

    auto [plus_view, minus_view] = split_view(view, found.stump);
    auto grow_child = [&](const ExampleView& child_view, std::int8_t side) {
        if (child_view.members.empty()) return make_leaf(side);
        WeightVector child_wv = restrict_weights(view, wv, child_view);
        if (child_wv.total() <= 0.0) return make_leaf(side);
        normalize(child_wv);
        return build_tree(child_view, child_wv, depth_left - 1, strategy, subset, qb,
                          side, assessments);
    };
    node->left = grow_child(plus_view, +1);
    node->right = grow_child(minus_view, -1);
    return node;
}

}  // namespace

std::int8_t predict(const TreeNode& node, const Dataset& d, int example) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf)
        cur = cur->stump.predict(d.value(example, cur->stump.k)) > 0 ? cur->left.get()
                                                                     : cur->right.get();
    return cur->label;
}

std::int8_t predict(const Ensemble& e, const Dataset& d, int example) {
    double margin = 0.0;
    for (const Round& r : e.rounds) margin += r.alpha * predict(*r.tree, d, example);
    return margin >= 0.0 ? +1 : -1;
}

double error_rate(const Ensemble& e, const Dataset& d) {
    if (d.n == 0) throw ArgumentError("error_rate on empty dataset");
    long long wrong = 0;
    for (int i = 1; i <= d.n; ++i) wrong += predict(e, d, i) != d.label(i);
    return static_cast<double>(wrong) / d.n;
}

std::pair<std::unique_ptr<TreeNode>, long long> train_tree(
    const ExampleView& view, const WeightVector& wv, int depth, Strategy strategy,
    const std::vector<int>* feature_subset, const QuickBoostParams& qb) {
    if (depth < 1) throw ArgumentError("tree depth must be >= 1");
    if (view.members.empty()) throw ArgumentError("train_tree on empty view");
    if (wv.n() != static_cast<int>(view.members.size()))
        throw ArgumentError("weight vector size mismatches view");
    if (wv.total() <= 0.0) throw DegenerateWeights("zero total weight at tree root");
    long long assessments = 0;
    auto root = build_tree(view, wv, depth, strategy, feature_subset, qb, +1, assessments);
    return {std::move(root), assessments};
}

namespace {

// Deterministic draw of `count` distinct features via partial Fisher-Yates
// on the generator's raw stream (std::uniform_int_distribution is
// implementation-defined and would break cross-platform reproducibility).
std::vector<int> draw_feature_subset(int K, int count, std::mt19937_64& rng) {
    std::vector<int> pool(K);
    for (int k = 1; k <= K; ++k) pool[k - 1] = k;
    for (int i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (K - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

std::pair<Ensemble, std::vector<RoundMetrics>> adaboost(const Dataset& train,
                                                        const Dataset* test,
                                                        const BoostConfig& cfg,
                                                        const RoundHook& hook) {
    if (cfg.rounds < 1) throw ArgumentError("rounds must be >= 1");
    if (cfg.depth < 1) throw ArgumentError("depth must be >= 1");
    if (train.n == 0) throw ArgumentError("empty training set");
    if (cfg.variant.kind != VariantKind::none &&
        !(cfg.variant.q > 0.0 && cfg.variant.q <= 1.0))
        throw ArgumentError("variant parameter must satisfy 0 < q <= 1");

    const int n = train.n;
    WeightVector master = make_uniform_weights(n);
    ExampleView full = ExampleView::full(train);

    Ensemble ensemble;
    std::vector<RoundMetrics> rows;
    rows.reserve(cfg.rounds);
    std::vector<double> margin_train(n, 0.0);
    std::vector<double> margin_test(test ? test->n : 0, 0.0);
    std::vector<std::int8_t> h_train(n);
    std::vector<std::uint8_t> wrong_mask(n);
    long long assess_cum = 0;

    for (int t = 1; t <= cfg.rounds; ++t) {
        const auto tic = std::chrono::steady_clock::now();
        RoundMetrics row;
        row.round = t;

        // Variant preprocessing decides the root search problem.
        std::vector<int> subset_store;
        const std::vector<int>* subset = nullptr;
        ExampleView root_view = full;
        WeightVector root_wv = master;
        if (cfg.variant.kind == VariantKind::lazy) {
            const int K = train.K;
            const int count = std::max(
                1, std::min(K, static_cast<int>(std::ceil(cfg.variant.q * K))));
            std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed),
                              static_cast<std::uint64_t>(t)};
            std::mt19937_64 rng(seq);
            subset_store = draw_feature_subset(K, count, rng);
            subset = &subset_store;
        } else if (cfg.variant.kind == VariantKind::trim) {
            const std::size_t m = static_cast<std::size_t>(
                prefix_index(master, cfg.variant.q * master.total()));
            // A prefix covering everything is the identity: skip the
            // restriction so q = 1 reproduces the unrestricted run exactly
            // (renormalizing by a total of 1 - ulp would still shift bits).
            if (m < master.order.size()) {
                std::vector<int> members(master.order.begin(),
                                         master.order.begin() + static_cast<std::ptrdiff_t>(m));
                std::sort(members.begin(), members.end());
                root_view = ExampleView{&train, std::move(members)};
                root_wv = restrict_weights(full, master, root_view);
                normalize(root_wv);
            }
        }

        if (hook) hook(t, root_view, root_wv, subset, row);

        auto [tree, assessed] =
            train_tree(root_view, root_wv, cfg.depth, cfg.strategy, subset, cfg.qb);

        // eps_t on the full weight vector: identical across strategies and
        // unaffected by trimming, so alphas (and weight updates) agree.
        for (int i = 1; i <= n; ++i) {
            h_train[i - 1] = predict(*tree, train, i);
            wrong_mask[i - 1] = h_train[i - 1] != train.label(i);
        }
        double eps = kernels::masked_sum(master.w.data(), wrong_mask.data(), n) /
                     master.total();
        const double floor = 1.0 / (2.0 * n);
        eps = std::min(std::max(eps, floor), 1.0 - floor);
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);

        for (int i = 0; i < n; ++i) margin_train[i] += alpha * h_train[i];
        long long wrong = 0;
        for (int i = 1; i <= n; ++i)
            wrong += (margin_train[i - 1] >= 0.0 ? +1 : -1) != train.label(i);
        row.train_err = static_cast<double>(wrong) / n;
        if (test) {
            long long twrong = 0;
            for (int i = 1; i <= test->n; ++i) {
                margin_test[i - 1] += alpha * predict(*tree, *test, i);
                twrong += (margin_test[i - 1] >= 0.0 ? +1 : -1) != test->label(i);
            }
            row.test_err = static_cast<double>(twrong) / test->n;
        }

        adaboost_update(master, h_train, train.labels, alpha);

        assess_cum += assessed;
        row.assess_round = assessed;
        row.assess_cum = assess_cum;
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - tic)
                          .count();
        rows.push_back(row);
        ensemble.rounds.push_back(Round{alpha, std::move(tree)});
    }
    return {std::move(ensemble), std::move(rows)};
}

namespace {

void write_node(std::string& out, const TreeNode& node) {
    char buf[64];
    if (node.is_leaf) {
        out += node.label > 0 ? "leaf:+1" : "leaf:-1";
        return;
    }
    std::snprintf(buf, sizeof buf, "(%d %.17g %+d ", node.stump.k, node.stump.tau,
                  static_cast<int>(node.stump.p));
    out += buf;
    write_node(out, *node.left);
    out += ' ';
    write_node(out, *node.right);
    out += ')';
}

struct TokenStream {
    std::istringstream in;
    explicit TokenStream(const std::string& s) : in(s) {}
    std::string next() {
        std::string tok;
        if (!(in >> tok)) throw ParseError("ensemble text ended mid-tree");
        return tok;
    }
};

double parse_double(const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " token '" + tok + "'");
    }
}

std::unique_ptr<TreeNode> parse_node(TokenStream& ts, std::string tok) {
    if (tok == "leaf:+1") return std::make_unique<TreeNode>();
    if (tok == "leaf:-1") {
        auto leaf = std::make_unique<TreeNode>();
        leaf->label = -1;
        return leaf;
    }
    if (tok.empty() || tok.front() != '(')
        throw ParseError("expected node, got '" + tok + "'");
    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    int k = 0;
    const std::string ks = tok.substr(1);
    auto [p, ec] = std::from_chars(ks.data(), ks.data() + ks.size(), k);
    if (ec != std::errc{} || p != ks.data() + ks.size() || k < 1)
        throw ParseError("bad feature index '" + ks + "'");
    node->stump.k = k;
    node->stump.tau = parse_double(ts.next(), "threshold");
    const std::string ps = ts.next();
    if (ps == "+1")
        node->stump.p = +1;
    else if (ps == "-1")
        node->stump.p = -1;
    else
        throw ParseError("bad polarity token '" + ps + "'");
    node->left = parse_node(ts, ts.next());
    std::string rt = ts.next();
    node->right = parse_node(ts, rt);
    std::string close = ts.next();
    if (close != ")") throw ParseError("expected ')', got '" + close + "'");
    return node;
}

}  // namespace

std::string serialize_ensemble(const Ensemble& e) {
    std::string out;
    char buf[64];
    for (const Round& r : e.rounds) {
        std::snprintf(buf, sizeof buf, "%.17g ", r.alpha);
        out += buf;
        write_node(out, *r.tree);
        out += '\n';
    }
    return out;
}

Ensemble parse_ensemble(const std::string& text) {
    Ensemble e;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        // Tokenize ')' separately so the recursive parser sees clean tokens.
        std::string spaced;
        spaced.reserve(line.size() * 2);
        for (char c : line) {
            if (c == ')') {
                spaced += " ) ";
            } else {
                spaced += c;
            }
        }
        try {
            TokenStream ts(spaced);
            Round r;
            r.alpha = parse_double(ts.next(), "alpha");
            r.tree = parse_node(ts, ts.next());
            std::string extra;
            if (ts.in >> extra)
                throw ParseError("trailing tokens after tree: '" + extra + "'");
            e.rounds.push_back(std::move(r));
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    if (e.rounds.empty()) throw ParseError("ensemble text holds no rounds");
    return e;
}

}  // namespace apb
