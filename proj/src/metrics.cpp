#include "apb/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "apb/errors.hpp"
#include "apb/lower_bounds.hpp"

namespace apb {

const char* const kCsvHeader =
    "round,strategy,variant,depth,assess_round,assess_cum,train_err,test_err,"
    "wall_ms,lb_wo,lb_exact";

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::adaptive: return "ap";
        case Strategy::quickboost: return "qb";
        case Strategy::exhaustive: return "classic";
    }
    throw ArgumentError("unknown strategy");
}

std::string variant_name(const Variant& v) {
    char buf[32];
    switch (v.kind) {
        case VariantKind::none: return "none";
        case VariantKind::lazy:
            std::snprintf(buf, sizeof buf, "lazy=%g", v.q);
            return buf;
        case VariantKind::trim:
            std::snprintf(buf, sizeof buf, "trim=%g", v.q);
            return buf;
    }
    throw ArgumentError("unknown variant");
}

namespace {

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace

std::string metrics_to_csv(const ExperimentResult& r) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    const std::string strat = strategy_name(r.strategy);
    const std::string var = variant_name(r.variant);
    char wall[32];
    for (const RoundMetrics& row : r.rows) {
        out << row.round << ',' << strat << ',' << var << ',' << r.depth << ','
            << row.assess_round << ',' << row.assess_cum << ','
            << format_g(row.train_err) << ',';
        if (row.test_err >= 0.0) out << format_g(row.test_err);
        out << ',';
        std::snprintf(wall, sizeof wall, "%.3f", row.wall_ms);
        out << wall << ',';
        if (row.lb_wo) out << *row.lb_wo;
        out << ',';
        if (row.lb_exact) out << *row.lb_exact;
        out << '\n';
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.rounds < 1) throw ArgumentError("rounds must be >= 1");
    if (cfg.depth < 1) throw ArgumentError("depth must be >= 1");

    const Dataset train = load_svmlight(cfg.data_path);
    Dataset test_storage;
    const Dataset* test = nullptr;
    if (cfg.test_path) {
        test_storage = load_svmlight(*cfg.test_path, train.K);
        test = &test_storage;
    }

    if (cfg.lb == LbMode::exact) {
        if (cfg.depth != 1)
            throw ArgumentError("exact bound supports depth 1 only");
        if (train.n > cfg.exact_cap)
            throw ArgumentError("exact bound refused: n = " + std::to_string(train.n) +
                                " exceeds cap " + std::to_string(cfg.exact_cap));
    }

    ExperimentResult result;
    result.strategy = cfg.strategy;
    result.variant = cfg.variant;
    result.depth = cfg.depth;

    RoundHook hook;
    if (cfg.lb != LbMode::none) {
        hook = [&](int round, const ExampleView& view, const WeightVector& wv,
                   const std::vector<int>* subset, RoundMetrics& row) {
            row.lb_wo = weight_order_lb(view, wv, subset).total;
            if (cfg.lb != LbMode::exact) return;
            try {
                row.lb_exact = exact_lb(view, wv, cfg.lb_budget, subset);
            } catch (const BoundTimeout&) {
                row.lb_exact = -1;
                result.bound_timed_out = true;
                std::cerr << "warning: exact bound timed out at round " << round
                          << "; recording -1\n";
            }
        };
    }

    BoostConfig bc;
    bc.rounds = cfg.rounds;
    bc.depth = cfg.depth;
    bc.strategy = cfg.strategy;
    bc.variant = cfg.variant;
    bc.seed = cfg.seed;
    bc.qb = cfg.qb;
    auto [ensemble, rows] = adaboost(train, test, bc, hook);
    (void)ensemble;
    result.rows = std::move(rows);

    const std::string csv = metrics_to_csv(result);
    if (cfg.out_path.empty())
        std::cout << csv;
    else
        write_atomic(cfg.out_path, csv);
    return result;
}

CompareSummary compare(const std::vector<ExperimentConfig>& cfgs) {
    if (cfgs.empty()) throw ArgumentError("compare needs at least one config");
    for (const ExperimentConfig& c : cfgs) {
        if (c.data_path != cfgs.front().data_path)
            throw ArgumentError("compare configs disagree on dataset");
        if (c.rounds != cfgs.front().rounds)
            throw ArgumentError("compare configs disagree on rounds");
        if (c.depth != cfgs.front().depth)
            throw ArgumentError("compare configs disagree on depth");
    }

    CompareSummary summary;
    for (const ExperimentConfig& c : cfgs) {
        const ExperimentResult r = run_experiment(c);
        CompareRow row;
        row.strategy = strategy_name(c.strategy);
        if (c.variant.kind != VariantKind::none)
            row.strategy += "+" + variant_name(c.variant);
        row.assess_cum = r.rows.back().assess_cum;
        for (const RoundMetrics& m : r.rows) row.wall_ms += m.wall_ms;
        summary.rows.push_back(std::move(row));
    }
    const CompareRow& base = summary.rows.front();
    for (CompareRow& row : summary.rows) {
        row.assess_improvement =
            1.0 - static_cast<double>(row.assess_cum) / base.assess_cum;
        row.time_improvement = base.wall_ms > 0.0 ? 1.0 - row.wall_ms / base.wall_ms : 0.0;
    }

    std::ostringstream csv;
    csv << "strategy,assess_cum,wall_ms,assess_improvement,time_improvement\n";
    std::size_t name_w = 8;
    for (const CompareRow& row : summary.rows) name_w = std::max(name_w, row.strategy.size());
    std::ostringstream tab;
    char line[160];
    std::snprintf(line, sizeof line, "%-*s %14s %12s %10s %10s\n",
                  static_cast<int>(name_w), "strategy", "assessments", "wall_ms",
                  "assess_im", "time_im");
    tab << line;
    for (const CompareRow& row : summary.rows) {
        std::snprintf(line, sizeof line, "%-*s %14lld %12.1f %9.1f%% %9.1f%%\n",
                      static_cast<int>(name_w), row.strategy.c_str(), row.assess_cum,
                      row.wall_ms, 100.0 * row.assess_improvement,
                      100.0 * row.time_improvement);
        tab << line;
        csv << row.strategy << ',' << row.assess_cum << ',' << format_g(row.wall_ms)
            << ',' << format_g(row.assess_improvement) << ','
            << format_g(row.time_improvement) << '\n';
    }
    summary.table = tab.str();
    summary.csv = csv.str();
    return summary;
}

std::string gapplot_csv(const std::string& raw_csv, long long n, long long K) {
    if (n < 1 || K < 1) throw ArgumentError("gapplot needs n, K >= 1");
    std::istringstream in(raw_csv);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ParseError("unrecognized CSV header: '" + line + "'");

    std::ostringstream out;
    out << "round,strategy,gap_wo,gap_exact\n";
    const double corpus = static_cast<double>(n) * K;
    int lineno = 1;
    char buf[40];
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        f.resize(11);
        const std::string& round = f[0];
        const std::string& strategy = f[1];
        double assess = 0.0;
        try {
            assess = std::stod(f[4]);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad assess_round '" +
                             f[4] + "'");
        }
        auto gap = [&](const std::string& lb_field) -> std::string {
            if (lb_field.empty() || lb_field == "-1") return "";
            const double lb = std::stod(lb_field);
            const double denom = corpus - lb;
            const double g = denom > 0.0 ? (assess - lb) / denom : 0.0;
            std::snprintf(buf, sizeof buf, "%.6g", g);
            return buf;
        };
        out << round << ',' << strategy << ',' << gap(f[9]) << ',' << gap(f[10]) << '\n';
    }
    return out.str();
}

}  // namespace apb
