#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apb/tree_boosting.hpp"

namespace apb {

enum class LbMode { none, wo, exact };

struct ExperimentConfig {
    std::string data_path;
    std::optional<std::string> test_path;
    int rounds = 100;
    int depth = 1;
    Strategy strategy = Strategy::adaptive;
    Variant variant;
    std::uint64_t seed = 0;
    QuickBoostParams qb;
    LbMode lb = LbMode::none;
    long long lb_budget = 10'000'000;
    int exact_cap = 2000;       // exact bound refused above this n or depth > 1
    std::string out_path;       // empty: rows go to stdout
};

struct ExperimentResult {
    std::vector<RoundMetrics> rows;
    Strategy strategy;
    Variant variant;
    int depth;
    bool bound_timed_out = false;  // some lb_exact hit the budget (sentinel -1)
};

// CSV header shared by train/compare/lowerbound outputs.
extern const char* const kCsvHeader;  // round,strategy,variant,depth,...

std::string strategy_name(Strategy s);     // ap | qb | classic
std::string variant_name(const Variant&);  // none | lazy=Q | trim=Q

// Loads the dataset(s), boosts per the config recording one row per round,
// annotates lower bounds when enabled (computed on each round's root search
// problem before the weight update), and writes the CSV atomically (temp
// file + rename) when out_path is set.  Deterministic under a fixed seed
// except wall_ms.  Throws IoError on unreadable data or unwritable output,
// ArgumentError on invalid config (including the exact-bound guard).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CompareRow {
    std::string strategy;
    long long assess_cum = 0;
    double wall_ms = 0.0;
    double assess_improvement = 0.0;  // 1 - strategy/baseline, baseline = first row
    double time_improvement = 0.0;
};

struct CompareSummary {
    std::vector<CompareRow> rows;
    std::string table;  // aligned text rendering
    std::string csv;    // same rows, machine-readable
};

// Runs each config and reports cumulative assessments, wall time, and the
// relative improvement of every run against the first (the baseline).
// Configs must agree on dataset, rounds, and depth (ArgumentError).
CompareSummary compare(const std::vector<ExperimentConfig>& cfgs);

// Serializes rows in the CSV schema (no I/O).
std::string metrics_to_csv(const ExperimentResult& r);

// Gap-fraction transform: for each row with a bound present, the fraction
// (assess_round - lb) / (n*K - lb) of the gap between the bound (0) and the
// full corpus (1).  Emits round,strategy,gap_wo,gap_exact with empty fields
// where a bound is absent or timed out.
std::string gapplot_csv(const std::string& raw_csv, long long n, long long K);

}  // namespace apb
