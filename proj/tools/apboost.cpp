#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apb/errors.hpp"
#include "apb/metrics.hpp"

namespace {

apb::Strategy parse_strategy(const std::string& s) {
    if (s == "ap") return apb::Strategy::adaptive;
    if (s == "qb") return apb::Strategy::quickboost;
    if (s == "classic") return apb::Strategy::exhaustive;
    throw apb::ArgumentError("unknown strategy '" + s + "' (expected ap|qb|classic)");
}

apb::Variant parse_variant(const std::string& s) {
    apb::Variant v;
    if (s == "none") return v;
    const auto eq = s.find('=');
    const std::string kind = s.substr(0, eq);
    if (eq == std::string::npos || (kind != "lazy" && kind != "trim"))
        throw apb::ArgumentError("unknown variant '" + s + "' (expected none|lazy=Q|trim=Q)");
    v.kind = kind == "lazy" ? apb::VariantKind::lazy : apb::VariantKind::trim;
    try {
        std::size_t used = 0;
        v.q = std::stod(s.substr(eq + 1), &used);
        if (used != s.size() - eq - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw apb::ArgumentError("bad variant parameter in '" + s + "'");
    }
    if (!(v.q > 0.0 && v.q <= 1.0))
        throw apb::ArgumentError("variant parameter must satisfy 0 < q <= 1");
    return v;
}

apb::LbMode parse_lb(const std::string& s) {
    if (s == "none") return apb::LbMode::none;
    if (s == "wo") return apb::LbMode::wo;
    if (s == "exact") return apb::LbMode::exact;
    throw apb::ArgumentError("unknown bound mode '" + s + "' (expected none|wo|exact)");
}

struct CommonFlags {
    std::string data;
    std::string test;
    int rounds = 100;
    int depth = 1;
    std::string lb = "none";
    std::uint64_t seed = 0;
    int qb_batches = 16;
    double qb_init_mass = 0.25;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_rounds = true) {
    cmd->add_option("--data", f.data, "training set, svmlight format (.gz accepted)")
        ->required();
    cmd->add_option("--test", f.test, "held-out set in the same format");
    if (with_rounds) cmd->add_option("--rounds", f.rounds, "boosting rounds");
    cmd->add_option("--depth", f.depth, "stump tree depth");
    cmd->add_option("--seed", f.seed, "seed for the lazy variant's feature draws");
    cmd->add_option("--qb-batches", f.qb_batches, "quick-boost batch count");
    cmd->add_option("--qb-init-mass", f.qb_init_mass, "quick-boost initial weight mass");
    cmd->add_option("--lb", f.lb, "lower-bound annotation: none|wo|exact");
    cmd->add_option("--out", f.out, "output CSV path (stdout when omitted)");
}

apb::ExperimentConfig to_config(const CommonFlags& f, const std::string& strategy,
                                const std::string& variant) {
    apb::ExperimentConfig cfg;
    cfg.data_path = f.data;
    if (!f.test.empty()) cfg.test_path = f.test;
    cfg.rounds = f.rounds;
    cfg.depth = f.depth;
    cfg.strategy = parse_strategy(strategy);
    cfg.variant = parse_variant(variant);
    cfg.seed = f.seed;
    cfg.qb.batches = f.qb_batches;
    cfg.qb.init_mass = f.qb_init_mass;
    cfg.lb = parse_lb(f.lb);
    cfg.out_path = f.out;
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"adaptive-pruning boosting experiments"};
    app.require_subcommand(1);

    CommonFlags train_f;
    std::string train_strategy = "ap", train_variant = "none";
    CLI::App* train = app.add_subcommand("train", "boost and emit per-round CSV");
    add_common(train, train_f);
    train->add_option("--strategy", train_strategy, "ap|qb|classic");
    train->add_option("--variant", train_variant, "none|lazy=Q|trim=Q");

    CommonFlags cmp_f;
    std::vector<std::string> cmp_strategies;
    std::string cmp_variant = "none";
    CLI::App* cmp = app.add_subcommand("compare", "run strategies and tabulate improvements");
    add_common(cmp, cmp_f);
    cmp->add_option("--strategy", cmp_strategies, "baseline first; repeatable")
        ->required()
        ->expected(-1);
    cmp->add_option("--variant", cmp_variant, "variant applied to every run");

    CommonFlags lb_f;
    lb_f.lb = "wo";
    std::string lb_strategy = "ap", lb_variant = "none";
    CLI::App* lower = app.add_subcommand(
        "lowerbound", "one boosting round annotated with assessment bounds");
    add_common(lower, lb_f, /*with_rounds=*/false);
    lower->add_option("--strategy", lb_strategy, "ap|qb|classic");
    lower->add_option("--variant", lb_variant, "none|lazy=Q|trim=Q");

    std::string gap_csv_path, gap_data, gap_out;
    CLI::App* gap = app.add_subcommand("gapplot", "gap-fraction transform of a raw CSV");
    gap->add_option("csv", gap_csv_path, "raw per-round CSV from train/lowerbound")
        ->required();
    gap->add_option("--data", gap_data, "dataset the CSV was computed from (fixes n, K)")
        ->required();
    gap->add_option("--out", gap_out, "output CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) {
            const apb::ExperimentResult r =
                apb::run_experiment(to_config(train_f, train_strategy, train_variant));
            return r.bound_timed_out ? 4 : 0;
        }
        if (cmp->parsed()) {
            if (cmp_f.out.empty())
                throw apb::ArgumentError("compare requires --out (a directory)");
            std::filesystem::create_directories(cmp_f.out);
            std::vector<apb::ExperimentConfig> cfgs;
            for (const std::string& s : cmp_strategies) {
                apb::ExperimentConfig cfg = to_config(cmp_f, s, cmp_variant);
                std::string name = s;
                if (cfg.variant.kind != apb::VariantKind::none)
                    name += "_" + apb::variant_name(cfg.variant);
                cfg.out_path = (std::filesystem::path(cmp_f.out) / (name + ".csv")).string();
                cfgs.push_back(std::move(cfg));
            }
            const apb::CompareSummary summary = apb::compare(cfgs);
            std::ofstream sum(std::filesystem::path(cmp_f.out) / "summary.csv");
            if (!sum) throw apb::IoError("cannot write compare summary");
            sum << summary.csv;
            std::cout << summary.table;
            return 0;
        }
        if (lower->parsed()) {
            apb::ExperimentConfig cfg = to_config(lb_f, lb_strategy, lb_variant);
            cfg.rounds = 1;
            if (cfg.lb == apb::LbMode::none)
                throw apb::ArgumentError("lowerbound needs --lb wo or --lb exact");
            const apb::ExperimentResult r = apb::run_experiment(cfg);
            return r.bound_timed_out ? 4 : 0;
        }
        // gapplot
        std::ifstream in(gap_csv_path, std::ios::binary);
        if (!in) throw apb::IoError("cannot read '" + gap_csv_path + "'");
        std::ostringstream raw;
        raw << in.rdbuf();
        const apb::Dataset d = apb::load_svmlight(gap_data);
        const std::string out = apb::gapplot_csv(raw.str(), d.n, d.K);
        if (gap_out.empty()) {
            std::cout << out;
        } else {
            std::ofstream f(gap_out, std::ios::binary | std::ios::trunc);
            if (!f) throw apb::IoError("cannot write '" + gap_out + "'");
            f << out;
        }
        return 0;
    } catch (const apb::BoundTimeout& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const apb::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const apb::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const apb::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
