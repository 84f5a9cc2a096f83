#pragma once

// End-to-end pipeline: route by processor type (pre / in / post / none),
// cross-validate with paired fold seeds, aggregate per-fold metric reports,
// and emit benchmark tables, plot data and JSON results.
//
// Cross-validation protocol: stratified k folds partition the data; each
// fold is the test set for a model trained on the remaining folds, with a
// stratified validation piece carved from the tail of that training side
// for threshold tuning and post-processing policies. Single-split mode
// (folds = 0) uses the configured train/validation/test fractions instead.
// A runtime leakage guard asserts that no fit or transform-fit ever sees a
// test instance of its fold.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "faircredit/classifier.hpp"
#include "faircredit/core.hpp"
#include "faircredit/dataset.hpp"
#include "faircredit/metrics.hpp"
#include "faircredit/mitigate_in.hpp"
#include "faircredit/mitigate_post.hpp"
#include "faircredit/mitigate_pre.hpp"

namespace faircredit {

enum class ProcessorType { none, pre, in_processing, post };

inline const char* processor_type_name(ProcessorType t) {
    switch (t) {
        case ProcessorType::none: return "none";
        case ProcessorType::pre: return "pre";
        case ProcessorType::in_processing: return "in";
        case ProcessorType::post: return "post";
    }
    return "?";
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProcessorSpec {
    std::string name;
    ProcessorType type = ProcessorType::none;
    std::map<std::string, std::string> params;

    double num(const std::string& key, double fallback) const {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw ConfigError("processor " + name + ": parameter " + key + " is not numeric: " + it->second);
        }
    }
    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

inline ProcessorType processor_type_of(const std::string& name) {
    if (name == "baseline" || name == "none") return ProcessorType::none;
    if (name == "reweighing" || name == "lfr" || name == "dir") return ProcessorType::pre;
    if (name == "prejudice_remover" || name == "expgrad" || name == "grid_search")
        return ProcessorType::in_processing;
    if (name == "roc" || name == "ceo") return ProcessorType::post;
    throw ConfigError("unknown processor: " + name);
}

// Parses "name" or "name{key=value,key=value}".
inline ProcessorSpec parse_processor_spec(const std::string& text) {
    ProcessorSpec spec;
    auto brace = text.find('{');
    if (brace == std::string::npos) {
        spec.name = detail::trim(text);
    } else {
        if (text.back() != '}') throw ConfigError("processor spec: missing closing brace: " + text);
        spec.name = detail::trim(text.substr(0, brace));
        const std::string body = text.substr(brace + 1, text.size() - brace - 2);
        for (const auto& kv : detail::split_list(body)) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("processor spec: expected key=value, got: " + kv);
            spec.params[detail::trim(kv.substr(0, eq))] = detail::trim(kv.substr(eq + 1));
        }
    }
    if (spec.name.empty()) throw ConfigError("processor spec: empty name");
    spec.type = processor_type_of(spec.name);
    return spec;
}

struct PipelineOptions {
    SplitFractions split{0.7, 0.0, 0.3};
    std::size_t folds = 10;      // 0 = single split, no cross-validation
    std::uint64_t seed = 42;
    ProfitConfig profit{};
    FairnessIntervals intervals{};
    TrainConfig classifier{};
    bool tune_threshold = true;  // validation-tuned threshold for none/pre routes

    void validate() const {
        if (folds == 1) throw ConfigError("pipeline: fold count must be 0 or >= 2");
        profit.validate();
        classifier.validate();
    }
};

struct BenchmarkResult {
    std::string processor;
    ProcessorType type = ProcessorType::none;
    std::vector<MetricReport> fold_reports;
    std::vector<std::string> fold_errors;   // flagged, excluded from the mean
    MetricReport mean;
    MetricReport stddev;
    double wall_seconds = 0.0;
    std::uint64_t fold_hash = 0;            // paired-seed discipline witness
    std::size_t leakage_checks = 0;
    bool flagged = false;                   // some fold failed or a policy was infeasible
};

struct BenchmarkTable {
    std::vector<BenchmarkResult> rows;
    PipelineOptions options;
};

namespace detail {

// Throwing from here is a bug in the harness, not a data condition: the
// pipeline must be structured so the check can never trip.
struct LeakageGuard {
    std::set<std::size_t> test_sources;
    std::size_t checks = 0;

    void check_fit_inputs(const TabularDataset& ds) {
        ++checks;
        for (std::size_t s : ds.source_indices)
            if (test_sources.count(s))
                throw std::logic_error("leakage guard: a fit step received a test instance");
    }
};

inline double tune_threshold_bacc(const std::vector<double>& proba, const std::vector<int>& y) {
    double best_thr = 0.5, best_bacc = -1.0;
    double pos = 0, neg = 0;
    for (int v : y) (v ? pos : neg) += 1;
    if (pos == 0 || neg == 0) return 0.5;
    for (int step = 1; step <= 99; ++step) {
        const double thr = step / 100.0;
        double tp = 0, tn = 0;
        for (std::size_t i = 0; i < proba.size(); ++i) {
            const bool pred = proba[i] >= thr;
            if (pred && y[i] == 1) tp += 1;
            if (!pred && y[i] == 0) tn += 1;
        }
        const double bacc = 0.5 * (tp / pos + tn / neg);
        const bool better = bacc > best_bacc + 1e-12 ||
                            (std::fabs(bacc - best_bacc) <= 1e-12 &&
                             std::fabs(thr - 0.5) < std::fabs(best_thr - 0.5));
        if (better) {
            best_bacc = bacc;
            best_thr = thr;
        }
    }
    return best_thr;
}

inline std::vector<double> hard_predictions(const std::vector<double>& proba, double thr) {
    std::vector<double> out(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] >= thr ? 1.0 : 0.0;
    return out;
}

struct FoldContext {
    TabularDataset train;
    TabularDataset validation;
    const TabularDataset* test = nullptr;
    LeakageGuard* guard = nullptr;
    const PipelineOptions* opts = nullptr;
};

// Runs one processor on one fold and returns test-set predictions in [0,1].
// May also flag the result (infeasible post policy etc).
inline std::vector<double> run_fold(const ProcessorSpec& spec, FoldContext& ctx, bool* flag_out) {
    const PipelineOptions& opts = *ctx.opts;
    const TabularDataset& test = *ctx.test;

    auto tuned_labels = [&](const LogisticModel& model, const TabularDataset& va,
                            const TabularDataset& te) {
        double thr = 0.5;
        if (opts.tune_threshold)
            thr = tune_threshold_bacc(predict_proba(model, va), va.labels);
        return hard_predictions(predict_proba(model, te), thr);
    };

    if (spec.name == "baseline" || spec.name == "none") {
        ctx.guard->check_fit_inputs(ctx.train);
        const auto model = fit(ctx.train, opts.classifier);
        return tuned_labels(model, ctx.validation, test);
    }

    if (spec.name == "reweighing") {
        ctx.guard->check_fit_inputs(ctx.train);
        const auto reweighed = reweigh(ctx.train);
        const auto model = fit(reweighed, opts.classifier);
        return tuned_labels(model, ctx.validation, test);
    }

    if (spec.name == "lfr") {
        LfrConfig cfg;
        cfg.k = static_cast<std::size_t>(spec.num("k", 10));
        cfg.Az = spec.num("Az", 50.0);
        cfg.Ax = spec.num("Ax", 0.01);
        cfg.Ay = spec.num("Ay", 1.0);
        cfg.threshold = spec.num("threshold", 0.5);
        cfg.seed = static_cast<std::uint64_t>(spec.num("seed", 1));
        cfg.max_iter = static_cast<std::size_t>(spec.num("max_iter", 500));
        const bool relabel = spec.num("relabel", 1.0) != 0.0;
        ctx.guard->check_fit_inputs(ctx.train);
        const auto lfr = lfr_fit(ctx.train, cfg);
        const auto train_t = lfr_transform(lfr, ctx.train, relabel);
        const auto val_t = lfr_transform(lfr, ctx.validation, false);
        const auto test_t = lfr_transform(lfr, test, false);
        ctx.guard->check_fit_inputs(train_t);
        const auto model = fit(train_t, opts.classifier);
        return tuned_labels(model, val_t, test_t);
    }

    if (spec.name == "dir") {
        const double lambda = spec.num("lambda", 1.0);
        const bool drop = spec.num("drop_protected", 1.0) != 0.0;
        ctx.guard->check_fit_inputs(ctx.train);
        const auto plan = fit_repair(ctx.train, lambda);
        auto train_t = apply_repair(plan, ctx.train);
        auto val_t = apply_repair(plan, ctx.validation);
        auto test_t = apply_repair(plan, test);
        if (drop) {
            // repaired features must stand on their own; the raw flag would
            // feed the bias straight back into the classifier
            train_t = drop_protected_features(train_t);
            val_t = drop_protected_features(val_t);
            test_t = drop_protected_features(test_t);
        }
        ctx.guard->check_fit_inputs(train_t);
        const auto model = fit(train_t, opts.classifier);
        return tuned_labels(model, val_t, test_t);
    }

    if (spec.name == "prejudice_remover") {
        PrejudiceConfig cfg;
        cfg.eta = spec.num("eta", 1.0);
        cfg.l2 = spec.num("l2", opts.classifier.l2);
        ctx.guard->check_fit_inputs(ctx.train);
        const auto model = prejudice_remover_fit(ctx.train, cfg);
        // in-processing models keep their native decisions
        return hard_predictions(predict_proba(model, test), 0.5);
    }

    if (spec.name == "expgrad") {
        ExpgradConfig cfg;
        cfg.constraint = parse_constraint(spec.str("constraint", "demographic_parity"));
        cfg.eps = spec.num("eps", 0.02);
        cfg.max_iter = static_cast<std::size_t>(spec.num("max_iter", 50));
        cfg.ratio_bound = spec.num("ratio_bound", 1.0);
        cfg.seed = static_cast<std::uint64_t>(spec.num("seed", 0));
        const bool drop = spec.num("drop_protected", 1.0) != 0.0;
        const auto train_v = drop ? drop_protected_features(ctx.train) : ctx.train;
        ctx.guard->check_fit_inputs(train_v);
        const auto rc = expgrad_fit(train_v, cfg);
        // randomized classifier scored by its expected predictions
        return rc.predict_expected(drop ? drop_protected_features(test) : test);
    }

    if (spec.name == "grid_search") {
        GridSearchConfig cfg;
        cfg.constraint = parse_constraint(spec.str("constraint", "demographic_parity"));
        cfg.grid_size = static_cast<std::size_t>(spec.num("grid_size", cfg.grid_size));
        cfg.lambda_max = spec.num("lambda_max", cfg.lambda_max);
        cfg.selection_threshold = spec.num("threshold", cfg.selection_threshold);
        cfg.loss_ceiling = spec.num("ceiling", cfg.loss_ceiling);
        const bool drop = spec.num("drop_protected", 1.0) != 0.0;
        const auto train_v = drop ? drop_protected_features(ctx.train) : ctx.train;
        ctx.guard->check_fit_inputs(train_v);
        const auto result = grid_search_fit(train_v, cfg);
        if (!result.feasible && flag_out) *flag_out = true;
        return hard_predictions(predict_proba(result.best, drop ? drop_protected_features(test) : test),
                                0.5);
    }

    // post-processing policies fit on the model's outputs over the full
    // training side (train plus carved validation): policy selection on the
    // small validation piece alone is too noisy to generalize
    if (spec.name == "roc") {
        const auto constraint = parse_roc_constraint(spec.str("constraint", "spd"));
        // fit against a band tighter than the reporting interval: in-sample
        // selection sits at the band edge and drifts outward on test data
        const double band = spec.num("band", 0.05);
        FairnessIntervals fit_band = opts.intervals;
        fit_band.diff_lo = -band;
        fit_band.diff_hi = band;
        ctx.guard->check_fit_inputs(ctx.train);
        const auto model = fit(ctx.train, opts.classifier);
        const auto fit_side = concat(ctx.train, ctx.validation);
        ctx.guard->check_fit_inputs(fit_side);  // policy fitting counts as a fit
        const auto policy = roc_fit(predict_proba(model, fit_side), fit_side.labels,
                                    fit_side.protected_flags, constraint,
                                    RocSearchGrid::standard(), fit_band);
        if (!policy.feasible && flag_out) *flag_out = true;
        const auto labels = roc_apply(policy, predict_proba(model, test), test.protected_flags);
        return std::vector<double>(labels.begin(), labels.end());
    }

    if (spec.name == "ceo") {
        const auto cost = parse_ceo_cost(spec.str("cost", "weighted"));
        ctx.guard->check_fit_inputs(ctx.train);
        const auto model = fit(ctx.train, opts.classifier);
        const auto fit_side = concat(ctx.train, ctx.validation);
        ctx.guard->check_fit_inputs(fit_side);  // policy fitting counts as a fit
        const auto p_fit = predict_proba(model, fit_side);
        const auto policy = ceo_fit(p_fit, fit_side.labels, fit_side.protected_flags, cost);
        double thr = 0.5;
        if (opts.tune_threshold) {
            const auto adj_val = ceo_apply(policy, predict_proba(model, ctx.validation),
                                           ctx.validation.protected_flags);
            thr = tune_threshold_bacc(adj_val, ctx.validation.labels);
        }
        const auto adj_test = ceo_apply(policy, predict_proba(model, test), test.protected_flags);
        return hard_predictions(adj_test, thr);
    }

    throw ConfigError("unknown processor: " + spec.name);
}

inline MetricReport aggregate_mean(const std::vector<MetricReport>& reports,
                                   const FairnessIntervals& intervals, bool stddev) {
    auto collect = [&](auto member) {
        std::vector<double> vals;
        for (const auto& r : reports) {
            const double v = r.*member;
            if (!std::isnan(v)) vals.push_back(v);
        }
        if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
        return stddev ? stddev_of(vals) : mean_of(vals);
    };
    MetricReport out;
    out.di = collect(&MetricReport::di);
    out.spd = collect(&MetricReport::spd);
    out.aod = collect(&MetricReport::aod);
    out.eod = collect(&MetricReport::eod);
    out.separation = collect(&MetricReport::separation);
    out.theil = collect(&MetricReport::theil);
    out.balanced_accuracy = collect(&MetricReport::balanced_accuracy);
    out.profit = collect(&MetricReport::profit);
    if (!stddev) out.verdicts = fairness_verdicts(out, intervals);
    return out;
}

// Carve a stratified validation piece from the tail of the train indices
// (single-split mode only; cross-validation uses fold pieces instead).
inline void carve_validation(std::vector<std::size_t>& train, std::vector<std::size_t>& validation,
                             const TabularDataset& ds, double fraction = 0.2) {
    std::vector<std::size_t> cls[2];
    for (std::size_t idx : train) cls[ds.labels[idx]].push_back(idx);
    train.clear();
    for (auto& c : cls) {
        const std::size_t n_val = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(c.size())));
        if (n_val == 0 || n_val >= c.size())
            throw DataError("pipeline: class too small to carve validation data");
        train.insert(train.end(), c.begin(), c.end() - static_cast<long>(n_val));
        validation.insert(validation.end(), c.end() - static_cast<long>(n_val), c.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(validation.begin(), validation.end());
}

}  // namespace detail

inline BenchmarkResult run_pipeline(const TabularDataset& ds, const ProcessorSpec& spec,
                                    const PipelineOptions& opts) {
    opts.validate();
    const auto t0 = std::chrono::steady_clock::now();

    BenchmarkResult result;
    result.processor = spec.name;
    result.type = spec.type;

    struct FoldIdx {
        std::vector<std::size_t> train, validation, test;  // indices into ds
    };
    std::vector<FoldIdx> folds;
    std::vector<std::size_t> hash_material;

    if (opts.folds >= 2) {
        const FoldPlan plan = kfold(ds, opts.folds, opts.seed);
        for (const auto& f : plan.folds) {
            FoldIdx fi;
            fi.train = f.train;
            fi.test = f.test;
            detail::carve_validation(fi.train, fi.validation, ds);
            hash_material.insert(hash_material.end(), fi.test.begin(), fi.test.end());
            hash_material.push_back(SIZE_MAX);  // fold separator
            folds.push_back(std::move(fi));
        }
    } else {
        const DataSplit split = stratified_split(ds, opts.split, opts.seed);
        FoldIdx fi;
        fi.train = split.train;
        fi.validation = split.validation;
        fi.test = split.test;
        if (fi.validation.empty()) detail::carve_validation(fi.train, fi.validation, ds);
        hash_material = fi.test;
        folds.push_back(std::move(fi));
    }
    result.fold_hash = fnv1a(hash_material);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const TabularDataset test = subset(ds, folds[f].test);
        detail::LeakageGuard guard;
        for (std::size_t s : test.source_indices) guard.test_sources.insert(s);
        detail::FoldContext ctx;
        ctx.train = subset(ds, folds[f].train);
        ctx.validation = subset(ds, folds[f].validation);
        ctx.test = &test;
        ctx.guard = &guard;
        ctx.opts = &opts;
        try {
            bool flagged = false;
            const auto predictions = detail::run_fold(spec, ctx, &flagged);
            result.fold_reports.push_back(
                compute_report(test.labels, predictions, test.protected_flags, opts.profit, opts.intervals));
            if (flagged) result.flagged = true;
        } catch (const std::runtime_error& e) {
            result.fold_errors.push_back("fold " + std::to_string(f) + ": " + e.what());
            result.flagged = true;
        }
        result.leakage_checks += guard.checks;
    }
    if (result.fold_reports.empty())
        throw DataError("pipeline: every fold failed for processor " + spec.name +
                        (result.fold_errors.empty() ? "" : " (" + result.fold_errors.front() + ")"));

    result.mean = detail::aggregate_mean(result.fold_reports, opts.intervals, false);
    result.stddev = detail::aggregate_mean(result.fold_reports, opts.intervals, true);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// Runs the baseline plus every requested processor, ordering rows
// pre -> in -> post with the baseline last, as in the benchmark tables.
inline BenchmarkTable run_benchmark(const TabularDataset& ds, const std::vector<ProcessorSpec>& specs,
                                    const PipelineOptions& opts) {
    if (specs.empty()) throw ConfigError("benchmark: empty processor list");
    BenchmarkTable table;
    table.options = opts;

    bool has_baseline = false;
    for (const auto& s : specs)
        if (s.type == ProcessorType::none) has_baseline = true;

    std::vector<ProcessorSpec> all = specs;
    if (!has_baseline) {
        ProcessorSpec base;
        base.name = "baseline";
        base.type = ProcessorType::none;
        all.push_back(base);
    }

    for (const auto& spec : all) table.rows.push_back(run_pipeline(ds, spec, opts));

    auto rank = [](ProcessorType t) {
        switch (t) {
            case ProcessorType::pre: return 0;
            case ProcessorType::in_processing: return 1;
            case ProcessorType::post: return 2;
            case ProcessorType::none: return 3;
        }
        return 4;
    };
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [&](const BenchmarkResult& a, const BenchmarkResult& b) {
                         return rank(a.type) < rank(b.type);
                     });

    for (const auto& row : table.rows)
        if (row.fold_hash != table.rows.front().fold_hash)
            throw std::logic_error("benchmark: fold assignments differ across processors");
    return table;
}

// ---------------------------------------------------------------------------
// Emitters

inline std::string emit_report_csv(const BenchmarkTable& table) {
    std::string out = metric_report_csv_header();
    out += "\n";
    for (const auto& row : table.rows)
        out += metric_report_csv_row(row.processor, processor_type_name(row.type), row.mean) + "\n";
    return out;
}

inline std::string emit_report_markdown(const BenchmarkTable& table) {
    std::string out = "| Processor | Type | DI | SPD | AOD | EOD | TI | BAcc | P |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : table.rows) {
        out += "| " + row.processor + " | " + processor_type_name(row.type);
        for (double v : {row.mean.di, row.mean.spd, row.mean.aod, row.mean.eod, row.mean.theil,
                         row.mean.balanced_accuracy, row.mean.profit})
            out += " | " + format_double(v, 3);
        out += " |\n";
    }
    return out;
}

inline nlohmann::json benchmark_result_to_json(const BenchmarkResult& r) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& rep : r.fold_reports) folds.push_back(metric_report_to_json(rep));
    return nlohmann::json{{"processor", r.processor},
                          {"type", processor_type_name(r.type)},
                          {"mean", metric_report_to_json(r.mean)},
                          {"stddev", metric_report_to_json(r.stddev)},
                          {"folds", folds},
                          {"fold_errors", r.fold_errors},
                          {"wall_seconds", r.wall_seconds},
                          {"fold_hash", r.fold_hash},
                          {"leakage_checks", r.leakage_checks},
                          {"flagged", r.flagged}};
}

inline MetricReport metric_report_from_json(const nlohmann::json& j) {
    MetricReport r;
    auto get = [&](const char* key) {
        const auto& v = j.at(key);
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    r.di = get("DI");
    r.spd = get("SPD");
    r.aod = get("AOD");
    r.eod = get("EOD");
    r.separation = get("separation");
    r.theil = get("TI");
    r.balanced_accuracy = get("BAcc");
    r.profit = get("P");
    const auto& v = j.at("verdicts");
    r.verdicts.di = v.at("DI").get<bool>();
    r.verdicts.spd = v.at("SPD").get<bool>();
    r.verdicts.aod = v.at("AOD").get<bool>();
    r.verdicts.eod = v.at("EOD").get<bool>();
    r.verdicts.theil = v.at("TI").get<bool>();
    return r;
}

inline nlohmann::json benchmark_table_to_json(const BenchmarkTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) rows.push_back(benchmark_result_to_json(r));
    return nlohmann::json{{"rows", rows},
                          {"seed", table.options.seed},
                          {"folds", table.options.folds},
                          {"profit", {{"roi", table.options.profit.roi}, {"lc", table.options.profit.lc}}}};
}

inline BenchmarkTable benchmark_table_from_json(const nlohmann::json& j) {
    BenchmarkTable table;
    table.options.seed = j.at("seed").get<std::uint64_t>();
    table.options.folds = j.at("folds").get<std::size_t>();
    table.options.profit.roi = j.at("profit").at("roi").get<double>();
    table.options.profit.lc = j.at("profit").at("lc").get<double>();
    for (const auto& row : j.at("rows")) {
        BenchmarkResult r;
        r.processor = row.at("processor").get<std::string>();
        const std::string t = row.at("type").get<std::string>();
        r.type = t == "pre"    ? ProcessorType::pre
                 : t == "in"   ? ProcessorType::in_processing
                 : t == "post" ? ProcessorType::post
                               : ProcessorType::none;
        r.mean = metric_report_from_json(row.at("mean"));
        r.stddev = metric_report_from_json(row.at("stddev"));
        for (const auto& f : row.at("folds")) r.fold_reports.push_back(metric_report_from_json(f));
        r.fold_errors = row.at("fold_errors").get<std::vector<std::string>>();
        r.wall_seconds = row.at("wall_seconds").get<double>();
        r.fold_hash = row.at("fold_hash").get<std::uint64_t>();
        r.leakage_checks = row.at("leakage_checks").get<std::size_t>();
        r.flagged = row.at("flagged").get<bool>();
        table.rows.push_back(std::move(r));
    }
    return table;
}

// Per-metric scatter data for the accuracy/fairness trade-off plots:
// one point per processor, fairness interval bounds included for shading.
inline std::map<std::string, std::string> emit_plot_data(const BenchmarkTable& table) {
    struct MetricDef {
        const char* file;
        double MetricReport::* member;
        double lo, hi;
    };
    const FairnessIntervals& iv = table.options.intervals;
    const MetricDef defs[] = {
        {"plot_di.csv", &MetricReport::di, iv.di_lo, iv.di_hi},
        {"plot_spd.csv", &MetricReport::spd, iv.diff_lo, iv.diff_hi},
        {"plot_aod.csv", &MetricReport::aod, iv.diff_lo, iv.diff_hi},
        {"plot_eod.csv", &MetricReport::eod, iv.diff_lo, iv.diff_hi},
        {"plot_ti.csv", &MetricReport::theil, 0.0, iv.theil_threshold},
    };
    std::map<std::string, std::string> files;
    for (const auto& def : defs) {
        std::string out = "processor,type,value,balanced_accuracy,interval_lo,interval_hi\n";
        for (const auto& row : table.rows) {
            out += row.processor;
            out += ",";
            out += processor_type_name(row.type);
            out += "," + format_double(row.mean.*def.member, 6);
            out += "," + format_double(row.mean.balanced_accuracy, 6);
            out += "," + format_double(def.lo, 6);
            out += "," + format_double(def.hi, 6);
            out += "\n";
        }
        files[def.file] = out;
    }
    return files;
}

}  // namespace faircredit
