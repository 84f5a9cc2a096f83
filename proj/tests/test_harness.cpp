#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "faircredit/harness.hpp"
#include "synthetic.hpp"

using namespace faircredit;
using Catch::Approx;

namespace {

TabularDataset synthetic_credit(std::size_t n = 400, std::uint64_t seed = 6) {
    faircredit::testing::BiasedGaussianSpec spec;
    spec.n = n;
    spec.seed = seed;
    return faircredit::testing::biased_gaussian(spec);
}

PipelineOptions fast_options() {
    PipelineOptions opts;
    opts.folds = 3;
    opts.seed = 11;
    return opts;
}

}  // namespace

TEST_CASE("processor spec parsing") {
    auto spec = parse_processor_spec("lfr{k=8,Az=25,seed=3}");
    REQUIRE(spec.name == "lfr");
    REQUIRE(spec.type == ProcessorType::pre);
    REQUIRE(spec.num("k", 0) == 8);
    REQUIRE(spec.num("Az", 0) == 25);
    REQUIRE(spec.num("Ax", 0.01) == 0.01);

    REQUIRE(parse_processor_spec("baseline").type == ProcessorType::none);
    REQUIRE(parse_processor_spec("expgrad").type == ProcessorType::in_processing);
    REQUIRE(parse_processor_spec("ceo{cost=fnr}").str("cost", "") == "fnr");

    REQUIRE_THROWS_AS(parse_processor_spec("unknown_thing"), ConfigError);
    REQUIRE_THROWS_AS(parse_processor_spec("lfr{k=8"), ConfigError);
    REQUIRE_THROWS_AS(parse_processor_spec("lfr{k}"), ConfigError);
    REQUIRE_THROWS_AS(parse_processor_spec("lfr{k=abc}").num("k", 0), ConfigError);
}

TEST_CASE("identity processor reproduces the baseline bit for bit") {
    auto ds = synthetic_credit();
    auto opts = fast_options();
    auto baseline = run_pipeline(ds, parse_processor_spec("baseline"), opts);
    auto identity = run_pipeline(ds, parse_processor_spec("dir{lambda=0}"), opts);
    REQUIRE(baseline.fold_reports.size() == identity.fold_reports.size());
    for (std::size_t f = 0; f < baseline.fold_reports.size(); ++f) {
        const auto& a = baseline.fold_reports[f];
        const auto& b = identity.fold_reports[f];
        REQUIRE(a.di == b.di);
        REQUIRE(a.spd == b.spd);
        REQUIRE(a.aod == b.aod);
        REQUIRE(a.eod == b.eod);
        REQUIRE(a.theil == b.theil);
        REQUIRE(a.balanced_accuracy == b.balanced_accuracy);
        REQUIRE(a.profit == b.profit);
    }
}

TEST_CASE("benchmark table assembly") {
    auto ds = synthetic_credit();
    auto opts = fast_options();

    SECTION("empty spec list rejected") {
        REQUIRE_THROWS_AS(run_benchmark(ds, {}, opts), ConfigError);
    }
    SECTION("baseline is appended and sorted last; rows ordered pre, in, post") {
        std::vector<ProcessorSpec> specs = {
            parse_processor_spec("roc"),
            parse_processor_spec("reweighing"),
            parse_processor_spec("grid_search{grid_size=5,lambda_max=0.06}"),
        };
        auto table = run_benchmark(ds, specs, opts);
        REQUIRE(table.rows.size() == 4);
        REQUIRE(table.rows[0].processor == "reweighing");
        REQUIRE(table.rows[1].processor == "grid_search");
        REQUIRE(table.rows[2].processor == "roc");
        REQUIRE(table.rows[3].processor == "baseline");
        // paired folds across all rows
        for (const auto& row : table.rows) REQUIRE(row.fold_hash == table.rows[0].fold_hash);
        // the guard was exercised
        for (const auto& row : table.rows) REQUIRE(row.leakage_checks >= opts.folds);
    }
}

TEST_CASE("fold aggregation") {
    auto ds = synthetic_credit();
    auto opts = fast_options();
    auto result = run_pipeline(ds, parse_processor_spec("baseline"), opts);
    REQUIRE(result.fold_reports.size() == opts.folds);
    REQUIRE(result.fold_errors.empty());

    SECTION("means and deviations recompute from stored folds") {
        std::vector<double> bacc;
        for (const auto& r : result.fold_reports) bacc.push_back(r.balanced_accuracy);
        REQUIRE(result.mean.balanced_accuracy == Approx(mean_of(bacc)).margin(1e-12));
        REQUIRE(result.stddev.balanced_accuracy == Approx(stddev_of(bacc)).margin(1e-12));
        std::vector<double> di_vals;
        for (const auto& r : result.fold_reports) di_vals.push_back(r.di);
        REQUIRE(result.mean.di == Approx(mean_of(di_vals)).margin(1e-12));
    }
    SECTION("single-split mode carves validation deterministically") {
        auto single = fast_options();
        single.folds = 0;
        single.split = SplitFractions{0.7, 0.0, 0.3};
        auto a = run_pipeline(ds, parse_processor_spec("roc"), single);
        auto b = run_pipeline(ds, parse_processor_spec("roc"), single);
        REQUIRE(a.fold_reports.size() == 1);
        REQUIRE(a.fold_reports[0].balanced_accuracy == b.fold_reports[0].balanced_accuracy);
    }
}

TEST_CASE("leakage guard trips on test instances") {
    auto ds = synthetic_credit(100);
    detail::LeakageGuard guard;
    guard.test_sources = {3, 7};
    auto clean = subset(ds, {0, 1, 2, 4});
    REQUIRE_NOTHROW(guard.check_fit_inputs(clean));
    auto dirty = subset(ds, {0, 3});
    REQUIRE_THROWS_AS(guard.check_fit_inputs(dirty), std::logic_error);
    REQUIRE(guard.checks == 2);
}

TEST_CASE("report emission") {
    auto ds = synthetic_credit();
    auto opts = fast_options();
    BenchmarkTable table;
    table.options = opts;
    table.rows.push_back(run_pipeline(ds, parse_processor_spec("baseline"), opts));

    SECTION("csv has a header plus one line per row") {
        auto csv = emit_report_csv(table);
        std::size_t lines = 0;
        for (char c : csv) lines += c == '\n';
        REQUIRE(lines == 2);
        REQUIRE(csv.rfind("processor,type,DI,SPD,AOD,EOD,TI,BAcc,P\n", 0) == 0);
    }
    SECTION("emission is byte-stable") {
        REQUIRE(emit_report_csv(table) == emit_report_csv(table));
        REQUIRE(benchmark_table_to_json(table).dump(2) == benchmark_table_to_json(table).dump(2));
    }
    SECTION("markdown renders every metric column") {
        auto md = emit_report_markdown(table);
        REQUIRE(md.find("| baseline | none |") != std::string::npos);
        std::size_t pipes = 0;
        for (char c : md) pipes += c == '|';
        REQUIRE(pipes == 3 * 10);  // header, separator, one row
    }
    SECTION("json round trip preserves the table") {
        auto j = benchmark_table_to_json(table);
        auto restored = benchmark_table_from_json(j);
        REQUIRE(restored.rows.size() == table.rows.size());
        REQUIRE(restored.rows[0].processor == "baseline");
        REQUIRE(restored.rows[0].mean.balanced_accuracy ==
                Approx(table.rows[0].mean.balanced_accuracy).margin(1e-12));
        REQUIRE(restored.rows[0].fold_reports.size() == table.rows[0].fold_reports.size());
        REQUIRE(restored.rows[0].fold_hash == table.rows[0].fold_hash);
    }
}

TEST_CASE("plot data files") {
    auto ds = synthetic_credit();
    auto opts = fast_options();
    std::vector<ProcessorSpec> specs = {parse_processor_spec("reweighing")};
    auto table = run_benchmark(ds, specs, opts);
    auto files = emit_plot_data(table);
    REQUIRE(files.size() == 5);
    REQUIRE(files.count("plot_di.csv") == 1);
    REQUIRE(files.count("plot_spd.csv") == 1);

    auto count_lines = [](const std::string& s) {
        std::size_t n = 0;
        for (char c : s) n += c == '\n';
        return n;
    };
    for (const auto& [name, content] : files)
        REQUIRE(count_lines(content) == table.rows.size() + 1);

    // interval bounds for shading
    REQUIRE(files["plot_di.csv"].find("0.800000,1.250000") != std::string::npos);
    REQUIRE(files["plot_spd.csv"].find("-0.100000,0.100000") != std::string::npos);
}

TEST_CASE("pipeline rejects bad configuration") {
    auto ds = synthetic_credit();
    auto opts = fast_options();
    opts.folds = 1;
    REQUIRE_THROWS_AS(run_pipeline(ds, parse_processor_spec("baseline"), opts), ConfigError);
}

TEST_CASE("drop_protected_features removes only the flag column") {
    auto ds = synthetic_credit(100);
    ds.feature_kinds[1] = FeatureKind::protected_flag;
    auto view = drop_protected_features(ds);
    REQUIRE(view.dim() == ds.dim() - 1);
    REQUIRE(view.feature_names == std::vector<std::string>{"f0", "f2", "f3", "f4"});
    for (std::size_t i = 0; i < ds.size(); ++i) {
        REQUIRE(view.X(i, 0) == ds.X(i, 0));
        REQUIRE(view.X(i, 1) == ds.X(i, 2));
    }
    REQUIRE(view.protected_flags == ds.protected_flags);
    // no flag column: the view is returned unchanged
    auto same = drop_protected_features(view);
    REQUIRE(same.dim() == view.dim());
}

TEST_CASE("full suite on a consumer-shaped table") {
    auto schema = load_schema(std::string(FAIRCREDIT_SCHEMA_DIR) + "/consumer_loans.schema");
    auto text = faircredit::testing::consumer_like_csv(1500, 11);
    auto ds = curate(load_raw(parse_csv_text(text), schema), schema);

    PipelineOptions opts;
    opts.folds = 2;
    opts.seed = 5;
    std::vector<ProcessorSpec> specs;
    for (const char* name : {"reweighing", "lfr", "dir", "prejudice_remover",
                             "expgrad{constraint=tpr_difference}", "grid_search", "roc", "ceo"})
        specs.push_back(parse_processor_spec(name));
    auto table = run_benchmark(ds, specs, opts);
    REQUIRE(table.rows.size() == 9);
    const BenchmarkResult* baseline = nullptr;
    const BenchmarkResult* dir = nullptr;
    for (const auto& row : table.rows) {
        INFO(row.processor);
        REQUIRE(row.fold_errors.empty());
        REQUIRE(std::isfinite(row.mean.balanced_accuracy));
        if (row.processor == "baseline") baseline = &row;
        if (row.processor == "dir") dir = &row;
    }
    // one-hot, binary and imputed columns all flow through; the repair
    // plus protected-feature drop must bite on this heavily biased table
    REQUIRE(std::fabs(dir->mean.spd) < std::fabs(baseline->mean.spd));
}
