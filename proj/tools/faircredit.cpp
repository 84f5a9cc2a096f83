// faircredit: fair credit-scoring benchmark CLI.
//
//   prepare    encode a raw CSV into the canonical audit form
//   audit      run the unmitigated baseline pipeline
//   mitigate   run one bias-mitigation processor
//   benchmark  run a processor suite and write results + reports
//   report     render a results file as csv / json / markdown
//   plot-data  emit per-metric accuracy/fairness scatter files
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faircredit/harness.hpp"

namespace fs = std::filesystem;
using namespace faircredit;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FAIRCREDIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("FAIRCREDIT_SEED is not a number: " + std::string(env));
        }
    }
    return 42;
}

TabularDataset load_dataset(const std::string& data_path, const std::string& schema_path) {
    const FeatureSchema schema = load_schema(schema_path);
    return curate(load_csv(data_path, schema), schema);
}

std::vector<ProcessorSpec> default_suite() {
    std::vector<ProcessorSpec> specs;
    for (const char* name : {"reweighing", "lfr", "dir", "prejudice_remover", "expgrad",
                             "grid_search", "roc", "ceo"})
        specs.push_back(parse_processor_spec(name));
    return specs;
}

std::vector<ProcessorSpec> load_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("suite: cannot open file: " + path);
    std::vector<ProcessorSpec> specs;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (!line.empty()) specs.push_back(parse_processor_spec(line));
    }
    if (specs.empty()) throw ConfigError("suite: no processors in " + path);
    return specs;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

void print_table(const BenchmarkTable& table) {
    std::cout << emit_report_csv(table);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair credit-scoring benchmark"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    try {
        seed = default_seed();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::string data_path, schema_path, out_path, suite_path, out_dir = ".", format = "csv";
    std::string processor_text, results_path;
    std::size_t folds = 10;
    std::vector<double> split_fracs;
    double roi = 0.34, lc = 0.9;
    bool no_tune = false;

    auto add_data_opts = [&](CLI::App* cmd) {
        cmd->add_option("data", data_path, "input CSV file")->required();
        cmd->add_option("--schema", schema_path, "schema config file")->required();
        cmd->add_option("--seed", seed, "random seed (default: FAIRCREDIT_SEED or 42)")
            ->capture_default_str();
        cmd->add_option("--folds", folds, "cross-validation folds; 0 = single split");
        cmd->add_option("--split", split_fracs, "train,validation,test fractions (single-split mode)")
            ->expected(3);
        cmd->add_option("--roi", roi, "return on a correctly accepted good");
        cmd->add_option("--lc", lc, "loss on a wrongly accepted bad");
        cmd->add_flag("--no-tune-threshold", no_tune, "fix the decision threshold at 0.5");
    };

    auto* prepare = app.add_subcommand("prepare", "encode a raw CSV for audit");
    prepare->add_option("data", data_path, "input CSV file")->required();
    prepare->add_option("--schema", schema_path, "schema config file")->required();
    prepare->add_option("--out", out_path, "output encoded CSV")->required();

    auto* audit = app.add_subcommand("audit", "run the unmitigated baseline");
    add_data_opts(audit);

    auto* mitigate = app.add_subcommand("mitigate", "run one bias-mitigation processor");
    add_data_opts(mitigate);
    mitigate->add_option("--processor", processor_text, "processor spec, e.g. lfr{k=10,Az=50}")
        ->required();

    auto* benchmark = app.add_subcommand("benchmark", "run a processor suite");
    add_data_opts(benchmark);
    benchmark->add_option("--suite", suite_path, "suite file: one processor spec per line");
    benchmark->add_option("--out-dir", out_dir, "output directory for results and reports");

    auto* report = app.add_subcommand("report", "render a results file");
    report->add_option("results", results_path, "results JSON from benchmark")->required();
    report->add_option("--format", format, "csv | json | markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    report->add_option("--out", out_path, "write to file instead of stdout");

    auto* plot = app.add_subcommand("plot-data", "emit per-metric scatter CSVs");
    plot->add_option("results", results_path, "results JSON from benchmark")->required();
    plot->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineOptions opts;
        opts.seed = seed;
        opts.folds = folds;
        opts.profit.roi = roi;
        opts.profit.lc = lc;
        opts.tune_threshold = !no_tune;
        if (!split_fracs.empty())
            opts.split = SplitFractions{split_fracs[0], split_fracs[1], split_fracs[2]};

        if (*prepare) {
            const auto ds = load_dataset(data_path, schema_path);
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw DataError("cannot write file: " + out_path);
            export_encoded_csv(ds, out);
            std::cerr << "encoded " << ds.size() << " rows x " << ds.dim() << " features -> "
                      << out_path << "\n";
        } else if (*audit) {
            const auto ds = load_dataset(data_path, schema_path);
            const auto split = stratified_split(ds, opts.split, opts.seed);
            const auto parity = split_parity(ds, split);
            std::cerr << "label parity: train " << format_double(parity.train, 4);
            if (parity.validation)
                std::cerr << ", validation " << format_double(*parity.validation, 4);
            std::cerr << ", test " << format_double(parity.test, 4) << "\n";

            // independence and sufficiency diagnostics on the held-out part
            const auto train = subset(ds, split.train);
            const auto test = subset(ds, split.test);
            const auto model = fit(train, opts.classifier);
            const auto proba = predict_proba(model, test);
            const double mi = mutual_information(bin_scores(proba, 10), test.protected_flags);
            const auto calibration = calibration_by_group(proba, test.labels, test.protected_flags);
            std::cerr << "score/group mutual information: " << format_double(mi, 4)
                      << " nats (10 bins); calibration max gap: "
                      << format_double(calibration.max_gap, 4) << "\n";

            BenchmarkTable table;
            table.options = opts;
            table.rows.push_back(run_pipeline(ds, parse_processor_spec("baseline"), opts));
            print_table(table);
        } else if (*mitigate) {
            const auto ds = load_dataset(data_path, schema_path);
            const auto spec = parse_processor_spec(processor_text);
            BenchmarkTable table;
            table.options = opts;
            table.rows.push_back(run_pipeline(ds, spec, opts));
            print_table(table);
        } else if (*benchmark) {
            const auto ds = load_dataset(data_path, schema_path);
            const auto specs = suite_path.empty() ? default_suite() : load_suite(suite_path);
            const auto table = run_benchmark(ds, specs, opts);
            fs::create_directories(out_dir);
            write_file(fs::path(out_dir) / "results.json", benchmark_table_to_json(table).dump(2) + "\n");
            write_file(fs::path(out_dir) / "report.csv", emit_report_csv(table));
            print_table(table);
            for (const auto& row : table.rows)
                for (const auto& err : row.fold_errors)
                    std::cerr << "warning: " << row.processor << ": " << err << "\n";
        } else if (*report) {
            std::ifstream in(results_path);
            if (!in) throw DataError("cannot open results file: " + results_path);
            nlohmann::json j;
            in >> j;
            const auto table = benchmark_table_from_json(j);
            std::string doc;
            if (format == "csv") doc = emit_report_csv(table);
            else if (format == "markdown") doc = emit_report_markdown(table);
            else doc = benchmark_table_to_json(table).dump(2) + "\n";
            if (out_path.empty()) std::cout << doc;
            else write_file(out_path, doc);
        } else if (*plot) {
            std::ifstream in(results_path);
            if (!in) throw DataError("cannot open results file: " + results_path);
            nlohmann::json j;
            in >> j;
            const auto table = benchmark_table_from_json(j);
            fs::create_directories(out_dir);
            for (const auto& [name, content] : emit_plot_data(table))
                write_file(fs::path(out_dir) / name, content);
            std::cerr << "wrote 5 plot files to " << out_dir << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
