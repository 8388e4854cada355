#include "alt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "alt/classify.hpp"
#include "alt/error.hpp"
#include "alt/pipeline.hpp"
#include "alt/presets.hpp"

namespace alt {

namespace {

int emit_error(const std::string& category, const std::string& message) {
    nlohmann::json err;
    err["error"] = {{"category", category}, {"message", message}};
    std::cerr << err.dump() << "\n";
    return 1;
}

// One bag of flag targets shared by transform/run/eval; CLI11 Option
// pointers tell us which flags were actually given so they can override
// preset and config-file values in that order.
struct CliOptions {
    std::string preset;
    std::string config_file;
    std::string name;
    std::string train;
    std::string test;
    std::string train_features;
    std::string test_features;
    double learn_ratio = 0.25;
    std::uint64_t seed = 1;
    int jobs = 0;
    std::string cache_dir;
    std::string out;
    std::string data_dir = "data";
    std::string windows;
    std::string methods;
    std::string grid = "all";
    std::size_t folds = 5;
    std::size_t epochs = 200;
    bool znorm = false;
    std::size_t csv_channels = 1;
    bool allow_long = false;
    bool list_presets = false;

    CLI::Option* opt_name = nullptr;
    CLI::Option* opt_train = nullptr;
    CLI::Option* opt_test = nullptr;
    CLI::Option* opt_learn_ratio = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_jobs = nullptr;
    CLI::Option* opt_cache_dir = nullptr;
    CLI::Option* opt_out = nullptr;
    CLI::Option* opt_windows = nullptr;
    CLI::Option* opt_methods = nullptr;
    CLI::Option* opt_grid = nullptr;
    CLI::Option* opt_folds = nullptr;
    CLI::Option* opt_epochs = nullptr;
    CLI::Option* opt_znorm = nullptr;
    CLI::Option* opt_csv_channels = nullptr;
};

void add_pipeline_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--preset", o.preset, "built-in dataset preset (see list-presets)");
    cmd->add_option("--config", o.config_file, "key = value run configuration file");
    o.opt_name = cmd->add_option("--name", o.name, "run name used in outputs");
    o.opt_train = cmd->add_option("--train", o.train, "training dataset (.ts or .csv)");
    o.opt_test = cmd->add_option("--test", o.test, "test dataset (.ts or .csv)");
    o.opt_learn_ratio =
        cmd->add_option("--learn-ratio", o.learn_ratio, "fraction of train used to learn banks");
    o.opt_seed = cmd->add_option("--seed", o.seed, "RNG seed (split, folds, training)");
    o.opt_jobs = cmd->add_option("--jobs", o.jobs, "worker threads, 0 = hardware");
    o.opt_cache_dir = cmd->add_option("--cache-dir", o.cache_dir, "shapelet bank cache directory");
    o.opt_out = cmd->add_option("--out", o.out, "output path (report file / feature directory)");
    cmd->add_option("--data-dir", o.data_dir, "directory holding <Archive>/<Archive>_TRAIN.ts");
    o.opt_windows = cmd->add_option("--windows", o.windows, "window triplets, e.g. \"(53,27,1)\"");
    o.opt_methods =
        cmd->add_option("--methods", o.methods, "extraction methods, e.g. \"mean-mean,p5-m4\"");
    o.opt_grid = cmd->add_option("--grid", o.grid, "classifier grid: all|knn|linear");
    o.opt_folds = cmd->add_option("--folds", o.folds, "cross-validation folds");
    o.opt_epochs = cmd->add_option("--epochs", o.epochs, "linear margin training epochs");
    o.opt_znorm = cmd->add_flag("--znorm", o.znorm, "z-normalize every instance per channel");
    o.opt_csv_channels =
        cmd->add_option("--csv-channels", o.csv_channels, "rows per instance in CSV inputs");
    cmd->add_flag("--allow-long", o.allow_long, "run presets marked long-running");
}

bool seen(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

RunConfig resolve_config(const CliOptions& o) {
    RunConfig cfg;
    if (!o.preset.empty()) {
        const Preset* preset = find_preset(o.preset);
        if (preset == nullptr)
            fail("config", "unknown preset '" + o.preset + "' (see list-presets)");
        if (preset->long_running && !o.allow_long)
            fail("config", "preset '" + preset->name +
                               "' is marked long-running; pass --allow-long to run it anyway");
        cfg = preset_run_config(*preset, o.data_dir);
    }
    if (!o.config_file.empty()) apply_run_config_file(cfg, o.config_file);
    if (seen(o.opt_name)) cfg.name = o.name;
    if (seen(o.opt_train)) cfg.train_path = o.train;
    if (seen(o.opt_test)) cfg.test_path = o.test;
    if (seen(o.opt_learn_ratio)) cfg.learn_ratio = o.learn_ratio;
    if (seen(o.opt_seed)) cfg.seed = o.seed;
    if (seen(o.opt_jobs)) cfg.jobs = o.jobs;
    if (seen(o.opt_cache_dir)) cfg.cache_dir = o.cache_dir;
    if (seen(o.opt_out)) cfg.out_path = o.out;
    if (seen(o.opt_windows)) cfg.windows = parse_windows(o.windows);
    if (seen(o.opt_methods)) {
        cfg.methods.clear();
        std::istringstream in(o.methods);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) cfg.methods.push_back(tok);
    }
    if (seen(o.opt_grid)) cfg.grid = o.grid;
    if (seen(o.opt_folds)) cfg.folds = o.folds;
    if (seen(o.opt_epochs)) cfg.epochs = o.epochs;
    if (seen(o.opt_znorm)) cfg.znorm = o.znorm;
    if (seen(o.opt_csv_channels)) cfg.csv_channels = o.csv_channels;
    if (cfg.learn_ratio <= 0.0 || cfg.learn_ratio >= 1.0)
        fail("config", "learn_ratio must lie in (0, 1)");
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) fail("io", "cannot write '" + path + "'");
    out << text;
    if (!out) fail("io", "short write to '" + path + "'");
}

void emit_report(const nlohmann::json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    if (!out_path.empty()) write_text(out_path, text + "\n");
    std::cout << text << "\n";
}

int cmd_list_presets() {
    std::ostringstream out;
    for (const Preset& p : presets()) {
        char head[192];
        std::snprintf(head, sizeof head,
                      "%-13s %-25s ratio=%.2f  train/test=%zu/%-5zu h=%-4zu m=%zu c=%zu%s\n",
                      p.name.c_str(), p.archive_name.c_str(), p.learn_ratio,
                      p.expected.train_size, p.expected.test_size, p.expected.length,
                      p.expected.channels, p.expected.classes,
                      p.long_running ? "  [long-running]" : "");
        out << head;
        out << "              windows=";
        for (const auto& w : p.windows) out << "(" << w[0] << "," << w[1] << "," << w[2] << ")";
        out << "  methods=";
        for (std::size_t i = 0; i < p.methods.size(); ++i)
            out << (i != 0 ? "," : "") << p.methods[i];
        out << "\n";
    }
    std::cout << out.str();
    return 0;
}

int cmd_transform(const CliOptions& o) {
    RunConfig cfg = resolve_config(o);
    if (cfg.train_path.empty() || cfg.test_path.empty())
        fail("config", "transform needs --train and --test (or a preset/config providing them)");
    TimeSeriesDataset train_ds = load_dataset(cfg.train_path, cfg.csv_channels);
    TimeSeriesDataset test_ds = load_dataset(cfg.test_path, cfg.csv_channels);
    if (cfg.name.empty()) cfg.name = train_ds.name;
    train_ds.name = cfg.name; // the run name labels all outputs
    test_ds.name = cfg.name;

    TransformOutput tf = transform_pipeline(cfg, train_ds, test_ds);

    std::string dir = cfg.out_path.empty() ? std::string(".") : cfg.out_path;
    std::string train_csv_path = dir + "/" + cfg.name + "_train_features.csv";
    std::string test_csv_path = dir + "/" + cfg.name + "_test_features.csv";
    write_text(train_csv_path, feature_csv(tf.train, tf.names, train_ds.classes));
    write_text(test_csv_path, feature_csv(tf.test, tf.names, train_ds.classes));

    nlohmann::json report;
    report["dataset"] = {{"name", train_ds.name},
                         {"train_size", train_ds.size()},
                         {"test_size", test_ds.size()},
                         {"length", train_ds.length},
                         {"channels", train_ds.channels},
                         {"classes", train_ds.classes}};
    nlohmann::json banks = nlohmann::json::array();
    for (std::size_t b = 0; b < tf.banks.banks.size(); ++b)
        banks.push_back({{"window", tf.banks.banks[b].config.str()},
                         {"channel", tf.banks.banks[b].channel},
                         {"hash", tf.bank_hashes[b]},
                         {"columns", tf.banks.banks[b].P.cols()}});
    report["banks"] = banks;
    report["cache_hit"] = tf.cache_hit;
    report["features"] = {{"count", tf.names.size()}, {"names", tf.names}};
    report["outputs"] = {{"train_csv", train_csv_path}, {"test_csv", test_csv_path}};
    report["split"] = {{"learn_indices", tf.split.learn_indices},
                       {"train_indices", tf.split.train_indices}};
    report["timings"] = {{"transform_s", tf.transform_time_s}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_run(const CliOptions& o) {
    if (o.list_presets) return cmd_list_presets();
    RunConfig cfg = resolve_config(o);
    if (cfg.train_path.empty() || cfg.test_path.empty())
        fail("config", "run needs --train and --test (or a preset/config providing them)");
    nlohmann::json report = run_pipeline(cfg);
    emit_report(report, cfg.out_path);
    return 0;
}

int cmd_eval(const CliOptions& o) {
    if (o.train_features.empty() || o.test_features.empty())
        fail("config", "eval needs --train-features and --test-features CSVs");
    std::ifstream train_in(o.train_features, std::ios::binary);
    if (!train_in) fail("io", "cannot open '" + o.train_features + "'");
    std::ostringstream train_buf;
    train_buf << train_in.rdbuf();
    std::ifstream test_in(o.test_features, std::ios::binary);
    if (!test_in) fail("io", "cannot open '" + o.test_features + "'");
    std::ostringstream test_buf;
    test_buf << test_in.rdbuf();

    std::vector<std::string> train_classes;
    FeatureTable train = parse_feature_csv(train_buf.str(), train_classes);
    std::vector<std::string> test_classes;
    FeatureTable test = parse_feature_csv(test_buf.str(), test_classes);
    if (test.rows.cols() != train.rows.cols())
        fail("data", "feature width mismatch: train " + std::to_string(train.rows.cols()) +
                         ", test " + std::to_string(test.rows.cols()));
    // Remap test labels onto the training class universe.
    for (std::size_t i = 0; i < test.labels.size(); ++i) {
        const std::string& cls = test_classes[static_cast<std::size_t>(test.labels[i])];
        auto it = std::find(train_classes.begin(), train_classes.end(), cls);
        if (it == train_classes.end())
            fail("data", "test class '" + cls + "' never appears in the training features");
        test.labels[i] = static_cast<int>(it - train_classes.begin());
    }
    test.classes = train.classes;

    Grid grid = make_grid(o.grid, o.epochs);
    TuneResult tune = cross_validate(train, grid, o.folds, o.seed, o.jobs);
    FittedModel model = fit(train, tune.best, o.epochs, o.seed);
    EvalResult eval = evaluate(model, test);

    nlohmann::json report;
    report["config"] = {{"train_features", o.train_features},
                        {"test_features", o.test_features},
                        {"grid", o.grid},
                        {"folds", o.folds},
                        {"epochs", o.epochs},
                        {"seed", o.seed},
                        {"jobs", o.jobs}};
    report["classes"] = train_classes;
    report["features"] = {{"count", train.rows.cols()}};
    nlohmann::json grid_scores = nlohmann::json::array();
    for (std::size_t ci = 0; ci < grid.candidates.size(); ++ci)
        grid_scores.push_back(
            {{"candidate", grid.candidates[ci].str()}, {"accuracy", tune.grid_accuracies[ci]}});
    report["tuning"] = {{"best", tune.best.str()},
                        {"validation_accuracy", tune.validation_accuracy},
                        {"fold_accuracies", tune.fold_accuracies},
                        {"grid", grid_scores}};
    report["test"] = {
        {"accuracy", eval.accuracy}, {"correct", eval.correct}, {"total", eval.total}};
    report["timings"] = {{"tuning_s", tune.tuning_time_s},
                         {"classification_s", eval.classification_time_s}};
    emit_report(report, o.out);
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"adaptive law-based time series transformation and classification"};
    app.require_subcommand(0, 1);

    CliOptions topt;
    CLI::App* transform = app.add_subcommand("transform", "build banks and write feature CSVs");
    add_pipeline_options(transform, topt);

    CliOptions ropt;
    CLI::App* run = app.add_subcommand("run", "full pipeline: transform, tune, evaluate");
    add_pipeline_options(run, ropt);
    run->add_flag("--list-presets", ropt.list_presets, "print the preset table and exit");

    CliOptions eopt;
    CLI::App* eval = app.add_subcommand("eval", "tune and evaluate existing feature CSVs");
    eval->add_option("--train-features", eopt.train_features, "feature CSV written by transform");
    eval->add_option("--test-features", eopt.test_features, "feature CSV written by transform");
    eopt.opt_grid = eval->add_option("--grid", eopt.grid, "classifier grid: all|knn|linear");
    eopt.opt_folds = eval->add_option("--folds", eopt.folds, "cross-validation folds");
    eopt.opt_epochs = eval->add_option("--epochs", eopt.epochs, "linear margin training epochs");
    eopt.opt_seed = eval->add_option("--seed", eopt.seed, "RNG seed (folds, training)");
    eopt.opt_jobs = eval->add_option("--jobs", eopt.jobs, "worker threads, 0 = hardware");
    eopt.opt_out = eval->add_option("--out", eopt.out, "report file path");

    CLI::App* list_cmd = app.add_subcommand("list-presets", "print the built-in preset table");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("alt");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error("cli", e.what());
    }

    try {
        if (app.got_subcommand(transform)) return cmd_transform(topt);
        if (app.got_subcommand(run)) return cmd_run(ropt);
        if (app.got_subcommand(eval)) return cmd_eval(eopt);
        if (app.got_subcommand(list_cmd)) return cmd_list_presets();
        std::cout << app.help();
        return 1;
    } catch (const Error& err) {
        return emit_error(err.category(), err.what());
    } catch (const std::exception& ex) {
        return emit_error("internal", ex.what());
    }
}

} // namespace alt
