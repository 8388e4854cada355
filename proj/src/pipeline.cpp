#include "alt/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "alt/error.hpp"
#include "alt/parallel.hpp"
#include "alt/transform.hpp"

namespace alt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    std::string v = lower(value);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    fail("config", "key '" + key + "': expected a boolean, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        fail("config", "key '" + key + "': expected an unsigned integer, got '" + value + "'");
    return v;
}

double parse_f64(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        fail("config", "key '" + key + "': expected a number, got '" + value + "'");
    return v;
}

nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["train"] = c.train_path;
    j["test"] = c.test_path;
    j["learn_ratio"] = c.learn_ratio;
    j["seed"] = c.seed;
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : c.windows) windows.push_back({w[0], w[1], w[2]});
    j["windows"] = windows;
    j["methods"] = c.methods;
    j["grid"] = c.grid;
    j["cache_dir"] = c.cache_dir;
    j["out"] = c.out_path;
    j["jobs"] = c.jobs;
    j["folds"] = c.folds;
    j["epochs"] = c.epochs;
    j["znorm"] = c.znorm;
    return j;
}

std::vector<ExtractionMethod> parse_methods(const std::vector<std::string>& tokens) {
    if (tokens.empty()) fail("config", "no extraction methods given");
    std::vector<ExtractionMethod> methods;
    methods.reserve(tokens.size());
    for (const std::string& tok : tokens) methods.push_back(ExtractionMethod::parse(tok));
    return methods;
}

} // namespace

RunConfig preset_run_config(const Preset& preset, const std::string& data_dir) {
    RunConfig cfg;
    cfg.name = preset.name;
    std::string base = data_dir.empty() ? std::string("data") : data_dir;
    cfg.train_path = base + "/" + preset.archive_name + "/" + preset.archive_name + "_TRAIN.ts";
    cfg.test_path = base + "/" + preset.archive_name + "/" + preset.archive_name + "_TEST.ts";
    cfg.learn_ratio = preset.learn_ratio;
    cfg.windows = preset.windows;
    cfg.methods = preset.methods;
    return cfg;
}

std::vector<std::array<std::size_t, 3>> parse_windows(const std::string& text) {
    // Accept "(53,27,1) (99,50,1)" as well as "53,27,1; 99,50,1": only the
    // integers and their order matter, grouped in threes.
    std::vector<std::size_t> nums;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            nums.push_back(std::strtoull(text.substr(i, j - i).c_str(), nullptr, 10));
            i = j;
        } else if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '(' ||
                   text[i] == ')' || text[i] == ',' || text[i] == ';') {
            ++i;
        } else {
            fail("config", std::string("windows: unexpected character '") + text[i] + "'");
        }
    }
    if (nums.empty() || nums.size() % 3 != 0)
        fail("config", "windows: expected (r,l,k) triplets, got " + std::to_string(nums.size()) +
                           " integers");
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t n = 0; n < nums.size(); n += 3)
        out.push_back({nums[n], nums[n + 1], nums[n + 2]});
    return out;
}

RunConfig parse_run_config_file(const std::string& path) {
    RunConfig cfg;
    apply_run_config_file(cfg, path);
    return cfg;
}

void apply_run_config_file(RunConfig& cfg, const std::string& path) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail("config", path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = lower(trim(stripped.substr(0, eq)));
        std::string value = trim(stripped.substr(eq + 1));
        if (key == "name") cfg.name = value;
        else if (key == "train") cfg.train_path = value;
        else if (key == "test") cfg.test_path = value;
        else if (key == "learn_ratio") cfg.learn_ratio = parse_f64(value, key);
        else if (key == "seed") cfg.seed = parse_u64(value, key);
        else if (key == "windows") cfg.windows = parse_windows(value);
        else if (key == "methods") cfg.methods = split_tokens(value);
        else if (key == "grid") cfg.grid = lower(value);
        else if (key == "cache_dir") cfg.cache_dir = value;
        else if (key == "out") cfg.out_path = value;
        else if (key == "jobs") cfg.jobs = static_cast<int>(parse_u64(value, key));
        else if (key == "folds") cfg.folds = parse_u64(value, key);
        else if (key == "epochs") cfg.epochs = parse_u64(value, key);
        else if (key == "znorm") cfg.znorm = parse_bool(value, key);
        else if (key == "csv_channels") cfg.csv_channels = parse_u64(value, key);
        else
            fail("config", path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
}

Grid make_grid(const std::string& kind, std::size_t epochs) {
    Grid grid;
    if (kind == "all") grid = Grid::standard();
    else if (kind == "knn") grid = Grid::knn_only();
    else if (kind == "linear") grid = Grid::linear_only();
    else fail("config", "grid must be one of all|knn|linear, got '" + kind + "'");
    grid.epochs = epochs;
    return grid;
}

TimeSeriesDataset load_dataset(const std::string& path, std::size_t csv_channels) {
    if (ends_with(lower(path), ".ts")) return load_ts_file(path);
    if (ends_with(lower(path), ".csv")) {
        CsvSchema schema;
        schema.channels = csv_channels;
        TimeSeriesDataset ds = parse_csv(read_file(path), schema);
        std::size_t slash = path.find_last_of("/\\");
        ds.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
        return ds;
    }
    fail("config", "dataset '" + path + "': expected a .ts or .csv file");
}

FeatureTable featurize_all(const TimeSeriesDataset& dataset, const BankSet& banks,
                           std::span<const ExtractionMethod> methods, int jobs) {
    if (dataset.size() == 0) fail("data", "cannot featurize an empty dataset");
    std::size_t width =
        banks.configs.size() * banks.channels * banks.classes * methods.size();
    FeatureTable table;
    table.rows = Matrix(dataset.size(), width);
    table.labels.resize(dataset.size());
    table.classes = banks.classes;
    parallel_for(dataset.size(), jobs, [&](std::size_t i) {
        std::vector<double> f = featurize(dataset.instances[i], banks, methods);
        std::copy(f.begin(), f.end(), table.rows.row(i));
        table.labels[i] = dataset.instances[i].label;
    });
    return table;
}

TransformOutput transform_pipeline(const RunConfig& config, const TimeSeriesDataset& train_ds_in,
                                   const TimeSeriesDataset& test_ds_in) {
    if (train_ds_in.channels != test_ds_in.channels ||
        train_ds_in.length != test_ds_in.length)
        fail("data", "train/test shape mismatch: " + std::to_string(train_ds_in.length) + "x" +
                         std::to_string(train_ds_in.channels) + " vs " +
                         std::to_string(test_ds_in.length) + "x" +
                         std::to_string(test_ds_in.channels));
    if (train_ds_in.classes != test_ds_in.classes)
        fail("data", "train/test class sets differ");

    TransformOutput out;
    out.methods = parse_methods(config.methods);

    // Validate every window before any heavy work.
    std::vector<WindowConfig> window_configs;
    for (const auto& w : config.windows)
        window_configs.push_back(validate_config(w[0], w[1], w[2], train_ds_in.length));
    if (window_configs.empty()) fail("config", "no windows given");
    for (const WindowConfig& wc : window_configs)
        embed_rows(test_ds_in.length, wc); // throws when no embedding row fits

    Clock::time_point t0 = Clock::now();

    const TimeSeriesDataset train_ds = config.znorm ? znormalize(train_ds_in) : train_ds_in;
    const TimeSeriesDataset test_ds = config.znorm ? znormalize(test_ds_in) : test_ds_in;

    SplitSpec spec;
    spec.learn_ratio = config.learn_ratio;
    spec.seed = config.seed;
    out.split = stratified_split(train_ds, spec);

    // znorm changes the series the banks are learned from, so it must be part
    // of the cache identity
    std::string dataset_id = config.name + "|" + std::to_string(train_ds.length) + "x" +
                             std::to_string(train_ds.channels) + "x" +
                             std::to_string(train_ds.size()) + (config.znorm ? "|znorm" : "");

    out.banks.configs = window_configs;
    out.banks.channels = train_ds.channels;
    out.banks.classes = train_ds.class_count();
    out.cache_hit = true;
    for (const WindowConfig& wc : window_configs) {
        for (std::size_t j = 0; j < train_ds.channels; ++j) {
            std::uint64_t key = bank_key(dataset_id, out.split.learn_indices, wc, j);
            std::optional<ShapeletMatrix> bank;
            if (!config.cache_dir.empty()) {
                bank = load_bank(key, config.cache_dir);
                if (bank && (!(bank->config == wc) || bank->channel != j))
                    bank.reset(); // hash collision or stale sidecar: rebuild
            }
            if (!bank) {
                out.cache_hit = false;
                bank = build_bank(out.split.learn, wc, j, config.jobs);
                bank->content_hash = key;
                if (!config.cache_dir.empty()) save_bank(*bank, config.cache_dir);
            }
            out.bank_hashes.push_back(bank_hash_hex(key));
            out.banks.banks.push_back(std::move(*bank));
        }
    }

    out.names = feature_names(out.banks, out.methods);
    out.train = featurize_all(out.split.train, out.banks, out.methods, config.jobs);
    out.test = featurize_all(test_ds, out.banks, out.methods, config.jobs);
    out.transform_time_s = seconds_since(t0);
    return out;
}

std::string feature_csv(const FeatureTable& table, const std::vector<std::string>& names,
                        const std::vector<std::string>& classes) {
    if (names.size() != table.rows.cols())
        fail("data", "feature csv: " + std::to_string(names.size()) + " names for " +
                         std::to_string(table.rows.cols()) + " columns");
    std::ostringstream out;
    out.precision(17);
    out << "label";
    for (const std::string& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << classes.at(static_cast<std::size_t>(table.labels[i]));
        for (std::size_t jcol = 0; jcol < table.rows.cols(); ++jcol)
            out << ',' << table.rows(i, jcol);
        out << '\n';
    }
    return out.str();
}

FeatureTable parse_feature_csv(const std::string& text, std::vector<std::string>& classes_out) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail("parse", "feature csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_tokens(line);
    if (header.empty() || header[0] != "label")
        fail("parse", "feature csv: header must start with 'label'");
    std::size_t width = header.size() - 1;
    if (width == 0) fail("parse", "feature csv: no feature columns");

    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<double> values;
        values.reserve(width);
        std::string label;
        std::size_t start = 0;
        std::size_t field = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string cell = trim(
                line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (field == 0) {
                label = cell;
            } else {
                errno = 0;
                char* end = nullptr;
                double v = std::strtod(cell.c_str(), &end);
                if (cell.empty() || errno != 0 || end != cell.c_str() + cell.size())
                    fail("parse", "feature csv line " + std::to_string(line_no) +
                                      ": bad number '" + cell + "'");
                values.push_back(v);
            }
            ++field;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (values.size() != width)
            fail("parse", "feature csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(width) + " values, got " +
                              std::to_string(values.size()));
        rows.emplace_back(std::move(label), std::move(values));
    }
    if (rows.empty()) fail("parse", "feature csv: no data rows");

    classes_out.clear();
    for (const auto& [label, values] : rows)
        if (std::find(classes_out.begin(), classes_out.end(), label) == classes_out.end())
            classes_out.push_back(label);
    std::sort(classes_out.begin(), classes_out.end());

    FeatureTable table;
    table.rows = Matrix(rows.size(), width);
    table.labels.resize(rows.size());
    table.classes = classes_out.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].second.begin(), rows[i].second.end(), table.rows.row(i));
        table.labels[i] = static_cast<int>(
            std::find(classes_out.begin(), classes_out.end(), rows[i].first) -
            classes_out.begin());
    }
    return table;
}

nlohmann::json run_pipeline_on(const RunConfig& config, const TimeSeriesDataset& train_ds,
                               const TimeSeriesDataset& test_ds) {
    TransformOutput tf = transform_pipeline(config, train_ds, test_ds);

    Grid grid = make_grid(config.grid, config.epochs);
    TuneResult tune = cross_validate(tf.train, grid, config.folds, config.seed, config.jobs);
    FittedModel model = fit(tf.train, tune.best, config.epochs, config.seed);
    EvalResult eval = evaluate(model, tf.test);

    nlohmann::json report;
    report["dataset"] = {{"name", train_ds.name},
                         {"train_size", train_ds.size()},
                         {"test_size", test_ds.size()},
                         {"length", train_ds.length},
                         {"channels", train_ds.channels},
                         {"classes", train_ds.classes}};
    report["config"] = config_json(config);
    report["split"] = {{"learn_indices", tf.split.learn_indices},
                       {"train_indices", tf.split.train_indices}};

    nlohmann::json banks = nlohmann::json::array();
    for (std::size_t b = 0; b < tf.banks.banks.size(); ++b) {
        const ShapeletMatrix& bank = tf.banks.banks[b];
        banks.push_back({{"window", bank.config.str()},
                         {"channel", bank.channel},
                         {"hash", tf.bank_hashes[b]},
                         {"columns", bank.P.cols()},
                         {"class_offsets", bank.class_offsets}});
    }
    report["banks"] = banks;
    report["features"] = {{"count", tf.names.size()}, {"names", tf.names}};

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
    report["timings"] = {{"transform_s", tf.transform_time_s},
                         {"tuning_s", tune.tuning_time_s},
                         {"classification_s", eval.classification_time_s}};
    return report;
}

nlohmann::json run_pipeline(const RunConfig& config) {
    if (config.train_path.empty() || config.test_path.empty())
        fail("config", "both train and test dataset paths are required");
    TimeSeriesDataset train_ds = load_dataset(config.train_path, config.csv_channels);
    TimeSeriesDataset test_ds = load_dataset(config.test_path, config.csv_channels);
    RunConfig resolved = config;
    if (resolved.name.empty()) resolved.name = train_ds.name;
    train_ds.name = resolved.name; // the run name labels all outputs
    test_ds.name = resolved.name;
    return run_pipeline_on(resolved, train_ds, test_ds);
}

} // namespace alt
