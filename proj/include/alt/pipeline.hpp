#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "alt/classify.hpp"
#include "alt/dataset.hpp"
#include "alt/features.hpp"
#include "alt/presets.hpp"

namespace alt {

// Fully resolved run description. CLI flags and config files both fill this;
// every report embeds it so results can be re-derived.
struct RunConfig {
    std::string name;       // dataset / preset id used in outputs
    std::string train_path; // .ts or .csv
    std::string test_path;
    double learn_ratio = 0.25;
    std::uint64_t seed = 1;
    std::vector<std::array<std::size_t, 3>> windows;
    std::vector<std::string> methods; // extraction tokens
    std::string grid = "all";         // all | knn | linear
    std::string cache_dir;            // empty: no bank cache
    std::string out_path;             // report destination ('' = stdout only)
    int jobs = 0;                     // 0 = hardware concurrency
    std::size_t folds = 5;
    std::size_t epochs = 200;
    bool znorm = false;
    std::size_t csv_channels = 1; // channel grouping when inputs are CSV
};

RunConfig preset_run_config(const Preset& preset, const std::string& data_dir);

// Plain-text "key = value" file mirroring RunConfig fields ('#' comments).
// apply_* overlays only the keys present onto an existing config, so files
// can refine a preset and flags can refine the file.
RunConfig parse_run_config_file(const std::string& path);
void apply_run_config_file(RunConfig& cfg, const std::string& path);

std::vector<std::array<std::size_t, 3>> parse_windows(const std::string& text);

Grid make_grid(const std::string& kind, std::size_t epochs);

TimeSeriesDataset load_dataset(const std::string& path, std::size_t csv_channels);

struct TransformOutput {
    BankSet banks;
    std::vector<ExtractionMethod> methods;
    std::vector<std::string> names; // feature column names
    FeatureTable train;             // raw features of the classifier training set
    FeatureTable test;
    Split split;
    std::vector<std::string> bank_hashes;
    double transform_time_s = 0.0;
    bool cache_hit = false; // all banks came from cache
};

// [learn/train split] -> banks -> features for both sets.
TransformOutput transform_pipeline(const RunConfig& config, const TimeSeriesDataset& train_ds,
                                   const TimeSeriesDataset& test_ds);

FeatureTable featurize_all(const TimeSeriesDataset& dataset, const BankSet& banks,
                           std::span<const ExtractionMethod> methods, int jobs);

// Feature CSV: header "label,<name>,..." then one row per instance with the
// class string first.
std::string feature_csv(const FeatureTable& table, const std::vector<std::string>& names,
                        const std::vector<std::string>& classes);
FeatureTable parse_feature_csv(const std::string& text, std::vector<std::string>& classes_out);

// Full run: transform, tune via cross-validation, fit best, evaluate on the
// test set. The returned report is deterministic given (config, seed) except
// for the "timings" object.
nlohmann::json run_pipeline_on(const RunConfig& config, const TimeSeriesDataset& train_ds,
                               const TimeSeriesDataset& test_ds);
nlohmann::json run_pipeline(const RunConfig& config);

} // namespace alt
