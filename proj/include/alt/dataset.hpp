#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace alt {

struct Instance {
    std::vector<std::vector<double>> channels; // m channels, h samples each
    int label = -1;                            // index into TimeSeriesDataset::classes
};

// Labeled, equal-length, no-missing-values time series collection.
// Immutable by convention once built; safe to share across workers.
struct TimeSeriesDataset {
    std::string name;
    std::size_t length = 0;   // h
    std::size_t channels = 1; // m
    std::vector<std::string> classes; // sorted; Instance::label indexes this
    std::vector<Instance> instances;

    std::size_t size() const { return instances.size(); }
    std::size_t class_count() const { return classes.size(); }

    const std::vector<double>& series(std::size_t instance, std::size_t channel) const {
        return instances[instance].channels[channel];
    }

    // instances per class, in `classes` order
    std::vector<std::size_t> class_histogram() const;

    // new dataset holding the given instances (order preserved), same classes
    TimeSeriesDataset subset(const std::vector<std::size_t>& indices) const;
};

// Parse the archive's .ts layout: '@' header directives followed by @data,
// one instance per line, channels separated by ':', class label last.
TimeSeriesDataset parse_ts(const std::string& text);
TimeSeriesDataset load_ts_file(const std::string& path);

// CSV layout: one row per (instance, channel); consecutive `channels` rows
// form one instance. Headerless with the label in the last column unless
// `label_column` names a header column.
struct CsvSchema {
    std::size_t channels = 1;
    std::string label_column; // empty: no header row, label is last column
};

TimeSeriesDataset parse_csv(const std::string& text, const CsvSchema& schema);
std::string export_csv(const TimeSeriesDataset& dataset);

struct SplitSpec {
    double learn_ratio = 0.25;
    std::uint64_t seed = 0;
};

struct Split {
    TimeSeriesDataset learn;
    TimeSeriesDataset train;
    std::vector<std::size_t> learn_indices; // into the source dataset
    std::vector<std::size_t> train_indices;
};

// Stratified learn/train split. Per-class learn count is
// round-half-up(ratio * class_size) clamped to [1, class_size - 1], so both
// sides always see every class; only which indices land in `learn` depends
// on the seed.
Split stratified_split(const TimeSeriesDataset& dataset, const SplitSpec& spec);

// Per-instance, per-channel z-normalization (optional; off by default in
// every pipeline path).
TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset);

} // namespace alt
