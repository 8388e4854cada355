#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alt/dataset.hpp"
#include "alt/linlaw.hpp"
#include "alt/matrix.hpp"

namespace alt {

// A validated (r, l, k) window triplet bound to a series length h.
// s is the in-window point stride, q the number of windows per series.
struct WindowConfig {
    std::size_t r = 0; // window length, samples
    std::size_t l = 0; // embedding dimension
    std::size_t k = 0; // window shift
    std::size_t s = 0; // (r-1)/(2l-2)
    std::size_t q = 0; // floor((h-r+1)/k)
    std::size_t series_length = 0; // h the config was validated against

    std::string str() const {
        return "(" + std::to_string(r) + "," + std::to_string(l) + "," + std::to_string(k) + ")";
    }
    friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

// Checks r <= h, l >= 2, k >= 1, (2l-2) | (r-1), s >= 1, q >= 1 and fills
// the derived fields.
WindowConfig validate_config(std::size_t r, std::size_t l, std::size_t k, std::size_t h);

// Window w (0-based) picks the 2l-1 samples series[w*k + t*s], t = 0..2l-2.
// Returns exactly q sequences.
std::vector<std::vector<double>> extract_sequences(std::span<const double> series,
                                                   const WindowConfig& config);

// Shapelet vectors of one channel of the learning set for one config,
// stored as columns of the l x N matrix P. Columns are grouped by source
// class; class_offsets has c+1 entries bounding each class block. Within a
// block the order is (instance order, window index).
struct ShapeletMatrix {
    std::size_t channel = 0;
    WindowConfig config;
    Matrix P;
    std::vector<std::size_t> class_offsets;
    std::vector<double> eigenvalues; // per column
    std::uint64_t content_hash = 0;
};

ShapeletMatrix build_bank(const TimeSeriesDataset& learn, const WindowConfig& config,
                          std::size_t channel, int jobs = 1);

// Cache key over everything the bank content depends on: which source
// instances were used, the window triplet, and the channel.
std::uint64_t bank_key(const std::string& dataset_id, std::span<const std::size_t> learn_indices,
                       const WindowConfig& config, std::size_t channel);

std::string bank_hash_hex(std::uint64_t key);

// Disk cache: <dir>/bank_<hex>.bin (little-endian doubles, column data
// row-major) plus <dir>/bank_<hex>.json sidecar with config, channel,
// class_offsets and the hash.
void save_bank(const ShapeletMatrix& bank, const std::string& dir);
std::optional<ShapeletMatrix> load_bank(std::uint64_t key, const std::string& dir);

} // namespace alt
