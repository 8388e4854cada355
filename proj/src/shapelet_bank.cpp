#include "alt/shapelet_bank.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "alt/error.hpp"
#include "alt/parallel.hpp"

namespace alt {

WindowConfig validate_config(std::size_t r, std::size_t l, std::size_t k, std::size_t h) {
    WindowConfig cfg;
    cfg.r = r;
    cfg.l = l;
    cfg.k = k;
    cfg.series_length = h;
    const std::string id = "(" + std::to_string(r) + "," + std::to_string(l) + "," +
                           std::to_string(k) + ")";
    if (l < 2) fail("config", "config " + id + ": l must be >= 2");
    if (k < 1) fail("config", "config " + id + ": k must be >= 1");
    if (r > h)
        fail("config", "config " + id + ": window length r exceeds series length h = " +
                           std::to_string(h));
    const std::size_t denom = 2 * l - 2;
    if ((r - 1) % denom != 0)
        fail("config", "config " + id + ": (2l-2) = " + std::to_string(denom) +
                           " does not divide (r-1) = " + std::to_string(r - 1));
    cfg.s = (r - 1) / denom;
    if (cfg.s < 1) fail("config", "config " + id + ": stride s = (r-1)/(2l-2) is zero (r < 2l-1)");
    cfg.q = (h - r + 1) / k;
    if (cfg.q < 1) fail("config", "config " + id + ": no window fits (q < 1)");
    return cfg;
}

std::vector<std::vector<double>> extract_sequences(std::span<const double> series,
                                                   const WindowConfig& config) {
    if (series.size() != config.series_length)
        fail("data", "series length " + std::to_string(series.size()) +
                         " does not match config " + config.str() + " context h = " +
                         std::to_string(config.series_length));
    std::vector<std::vector<double>> out(config.q);
    const std::size_t points = 2 * config.l - 1;
    for (std::size_t w = 0; w < config.q; ++w) {
        out[w].resize(points);
        for (std::size_t t = 0; t < points; ++t) out[w][t] = series[w * config.k + t * config.s];
    }
    return out;
}

ShapeletMatrix build_bank(const TimeSeriesDataset& learn, const WindowConfig& config,
                          std::size_t channel, int jobs) {
    if (channel >= learn.channels)
        fail("config", "channel " + std::to_string(channel) + " out of range (m = " +
                           std::to_string(learn.channels) + ")");
    const std::size_t c = learn.class_count();
    const std::vector<std::size_t> counts = learn.class_histogram();
    for (std::size_t y = 0; y < c; ++y)
        if (counts[y] == 0)
            fail("data", "learning set has no instance of class '" + learn.classes[y] +
                             "'; bank must cover all classes");

    // column slots in (class, instance order within class, window) order
    std::vector<std::vector<std::size_t>> per_class(c);
    for (std::size_t i = 0; i < learn.size(); ++i)
        per_class[static_cast<std::size_t>(learn.instances[i].label)].push_back(i);

    ShapeletMatrix bank;
    bank.channel = channel;
    bank.config = config;
    bank.class_offsets.resize(c + 1, 0);
    for (std::size_t y = 0; y < c; ++y)
        bank.class_offsets[y + 1] = bank.class_offsets[y] + per_class[y].size() * config.q;
    const std::size_t total = bank.class_offsets.back();
    bank.P = Matrix(config.l, total);
    bank.eigenvalues.resize(total);

    std::vector<std::size_t> column_instance(total);
    std::vector<std::size_t> column_window(total);
    {
        std::size_t col = 0;
        for (std::size_t y = 0; y < c; ++y)
            for (std::size_t idx : per_class[y])
                for (std::size_t w = 0; w < config.q; ++w, ++col) {
                    column_instance[col] = idx;
                    column_window[col] = w;
                }
    }

    parallel_for(total, jobs, [&](std::size_t col) {
        const std::size_t w = column_window[col];
        const Instance& inst = learn.instances[column_instance[col]];
        const std::vector<double>& series = inst.channels[channel];

        const std::size_t points = 2 * config.l - 1;
        std::vector<double> seq(points);
        for (std::size_t t = 0; t < points; ++t) seq[t] = series[w * config.k + t * config.s];

        ShapeletVector v = shapelet_vector(seq, config.l, inst.label);
        for (std::size_t rrow = 0; rrow < config.l; ++rrow) bank.P(rrow, col) = v.components[rrow];
        bank.eigenvalues[col] = v.eigenvalue;
    });

    return bank;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) { fnv_bytes(h, &v, sizeof v); }

} // namespace

std::uint64_t bank_key(const std::string& dataset_id, std::span<const std::size_t> learn_indices,
                       const WindowConfig& config, std::size_t channel) {
    std::uint64_t h = kFnvOffset;
    fnv_bytes(h, dataset_id.data(), dataset_id.size());
    fnv_u64(h, config.r);
    fnv_u64(h, config.l);
    fnv_u64(h, config.k);
    fnv_u64(h, config.series_length);
    fnv_u64(h, channel);
    fnv_u64(h, learn_indices.size());
    for (std::size_t idx : learn_indices) fnv_u64(h, idx);
    return h;
}

std::string bank_hash_hex(std::uint64_t key) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(key));
    return buf;
}

namespace {

std::string bin_path(const std::string& dir, std::uint64_t key) {
    return dir + "/bank_" + bank_hash_hex(key) + ".bin";
}

std::string sidecar_path(const std::string& dir, std::uint64_t key) {
    return dir + "/bank_" + bank_hash_hex(key) + ".json";
}

} // namespace

void save_bank(const ShapeletMatrix& bank, const std::string& dir) {
    std::filesystem::create_directories(dir);

    nlohmann::json side;
    side["hash"] = bank_hash_hex(bank.content_hash);
    side["channel"] = bank.channel;
    side["config"] = {{"r", bank.config.r},
                      {"l", bank.config.l},
                      {"k", bank.config.k},
                      {"s", bank.config.s},
                      {"q", bank.config.q},
                      {"series_length", bank.config.series_length}};
    side["class_offsets"] = bank.class_offsets;
    side["columns"] = bank.P.cols();

    std::ofstream js(sidecar_path(dir, bank.content_hash));
    if (!js) fail("io", "cannot write bank sidecar in '" + dir + "'");
    js << side.dump(2) << '\n';

    std::ofstream bin(bin_path(dir, bank.content_hash), std::ios::binary);
    if (!bin) fail("io", "cannot write bank data in '" + dir + "'");
    bin.write(reinterpret_cast<const char*>(bank.P.data().data()),
              static_cast<std::streamsize>(bank.P.data().size() * sizeof(double)));
    bin.write(reinterpret_cast<const char*>(bank.eigenvalues.data()),
              static_cast<std::streamsize>(bank.eigenvalues.size() * sizeof(double)));
}

std::optional<ShapeletMatrix> load_bank(std::uint64_t key, const std::string& dir) {
    std::ifstream js(sidecar_path(dir, key));
    if (!js) return std::nullopt;
    nlohmann::json side;
    try {
        js >> side;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt; // treat a corrupt sidecar as a cache miss
    }

    ShapeletMatrix bank;
    bank.content_hash = key;
    try {
        bank.channel = side.at("channel").get<std::size_t>();
        const auto& cfg = side.at("config");
        bank.config.r = cfg.at("r").get<std::size_t>();
        bank.config.l = cfg.at("l").get<std::size_t>();
        bank.config.k = cfg.at("k").get<std::size_t>();
        bank.config.s = cfg.at("s").get<std::size_t>();
        bank.config.q = cfg.at("q").get<std::size_t>();
        bank.config.series_length = cfg.at("series_length").get<std::size_t>();
        bank.class_offsets = side.at("class_offsets").get<std::vector<std::size_t>>();
        const auto columns = side.at("columns").get<std::size_t>();
        bank.P = Matrix(bank.config.l, columns);
        bank.eigenvalues.resize(columns);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }

    std::ifstream bin(bin_path(dir, key), std::ios::binary);
    if (!bin) return std::nullopt;
    bin.read(reinterpret_cast<char*>(bank.P.data().data()),
             static_cast<std::streamsize>(bank.P.data().size() * sizeof(double)));
    bin.read(reinterpret_cast<char*>(bank.eigenvalues.data()),
             static_cast<std::streamsize>(bank.eigenvalues.size() * sizeof(double)));
    if (!bin) return std::nullopt;
    return bank;
}

} // namespace alt
