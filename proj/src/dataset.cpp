#include "alt/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "alt/error.hpp"
#include "alt/rng.hpp"

namespace alt {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
    fail("parse", "line " + std::to_string(line_no) + ": " + msg);
}

bool is_missing_marker(const std::string& tok) {
    const std::string t = lower(trim(tok));
    return t.empty() || t == "?" || t == "nan" || t == "na";
}

double parse_value(const std::string& tok, std::size_t line_no) {
    if (is_missing_marker(tok)) parse_fail(line_no, "missing value marker '" + trim(tok) + "'");
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(trim(tok), &pos);
    } catch (const std::exception&) {
        parse_fail(line_no, "not a number: '" + trim(tok) + "'");
    }
    if (pos != trim(tok).size()) parse_fail(line_no, "trailing characters in value '" + trim(tok) + "'");
    if (!std::isfinite(v)) parse_fail(line_no, "non-finite value '" + trim(tok) + "'");
    return v;
}

// deterministic class order: sort the distinct labels
std::vector<std::string> sorted_classes(const std::vector<std::string>& labels) {
    std::vector<std::string> cls = labels;
    std::sort(cls.begin(), cls.end());
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    return cls;
}

int class_index(const std::vector<std::string>& classes, const std::string& label,
                std::size_t line_no) {
    auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
        parse_fail(line_no, "unknown class label '" + label + "'");
    return static_cast<int>(it - classes.begin());
}

} // namespace

std::vector<std::size_t> TimeSeriesDataset::class_histogram() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const Instance& inst : instances) counts[static_cast<std::size_t>(inst.label)]++;
    return counts;
}

TimeSeriesDataset TimeSeriesDataset::subset(const std::vector<std::size_t>& indices) const {
    TimeSeriesDataset out;
    out.name = name;
    out.length = length;
    out.channels = channels;
    out.classes = classes;
    out.instances.reserve(indices.size());
    for (std::size_t idx : indices) out.instances.push_back(instances[idx]);
    return out;
}

TimeSeriesDataset parse_ts(const std::string& text) {
    TimeSeriesDataset ds;
    std::vector<std::string> declared_classes;
    std::size_t declared_length = 0;
    std::size_t declared_dims = 0;
    bool univariate_declared = false;
    bool in_data = false;

    std::vector<std::pair<std::vector<std::vector<double>>, std::string>> raw; // channels, label

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        if (!in_data && t[0] == '@') {
            std::istringstream hdr(t);
            std::string directive;
            hdr >> directive;
            directive = lower(directive);
            if (directive == "@data") {
                in_data = true;
            } else if (directive == "@problemname") {
                hdr >> ds.name;
            } else if (directive == "@serieslength") {
                long v = 0;
                if (!(hdr >> v) || v <= 0) parse_fail(line_no, "malformed @seriesLength");
                declared_length = static_cast<std::size_t>(v);
            } else if (directive == "@dimensions" || directive == "@dimension") {
                long v = 0;
                if (!(hdr >> v) || v <= 0) parse_fail(line_no, "malformed @dimensions");
                declared_dims = static_cast<std::size_t>(v);
            } else if (directive == "@univariate") {
                std::string flag;
                hdr >> flag;
                univariate_declared = lower(flag) == "true";
                if (univariate_declared) declared_dims = 1;
            } else if (directive == "@classlabel") {
                std::string flag;
                hdr >> flag;
                if (lower(flag) == "true") {
                    std::string label;
                    while (hdr >> label) declared_classes.push_back(label);
                    if (declared_classes.empty())
                        parse_fail(line_no, "@classLabel true with no labels");
                }
            } else if (directive == "@missing") {
                // accepted; actual missing markers in data still error out
            }
            // other directives (@timeStamps, @equalLength, ...) are ignored
            continue;
        }

        if (!in_data) parse_fail(line_no, "data before @data directive");

        std::vector<std::string> parts = split_on(t, ':');
        if (parts.size() < 2) parse_fail(line_no, "expected ':'-separated channels and class label");
        const std::string label = trim(parts.back());
        if (label.empty()) parse_fail(line_no, "empty class label");
        parts.pop_back();

        std::vector<std::vector<double>> channels;
        channels.reserve(parts.size());
        for (const std::string& chan : parts) {
            std::vector<double> values;
            for (const std::string& tok : split_on(chan, ',')) values.push_back(parse_value(tok, line_no));
            if (values.empty()) parse_fail(line_no, "empty channel");
            channels.push_back(std::move(values));
        }
        raw.emplace_back(std::move(channels), label);
    }

    if (raw.empty()) fail("parse", "no data lines found");

    // resolve m and h from declarations or the first instance
    ds.channels = declared_dims ? declared_dims : raw.front().first.size();
    ds.length = declared_length ? declared_length : raw.front().first.front().size();

    std::vector<std::string> labels;
    labels.reserve(raw.size());
    for (const auto& [channels, label] : raw) labels.push_back(label);
    ds.classes = declared_classes.empty() ? sorted_classes(labels) : sorted_classes(declared_classes);
    if (ds.classes.size() < 2) fail("parse", "dataset declares fewer than 2 classes");

    std::size_t data_line = 0;
    for (auto& [channels, label] : raw) {
        ++data_line;
        if (channels.size() != ds.channels)
            fail("parse", "instance " + std::to_string(data_line) + ": expected " +
                              std::to_string(ds.channels) + " channels, got " +
                              std::to_string(channels.size()));
        for (const auto& chan : channels)
            if (chan.size() != ds.length)
                fail("parse", "instance " + std::to_string(data_line) + ": ragged series length " +
                                  std::to_string(chan.size()) + " (expected " +
                                  std::to_string(ds.length) + ")");
        Instance inst;
        inst.channels = std::move(channels);
        inst.label = class_index(ds.classes, label, data_line);
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

TimeSeriesDataset load_ts_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    TimeSeriesDataset ds = parse_ts(buf.str());
    if (ds.name.empty()) ds.name = path;
    return ds;
}

TimeSeriesDataset parse_csv(const std::string& text, const CsvSchema& schema) {
    if (schema.channels == 0) fail("config", "csv schema: channels must be >= 1");

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::size_t label_col = std::size_t(-1); // resolved after header / first row
    bool expect_header = !schema.label_column.empty();

    std::vector<std::pair<std::vector<double>, std::string>> rows; // values, label
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_on(line, ',');

        if (expect_header) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (trim(cells[i]) == schema.label_column) label_col = i;
            if (label_col == std::size_t(-1))
                parse_fail(line_no, "label column '" + schema.label_column + "' not in header");
            expect_header = false;
            continue;
        }

        const std::size_t lc = label_col == std::size_t(-1) ? cells.size() - 1 : label_col;
        if (lc >= cells.size()) parse_fail(line_no, "row too short for label column");
        std::vector<double> values;
        values.reserve(cells.size() - 1);
        std::string label;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == lc) {
                label = trim(cells[i]);
                if (label.empty()) parse_fail(line_no, "empty class label");
            } else {
                values.push_back(parse_value(cells[i], line_no));
            }
        }
        if (values.empty()) parse_fail(line_no, "row has no sample values");
        rows.emplace_back(std::move(values), label);
    }

    if (rows.empty()) fail("parse", "no data rows found");
    if (rows.size() % schema.channels != 0)
        fail("parse", "row count " + std::to_string(rows.size()) + " not divisible by " +
                          std::to_string(schema.channels) + " channels");

    TimeSeriesDataset ds;
    ds.channels = schema.channels;
    ds.length = rows.front().first.size();

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rows.size(); i += schema.channels) labels.push_back(rows[i].second);
    ds.classes = sorted_classes(labels);
    if (ds.classes.size() < 2) fail("parse", "dataset declares fewer than 2 classes");

    for (std::size_t i = 0; i < rows.size(); i += schema.channels) {
        Instance inst;
        inst.channels.reserve(schema.channels);
        for (std::size_t j = 0; j < schema.channels; ++j) {
            auto& [values, label] = rows[i + j];
            if (values.size() != ds.length)
                fail("parse", "row " + std::to_string(i + j + 1) + ": inconsistent row length " +
                                  std::to_string(values.size()) + " (expected " +
                                  std::to_string(ds.length) + ")");
            if (label != rows[i].second)
                fail("parse", "row " + std::to_string(i + j + 1) +
                                  ": channels of one instance disagree on label");
            inst.channels.push_back(std::move(values));
        }
        inst.label = class_index(ds.classes, rows[i].second, i + 1);
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

std::string export_csv(const TimeSeriesDataset& dataset) {
    std::ostringstream out;
    out.precision(17);
    for (const Instance& inst : dataset.instances) {
        for (const auto& chan : inst.channels) {
            for (double v : chan) out << v << ',';
            out << dataset.classes[static_cast<std::size_t>(inst.label)] << '\n';
        }
    }
    return out.str();
}

Split stratified_split(const TimeSeriesDataset& dataset, const SplitSpec& spec) {
    if (!(spec.learn_ratio > 0.0 && spec.learn_ratio < 1.0))
        fail("config", "learn_ratio must be in (0,1)");
    if (dataset.class_count() < 2) fail("data", "split needs at least 2 classes");

    // group indices per class, file order preserved
    std::vector<std::vector<std::size_t>> per_class(dataset.class_count());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        per_class[static_cast<std::size_t>(dataset.instances[i].label)].push_back(i);

    Split split;
    for (std::size_t y = 0; y < per_class.size(); ++y) {
        const std::size_t n = per_class[y].size();
        if (n < 2)
            fail("data", "class '" + dataset.classes[y] + "' has " + std::to_string(n) +
                             " instance(s); cannot stratify");
        // round half up, clamped so both sides keep the class
        std::size_t take = static_cast<std::size_t>(std::floor(spec.learn_ratio * static_cast<double>(n) + 0.5));
        take = std::max<std::size_t>(1, std::min(take, n - 1));

        // per-class substream keeps counts and picks independent across classes
        SplitMix64 rng = SplitMix64::keyed(spec.seed, 0x5711C0DEull + y);
        std::vector<std::size_t> order = per_class[y];
        rng.shuffle(order);
        std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<long>(take));
        std::sort(chosen.begin(), chosen.end());
        std::vector<std::size_t> rest(order.begin() + static_cast<long>(take), order.end());
        std::sort(rest.begin(), rest.end());
        split.learn_indices.insert(split.learn_indices.end(), chosen.begin(), chosen.end());
        split.train_indices.insert(split.train_indices.end(), rest.begin(), rest.end());
    }
    std::sort(split.learn_indices.begin(), split.learn_indices.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());

    split.learn = dataset.subset(split.learn_indices);
    split.train = dataset.subset(split.train_indices);
    return split;
}

TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset) {
    TimeSeriesDataset out = dataset;
    for (Instance& inst : out.instances) {
        for (auto& chan : inst.channels) {
            double mean = 0.0;
            for (double v : chan) mean += v;
            mean /= static_cast<double>(chan.size());
            double var = 0.0;
            for (double v : chan) var += (v - mean) * (v - mean);
            var /= static_cast<double>(chan.size());
            const double sd = std::sqrt(var);
            for (double& v : chan) v = sd > 0.0 ? (v - mean) / sd : 0.0;
        }
    }
    return out;
}

} // namespace alt
