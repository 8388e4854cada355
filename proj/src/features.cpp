#include "alt/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alt/error.hpp"

namespace alt {

namespace {

std::string format_rank(double p) {
    std::ostringstream out;
    out << p; // trims trailing zeros: 5, 2.5, 50
    return out.str();
}

} // namespace

std::string RowReduce::str() const {
    return kind == Kind::Mean ? "mean" : "p" + format_rank(p);
}

std::string Aggregate::str() const {
    switch (kind) {
        case Kind::Mean: return "mean";
        case Kind::Variance: return "var";
        case Kind::Moment3: return "m3";
        case Kind::Moment4: return "m4";
        case Kind::ExcessKurtosis: return "kurt";
    }
    return "?";
}

ExtractionMethod ExtractionMethod::parse(const std::string& token) {
    const auto dash = token.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= token.size())
        fail("config", "method '" + token + "': expected <row>-<agg>, e.g. mean-mean or p5-m4");
    const std::string row = token.substr(0, dash);
    const std::string agg = token.substr(dash + 1);

    ExtractionMethod m;
    if (row == "mean") {
        m.row.kind = RowReduce::Kind::Mean;
    } else if (row.size() > 1 && row[0] == 'p') {
        m.row.kind = RowReduce::Kind::Percentile;
        try {
            m.row.p = std::stod(row.substr(1));
        } catch (const std::exception&) {
            fail("config", "method '" + token + "': bad percentile rank '" + row + "'");
        }
        if (!(m.row.p > 0.0 && m.row.p < 100.0))
            fail("config", "method '" + token + "': percentile rank must be in (0,100)");
    } else {
        fail("config", "method '" + token + "': unknown row reduction '" + row + "'");
    }

    if (agg == "mean") m.agg.kind = Aggregate::Kind::Mean;
    else if (agg == "var") m.agg.kind = Aggregate::Kind::Variance;
    else if (agg == "m3") m.agg.kind = Aggregate::Kind::Moment3;
    else if (agg == "m4") m.agg.kind = Aggregate::Kind::Moment4;
    else if (agg == "kurt") m.agg.kind = Aggregate::Kind::ExcessKurtosis;
    else fail("config", "method '" + token + "': unknown aggregate '" + agg + "'");
    return m;
}

std::vector<double> row_reduce(const Matrix& partition, const RowReduce& method) {
    const std::size_t w = partition.cols();
    if (w == 0 || partition.rows() == 0) fail("compute", "row_reduce: empty partition");

    std::vector<double> out(partition.rows());
    if (method.kind == RowReduce::Kind::Mean) {
        for (std::size_t i = 0; i < partition.rows(); ++i) {
            double sum = 0.0;
            const double* row = partition.row(i);
            for (std::size_t j = 0; j < w; ++j) sum += row[j];
            out[i] = sum / static_cast<double>(w);
        }
        return out;
    }

    std::vector<double> sorted(w);
    const double pos = method.p / 100.0 * static_cast<double>(w - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    for (std::size_t i = 0; i < partition.rows(); ++i) {
        const double* row = partition.row(i);
        sorted.assign(row, row + w);
        std::sort(sorted.begin(), sorted.end());
        out[i] = lo + 1 < w ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
    }
    return out;
}

double aggregate(std::span<const double> values, const Aggregate& stat) {
    const std::size_t n = values.size();
    if (n == 0) fail("compute", "aggregate: empty input");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    if (stat.kind == Aggregate::Kind::Mean) return mean;

    if (n < 2) fail("compute", "aggregate: need at least 2 values for moments");
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    switch (stat.kind) {
        case Aggregate::Kind::Variance: return m2;
        case Aggregate::Kind::Moment3: return m3;
        case Aggregate::Kind::Moment4: return m4;
        case Aggregate::Kind::ExcessKurtosis: return m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
        case Aggregate::Kind::Mean: break;
    }
    return mean;
}

std::vector<double> featurize(const Instance& instance, const BankSet& banks,
                              std::span<const ExtractionMethod> methods) {
    const std::size_t g = banks.configs.size();
    const std::size_t m = banks.channels;
    const std::size_t c = banks.classes;
    const std::size_t n = methods.size();
    if (g == 0 || n == 0) fail("config", "featurize: needs at least one config and one method");
    if (instance.channels.size() != m)
        fail("data", "featurize: instance has " + std::to_string(instance.channels.size()) +
                         " channels, banks cover " + std::to_string(m));

    std::vector<double> features(m * c * n * g);
    for (std::size_t gi = 0; gi < g; ++gi) {
        for (std::size_t j = 0; j < m; ++j) {
            const ShapeletMatrix& bank = banks.bank(gi, j);
            const Matrix A = embed_instance(instance.channels[j], bank.config);
            const Matrix O = apply_bank(A, bank.P);
            const ClassResponse response = square_partition(O, bank.class_offsets);
            for (std::size_t y = 0; y < c; ++y) {
                for (std::size_t mi = 0; mi < n; ++mi) {
                    const std::vector<double> reduced =
                        row_reduce(response.partitions[y], methods[mi].row);
                    features[((gi * m + j) * c + y) * n + mi] = aggregate(reduced, methods[mi].agg);
                }
            }
        }
    }
    return features;
}

std::vector<std::string> feature_names(const BankSet& banks,
                                       std::span<const ExtractionMethod> methods) {
    std::vector<std::string> names;
    names.reserve(banks.configs.size() * banks.channels * banks.classes * methods.size());
    for (std::size_t gi = 0; gi < banks.configs.size(); ++gi)
        for (std::size_t j = 0; j < banks.channels; ++j)
            for (std::size_t y = 0; y < banks.classes; ++y)
                for (const ExtractionMethod& method : methods)
                    names.push_back("g" + std::to_string(gi) + "_ch" + std::to_string(j) +
                                    "_class" + std::to_string(y) + "_" + method.str());
    return names;
}

} // namespace alt
