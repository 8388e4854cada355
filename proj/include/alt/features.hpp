#pragma once

#include <span>
#include <string>
#include <vector>

#include "alt/dataset.hpp"
#include "alt/shapelet_bank.hpp"
#include "alt/transform.hpp"

namespace alt {

// Two-stage statistic turning one squared class partition of O into a
// scalar: a per-row reduction over the partition's columns, then an
// aggregate over the resulting length-o vector.
struct RowReduce {
    enum class Kind { Mean, Percentile };
    Kind kind = Kind::Mean;
    double p = 50.0; // percentile rank, (0, 100)

    std::string str() const;
};

struct Aggregate {
    enum class Kind { Mean, Variance, Moment3, Moment4, ExcessKurtosis };
    Kind kind = Kind::Mean;

    std::string str() const;
};

struct ExtractionMethod {
    RowReduce row;
    Aggregate agg;

    std::string str() const { return row.str() + "-" + agg.str(); }

    // tokens: "<row>-<agg>" with row in {mean, p<rank>} and agg in
    // {mean, var, m3, m4, kurt}, e.g. "mean-mean", "p5-m4"
    static ExtractionMethod parse(const std::string& token);
};

// Percentiles interpolate linearly between closest ranks of the sorted row
// (position p/100 * (w-1)).
std::vector<double> row_reduce(const Matrix& partition, const RowReduce& method);

// Central moments, population variance, excess kurtosis m4/m2^2 - 3 with the
// zero-variance case defined as 0.
double aggregate(std::span<const double> values, const Aggregate& stat);

// Banks for all g configs x m channels of one run, bank index = g*m + j.
struct BankSet {
    std::vector<WindowConfig> configs;
    std::size_t channels = 0;
    std::size_t classes = 0;
    std::vector<ShapeletMatrix> banks;

    const ShapeletMatrix& bank(std::size_t g, std::size_t j) const {
        return banks[g * channels + j];
    }
};

// The m*c*n*g feature vector of one instance; index layout
// ((g*m + j)*c + y)*n + method, so config is the outermost axis.
std::vector<double> featurize(const Instance& instance, const BankSet& banks,
                              std::span<const ExtractionMethod> methods);

// Column names in featurize order: g{g}_ch{j}_class{y}_{row}-{agg}
std::vector<std::string> feature_names(const BankSet& banks,
                                       std::span<const ExtractionMethod> methods);

} // namespace alt
