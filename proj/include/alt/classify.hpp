#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alt/matrix.hpp"

namespace alt {

// Transformed instances ready for classification. `stats` is filled from
// training rows only and reused verbatim for validation/test rows.
struct ColumnStats {
    std::vector<double> mean;
    std::vector<double> stddev; // zero-variance columns keep stddev 1 so they map to 0
};

ColumnStats column_stats(const Matrix& rows);
Matrix standardized(const Matrix& rows, const ColumnStats& stats);

struct FeatureTable {
    Matrix rows;            // instances x features
    std::vector<int> labels;
    std::size_t classes = 0;
    ColumnStats stats;      // empty until computed from training rows

    std::size_t size() const { return rows.rows(); }
};

enum class Metric { Euclidean, Cityblock };

std::string metric_name(Metric m);

// Majority vote over the K nearest training rows. Neighbor order is
// (distance, index); vote ties break by smaller summed distance, then by
// class order.
std::vector<int> knn_predict(const Matrix& train_rows, std::span<const int> train_labels,
                             std::size_t classes, const Matrix& queries, std::size_t K,
                             Metric metric);

// One-vs-rest hinge-loss linear classifier trained with Pegasos-style
// stochastic subgradient steps. Inputs are expected standardized; a constant
// feature is appended internally for the bias.
struct LinearMarginModel {
    Matrix weights; // classes x (features + 1), last column is the bias
    double lambda = 0.0;
};

LinearMarginModel linear_margin_fit(const Matrix& rows, std::span<const int> labels,
                                    std::size_t classes, double lambda, std::size_t epochs,
                                    std::uint64_t seed);

std::vector<int> linear_margin_predict(const LinearMarginModel& model, const Matrix& queries);

// Mean regularized hinge objective; exposed for the training-descent check.
double hinge_objective(const LinearMarginModel& model, const Matrix& rows,
                       std::span<const int> labels);

struct ClassifierConfig {
    enum class Kind { Knn, LinearMargin };
    Kind kind = Kind::Knn;
    std::size_t K = 1;
    Metric metric = Metric::Euclidean;
    double lambda = 1.0;

    std::string str() const;
};

// Candidates in tie-break order: KNN by K ascending (euclidean before
// cityblock), then linear margin by lambda descending. On equal mean fold
// accuracy the earliest candidate wins.
struct Grid {
    std::vector<ClassifierConfig> candidates;
    std::size_t epochs = 200; // linear margin training epochs

    static Grid standard();
    static Grid knn_only();
    static Grid linear_only();
};

struct TuneResult {
    ClassifierConfig best;
    double validation_accuracy = 0.0;     // mean of fold_accuracies
    std::vector<double> fold_accuracies;  // of the winning candidate
    std::vector<double> grid_accuracies;  // mean fold accuracy per candidate
    double tuning_time_s = 0.0;
};

// Per-class round-robin assignment after a seeded shuffle; every class must
// have at least `folds` members.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels,
                                                       std::size_t classes, std::size_t folds,
                                                       std::uint64_t seed);

TuneResult cross_validate(const FeatureTable& train, const Grid& grid, std::size_t folds,
                          std::uint64_t seed, int jobs = 1);

// A tuned classifier frozen together with its training data and scaling.
struct FittedModel {
    ClassifierConfig config;
    ColumnStats stats;
    Matrix train_rows; // standardized; kept for KNN
    std::vector<int> train_labels;
    std::size_t classes = 0;
    LinearMarginModel linear;
};

FittedModel fit(const FeatureTable& train, const ClassifierConfig& config, std::size_t epochs,
                std::uint64_t seed);

struct EvalResult {
    double accuracy = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    double classification_time_s = 0.0; // prediction only
    std::vector<int> predictions;
};

EvalResult evaluate(const FittedModel& model, const FeatureTable& test);

} // namespace alt
