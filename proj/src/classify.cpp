#include "alt/classify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "alt/error.hpp"
#include "alt/parallel.hpp"
#include "alt/rng.hpp"

namespace alt {

ColumnStats column_stats(const Matrix& rows) {
    const std::size_t n = rows.rows();
    const std::size_t d = rows.cols();
    if (n == 0) fail("data", "column_stats: empty table");
    ColumnStats st;
    st.mean.assign(d, 0.0);
    st.stddev.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) st.mean[j] += rows(i, j);
    for (double& m : st.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double dlt = rows(i, j) - st.mean[j];
            st.stddev[j] += dlt * dlt;
        }
    for (double& s : st.stddev) {
        s = std::sqrt(s / static_cast<double>(n));
        if (!(s > 0.0)) s = 1.0; // constant column: centered value is already 0
    }
    return st;
}

Matrix standardized(const Matrix& rows, const ColumnStats& stats) {
    if (rows.cols() != stats.mean.size())
        fail("data", "standardize: feature width " + std::to_string(rows.cols()) +
                         " does not match stats width " + std::to_string(stats.mean.size()));
    Matrix out(rows.rows(), rows.cols());
    for (std::size_t i = 0; i < rows.rows(); ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j)
            out(i, j) = (rows(i, j) - stats.mean[j]) / stats.stddev[j];
    return out;
}

std::string metric_name(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "cityblock";
}

namespace {

double row_distance(const double* a, const double* b, std::size_t d, Metric metric) {
    double acc = 0.0;
    if (metric == Metric::Euclidean) {
        for (std::size_t j = 0; j < d; ++j) {
            const double delta = a[j] - b[j];
            acc += delta * delta;
        }
        return std::sqrt(acc);
    }
    for (std::size_t j = 0; j < d; ++j) acc += std::fabs(a[j] - b[j]);
    return acc;
}

} // namespace

std::vector<int> knn_predict(const Matrix& train_rows, std::span<const int> train_labels,
                             std::size_t classes, const Matrix& queries, std::size_t K,
                             Metric metric) {
    const std::size_t n = train_rows.rows();
    if (n == 0) fail("data", "knn_predict: empty training set");
    if (K < 1 || K > n)
        fail("config", "knn_predict: K = " + std::to_string(K) + " out of range [1, " +
                           std::to_string(n) + "]");
    if (queries.cols() != train_rows.cols())
        fail("data", "knn_predict: query width " + std::to_string(queries.cols()) +
                         " does not match training width " + std::to_string(train_rows.cols()));

    std::vector<int> out(queries.rows());
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t qi = 0; qi < queries.rows(); ++qi) {
        const double* qrow = queries.row(qi);
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = {row_distance(qrow, train_rows.row(i), train_rows.cols(), metric), i};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(K), dist.end());

        std::vector<std::size_t> votes(classes, 0);
        std::vector<double> summed(classes, 0.0);
        for (std::size_t i = 0; i < K; ++i) {
            const auto y = static_cast<std::size_t>(train_labels[dist[i].second]);
            votes[y]++;
            summed[y] += dist[i].first;
        }
        std::size_t best = 0;
        for (std::size_t y = 1; y < classes; ++y) {
            if (votes[y] > votes[best] ||
                (votes[y] == votes[best] && summed[y] < summed[best]))
                best = y;
        }
        out[qi] = static_cast<int>(best);
    }
    return out;
}

LinearMarginModel linear_margin_fit(const Matrix& rows, std::span<const int> labels,
                                    std::size_t classes, double lambda, std::size_t epochs,
                                    std::uint64_t seed) {
    const std::size_t n = rows.rows();
    const std::size_t d = rows.cols();
    if (n == 0) fail("data", "linear_margin_fit: empty training set");
    if (!(lambda > 0.0)) fail("config", "linear_margin_fit: lambda must be > 0");
    {
        bool mixed = false;
        for (std::size_t i = 1; i < n && !mixed; ++i) mixed = labels[i] != labels[0];
        if (!mixed) fail("data", "linear_margin_fit: training set holds a single class");
    }

    LinearMarginModel model;
    model.lambda = lambda;
    model.weights = Matrix(classes, d + 1);

    for (std::size_t y = 0; y < classes; ++y) {
        SplitMix64 rng = SplitMix64::keyed(seed, 0xC1A55ull + y);
        std::vector<double> w(d + 1, 0.0);
        std::size_t step = 0;
        const std::size_t total_steps = epochs * n;
        while (step < total_steps) {
            ++step;
            const std::size_t i = static_cast<std::size_t>(rng.below(n));
            const double target = labels[i] == static_cast<int>(y) ? 1.0 : -1.0;
            const double eta = 1.0 / (lambda * static_cast<double>(step));
            const double* x = rows.row(i);
            double score = w[d]; // bias times implicit 1
            for (std::size_t j = 0; j < d; ++j) score += w[j] * x[j];

            const double shrink = 1.0 - eta * lambda; // = 1 - 1/step
            for (double& wj : w) wj *= shrink;
            if (target * score < 1.0) {
                for (std::size_t j = 0; j < d; ++j) w[j] += eta * target * x[j];
                w[d] += eta * target;
            }
        }
        for (std::size_t j = 0; j <= d; ++j) model.weights(y, j) = w[j];
    }
    return model;
}

std::vector<int> linear_margin_predict(const LinearMarginModel& model, const Matrix& queries) {
    const std::size_t d = model.weights.cols() - 1;
    if (queries.cols() != d)
        fail("data", "linear_margin_predict: query width " + std::to_string(queries.cols()) +
                         " does not match model width " + std::to_string(d));
    std::vector<int> out(queries.rows());
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const double* x = queries.row(i);
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < model.weights.rows(); ++y) {
            double score = model.weights(y, d);
            for (std::size_t j = 0; j < d; ++j) score += model.weights(y, j) * x[j];
            if (score > best_score) { // ties keep the lower class index
                best_score = score;
                best = y;
            }
        }
        out[i] = static_cast<int>(best);
    }
    return out;
}

double hinge_objective(const LinearMarginModel& model, const Matrix& rows,
                       std::span<const int> labels) {
    const std::size_t d = model.weights.cols() - 1;
    double total = 0.0;
    for (std::size_t y = 0; y < model.weights.rows(); ++y) {
        double reg = 0.0;
        for (std::size_t j = 0; j <= d; ++j) reg += model.weights(y, j) * model.weights(y, j);
        double hinge = 0.0;
        for (std::size_t i = 0; i < rows.rows(); ++i) {
            const double target = labels[i] == static_cast<int>(y) ? 1.0 : -1.0;
            const double* x = rows.row(i);
            double score = model.weights(y, d);
            for (std::size_t j = 0; j < d; ++j) score += model.weights(y, j) * x[j];
            hinge += std::max(0.0, 1.0 - target * score);
        }
        total += 0.5 * model.lambda * reg + hinge / static_cast<double>(rows.rows());
    }
    return total;
}

std::string ClassifierConfig::str() const {
    if (kind == Kind::Knn)
        return "knn(K=" + std::to_string(K) + "," + metric_name(metric) + ")";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lambda);
    return std::string("linear(lambda=") + buf + ")";
}

Grid Grid::knn_only() {
    Grid g;
    for (std::size_t K : {1, 3, 5, 7, 11, 15, 21})
        for (Metric metric : {Metric::Euclidean, Metric::Cityblock})
            g.candidates.push_back({ClassifierConfig::Kind::Knn, K, metric, 1.0});
    return g;
}

Grid Grid::linear_only() {
    Grid g;
    for (double lambda : {1e2, 1e1, 1e0, 1e-1, 1e-2, 1e-3, 1e-4})
        g.candidates.push_back({ClassifierConfig::Kind::LinearMargin, 1, Metric::Euclidean, lambda});
    return g;
}

Grid Grid::standard() {
    Grid g = knn_only();
    const Grid lin = linear_only();
    g.candidates.insert(g.candidates.end(), lin.candidates.begin(), lin.candidates.end());
    return g;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels,
                                                       std::size_t classes, std::size_t folds,
                                                       std::uint64_t seed) {
    if (folds < 2) fail("config", "cross-validation needs at least 2 folds");
    std::vector<std::vector<std::size_t>> per_class(classes);
    for (std::size_t i = 0; i < labels.size(); ++i)
        per_class[static_cast<std::size_t>(labels[i])].push_back(i);

    std::vector<std::vector<std::size_t>> fold_indices(folds);
    for (std::size_t y = 0; y < classes; ++y) {
        if (per_class[y].size() < folds)
            fail("data", "class " + std::to_string(y) + " has " +
                             std::to_string(per_class[y].size()) + " member(s), fewer than " +
                             std::to_string(folds) + " folds");
        SplitMix64 rng = SplitMix64::keyed(seed, 0xF01D5ull + y);
        std::vector<std::size_t> order = per_class[y];
        rng.shuffle(order);
        for (std::size_t i = 0; i < order.size(); ++i) fold_indices[i % folds].push_back(order[i]);
    }
    for (auto& fold : fold_indices) std::sort(fold.begin(), fold.end());
    return fold_indices;
}

namespace {

std::vector<int> predict_with(const ClassifierConfig& config, const Matrix& train_rows,
                              std::span<const int> train_labels, std::size_t classes,
                              const Matrix& queries, std::size_t epochs, std::uint64_t seed) {
    if (config.kind == ClassifierConfig::Kind::Knn)
        return knn_predict(train_rows, train_labels, classes, queries, config.K, config.metric);
    const LinearMarginModel model =
        linear_margin_fit(train_rows, train_labels, classes, config.lambda, epochs, seed);
    return linear_margin_predict(model, queries);
}

double accuracy_of(std::span<const int> predicted, std::span<const int> truth) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

} // namespace

TuneResult cross_validate(const FeatureTable& train, const Grid& grid, std::size_t folds,
                          std::uint64_t seed, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    if (grid.candidates.empty()) fail("config", "cross_validate: empty grid");
    const auto fold_indices = stratified_folds(train.labels, train.classes, folds, seed);

    // per-fold train/validation tables, standardized with fold-train stats
    struct FoldData {
        Matrix train_rows, val_rows;
        std::vector<int> train_labels, val_labels;
    };
    std::vector<FoldData> fold_data(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<char> in_val(train.size(), 0);
        for (std::size_t idx : fold_indices[f]) in_val[idx] = 1;
        std::vector<std::size_t> tr, va;
        for (std::size_t i = 0; i < train.size(); ++i) (in_val[i] ? va : tr).push_back(i);

        Matrix tr_rows(tr.size(), train.rows.cols());
        Matrix va_rows(va.size(), train.rows.cols());
        FoldData& fd = fold_data[f];
        for (std::size_t i = 0; i < tr.size(); ++i) {
            for (std::size_t j = 0; j < train.rows.cols(); ++j) tr_rows(i, j) = train.rows(tr[i], j);
            fd.train_labels.push_back(train.labels[tr[i]]);
        }
        for (std::size_t i = 0; i < va.size(); ++i) {
            for (std::size_t j = 0; j < train.rows.cols(); ++j) va_rows(i, j) = train.rows(va[i], j);
            fd.val_labels.push_back(train.labels[va[i]]);
        }
        const ColumnStats st = column_stats(tr_rows);
        fd.train_rows = standardized(tr_rows, st);
        fd.val_rows = standardized(va_rows, st);
    }

    const std::size_t min_fold_train =
        std::min_element(fold_data.begin(), fold_data.end(), [](const auto& a, const auto& b) {
            return a.train_labels.size() < b.train_labels.size();
        })->train_labels.size();

    // flat (candidate, fold) task list; infeasible candidates (K too large
    // for a fold) score -1 and can never win
    const std::size_t nc = grid.candidates.size();
    std::vector<std::vector<double>> fold_acc(nc, std::vector<double>(folds, -1.0));
    std::vector<char> feasible(nc, 1);
    for (std::size_t ci = 0; ci < nc; ++ci)
        if (grid.candidates[ci].kind == ClassifierConfig::Kind::Knn &&
            grid.candidates[ci].K > min_fold_train)
            feasible[ci] = 0;

    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t ci = 0; ci < nc; ++ci) {
        if (!feasible[ci]) continue;
        for (std::size_t f = 0; f < folds; ++f) tasks.emplace_back(ci, f);
    }
    if (tasks.empty()) fail("config", "cross_validate: no feasible grid candidate");

    parallel_for(tasks.size(), jobs, [&](std::size_t ti) {
        const auto [ci, f] = tasks[ti];
        const FoldData& fd = fold_data[f];
        const std::vector<int> pred =
            predict_with(grid.candidates[ci], fd.train_rows, fd.train_labels, train.classes,
                         fd.val_rows, grid.epochs, SplitMix64::keyed(seed, ci * 1009 + f).next());
        fold_acc[ci][f] = accuracy_of(pred, fd.val_labels);
    });

    TuneResult result;
    result.grid_accuracies.assign(nc, -1.0);
    std::size_t best_ci = nc;
    for (std::size_t ci = 0; ci < nc; ++ci) {
        if (!feasible[ci]) continue;
        const double mean = std::accumulate(fold_acc[ci].begin(), fold_acc[ci].end(), 0.0) /
                            static_cast<double>(folds);
        result.grid_accuracies[ci] = mean;
        if (best_ci == nc || mean > result.grid_accuracies[best_ci]) best_ci = ci;
    }
    result.best = grid.candidates[best_ci];
    result.fold_accuracies = fold_acc[best_ci];
    result.validation_accuracy = result.grid_accuracies[best_ci];
    result.tuning_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

FittedModel fit(const FeatureTable& train, const ClassifierConfig& config, std::size_t epochs,
                std::uint64_t seed) {
    if (train.size() == 0) fail("data", "fit: empty training set");
    FittedModel model;
    model.config = config;
    model.classes = train.classes;
    model.stats = column_stats(train.rows);
    model.train_rows = standardized(train.rows, model.stats);
    model.train_labels = train.labels;
    if (config.kind == ClassifierConfig::Kind::LinearMargin)
        model.linear = linear_margin_fit(model.train_rows, model.train_labels, model.classes,
                                         config.lambda, epochs, SplitMix64::keyed(seed, 0xF17ull).next());
    return model;
}

EvalResult evaluate(const FittedModel& model, const FeatureTable& test) {
    if (test.size() == 0) fail("data", "evaluate: empty test set");
    if (test.rows.cols() != model.train_rows.cols())
        fail("data", "evaluate: test feature width " + std::to_string(test.rows.cols()) +
                         " does not match model width " + std::to_string(model.train_rows.cols()));

    const Matrix queries = standardized(test.rows, model.stats);
    const auto t0 = std::chrono::steady_clock::now();
    EvalResult result;
    result.predictions =
        model.config.kind == ClassifierConfig::Kind::Knn
            ? knn_predict(model.train_rows, model.train_labels, model.classes, queries,
                          model.config.K, model.config.metric)
            : linear_margin_predict(model.linear, queries);
    result.classification_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.total = test.size();
    for (std::size_t i = 0; i < test.size(); ++i)
        if (result.predictions[i] == test.labels[i]) ++result.correct;
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.total);
    return result;
}

} // namespace alt
