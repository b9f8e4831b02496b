#include "mcudi/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "mcudi/data.hpp"
#include "mcudi/rng.hpp"

namespace mcudi {

double error_rate(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size())
        throw DataError("error_rate: length mismatch");
    if (predictions.empty()) throw DataError("error_rate: empty input");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        mismatches += predictions[i] != labels[i];
    return static_cast<double>(mismatches) / static_cast<double>(predictions.size());
}

double cross_val_error(const Matrix& features, const std::vector<int>& labels,
                       int folds, const ForestHyperparams& hp, std::uint64_t seed) {
    const std::size_t n = features.rows();
    if (n != labels.size()) throw DataError("cross_val_error: features/labels mismatch");
    if (folds < 2) throw DataError("cross_val_error: folds must be >= 2");
    if (n < static_cast<std::size_t>(folds))
        throw DataError("cross_val_error: need at least folds=" + std::to_string(folds) +
                        " rows, got " + std::to_string(n));
    if (!has_both_classes(labels))
        throw SingleClassError("cross_val_error: labels contain a single class");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(mix_seed(seed, 0));
    shuffle_rng.shuffle(order);

    const std::size_t base = n / static_cast<std::size_t>(folds);
    const std::size_t rem = n % static_cast<std::size_t>(folds);

    std::size_t mismatches = 0;
    std::size_t scored = 0;
    std::size_t start = 0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
        const std::size_t stop = start + size;

        Matrix train_x(n - size, features.cols());
        std::vector<int> train_y(n - size);
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= start && i < stop) continue;
            const std::size_t src = order[i];
            for (std::size_t j = 0; j < features.cols(); ++j)
                train_x(w, j) = features(src, j);
            train_y[w] = labels[src];
            ++w;
        }
        start = stop;
        if (!has_both_classes(train_y)) continue;  // fold skipped

        const ForestModel model =
            train_forest(train_x, train_y, hp, mix_seed(seed, static_cast<std::uint64_t>(f) + 1));
        Matrix test_x(size, features.cols());
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t src = order[stop - size + i];
            for (std::size_t j = 0; j < features.cols(); ++j)
                test_x(i, j) = features(src, j);
        }
        const auto preds = predict(model, test_x);
        for (std::size_t i = 0; i < size; ++i)
            mismatches += preds[i] != labels[order[stop - size + i]];
        scored += size;
    }
    if (scored == 0)
        throw SingleClassError("cross_val_error: every fold had a single-class training split");
    return static_cast<double>(mismatches) / static_cast<double>(scored);
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DataError("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    if (n == 0) throw DataError("roc_auc: empty input");

    std::size_t n_pos = 0;
    for (int v : labels) n_pos += v == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetricError("roc_auc: needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks: tied scores share the average of their 1-based rank range.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) rank_sum_pos += midrank;
        i = j;
    }
    const auto p = static_cast<double>(n_pos);
    const auto q = static_cast<double>(n_neg);
    return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);
}

}  // namespace mcudi
