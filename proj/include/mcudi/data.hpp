/// @file data.hpp
/// @brief CSV ingestion into time-period batches, and first-period scaling.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcudi/types.hpp"

namespace mcudi {

enum class PeriodGranularity { Day, Week, Month, RowCount };

std::string to_string(PeriodGranularity g);
PeriodGranularity granularity_from_string(const std::string& s);

/// Declares how a CSV maps onto feature/label/period structure.
struct DatasetSchema {
    std::vector<std::string> feature_columns;
    std::string label_column;   // empty -> unlabeled data
    std::string period_column;  // ISO date, ISO datetime, or integer epoch seconds
    PeriodGranularity granularity = PeriodGranularity::Day;
    std::size_t rows_per_period = 0;  // RowCount granularity only

    void validate() const;  // throws UsageError on inconsistency
};

/// One time-period slice of the data stream.
struct Batch {
    int period_id = 0;
    Matrix features;
    std::optional<std::vector<int>> labels;  // 1 = failure

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
    bool labeled() const { return labels.has_value(); }
};

bool has_both_classes(const std::vector<int>& labels);

/// Concatenates batches row-wise; the result takes `period_id` from the last batch.
Batch concat_batches(std::span<const Batch> batches);

struct IngestionReport {
    std::size_t rows_read = 0;     // data rows seen (header excluded)
    std::size_t rows_dropped = 0;  // unparseable / missing / non-finite values
    std::vector<std::string> period_keys;      // human-readable key per emitted batch
    std::vector<std::string> omitted_periods;  // calendar periods in range with zero rows
};

struct LoadResult {
    std::vector<Batch> batches;  // ordered, period_id = 0..n-1 with no gaps
    IngestionReport report;
};

/// Loads a CSV with a header row, groups rows into period batches per the
/// schema, and drops (with a count) rows whose feature, label, or period cell
/// fails to parse. Throws SchemaError when a schema column is missing from the
/// header and DataError when the file is absent, empty, or yields no rows.
LoadResult load_csv(const std::filesystem::path& path, const DatasetSchema& schema);

/// Per-feature standardization statistics fitted on one batch.
struct Scaler {
    std::vector<double> location;  // per-feature mean
    std::vector<double> scale;     // per-feature population sd; constant features get 1

    std::size_t dim() const { return location.size(); }
};

/// Fits mean/sd on a batch (population sd, i.e. divide by n). Requires n >= 2.
Scaler fit_scaler(const Batch& first_batch);

/// Applies x -> (x - location)/scale per feature. Labels and period_id pass through.
Batch apply_scaler(const Scaler& scaler, const Batch& batch);

/// Scales every batch with statistics fitted on the first one.
std::vector<Batch> scale_with_first_period(const std::vector<Batch>& batches);

// Calendar helpers (UTC, proleptic Gregorian). Exposed for tests.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

}  // namespace mcudi
