#include "mcudi/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mcudi {

std::string to_string(PeriodGranularity g) {
    switch (g) {
        case PeriodGranularity::Day: return "day";
        case PeriodGranularity::Week: return "week";
        case PeriodGranularity::Month: return "month";
        case PeriodGranularity::RowCount: return "row-count";
    }
    return "day";
}

PeriodGranularity granularity_from_string(const std::string& s) {
    if (s == "day") return PeriodGranularity::Day;
    if (s == "week") return PeriodGranularity::Week;
    if (s == "month") return PeriodGranularity::Month;
    if (s == "row-count" || s == "rows") return PeriodGranularity::RowCount;
    throw UsageError("unknown period granularity: " + s);
}

void DatasetSchema::validate() const {
    if (feature_columns.empty())
        throw UsageError("schema: feature_columns must be non-empty");
    std::vector<std::string> sorted = feature_columns;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw UsageError("schema: feature_columns must be distinct");
    if (!label_column.empty() &&
        std::find(feature_columns.begin(), feature_columns.end(), label_column) !=
            feature_columns.end())
        throw UsageError("schema: label_column must not be a feature column");
    if (granularity == PeriodGranularity::RowCount) {
        if (rows_per_period == 0)
            throw UsageError("schema: rows_per_period required for row-count granularity");
    } else if (period_column.empty()) {
        throw UsageError("schema: period_column required for calendar granularity");
    }
}

bool has_both_classes(const std::vector<int>& labels) {
    bool saw0 = false, saw1 = false;
    for (int v : labels) {
        if (v == 0) saw0 = true;
        else saw1 = true;
        if (saw0 && saw1) return true;
    }
    return false;
}

Batch concat_batches(std::span<const Batch> batches) {
    if (batches.empty()) throw DataError("concat_batches: no batches");
    Batch out;
    out.period_id = batches.back().period_id;
    const bool labeled = batches.front().labeled();
    if (labeled) out.labels.emplace();
    for (const Batch& b : batches) {
        if (b.dim() != batches.front().dim())
            throw DataError("concat_batches: dimension mismatch");
        for (std::size_t r = 0; r < b.size(); ++r) out.features.push_row(b.features.row(r));
        if (labeled) {
            if (!b.labeled()) throw DataError("concat_batches: mixed labeled/unlabeled");
            out.labels->insert(out.labels->end(), b.labels->begin(), b.labels->end());
        }
    }
    return out;
}

// --- calendar -----------------------------------------------------------

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const auto y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp < 10 ? mp + 3 : mp - 9;
    year = static_cast<int>(y + (month <= 2));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Accepts "YYYY-MM-DD" (optionally followed by a time suffix) or integer
// epoch seconds; yields days since 1970-01-01 UTC.
bool parse_period_days(const std::string& cell, std::int64_t& days) {
    std::int64_t secs = 0;
    if (parse_int64(cell, secs)) {
        days = floor_div(secs, 86400);
        return true;
    }
    if (cell.size() < 10 || cell[4] != '-' || cell[7] != '-') return false;
    int y;
    std::int64_t m, d;
    std::int64_t yy;
    if (!parse_int64(cell.substr(0, 4), yy) || !parse_int64(cell.substr(5, 2), m) ||
        !parse_int64(cell.substr(8, 2), d))
        return false;
    y = static_cast<int>(yy);
    if (m < 1 || m > 12 || d < 1 || d > 31) return false;
    days = days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
    return true;
}

// Monday-start week truncation: maps a day to the day count of its Monday.
std::int64_t week_start(std::int64_t days) {
    // 1970-01-01 was a Thursday; (days + 3) mod 7 == 0 on Mondays.
    const std::int64_t offset = ((days + 3) % 7 + 7) % 7;
    return days - offset;
}

std::string format_date(std::int64_t days) {
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

std::string format_period_key(std::int64_t key, PeriodGranularity g) {
    switch (g) {
        case PeriodGranularity::Day:
        case PeriodGranularity::Week:  // key = the week's Monday
            return format_date(key);
        case PeriodGranularity::Month: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%04lld-%02lld",
                          static_cast<long long>(floor_div(key, 12)),
                          static_cast<long long>(((key % 12) + 12) % 12 + 1));
            return buf;
        }
        case PeriodGranularity::RowCount: {
            return "rows:" + std::to_string(key);
        }
    }
    return std::to_string(key);
}

std::int64_t next_period_key(std::int64_t key, PeriodGranularity g) {
    switch (g) {
        case PeriodGranularity::Day: return key + 1;
        case PeriodGranularity::Week: return key + 7;
        default: return key + 1;
    }
}

}  // namespace

LoadResult load_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
    schema.validate();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path.string());

    std::string header_line;
    if (!std::getline(in, header_line)) throw DataError("empty CSV file: " + path.string());
    if (header_line.starts_with("\xEF\xBB\xBF")) header_line.erase(0, 3);  // UTF-8 BOM

    const auto header = split_line(header_line);
    auto column_index = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw SchemaError("CSV is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::vector<std::size_t> feature_idx;
    feature_idx.reserve(schema.feature_columns.size());
    for (const auto& name : schema.feature_columns) feature_idx.push_back(column_index(name));
    const bool labeled = !schema.label_column.empty();
    const std::size_t label_idx = labeled ? column_index(schema.label_column) : 0;
    const bool by_rows = schema.granularity == PeriodGranularity::RowCount;
    const std::size_t period_idx = by_rows ? 0 : column_index(schema.period_column);

    struct Row {
        std::vector<double> features;
        int label;
    };
    std::map<std::int64_t, std::vector<Row>> groups;

    LoadResult result;
    std::string line;
    const std::size_t d = feature_idx.size();
    std::size_t kept = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++result.report.rows_read;
        const auto cells = split_line(line);

        Row row;
        row.features.resize(d);
        bool ok = true;
        for (std::size_t j = 0; j < d && ok; ++j) {
            if (feature_idx[j] >= cells.size() ||
                !parse_double(cells[feature_idx[j]], row.features[j]))
                ok = false;
        }
        row.label = 0;
        if (ok && labeled) {
            double lv = 0.0;
            if (label_idx >= cells.size() || !parse_double(cells[label_idx], lv) ||
                (lv != 0.0 && lv != 1.0))
                ok = false;
            else
                row.label = static_cast<int>(lv);
        }
        std::int64_t key = 0;
        if (ok) {
            if (by_rows) {
                key = static_cast<std::int64_t>(kept / schema.rows_per_period);
            } else {
                std::int64_t days = 0;
                if (period_idx >= cells.size() || !parse_period_days(cells[period_idx], days)) {
                    ok = false;
                } else {
                    switch (schema.granularity) {
                        case PeriodGranularity::Day: key = days; break;
                        case PeriodGranularity::Week: key = week_start(days); break;
                        case PeriodGranularity::Month: {
                            int y;
                            unsigned m, dd;
                            civil_from_days(days, y, m, dd);
                            key = static_cast<std::int64_t>(y) * 12 + (m - 1);
                            break;
                        }
                        default: break;
                    }
                }
            }
        }
        if (!ok) {
            ++result.report.rows_dropped;
            continue;
        }
        ++kept;
        groups[key].push_back(std::move(row));
    }
    if (groups.empty()) throw DataError("CSV contains no usable data rows: " + path.string());

    // Calendar gaps between the first and last populated period are recorded,
    // then periods are re-indexed consecutively.
    if (!by_rows) {
        const std::int64_t lo = groups.begin()->first;
        const std::int64_t hi = groups.rbegin()->first;
        for (std::int64_t k = lo; k < hi; k = next_period_key(k, schema.granularity)) {
            if (!groups.contains(k))
                result.report.omitted_periods.push_back(
                    format_period_key(k, schema.granularity));
        }
    }

    int period_id = 0;
    for (const auto& [key, rows] : groups) {
        Batch b;
        b.period_id = period_id++;
        b.features = Matrix(rows.size(), d);
        if (labeled) b.labels.emplace(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t j = 0; j < d; ++j) b.features(r, j) = rows[r].features[j];
            if (labeled) (*b.labels)[r] = rows[r].label;
        }
        result.report.period_keys.push_back(format_period_key(key, schema.granularity));
        result.batches.push_back(std::move(b));
    }
    return result;
}

Scaler fit_scaler(const Batch& first_batch) {
    const std::size_t n = first_batch.size();
    const std::size_t d = first_batch.dim();
    if (n < 2) throw DataError("fit_scaler: need at least 2 rows");

    Scaler s;
    s.location.resize(d);
    s.scale.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += first_batch.features(r, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = first_batch.features(r, j) - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        s.location[j] = mean;
        s.scale[j] = sd > 0.0 ? sd : 1.0;  // constant feature: center only
    }
    return s;
}

Batch apply_scaler(const Scaler& scaler, const Batch& batch) {
    if (batch.dim() != scaler.dim())
        throw DataError("apply_scaler: dimension mismatch");
    Batch out = batch;
    for (std::size_t r = 0; r < out.size(); ++r)
        for (std::size_t j = 0; j < out.dim(); ++j)
            out.features(r, j) = (batch.features(r, j) - scaler.location[j]) / scaler.scale[j];
    return out;
}

std::vector<Batch> scale_with_first_period(const std::vector<Batch>& batches) {
    if (batches.empty()) throw DataError("scale_with_first_period: no batches");
    const Scaler s = fit_scaler(batches.front());
    std::vector<Batch> out;
    out.reserve(batches.size());
    for (const Batch& b : batches) out.push_back(apply_scaler(s, b));
    return out;
}

}  // namespace mcudi
