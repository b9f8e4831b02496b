/// @file types.hpp
/// @brief Error hierarchy and the dense row-major matrix used across the library.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcudi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad invocation: unknown flags, malformed config files, invalid option values.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Input data does not match the declared schema (missing columns, etc).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Numeric or structural precondition violated by the data itself.
class DataError : public Error {
public:
    using Error::Error;
};

/// A labeled dataset contains samples from only one class.
class SingleClassError : public DataError {
public:
    using DataError::DataError;
};

/// A metric is undefined for the given inputs (e.g. ROC AUC with one class).
class UndefinedMetricError : public DataError {
public:
    using DataError::DataError;
};

/// Dense row-major matrix of doubles. Rows are samples, columns are features.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
        return out;
    }

    void push_row(std::span<const double> values) {
        if (rows_ == 0 && cols_ == 0) cols_ = values.size();
        if (values.size() != cols_) throw DataError("push_row: width mismatch");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace mcudi
