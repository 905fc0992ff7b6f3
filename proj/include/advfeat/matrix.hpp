#pragma once

#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"

namespace advfeat {

/// Dense row-major matrix of doubles. Thin container; algorithms live with
/// the modules that need them.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double& at(std::size_t r, std::size_t c) {
        if (r >= rows_ || c >= cols_) throw OutOfRange("matrix index out of range");
        return data_[r * cols_ + c];
    }
    double at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw OutOfRange("matrix index out of range");
        return data_[r * cols_ + c];
    }

    // Flat element access in row-major order.
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::size_t size() const { return data_.size(); }
    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Pointer to the start of row r.
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace advfeat
