#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace srk {

using Vector = std::vector<double>;

/// Small dense row-major matrix used for tableau coefficient blocks.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] const std::vector<double>& data() const { return data_; }

    /// Row sums, i.e. M·1.
    [[nodiscard]] Vector row_sums() const;
    [[nodiscard]] Vector apply(const Vector& v) const;
    [[nodiscard]] bool column_is_zero(std::size_t j) const;
    [[nodiscard]] bool is_zero() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
Vector hadamard(const Vector& a, const Vector& b);
Vector ones(std::size_t n);

}  // namespace srk
