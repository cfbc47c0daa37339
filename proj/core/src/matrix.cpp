#include "srk/matrix.hpp"

#include "srk/errors.hpp"

namespace srk {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw PreconditionError("Matrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Vector Matrix::row_sums() const {
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out[i] += (*this)(i, j);
        }
    }
    return out;
}

Vector Matrix::apply(const Vector& v) const {
    if (v.size() != cols_) {
        throw PreconditionError("Matrix::apply: dimension mismatch");
    }
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out[i] += (*this)(i, j) * v[j];
        }
    }
    return out;
}

bool Matrix::column_is_zero(std::size_t j) const {
    for (std::size_t i = 0; i < rows_; ++i) {
        if ((*this)(i, j) != 0.0) {
            return false;
        }
    }
    return true;
}

bool Matrix::is_zero() const {
    for (double v : data_) {
        if (v != 0.0) {
            return false;
        }
    }
    return true;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw PreconditionError("dot: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Vector hadamard(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw PreconditionError("hadamard: dimension mismatch");
    }
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

Vector ones(std::size_t n) { return Vector(n, 1.0); }

}  // namespace srk
