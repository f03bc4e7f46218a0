#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kgcwalk {

// Dense 1-d array of doubles. Size is fixed at construction.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
    Vector(std::initializer_list<double> init) : v_(init) {}

    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    auto begin() { return v_.begin(); }
    auto end() { return v_.end(); }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    std::span<double> span() { return {v_.data(), v_.size()}; }
    std::span<const double> span() const { return {v_.data(), v_.size()}; }

    bool all_finite() const;

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> v_;
};

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {a_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {a_.data() + r * cols_, cols_}; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    std::span<double> span() { return {a_.data(), a_.size()}; }
    std::span<const double> span() const { return {a_.data(), a_.size()}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

// Numerically stable softmax (max subtraction, so the result is invariant
// under adding a constant to every score). Throws on empty input.
Vector softmax(const Vector& scores);

double dot(std::span<const double> a, std::span<const double> b);

// y = W x. Throws a shape error naming both shapes on mismatch.
Vector matvec(const Matrix& w, const Vector& x);

} // namespace kgcwalk
