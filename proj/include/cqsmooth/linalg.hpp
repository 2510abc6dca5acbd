#pragma once

// Minimal dense linear algebra. Operators here are (M-1)x(M-1) with M <= 64,
// so a plain row-major matrix with partially pivoted LU covers every need of
// the solver in both double and extended precision.

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cqsmooth/real.hpp"

namespace cqsmooth {

template <class Real>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Real value = Real(0))
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Real>& data() const { return data_; }

    std::vector<Real> apply(const std::vector<Real>& x) const {
        assert(x.size() == cols_);
        std::vector<Real> y(rows_, Real(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            Real s(0);
            const Real* row = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    Matrix multiply(const Matrix& other) const {
        assert(cols_ == other.rows_);
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Real a = (*this)(i, k);
                if (a == Real(0)) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
            }
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Real> data_;
};

template <class Real>
class LuFactorization {
public:
    explicit LuFactorization(Matrix<Real> a) : lu_(std::move(a)), piv_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (n != lu_.cols()) throw std::invalid_argument("LU requires a square matrix");
        for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t p = col;
            Real best = abs(lu_(col, col));
            for (std::size_t r = col + 1; r < n; ++r) {
                Real v = abs(lu_(r, col));
                if (v > best) { best = v; p = r; }
            }
            if (best == Real(0)) throw std::runtime_error("singular matrix in LU factorization");
            if (p != col) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(col, j));
                std::swap(piv_[p], piv_[col]);
            }
            const Real pivot = lu_(col, col);
            for (std::size_t r = col + 1; r < n; ++r) {
                const Real factor = lu_(r, col) / pivot;
                lu_(r, col) = factor;
                if (factor == Real(0)) continue;
                for (std::size_t j = col + 1; j < n; ++j) lu_(r, j) -= factor * lu_(col, j);
            }
        }
    }

    std::vector<Real> solve(const std::vector<Real>& b) const {
        const std::size_t n = lu_.rows();
        if (b.size() != n) throw std::invalid_argument("LU solve: dimension mismatch");
        std::vector<Real> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (std::size_t i = 1; i < n; ++i) {
            Real s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Real s = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
            x[ii] = s / lu_(ii, ii);
        }
        return x;
    }

private:
    Matrix<Real> lu_;
    std::vector<std::size_t> piv_;
};

template <class Real>
void axpy(const Real& a, const std::vector<Real>& x, std::vector<Real>& y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace cqsmooth
