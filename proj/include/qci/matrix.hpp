#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qci/cyclotomic.hpp"
#include "qci/primefield.hpp"

namespace qci {

// field-element glue shared by Cyclotomic, Fp and Fp2
inline bool fe_is_zero(const Cyclotomic& x) { return x.is_zero(); }
inline bool fe_is_zero(const Fp& x) { return x.is_zero(); }
inline bool fe_is_zero(const Fp2& x) { return x.is_zero(); }
inline Cyclotomic fe_zero(const Cyclotomic& like) { return Cyclotomic(like.order()); }
inline Fp fe_zero(const Fp& like) { return Fp(0, like.p); }
inline Fp2 fe_zero(const Fp2& like) { return Fp2(Fp(0, like.p()), Fp(0, like.p()), like.nr); }
inline Cyclotomic fe_one(const Cyclotomic& like) { return Cyclotomic(like.order(), Rational(1)); }
inline Fp fe_one(const Fp& like) { return Fp(1, like.p); }
inline Fp2 fe_one(const Fp2& like) { return Fp2(Fp(1, like.p()), Fp(0, like.p()), like.nr); }
inline Cyclotomic fe_inv(const Cyclotomic& x) { return x.inverse(); }
inline Fp fe_inv(const Fp& x) { return x.inverse(); }
inline Fp2 fe_inv(const Fp2& x) { return x.inverse(); }

template <typename K>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols, const K& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(size_t n, const K& like) {
        Matrix m(n, n, fe_zero(like));
        for (size_t i = 0; i < n; ++i) m(i, i) = fe_one(like);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    K& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const K& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o);
        Matrix out = *this;
        for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = out.data_[i] + o.data_[i];
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        require_same_shape(o);
        Matrix out = *this;
        for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = out.data_[i] - o.data_[i];
        return out;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
        const K z = fe_zero(data_.empty() ? o.data_.at(0) : data_[0]);
        Matrix out(rows_, o.cols_, z);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t k = 0; k < cols_; ++k) {
                const K& a = (*this)(i, k);
                if (fe_is_zero(a)) continue;
                for (size_t j = 0; j < o.cols_; ++j) {
                    const K& b = o(k, j);
                    if (fe_is_zero(b)) continue;
                    out(i, j) = out(i, j) + a * b;
                }
            }
        }
        return out;
    }
    Matrix scaled(const K& s) const {
        Matrix out = *this;
        for (auto& x : out.data_) x = x * s;
        return out;
    }
    Matrix transpose() const {
        if (data_.empty()) return Matrix(cols_, rows_, K());
        Matrix out(cols_, rows_, fe_zero(data_[0]));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
        std::vector<K> out(rows_, fe_zero(data_.empty() ? v.at(0) : data_[0]));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (!fe_is_zero((*this)(i, j)) && !fe_is_zero(v[j]))
                    out[i] = out[i] + (*this)(i, j) * v[j];
        return out;
    }

    // in-place reduced row echelon form; returns pivot columns
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t row = 0;
        for (size_t col = 0; col < cols_ && row < rows_; ++col) {
            size_t sel = row;
            while (sel < rows_ && fe_is_zero((*this)(sel, col))) ++sel;
            if (sel == rows_) continue;
            if (sel != row)
                for (size_t j = 0; j < cols_; ++j) std::swap((*this)(sel, j), (*this)(row, j));
            K inv = fe_inv((*this)(row, col));
            for (size_t j = col; j < cols_; ++j) (*this)(row, j) = (*this)(row, j) * inv;
            for (size_t r = 0; r < rows_; ++r) {
                if (r == row || fe_is_zero((*this)(r, col))) continue;
                K f = (*this)(r, col);
                for (size_t j = col; j < cols_; ++j)
                    (*this)(r, j) = (*this)(r, j) - f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    size_t rank() const {
        Matrix tmp = *this;
        return tmp.rref().size();
    }

    // basis of the right null space, as columns stacked into a matrix (cols = nullity)
    Matrix kernel() const {
        Matrix tmp = *this;
        auto pivots = tmp.rref();
        const K z = fe_zero(data_.empty() ? K() : data_[0]);
        std::vector<bool> is_pivot(cols_, false);
        for (size_t c : pivots) is_pivot[c] = true;
        std::vector<size_t> free_cols;
        for (size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);
        Matrix out(cols_, free_cols.size(), z);
        for (size_t fi = 0; fi < free_cols.size(); ++fi) {
            size_t fc = free_cols[fi];
            out(fc, fi) = fe_one(z);
            for (size_t pi = 0; pi < pivots.size(); ++pi)
                out(pivots[pi], fi) = -tmp(pi, fc);
        }
        return out;
    }

    // basis of the column space: columns of the result, in reduced column
    // echelon form (deterministic canonical basis of the span)
    Matrix column_space() const {
        Matrix t = transpose();
        auto pivots = t.rref();
        const K z = fe_zero(data_.empty() ? K() : data_[0]);
        Matrix out(rows_, pivots.size(), z);
        for (size_t r = 0; r < pivots.size(); ++r)
            for (size_t c = 0; c < rows_; ++c) out(c, r) = t(r, c);
        return out;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        const K z = fe_zero(data_.at(0));
        Matrix aug(rows_, 2 * cols_, z);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_ + i) = fe_one(z);
        }
        auto pivots = aug.rref();
        if (pivots.size() != rows_ || pivots.back() >= cols_)
            throw std::domain_error("matrix is singular");
        Matrix out(rows_, cols_, z);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) out(i, j) = aug(i, cols_ + j);
        return out;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!fe_is_zero(x)) return false;
        return true;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    size_t rows_, cols_;
    std::vector<K> data_;
};

using CycMatrix = Matrix<Cyclotomic>;

inline size_t hash_matrix(const CycMatrix& m) {
    size_t h = hash_combine(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) h = hash_combine(h, m(i, j).hash());
    return h;
}

// true iff m = c*I for some scalar c; writes the scalar when asked
bool matrix_is_scalar(const CycMatrix& m, Cyclotomic* scalar_out = nullptr);

inline Cyclotomic matrix_trace(const CycMatrix& m) {
    Cyclotomic t(m.rows() ? m(0, 0).order() : 1);
    for (size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

}  // namespace qci
