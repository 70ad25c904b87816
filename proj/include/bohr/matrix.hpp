#pragma once

#include "bohr/backend.hpp"
#include "bohr/errors.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bohr {

/// Dense complex matrix over one of the numeric backends. Small by design:
/// the workloads are Hermitian operators with dim <= ~16, so there is no
/// blocking, no views, nothing clever. Values are immutable in practice
/// (every operation returns a fresh matrix).
template <class B>
class Matrix {
  public:
    using Complex = typename B::Complex;
    using Real = typename B::Real;

    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Complex(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Complex& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        require_same_shape(x, y);
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        require_same_shape(x, y);
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& x) {
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = -x.a_[k];
        return r;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw dimension_mismatch_error("matrix product shape mismatch");
        Matrix r(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const Complex& xik = x(i, k);
                if (B::complex_is_zero(xik)) continue;
                for (int j = 0; j < y.cols_; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }
    friend Matrix operator*(const Complex& c, const Matrix& x) {
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = c * x.a_[k];
        return r;
    }

    Matrix dagger() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t(0);
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest squared entry magnitude (exact Real in the rational backend).
    Real max_norm() const {
        Real m(0);
        for (const Complex& z : a_) {
            Real nz = norm(z);
            if (nz > m) m = nz;
        }
        return m;
    }

    bool is_square() const { return rows_ == cols_; }

    std::string str() const {
        std::ostringstream os;
        for (int i = 0; i < rows_; ++i) {
            os << (i ? "; " : "[");
            for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        }
        os << "]";
        return os.str();
    }

  private:
    static void require_same_shape(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw dimension_mismatch_error("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> a_;
};

/// Entrywise backend equality (exact, or max entry distance <= epsilon).
template <class B>
bool approx_eq(const Matrix<B>& x, const Matrix<B>& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (!B::complex_eq(x(i, j), y(i, j))) return false;
    return true;
}

template <class B>
bool is_zero(const Matrix<B>& x) {
    return approx_eq(x, Matrix<B>::zero(x.rows(), x.cols()));
}

template <class B>
bool is_hermitian(const Matrix<B>& x) {
    return x.is_square() && approx_eq(x, x.dagger());
}

template <class B>
void require_hermitian(const Matrix<B>& x, const char* what) {
    if (!x.is_square())
        throw invalid_operator_error(std::string(what) + ": matrix is not square");
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (!B::complex_eq(x(i, j), conj(x(j, i))))
                throw invalid_operator_error(std::string(what) + ": not Hermitian at entry (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
}

template <class B>
bool is_projection(const Matrix<B>& x) {
    return is_hermitian(x) && approx_eq(x * x, x);
}

template <class B>
void require_projection(const Matrix<B>& x, const char* what) {
    require_hermitian(x, what);
    if (!approx_eq(x * x, x))
        throw invalid_operator_error(std::string(what) + ": not idempotent");
}

template <class B>
bool commutes(const Matrix<B>& x, const Matrix<B>& y) {
    return approx_eq(x * y, y * x);
}

namespace detail {

/// In-place row reduction to reduced row echelon form. Pivots are chosen by
/// largest squared magnitude in the column; an entry counts as zero when its
/// squared magnitude is at most zero_norm (exact zero for the rational
/// backend). Returns the pivot columns.
template <class B>
std::vector<int> rref_in_place(Matrix<B>& m, const typename B::Real& zero_norm) {
    using Complex = typename B::Complex;
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int best = -1;
        typename B::Real best_norm(0);
        for (int i = row; i < m.rows(); ++i) {
            typename B::Real nz = norm(m(i, col));
            if (nz > zero_norm && (best < 0 || nz > best_norm)) {
                best = i;
                best_norm = nz;
            }
        }
        if (best < 0) continue;
        if (best != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
        Complex inv = Complex(1) / m(row, col);
        for (int j = 0; j < m.cols(); ++j) m(row, j) = inv * m(row, j);
        m(row, col) = Complex(1);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            Complex f = m(i, col);
            if (B::complex_is_zero(f)) {
                m(i, col) = Complex(0);
                continue;
            }
            for (int j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
            m(i, col) = Complex(0);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

template <class B>
typename B::Real rank_zero_norm(const Matrix<B>& m) {
    if constexpr (B::exact) {
        return typename B::Real(0);
    } else {
        double scale = std::max(1.0, m.max_norm());
        double eps = B::epsilon;
        return eps * eps * scale;
    }
}

} // namespace detail

template <class B>
int rank(Matrix<B> m) {
    auto zn = detail::rank_zero_norm(m);
    return int(detail::rref_in_place(m, zn).size());
}

/// Columns form a basis of the null space of m (empty matrix when trivial).
template <class B>
Matrix<B> kernel_basis(Matrix<B> m) {
    using Complex = typename B::Complex;
    const int n = m.cols();
    auto zn = detail::rank_zero_norm(m);
    std::vector<int> pivots = detail::rref_in_place(m, zn);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix<B> basis(n, int(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        basis(fc, int(k)) = Complex(1);
        for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], int(k)) = -m(int(r), fc);
    }
    return basis;
}

/// Solves a x = rhs for square invertible a (Gaussian elimination with
/// magnitude pivoting). Used only on Gram matrices, which are invertible
/// whenever the basis has full column rank.
template <class B>
Matrix<B> solve(Matrix<B> a, Matrix<B> rhs) {
    using Complex = typename B::Complex;
    const int n = a.rows();
    if (!a.is_square() || rhs.rows() != n) throw dimension_mismatch_error("solve: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int best = col;
        typename B::Real best_norm = norm(a(col, col));
        for (int i = col + 1; i < n; ++i) {
            typename B::Real nz = norm(a(i, col));
            if (nz > best_norm) {
                best = i;
                best_norm = nz;
            }
        }
        if constexpr (B::exact) {
            if (best_norm == 0) throw invariant_error("solve: singular matrix");
        } else {
            if (best_norm <= B::epsilon * B::epsilon)
                throw invariant_error("solve: singular matrix");
        }
        if (best != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            for (int j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(best, j));
        }
        Complex inv = Complex(1) / a(col, col);
        for (int j = 0; j < n; ++j) a(col, j) = inv * a(col, j);
        for (int j = 0; j < rhs.cols(); ++j) rhs(col, j) = inv * rhs(col, j);
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            Complex f = a(i, col);
            for (int j = 0; j < n; ++j) a(i, j) = a(i, j) - f * a(col, j);
            for (int j = 0; j < rhs.cols(); ++j) rhs(i, j) = rhs(i, j) - f * rhs(col, j);
        }
    }
    return rhs;
}

/// Orthogonal projection onto the column span of basis: P = C (C*C)^-1 C*.
template <class B>
Matrix<B> projection_onto_columns(const Matrix<B>& basis) {
    if (basis.cols() == 0) return Matrix<B>::zero(basis.rows(), basis.rows());
    Matrix<B> bd = basis.dagger();
    Matrix<B> gram = bd * basis;
    Matrix<B> x = solve(gram, bd);
    return basis * x;
}

} // namespace bohr
