#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ot {

using cplx = std::complex<double>;
using RealVector = std::vector<double>;

/// Dense row-major matrix. Thin value type; shape checks throw DimensionError.
template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{});
    DenseMatrix(std::initializer_list<std::initializer_list<T>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const T> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> data() const noexcept { return data_; }
    std::span<T> data() noexcept { return data_; }

    DenseMatrix transpose() const;

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& operator*=(T s);

    /// max_ij |a_ij|
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;
    bool all_finite() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<cplx>;

template <typename T>
DenseMatrix<T> operator+(DenseMatrix<T> a, const DenseMatrix<T>& b) { return a += b; }
template <typename T>
DenseMatrix<T> operator-(DenseMatrix<T> a, const DenseMatrix<T>& b) { return a -= b; }
template <typename T>
DenseMatrix<T> operator*(T s, DenseMatrix<T> a) { return a *= s; }
inline ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s, 0.0); }

template <typename T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

template <typename T>
std::vector<T> operator*(const DenseMatrix<T>& a, std::span<const T> x);

inline RealVector operator*(const RealMatrix& a, const RealVector& x) {
    return a * std::span<const double>(x);
}

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix to_complex(const RealMatrix& a);
/// Entrywise |a_ij|^2.
RealMatrix abs_squared(const ComplexMatrix& a);

/// max_i |a_i - b_i|; throws DimensionError on length mismatch.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

extern template class DenseMatrix<double>;
extern template class DenseMatrix<cplx>;

}  // namespace ot
