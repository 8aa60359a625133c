#include "ot/matrix.hpp"

#include <cmath>

#include "ot/errors.hpp"

namespace ot {

namespace {

double magnitude(double v) { return std::abs(v); }
double magnitude(const cplx& v) { return std::abs(v); }
double squared(double v) { return v * v; }
double squared(const cplx& v) { return std::norm(v); }
bool finite(double v) { return std::isfinite(v); }
bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

template <typename T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols, T fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

template <typename T>
DenseMatrix<T>::DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::diagonal(std::span<const T> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator+=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator-=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
}

template <typename T>
double DenseMatrix<T>::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, magnitude(v));
    return m;
}

template <typename T>
double DenseMatrix<T>::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& v : data_) s += squared(v);
    return std::sqrt(s);
}

template <typename T>
bool DenseMatrix<T>::all_finite() const noexcept {
    for (const auto& v : data_)
        if (!finite(v)) return false;
    return true;
}

template <typename T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    DenseMatrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

template <typename T>
std::vector<T> operator*(const DenseMatrix<T>& a, std::span<const T> x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector product: length mismatch");
    std::vector<T> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

ComplexMatrix to_complex(const RealMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    return c;
}

RealMatrix abs_squared(const ComplexMatrix& a) {
    RealMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = std::norm(a(i, j));
    return r;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template class DenseMatrix<double>;
template class DenseMatrix<cplx>;
template RealMatrix operator*(const RealMatrix&, const RealMatrix&);
template ComplexMatrix operator*(const ComplexMatrix&, const ComplexMatrix&);
template RealVector operator*(const RealMatrix&, std::span<const double>);
template std::vector<cplx> operator*(const ComplexMatrix&, std::span<const cplx>);

}  // namespace ot
