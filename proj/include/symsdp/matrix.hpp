#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsdp/scalar.hpp"

namespace symsdp {

using Complex = std::complex<double>;

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Scalar> {
  static constexpr bool exact = true;
  static Scalar zero() { return Scalar(); }
  static Scalar one() { return Scalar(1); }
  static bool is_zero(const Scalar& x, double = 0) { return x.is_zero(); }
  static Scalar conj(const Scalar& x) { return x.conj(); }
  static double magnitude(const Scalar& x) { return std::abs(x.to_complex()); }
  static Scalar from_scalar(const Scalar& s) { return s; }
  static Complex to_complex(const Scalar& s) { return s.to_complex(); }
};

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0, 0}; }
  static Complex one() { return {1, 0}; }
  static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex from_scalar(const Scalar& s) { return s.to_complex(); }
  static Complex to_complex(const Complex& s) { return s; }
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : r_(r), c_(c), d_(r * c, FieldTraits<T>::zero()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = FieldTraits<T>::one();
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

  Matrix adjoint() const {
    Matrix m(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m(j, i) = FieldTraits<T>::conj((*this)(i, j));
    return m;
  }
  Matrix transpose() const {
    Matrix m(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix column(std::size_t j) const { return block(0, j, r_, 1); }

  bool is_zero(double tol = 0) const {
    return std::all_of(d_.begin(), d_.end(), [&](const T& x) { return FieldTraits<T>::is_zero(x, tol); });
  }
  bool is_hermitian(double tol = 0) const {
    if (r_ != c_) return false;
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!FieldTraits<T>::is_zero((*this)(i, j) - FieldTraits<T>::conj((*this)(j, i)), tol)) return false;
    return true;
  }
  double max_abs() const {
    double m = 0;
    for (const auto& x : d_) m = std::max(m, FieldTraits<T>::magnitude(x));
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : d_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (FieldTraits<T>::is_zero(x, 0)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) {
          const T& y = b(k, j);
          if (FieldTraits<T>::is_zero(y, 0)) continue;
          m(i, j) += x * y;
        }
      }
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  const std::vector<T>& data() const { return d_; }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix dimension mismatch");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

using ExactMatrix = Matrix<Scalar>;
using ComplexMatrix = Matrix<Complex>;

template <class U, class T>
Matrix<U> convert(const Matrix<T>& m) {
  Matrix<U> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, U>) r(i, j) = m(i, j);
      else r(i, j) = FieldTraits<T>::to_complex(m(i, j));
    }
  return r;
}

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return m;
}

template <class T>
Matrix<T> direct_sum(const std::vector<Matrix<T>>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix<T> m(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    m.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return m;
}

template <class T>
T trace(const Matrix<T>& m) {
  T t = FieldTraits<T>::zero();
  for (std::size_t k = 0; k < std::min(m.rows(), m.cols()); ++k) t += m(k, k);
  return t;
}

// tr(A B) without forming the product.
template <class T>
T trace_product(const Matrix<T>& a, const Matrix<T>& b) {
  T t = FieldTraits<T>::zero();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (FieldTraits<T>::is_zero(a(i, j), 0)) continue;
      t += a(i, j) * b(j, i);
    }
  return t;
}

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
struct Echelon {
  Matrix<T> reduced;             // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

// Gauss-Jordan elimination.  Exact arithmetic pivots on the first nonzero
// entry of each column; floating point uses partial pivoting and treats
// entries below tol * max|a_ij| as zero.
template <class T>
Echelon<T> rref(Matrix<T> a, double tol = 1e-10) {
  using F = FieldTraits<T>;
  const double thr = F::exact ? 0 : tol * std::max(1.0, a.max_abs());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = a.rows();
    if constexpr (F::exact) {
      for (std::size_t r = row; r < a.rows(); ++r)
        if (!F::is_zero(a(r, col))) {
          piv = r;
          break;
        }
    } else {
      double best = thr;
      for (std::size_t r = row; r < a.rows(); ++r) {
        double m = F::magnitude(a(r, col));
        if (m > best) {
          best = m;
          piv = r;
        }
      }
    }
    if (piv == a.rows()) {
      if constexpr (!F::exact)
        for (std::size_t r = row; r < a.rows(); ++r) a(r, col) = F::zero();
      continue;
    }
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    T inv = F::one() / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || F::is_zero(a(r, col), 0)) continue;
      T f = a(r, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        if (!F::is_zero(a(row, j), 0)) a(r, j) -= f * a(row, j);
      if constexpr (!F::exact) a(r, col) = F::zero();
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& a, double tol = 1e-10) {
  return rref(a, tol).pivots.size();
}

// Columns spanning the right kernel.
template <class T>
Matrix<T> kernel(const Matrix<T>& a, double tol = 1e-10) {
  using F = FieldTraits<T>;
  auto e = rref(a, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix<T> k(a.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = F::one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = -e.reduced(r, free[f]);
  }
  return k;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix<T>::identity(n));
  auto e = rref(aug, tol);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw SingularMatrix("matrix is singular");
  return e.reduced.block(0, n, n, n);
}

// Solves A X = B; throws when inconsistent.  Free variables are set to zero.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b, double tol = 1e-10) {
  using F = FieldTraits<T>;
  Matrix<T> aug(a.rows(), a.cols() + b.cols());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  auto e = rref(aug, tol);
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) throw SingularMatrix("linear system is inconsistent");
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  }
  for (std::size_t r = e.pivots.size(); r < e.reduced.rows(); ++r)
    for (std::size_t j = a.cols(); j < aug.cols(); ++j)
      if (!F::is_zero(e.reduced(r, j), tol)) throw SingularMatrix("linear system is inconsistent");
  return x;
}

template <class T>
T determinant(Matrix<T> a) {
  using F = FieldTraits<T>;
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  std::size_t n = a.rows();
  T det = F::one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r)
      if (!F::is_zero(a(r, c), 0)) {
        piv = r;
        break;
      }
    if (piv == n) return F::zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    T inv = F::one() / a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (F::is_zero(a(r, c), 0)) continue;
      T f = a(r, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

template <class T>
std::string to_string(const Matrix<T>& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      if constexpr (std::is_same_v<T, Scalar>) s += m(i, j).str();
      else {
        auto z = FieldTraits<T>::to_complex(m(i, j));
        s += std::to_string(z.real());
        if (z.imag() != 0) s += (z.imag() < 0 ? "-" : "+") + std::to_string(std::abs(z.imag())) + "i";
      }
    }
    s += "]\n";
  }
  return s;
}

}  // namespace symsdp
