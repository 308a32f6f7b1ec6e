#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "catcoh/base.hpp"

namespace catcoh {

using Int = mpz_class;

/// Coefficient ring: the integers or a prime field.
struct Ring {
  enum class Tag { ZZ, Fp };
  Tag tag = Tag::ZZ;
  long p = 0;

  static Ring zz() { return Ring{Tag::ZZ, 0}; }
  static Ring fp(long p) {
    if (p < 2) throw Error("fp: modulus must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) throw Error("fp: modulus " + std::to_string(p) + " is not prime");
    return Ring{Tag::Fp, p};
  }
  [[nodiscard]] bool is_field() const { return tag == Tag::Fp; }
  bool operator==(const Ring& o) const { return tag == o.tag && p == o.p; }
  bool operator!=(const Ring& o) const { return !(*this == o); }
  [[nodiscard]] std::string str() const { return tag == Tag::ZZ ? "zz" : "fp:" + std::to_string(p); }
};

/// Dense matrix over arbitrary-precision integers. Row-major.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const Int& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw Error("Mat: product shape mismatch");
    Mat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& aik = (*this)(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          if (o(k, j) == 0) continue;
          mpz_addmul(r(i, j).get_mpz_t(), aik.get_mpz_t(), o(k, j).get_mpz_t());
        }
      }
    return r;
  }
  Mat operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("Mat: sum shape mismatch");
    Mat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("Mat: difference shape mismatch");
    Mat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }
  Mat operator-() const {
    Mat r = *this;
    for (auto& x : r.a_) x = -x;
    return r;
  }

  /// this[i0.., j0..] += sign * B  (block accumulate)
  void add_block(std::size_t i0, std::size_t j0, const Mat& b, int sign = 1) {
    if (i0 + b.rows_ > rows_ || j0 + b.cols_ > cols_) throw Error("Mat: block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sign > 0)
          (*this)(i0 + i, j0 + j) += b(i, j);
        else
          (*this)(i0 + i, j0 + j) -= b(i, j);
      }
  }

  [[nodiscard]] Mat transpose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  [[nodiscard]] Mat hcat(const Mat& o) const {
    if (rows_ != o.rows_) throw Error("Mat: hcat shape mismatch");
    Mat r(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
    }
    return r;
  }

  [[nodiscard]] std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? " " : "") + (*this)(i, j).get_str();
    }
    return s + "]";
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

inline Mat mat_mod(const Mat& m, long p) {
  Mat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int v = m(i, j) % p;
      if (v < 0) v += p;
      r(i, j) = v;
    }
  return r;
}

inline bool mat_is_zero(const Mat& m, const Ring& ring) {
  if (ring.tag == Ring::Tag::ZZ) return m.is_zero();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) % ring.p != 0) return false;
  return true;
}

inline bool mat_eq(const Mat& a, const Mat& b, const Ring& ring) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return mat_is_zero(a - b, ring);
}

/// Dense matrix over a prime field, entries reduced to [0, p).
struct FpMat {
  long p = 2;
  std::size_t rows = 0, cols = 0;
  std::vector<long> a;

  FpMat() = default;
  FpMat(long p, std::size_t r, std::size_t c) : p(p), rows(r), cols(c), a(r * c, 0) {}

  long& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  long operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static FpMat identity(long p, std::size_t n) {
    FpMat m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
};

inline FpMat fp_from(const Mat& m, long p) {
  FpMat r(p, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      long v = static_cast<long>(mpz_fdiv_ui(m(i, j).get_mpz_t(), static_cast<unsigned long>(p)));
      r(i, j) = v;
    }
  return r;
}

inline long fp_inv(long x, long p) {
  long t = 0, newt = 1, r = p, newr = ((x % p) + p) % p;
  while (newr != 0) {
    long q = r / newr;
    long tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  assert(r == 1);
  return ((t % p) + p) % p;
}

inline FpMat fp_mul(const FpMat& a, const FpMat& b) {
  assert(a.cols == b.rows && a.p == b.p);
  FpMat r(a.p, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      long aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) = (r(i, j) + aik * b(k, j)) % a.p;
    }
  return r;
}

inline FpMat fp_hcat(const FpMat& a, const FpMat& b) {
  assert(a.rows == b.rows && a.p == b.p);
  FpMat r(a.p, a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
  }
  return r;
}

namespace detail {
// In-place row echelon reduction; returns pivot columns. Destroys m.
inline std::vector<std::size_t> fp_echelon(FpMat& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != row)
      for (std::size_t j = col; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
    long inv = fp_inv(m(row, col), m.p);
    for (std::size_t j = col; j < m.cols; ++j) m(row, j) = (m(row, j) * inv) % m.p;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      long f = m(i, col);
      if (f == 0) continue;
      for (std::size_t j = col; j < m.cols; ++j) m(i, j) = ((m(i, j) - f * m(row, j)) % m.p + m.p) % m.p;
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}
}  // namespace detail

inline std::size_t fp_rank(FpMat m) { return detail::fp_echelon(m).size(); }

inline std::size_t fp_rank(const Mat& m, long p) { return fp_rank(fp_from(m, p)); }

/// Basis of the right kernel, returned as columns.
inline FpMat fp_kernel(FpMat m) {
  std::size_t n = m.cols;
  auto pivots = detail::fp_echelon(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  FpMat k(m.p, n, n - pivots.size());
  std::size_t col = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    k(free, col) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      // row r of the echelon form: x_{pivots[r]} = -sum over free columns
      long v = m(r, free);
      if (v != 0) k(pivots[r], col) = m.p - v;
    }
    ++col;
  }
  return k;
}

/// Solve A X = B for any solution (free variables set to zero). Throws if inconsistent.
inline FpMat fp_solve(const FpMat& a, const FpMat& b) {
  assert(a.rows == b.rows && a.p == b.p);
  FpMat aug = fp_hcat(a, b);
  auto pivots = detail::fp_echelon(aug);
  FpMat x(a.p, a.cols, b.cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= a.cols) throw Error("fp_solve: inconsistent system");
    for (std::size_t j = 0; j < b.cols; ++j) x(pivots[r], j) = aug(r, a.cols + j);
  }
  return x;
}

/// Inverse of a square invertible matrix mod p.
inline FpMat fp_inverse(const FpMat& a) {
  assert(a.rows == a.cols);
  FpMat x = fp_solve(a, FpMat::identity(a.p, a.rows));
  if (fp_rank(a) != a.rows) throw Error("fp_inverse: singular matrix");
  return x;
}

}  // namespace catcoh
