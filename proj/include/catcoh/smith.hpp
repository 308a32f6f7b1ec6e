#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

#include "catcoh/matrix.hpp"

namespace catcoh {

struct SmithResult {
  Mat u, s, v;  // u * m * v = s, u and v unimodular, s diagonal with divisibility chain
  std::size_t rank = 0;
};

namespace detail {

// row_i -= q * row_t, applied to s (and u when tracking)
inline void row_axpy(Mat& m, std::size_t i, std::size_t t, const Int& q) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    mpz_submul(m(i, j).get_mpz_t(), q.get_mpz_t(), m(t, j).get_mpz_t());
}
inline void col_axpy(Mat& m, std::size_t j, std::size_t t, const Int& q) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    mpz_submul(m(i, j).get_mpz_t(), q.get_mpz_t(), m(i, t).get_mpz_t());
}
inline void row_swap(Mat& m, std::size_t i, std::size_t t) {
  if (i == t) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(i, j), m(t, j));
}
inline void col_swap(Mat& m, std::size_t j, std::size_t t) {
  if (j == t) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, j), m(i, t));
}
inline void row_add(Mat& m, std::size_t dst, std::size_t src) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += m(src, j);
}

// Core reduction. When track is false, u and v are left untouched.
inline void smith_reduce(Mat& s, Mat* u, Mat* v) {
  const std::size_t r = s.rows(), c = s.cols();
  const std::size_t steps = std::min(r, c);
  for (std::size_t t = 0; t < steps; ++t) {
    // pivot: minimal absolute value nonzero entry in the remaining block
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        if (s(i, j) == 0) continue;
        if (!piv || mpz_cmpabs(s(i, j).get_mpz_t(), s(piv->first, piv->second).get_mpz_t()) < 0)
          piv = {{i, j}};
      }
    if (!piv) break;
    row_swap(s, piv->first, t);
    if (u) row_swap(*u, piv->first, t);
    col_swap(s, piv->second, t);
    if (v) col_swap(*v, piv->second, t);

    Int q;
    for (;;) {
      // clear column t below the pivot
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t i = t + 1; i < r; ++i) {
          if (s(i, t) == 0) continue;
          mpz_tdiv_q(q.get_mpz_t(), s(i, t).get_mpz_t(), s(t, t).get_mpz_t());
          if (q != 0) {
            row_axpy(s, i, t, q);
            if (u) row_axpy(*u, i, t, q);
          }
          if (s(i, t) != 0) {  // remainder strictly smaller; promote it
            row_swap(s, i, t);
            if (u) row_swap(*u, i, t);
            moved = true;
          }
        }
      }
      // clear row t right of the pivot (does not disturb column t, already zero below)
      moved = true;
      bool col_dirty = false;
      while (moved) {
        moved = false;
        for (std::size_t j = t + 1; j < c; ++j) {
          if (s(t, j) == 0) continue;
          mpz_tdiv_q(q.get_mpz_t(), s(t, j).get_mpz_t(), s(t, t).get_mpz_t());
          if (q != 0) {
            col_axpy(s, j, t, q);
            if (v) col_axpy(*v, j, t, q);
          }
          if (s(t, j) != 0) {
            col_swap(s, j, t);
            if (v) col_swap(*v, j, t);
            moved = true;
            col_dirty = true;  // swapped-in column may be nonzero below the pivot
          }
        }
      }
      if (col_dirty) continue;
      // enforce divisibility of the whole remaining block by the pivot
      bool stirred = false;
      for (std::size_t i = t + 1; i < r && !stirred; ++i)
        for (std::size_t j = t + 1; j < c; ++j) {
          if (s(i, j) % s(t, t) != 0) {
            row_add(s, t, i);  // pivot column entry stays: s(i, t) == 0
            if (u) row_add(*u, t, i);
            stirred = true;
            break;
          }
        }
      if (!stirred) break;
    }
  }
  // make the diagonal non-negative
  for (std::size_t t = 0; t < steps; ++t) {
    if (s(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j) s(t, j) = -s(t, j);
      if (u)
        for (std::size_t j = 0; j < u->cols(); ++j) (*u)(t, j) = -(*u)(t, j);
    }
  }
}

}  // namespace detail

/// Full Smith normal form: u*m*v = s with u, v unimodular and s diagonal,
/// s(i,i) | s(i+1,i+1), diagonal non-negative.
inline SmithResult smith_normal_form(const Mat& m) {
  SmithResult res;
  res.s = m;
  res.u = Mat::identity(m.rows());
  res.v = Mat::identity(m.cols());
  detail::smith_reduce(res.s, &res.u, &res.v);
  const std::size_t steps = std::min(m.rows(), m.cols());
  for (std::size_t t = 0; t < steps; ++t)
    if (res.s(t, t) != 0) ++res.rank;
  return res;
}

/// Diagonal of the Smith form only (no transform tracking); zeros included.
inline std::vector<Int> smith_diagonal(Mat m) {
  detail::smith_reduce(m, nullptr, nullptr);
  std::vector<Int> d;
  const std::size_t steps = std::min(m.rows(), m.cols());
  d.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) d.push_back(m(t, t));
  return d;
}

inline std::size_t rank_zz(const Mat& m) {
  auto d = smith_diagonal(m);
  std::size_t r = 0;
  for (const auto& x : d)
    if (x != 0) ++r;
  return r;
}

/// Basis of the integer kernel of m, returned as columns (a direct summand of Z^cols).
inline Mat zz_kernel(const Mat& m) {
  SmithResult sr = smith_normal_form(m);
  std::size_t n = m.cols();
  Mat k(n, n - sr.rank);
  for (std::size_t j = sr.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - sr.rank) = sr.v(i, j);
  return k;
}

/// Solve a X = b over the integers; throws if no integral solution exists.
inline Mat zz_solve(const Mat& a, const Mat& b) {
  assert(a.rows() == b.rows());
  SmithResult sr = smith_normal_form(a);
  Mat ub = sr.u * b;
  Mat y(a.cols(), b.cols());
  const std::size_t steps = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < ub.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (i < steps && sr.s(i, i) != 0) {
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ub(i, j).get_mpz_t(), sr.s(i, i).get_mpz_t());
        if (r != 0) throw Error("zz_solve: no integral solution");
        y(i, j) = q;
      } else if (ub(i, j) != 0) {
        throw Error("zz_solve: no integral solution");
      }
    }
  return sr.v * y;
}

/// |det| == 1 test, i.e. invertibility over the integers.
inline bool zz_invertible(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  for (const auto& d : smith_diagonal(m))
    if (d != 1) return false;
  return true;
}

inline bool ring_invertible(const Mat& m, const Ring& ring) {
  if (m.rows() != m.cols()) return false;
  if (ring.tag == Ring::Tag::ZZ) return zz_invertible(m);
  return fp_rank(m, ring.p) == m.rows();
}

}  // namespace catcoh
