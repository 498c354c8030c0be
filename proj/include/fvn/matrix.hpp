/*
 * Copyright 2026 The fvn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file matrix.hpp
 *
 * Exact matrix algebra for algebraic state-space forms: logical (delta)
 * matrices, Boolean matrices, transition counts and their exact stochastic
 * normalization, together with the semi-tensor product and the Boolean
 * semiring product.
 *
 * Conventions: all indices in the C++ API are 0-based. The canonical unit
 * vector delta_n^i of the mathematical notation is row i-1 here; helpers
 * named `*_delta` / `delta_indices` speak the 1-based dialect.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fvn/error.hpp"

namespace fvn {

using Index = std::size_t;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline Index checked_mul(Index a, Index b) {
  Index r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw DimensionError("matrix dimension overflow");
  return r;
}

}  // namespace detail

/// base^exp with overflow detection.
inline Index ipow(Index base, Index exp) {
  Index r = 1;
  for (Index i = 0; i < exp; ++i) r = detail::checked_mul(r, base);
  return r;
}

/// "num/den", always with an explicit denominator.
inline std::string to_fraction_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_fraction(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in fraction", s);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw ValidationError("malformed fraction '" + s + "'", s);
  }
}

// ---------------------------------------------------------------------------
// LogicalMatrix

/// A matrix whose every column is a canonical unit vector. Stored as the
/// row index of the single 1 in each column.
class LogicalMatrix {
 public:
  LogicalMatrix() = default;

  LogicalMatrix(Index rows, std::vector<Index> column_rows) : rows_(rows), col_(std::move(column_rows)) {
    if (rows_ == 0) throw DimensionError("logical matrix needs at least one row");
    for (Index j = 0; j < col_.size(); ++j) {
      if (col_[j] >= rows_)
        throw DimensionError("logical matrix column " + std::to_string(j + 1) + " points to row " +
                             std::to_string(col_[j] + 1) + " of " + std::to_string(rows_));
    }
  }

  /// Build delta_rows[i_1, ..., i_s] from 1-based indices.
  static LogicalMatrix from_delta(Index rows, std::span<const Index> one_based) {
    std::vector<Index> c;
    c.reserve(one_based.size());
    for (Index i : one_based) {
      if (i == 0) throw DimensionError("delta index 0 is invalid (indices are 1-based)");
      c.push_back(i - 1);
    }
    return LogicalMatrix(rows, std::move(c));
  }
  static LogicalMatrix from_delta(Index rows, std::initializer_list<Index> one_based) {
    return from_delta(rows, std::span<const Index>(one_based.begin(), one_based.size()));
  }

  static LogicalMatrix identity(Index n) {
    std::vector<Index> c(n);
    std::iota(c.begin(), c.end(), Index{0});
    return LogicalMatrix(n, std::move(c));
  }

  /// Every column equal to delta_rows^{row+1}. constant(1, 0, n) is the row of ones 1_n^T.
  static LogicalMatrix constant(Index rows, Index row, Index cols) {
    return LogicalMatrix(rows, std::vector<Index>(cols, row));
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return col_.size(); }
  Index operator[](Index j) const { return col_[j]; }
  const std::vector<Index>& column_rows() const noexcept { return col_; }

  std::vector<Index> delta_indices() const {
    std::vector<Index> out(col_.size());
    std::transform(col_.begin(), col_.end(), out.begin(), [](Index r) { return r + 1; });
    return out;
  }

  bool operator==(const LogicalMatrix&) const = default;

 private:
  Index rows_ = 0;
  std::vector<Index> col_;
};

// ---------------------------------------------------------------------------
// BooleanMatrix

/// 0/1 matrix stored as one bitset per column. Zero columns and columns with
/// several ones are both legal.
class BooleanMatrix {
 public:
  BooleanMatrix() = default;
  BooleanMatrix(Index rows, Index cols)
      : rows_(rows), cols_(cols), words_((rows + 63) / 64), bits_(detail::checked_mul(words_, cols), 0) {}

  static BooleanMatrix identity(Index n) {
    BooleanMatrix m(n, n);
    for (Index i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BooleanMatrix all_ones(Index rows, Index cols) {
    BooleanMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m.set(i, j);
    return m;
  }

  /// Row-major literal, convenient for fixtures: from_rows({{0,1},{1,1}}).
  static BooleanMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    const Index r = rows.size();
    const Index c = r == 0 ? 0 : rows.front().size();
    BooleanMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionError("ragged Boolean matrix literal");
      for (Index j = 0; j < c; ++j) {
        if (rows[i][j] != 0 && rows[i][j] != 1) throw DimensionError("Boolean matrix entries must be 0 or 1");
        if (rows[i][j]) m.set(i, j);
      }
    }
    return m;
  }

  explicit BooleanMatrix(const LogicalMatrix& l) : BooleanMatrix(l.rows(), l.cols()) {
    for (Index j = 0; j < l.cols(); ++j) set(l[j], j);
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  bool get(Index i, Index j) const { return (bits_[j * words_ + i / 64] >> (i % 64)) & 1U; }
  void set(Index i, Index j, bool v = true) {
    auto& w = bits_[j * words_ + i / 64];
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    w = v ? (w | mask) : (w & ~mask);
  }

  std::span<const std::uint64_t> column_words(Index j) const { return {bits_.data() + j * words_, words_}; }

  template <class F>
  void for_each_one(Index j, F&& f) const {
    const auto* w = bits_.data() + j * words_;
    for (Index k = 0; k < words_; ++k) {
      std::uint64_t x = w[k];
      while (x) {
        f(k * 64 + static_cast<Index>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }

  std::vector<Index> column_ones(Index j) const {
    std::vector<Index> out;
    for_each_one(j, [&](Index i) { out.push_back(i); });
    return out;
  }

  Index column_count(Index j) const {
    Index n = 0;
    for (auto w : column_words(j)) n += static_cast<Index>(std::popcount(w));
    return n;
  }

  /// The logical view, if every column has exactly one 1.
  std::optional<LogicalMatrix> to_logical() const {
    std::vector<Index> c(cols_);
    for (Index j = 0; j < cols_; ++j) {
      if (column_count(j) != 1) return std::nullopt;
      for_each_one(j, [&](Index i) { c[j] = i; });
    }
    return LogicalMatrix(rows_, std::move(c));
  }

  BooleanMatrix transpose() const {
    BooleanMatrix t(cols_, rows_);
    for (Index j = 0; j < cols_; ++j) for_each_one(j, [&](Index i) { t.set(j, i); });
    return t;
  }

  bool operator==(const BooleanMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Index words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// CountMatrix / StochasticMatrix

class CountMatrix {
 public:
  using value_type = std::uint64_t;

  CountMatrix() = default;
  CountMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(detail::checked_mul(rows, cols), 0) {}

  static CountMatrix from_rows(const std::vector<std::vector<value_type>>& rows) {
    const Index r = rows.size();
    const Index c = r == 0 ? 0 : rows.front().size();
    CountMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionError("ragged count matrix literal");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
    }
    return m;
  }

  explicit CountMatrix(const BooleanMatrix& b) : CountMatrix(b.rows(), b.cols()) {
    for (Index j = 0; j < cols_; ++j) b.for_each_one(j, [&](Index i) { at(i, j) = 1; });
  }
  explicit CountMatrix(const LogicalMatrix& l) : CountMatrix(BooleanMatrix(l)) {}

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  value_type at(Index i, Index j) const { return data_[i * cols_ + j]; }
  value_type& at(Index i, Index j) { return data_[i * cols_ + j]; }
  const std::vector<value_type>& data() const noexcept { return data_; }

  value_type column_sum(Index j) const {
    value_type s = 0;
    for (Index i = 0; i < rows_; ++i) s += at(i, j);
    return s;
  }

  bool operator==(const CountMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<value_type> data_;
};

/// Column-stochastic matrix with exact rational entries. Columns listed in
/// `dead_columns` are identically zero (their counts summed to 0).
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(detail::checked_mul(rows, cols)) {}

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  const Rational& at(Index i, Index j) const { return data_[i * cols_ + j]; }
  Rational& at(Index i, Index j) { return data_[i * cols_ + j]; }
  const std::vector<Index>& dead_columns() const noexcept { return dead_; }
  std::vector<Index>& dead_columns() noexcept { return dead_; }

  bool operator==(const StochasticMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Rational> data_;
  std::vector<Index> dead_;
};

// ---------------------------------------------------------------------------
// Dense matrices over an arbitrary ring, used for the general semi-tensor
// product and as the reference representation in tests.

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(detail::checked_mul(rows, cols), fill) {}

  static DenseMatrix identity(Index n) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i) m.at(i, i) = T{1};
    return m;
  }

  static DenseMatrix from_rows(const std::vector<std::vector<T>>& rows) {
    const Index r = rows.size();
    const Index c = r == 0 ? 0 : rows.front().size();
    DenseMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionError("ragged dense matrix literal");
      for (Index j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  const T& at(Index i, Index j) const { return data_[i * cols_ + j]; }
  T& at(Index i, Index j) { return data_[i * cols_ + j]; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<T> data_;
};

template <class T>
DenseMatrix<T> to_dense(const LogicalMatrix& l) {
  DenseMatrix<T> d(l.rows(), l.cols());
  for (Index j = 0; j < l.cols(); ++j) d.at(l[j], j) = T{1};
  return d;
}

template <class T>
DenseMatrix<T> to_dense(const BooleanMatrix& b) {
  DenseMatrix<T> d(b.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) b.for_each_one(j, [&](Index i) { d.at(i, j) = T{1}; });
  return d;
}

/// Conventional product; inner dimensions must agree.
template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      if (a.at(i, k) == T{}) continue;
      for (Index j = 0; j < b.cols(); ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

template <class T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> c(detail::checked_mul(a.rows(), b.rows()), detail::checked_mul(a.cols(), b.cols()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == T{}) continue;
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) c.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return c;
}

/// Semi-tensor product A ⋉ B = (A ⊗ I_{t/p})(B ⊗ I_{t/q}), t = lcm(p, q),
/// where p = cols(A) and q = rows(B).
template <class T>
DenseMatrix<T> stp(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() == 0 || b.rows() == 0) throw DimensionError("semi-tensor product of an empty matrix");
  const Index t = std::lcm(a.cols(), b.rows());
  const Index ra = t / a.cols();
  const Index rb = t / b.rows();
  const auto left = ra == 1 ? a : kron(a, DenseMatrix<T>::identity(ra));
  const auto right = rb == 1 ? b : kron(b, DenseMatrix<T>::identity(rb));
  return multiply(left, right);
}

// ---------------------------------------------------------------------------
// Logical-matrix algebra (closed: results are logical again)

/// Conventional product of logical matrices: column j of AB is column B[j] of A.
inline LogicalMatrix multiply(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("logical product: inner dimensions differ");
  std::vector<Index> c(b.cols());
  for (Index j = 0; j < b.cols(); ++j) c[j] = a[b[j]];
  return LogicalMatrix(a.rows(), std::move(c));
}

inline LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b) {
  const Index rows = detail::checked_mul(a.rows(), b.rows());
  std::vector<Index> c(detail::checked_mul(a.cols(), b.cols()));
  for (Index i = 0; i < a.cols(); ++i)
    for (Index j = 0; j < b.cols(); ++j) c[i * b.cols() + j] = a[i] * b.rows() + b[j];
  return LogicalMatrix(rows, std::move(c));
}

inline LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (a.cols() == 0 || b.rows() == 0) throw DimensionError("semi-tensor product of an empty matrix");
  const Index t = std::lcm(a.cols(), b.rows());
  const Index ra = t / a.cols();
  const Index rb = t / b.rows();
  if (ra == 1 && rb == 1) return multiply(a, b);
  // (A ⊗ I_ra)(B ⊗ I_rb) without materializing either factor.
  // Column (j, c) of B ⊗ I_rb is row B[j]*rb + c; column x of A ⊗ I_ra is
  // row A[x / ra]*ra + x % ra.
  std::vector<Index> c(detail::checked_mul(b.cols(), rb));
  for (Index j = 0; j < b.cols(); ++j)
    for (Index s = 0; s < rb; ++s) {
      const Index x = b[j] * rb + s;
      c[j * rb + s] = a[x / ra] * ra + x % ra;
    }
  return LogicalMatrix(detail::checked_mul(a.rows(), ra), std::move(c));
}

/// Swap matrix W_[m,n]: W ⋉ x ⋉ y = y ⋉ x for x ∈ Δ_m, y ∈ Δ_n.
inline LogicalMatrix swap_matrix(Index m, Index n) {
  if (m == 0 || n == 0) throw DimensionError("swap matrix dimensions must be positive");
  std::vector<Index> c(detail::checked_mul(m, n));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) c[i * n + j] = j * m + i;
  return LogicalMatrix(m * n, std::move(c));
}

/// Power-reducing matrix PR_k: x ⋉ x = PR_k ⋉ x for x ∈ Δ_k.
inline LogicalMatrix power_reducing_matrix(Index k) {
  if (k < 1) throw DimensionError("power-reducing matrix needs k >= 1");
  std::vector<Index> c(k);
  for (Index i = 0; i < k; ++i) c[i] = i * k + i;
  return LogicalMatrix(detail::checked_mul(k, k), std::move(c));
}

// ---------------------------------------------------------------------------
// Boolean semiring

inline BooleanMatrix kron(const BooleanMatrix& a, const BooleanMatrix& b) {
  BooleanMatrix c(detail::checked_mul(a.rows(), b.rows()), detail::checked_mul(a.cols(), b.cols()));
  for (Index j = 0; j < a.cols(); ++j)
    a.for_each_one(j, [&](Index i) {
      for (Index l = 0; l < b.cols(); ++l)
        b.for_each_one(l, [&](Index k) { c.set(i * b.rows() + k, j * b.cols() + l); });
    });
  return c;
}

/// (A ×_B B)_{ij} = OR_k (a_ik AND b_kj).
inline BooleanMatrix bool_product(const BooleanMatrix& a, const BooleanMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("Boolean product: inner dimensions differ");
  BooleanMatrix c(a.rows(), b.cols());
  const Index words = (a.rows() + 63) / 64;
  std::vector<std::uint64_t> acc(words);
  for (Index j = 0; j < b.cols(); ++j) {
    std::fill(acc.begin(), acc.end(), 0);
    b.for_each_one(j, [&](Index k) {
      auto col = a.column_words(k);
      for (Index w = 0; w < words; ++w) acc[w] |= col[w];
    });
    for (Index w = 0; w < words; ++w) {
      std::uint64_t x = acc[w];
      while (x) {
        c.set(w * 64 + static_cast<Index>(std::countr_zero(x)), j);
        x &= x - 1;
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Counts

/// Ordinary integer product.
inline CountMatrix multiply(const CountMatrix& a, const CountMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("count product: inner dimensions differ");
  CountMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      const auto aik = a.at(i, k);
      if (aik == 0) continue;
      for (Index j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

inline BooleanMatrix booleanize(const CountMatrix& c) {
  BooleanMatrix b(c.rows(), c.cols());
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j)
      if (c.at(i, j) > 0) b.set(i, j);
  return b;
}

/// Column j becomes m_{.,j} / m_j. All-zero columns stay zero and are listed
/// in dead_columns().
inline StochasticMatrix column_normalize(const CountMatrix& c) {
  StochasticMatrix p(c.rows(), c.cols());
  for (Index j = 0; j < c.cols(); ++j) {
    const auto total = c.column_sum(j);
    if (total == 0) {
      p.dead_columns().push_back(j);
      continue;
    }
    for (Index i = 0; i < c.rows(); ++i)
      p.at(i, j) = Rational(boost::multiprecision::cpp_int(c.at(i, j)), boost::multiprecision::cpp_int(total));
  }
  return p;
}

}  // namespace fvn
