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

#include <gtest/gtest.h>

#include "support.hpp"

namespace fvn::test {
namespace {

LogicalMatrix random_logical(std::mt19937_64& rng, Index rows, Index cols) {
  std::vector<Index> c(cols);
  for (auto& x : c) x = rng() % rows;
  return LogicalMatrix(rows, c);
}

IntMat random_int(std::mt19937_64& rng, Index rows, Index cols) {
  IntMat m(rows, std::vector<long long>(cols));
  for (auto& r : m)
    for (auto& v : r) v = static_cast<long long>(rng() % 7) - 3;
  return m;
}

DenseMatrix<long long> dense_of(const IntMat& m) {
  DenseMatrix<long long> d(m.size(), m.front().size());
  for (Index i = 0; i < m.size(); ++i)
    for (Index j = 0; j < m.front().size(); ++j) d.at(i, j) = m[i][j];
  return d;
}

using fvn::test::int_of;

IntMat int_of(const DenseMatrix<long long>& d) {
  IntMat m(d.rows(), std::vector<long long>(d.cols()));
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j) m[i][j] = d.at(i, j);
  return m;
}

TEST(LogicalMatrix, FromDeltaIsOneBased) {
  const auto m = LogicalMatrix::from_delta(3, {3, 1, 2});
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m[0], 2u);
  EXPECT_EQ(m.delta_indices(), (std::vector<Index>{3, 1, 2}));
  EXPECT_THROW(LogicalMatrix::from_delta(2, {0}), DimensionError);
  EXPECT_THROW(LogicalMatrix::from_delta(2, {3}), DimensionError);
}

TEST(LogicalMatrix, ConstantRowIsRowOfOnes) {
  const auto ones = LogicalMatrix::constant(1, 0, 4);
  EXPECT_EQ(int_of(ones), (IntMat{{1, 1, 1, 1}}));
}

TEST(Kron, SmallLogicalExample) {
  const auto a = LogicalMatrix::from_delta(2, {1, 2});
  const auto b = LogicalMatrix::from_delta(2, {2, 1});
  EXPECT_EQ(kron(a, b), LogicalMatrix::from_delta(4, {2, 1, 4, 3}));
  EXPECT_EQ(int_of(kron(a, b)), int_kron(int_of(a), int_of(b)));
}

TEST(Kron, IdentityOfOneIsNeutral) {
  std::mt19937_64 rng(7);
  const auto a = random_logical(rng, 3, 5);
  EXPECT_EQ(kron(LogicalMatrix::identity(1), a), a);
  EXPECT_EQ(kron(a, LogicalMatrix::identity(1)), a);
}

TEST(Stp, ReducesToOrdinaryProductWhenConformable) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index r = 1 + rng() % 4, k = 1 + rng() % 4, c = 1 + rng() % 4;
    const auto a = random_int(rng, r, k), b = random_int(rng, k, c);
    EXPECT_EQ(int_of(stp(dense_of(a), dense_of(b))), int_mul(a, b));
    const auto la = random_logical(rng, r, k), lb = random_logical(rng, k, c);
    EXPECT_EQ(stp(la, lb), multiply(la, lb));
    EXPECT_EQ(int_of(stp(la, lb)), int_mul(int_of(la), int_of(lb)));
  }
}

TEST(Stp, NegationOfLeadingFactor) {
  // M_not ⋉ x1 ⋉ x2 = (¬x1) ⋉ x2 for x1, x2 ∈ Δ_2.
  const auto neg = LogicalMatrix::from_delta(2, {2, 1});
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) {
      const auto z = kron(LogicalMatrix(2, {a}), LogicalMatrix(2, {b}));
      const auto r = stp(neg, z);
      ASSERT_EQ(r.rows(), 4u);
      EXPECT_EQ(r[0], (1 - a) * 2 + b);
    }
}

TEST(Stp, MatchesDefinitionOnRandomShapes) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = 1 + rng() % 4, p = 1 + rng() % 6, q = 1 + rng() % 6, c = 1 + rng() % 3;
    const auto a = random_int(rng, r, p), b = random_int(rng, q, c);
    EXPECT_EQ(int_of(stp(dense_of(a), dense_of(b))), int_stp(a, b));
    const auto la = random_logical(rng, r, p), lb = random_logical(rng, q, c);
    EXPECT_EQ(int_of(stp(la, lb)), int_stp(int_of(la), int_of(lb)));
  }
}

TEST(Stp, IsAssociative) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Index dims[] = {1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 3, 1 + rng() % 3};
    const auto a = random_int(rng, dims[0], dims[1]);
    const auto b = random_int(rng, dims[2], dims[3]);
    const auto c = random_int(rng, dims[4], dims[5]);
    EXPECT_EQ(int_stp(int_stp(a, b), c), int_stp(a, int_stp(b, c)));
    const auto la = random_logical(rng, dims[0], dims[1]);
    const auto lb = random_logical(rng, dims[2], dims[3]);
    const auto lc = random_logical(rng, dims[4], dims[5]);
    EXPECT_EQ(stp(stp(la, lb), lc), stp(la, stp(lb, lc)));
  }
}

TEST(Stp, LogicalClosure) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_logical(rng, 1 + rng() % 4, 1 + rng() % 6);
    const auto b = random_logical(rng, 1 + rng() % 6, 1 + rng() % 4);
    for (const auto& m : {stp(a, b), kron(a, b)}) {
      const auto d = int_of(m);
      for (Index j = 0; j < m.cols(); ++j) {
        long long s = 0;
        for (const auto& row : d) s += row[j];
        EXPECT_EQ(s, 1);
      }
    }
  }
}

TEST(Stp, EmptyFactorRejected) {
  EXPECT_THROW(stp(LogicalMatrix(), LogicalMatrix::identity(2)), DimensionError);
}

TEST(SwapMatrix, SwapsFactors) {
  for (Index m = 1; m <= 4; ++m)
    for (Index n = 1; n <= 4; ++n) {
      const auto w = swap_matrix(m, n);
      for (Index x = 0; x < m; ++x)
        for (Index y = 0; y < n; ++y) {
          const auto lhs = stp(stp(w, LogicalMatrix(m, {x})), LogicalMatrix(n, {y}));
          const auto rhs = kron(LogicalMatrix(n, {y}), LogicalMatrix(m, {x}));
          EXPECT_EQ(lhs, rhs);
        }
    }
  EXPECT_EQ(swap_matrix(1, 3), LogicalMatrix::identity(3));
  EXPECT_EQ(swap_matrix(2, 2), LogicalMatrix::from_delta(4, {1, 3, 2, 4}));
}

TEST(PowerReducing, SquaresUnitVectors) {
  EXPECT_EQ(power_reducing_matrix(2), LogicalMatrix::from_delta(4, {1, 4}));
  EXPECT_EQ(power_reducing_matrix(3), LogicalMatrix::from_delta(9, {1, 5, 9}));
  for (Index k = 1; k <= 5; ++k)
    for (Index i = 0; i < k; ++i) {
      const LogicalMatrix x(k, {i});
      EXPECT_EQ(stp(power_reducing_matrix(k), x), stp(x, x));
    }
}

TEST(BooleanProduct, IsSignOfIntegerProduct) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = 1 + rng() % 8, k = 1 + rng() % 70, c = 1 + rng() % 8;
    const auto a = random_boolean(rng, r, k), b = random_boolean(rng, k, c);
    auto expected = int_mul(int_of(a), int_of(b));
    for (auto& row : expected)
      for (auto& v : row) v = v > 0;
    EXPECT_EQ(int_of(bool_product(a, b)), expected);
  }
}

TEST(BooleanProduct, IdentityAndDimensionCheck) {
  std::mt19937_64 rng(29);
  const auto b = random_boolean(rng, 5, 7);
  EXPECT_EQ(bool_product(BooleanMatrix::identity(5), b), b);
  EXPECT_EQ(bool_product(b, BooleanMatrix::identity(7)), b);
  EXPECT_THROW(bool_product(b, b), DimensionError);
}

TEST(BooleanMatrix, LogicalConversion) {
  const auto l = LogicalMatrix::from_delta(3, {2, 2, 3, 1});
  const BooleanMatrix b(l);
  ASSERT_TRUE(b.to_logical().has_value());
  EXPECT_EQ(*b.to_logical(), l);
  BooleanMatrix two = b;
  two.set(0, 0);
  EXPECT_FALSE(two.to_logical().has_value());
  BooleanMatrix empty(3, 2);
  EXPECT_FALSE(empty.to_logical().has_value());
}

TEST(BooleanMatrix, KronMatchesDefinition) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_boolean(rng, 1 + rng() % 4, 1 + rng() % 4);
    const auto b = random_boolean(rng, 1 + rng() % 4, 1 + rng() % 4);
    EXPECT_EQ(int_of(kron(a, b)), int_kron(int_of(a), int_of(b)));
  }
}

TEST(Booleanize, NonzeroPattern) {
  const auto t1 = CountMatrix::from_rows(tcell_T1());
  const auto b = booleanize(t1);
  for (Index i = 0; i < t1.rows(); ++i)
    for (Index j = 0; j < t1.cols(); ++j) EXPECT_EQ(b.get(i, j), t1.at(i, j) > 0);
  EXPECT_EQ(booleanize(CountMatrix::from_rows(tcell_T3())), BooleanMatrix::all_ones(4, 16));
  EXPECT_EQ(booleanize(CountMatrix(2, 3)), BooleanMatrix(2, 3));
}

TEST(ColumnNormalize, ExactFractions) {
  const auto p = column_normalize(CountMatrix::from_rows(kBlockACounts));
  EXPECT_EQ(p.at(0, 0), Rational(3, 4));
  EXPECT_EQ(p.at(1, 0), Rational(1, 4));
  EXPECT_TRUE(p.dead_columns().empty());
  EXPECT_TRUE(prob_equals(column_normalize(CountMatrix::from_rows(tcell_T1())), tcell_P1()));
}

TEST(ColumnNormalize, ColumnsSumToExactlyOne) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    CountMatrix c(1 + rng() % 6, 1 + rng() % 6);
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j) c.at(i, j) = rng() % 4 == 0 ? 0 : rng() % 1000;
    const auto p = column_normalize(c);
    for (Index j = 0; j < c.cols(); ++j) {
      Rational s = 0;
      for (Index i = 0; i < c.rows(); ++i) s += p.at(i, j);
      const bool dead = c.column_sum(j) == 0;
      EXPECT_EQ(s, dead ? Rational(0) : Rational(1));
      EXPECT_EQ(std::count(p.dead_columns().begin(), p.dead_columns().end(), j), dead ? 1 : 0);
    }
  }
}

TEST(CountMatrix, IntegerProduct) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    CountMatrix a(1 + rng() % 4, 1 + rng() % 4), b(a.cols(), 1 + rng() % 4);
    for (auto* m : {&a, &b})
      for (Index i = 0; i < m->rows(); ++i)
        for (Index j = 0; j < m->cols(); ++j) m->at(i, j) = rng() % 9;
    EXPECT_EQ(int_of(multiply(a, b)), int_mul(int_of(a), int_of(b)));
  }
  EXPECT_THROW(CountMatrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST(Fractions, FormatAndParse) {
  EXPECT_EQ(to_fraction_string(Rational(3, 4)), "3/4");
  EXPECT_EQ(to_fraction_string(Rational(0)), "0/1");
  EXPECT_EQ(to_fraction_string(Rational(1)), "1/1");
  EXPECT_THROW(parse_fraction("1/0"), ValidationError);
  EXPECT_THROW(parse_fraction("x"), ValidationError);
  EXPECT_EQ(parse_fraction("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_fraction("1"), Rational(1));
}

}  // namespace
}  // namespace fvn::test
