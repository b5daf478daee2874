#include "doctest.h"
#include "malcev/exactla.hpp"

#include <random>

using namespace malcev;

namespace {

// Fraction-free (Bareiss) elimination over the integers after clearing
// denominators row by row; independent of the rational echelon code.
std::size_t bareiss_rank(std::vector<DenseVec> rows) {
  std::vector<std::vector<mpz_class>> a;
  for (auto& r : rows) {
    mpz_class l = 1;
    for (auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> ir;
    for (auto& x : r) ir.push_back(mpz_class(x * l));
    a.push_back(ir);
  }
  if (a.empty()) return 0;
  std::size_t m = a.size(), n = a[0].size(), r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

DenseVec random_row(std::mt19937& rng, std::size_t n, int sparsity = 3) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), zero(0, sparsity);
  DenseVec r(n);
  for (auto& x : r) x = zero(rng) == 0 ? Rational(0) : Rational(num(rng), den(rng));
  for (auto& x : r) x.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-2")) == "-2");
  CHECK(to_string(parse_rational("0/7")) == "0");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("a/b"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("rref of small matrices") {
  auto id = RatMatrix::from_dense({{1, 0}, {0, 1}});
  auto r = rref(id);
  CHECK(r.reduced == id);
  CHECK(r.pivots == std::vector<std::size_t>{0, 1});

  auto m = RatMatrix::from_dense({{1, 2}, {2, 4}});
  auto r2 = rref(m);
  CHECK(r2.reduced == RatMatrix::from_dense({{1, 2}, {0, 0}}));
  CHECK(r2.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rank agrees with fraction-free elimination on random 5x7 matrices") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DenseVec> rows;
    for (int i = 0; i < 5; ++i) rows.push_back(random_row(rng, 7, trial % 4));
    if (trial % 5 == 0) rows[4] = rows[0];  // force dependence sometimes
    auto m = RatMatrix::from_dense(rows);
    CHECK(rank(m) == bareiss_rank(rows));
  }
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(RatMatrix::from_dense({{1, 0}, {0, 1}})).empty());
  auto zero = kernel_basis(RatMatrix(3, 3));
  REQUIRE(zero.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(zero[i][j] == (i == j ? 1 : 0));

  auto k = kernel_basis(RatMatrix::from_dense({{1, 1, 0}, {0, 0, 1}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == -k[0][1]);
  CHECK(k[0][0] != 0);
  CHECK(k[0][2] == 0);
}

TEST_CASE("rank-nullity, rref idempotence and kernel correctness (property)") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 1 + trial % 6, cols = 1 + (trial * 7) % 8;
    std::vector<DenseVec> data;
    for (std::size_t i = 0; i < rows; ++i) data.push_back(random_row(rng, cols, trial % 3));
    auto m = RatMatrix::from_dense(data);
    auto ker = kernel_basis(m);
    CHECK(rank(m) + ker.size() == cols);
    for (const auto& v : ker) CHECK(m.apply(to_sparse(v)).empty());
    auto once = rref(m);
    auto twice = rref(once.reduced);
    CHECK(twice.reduced == once.reduced);
    CHECK(twice.pivots == once.pivots);
    for (std::size_t i = 1; i < once.pivots.size(); ++i) CHECK(once.pivots[i - 1] < once.pivots[i]);
  }
}

TEST_CASE("quotient bases") {
  auto q = quotient_basis(2, {{1, 0}});
  CHECK(q.representatives == std::vector<std::size_t>{1});
  auto all = quotient_basis(3, {});
  CHECK(all.representatives == std::vector<std::size_t>{0, 1, 2});

  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 7, k = trial % (n + 1);
    std::vector<DenseVec> sub;
    for (std::size_t i = 0; i < k; ++i) sub.push_back(random_row(rng, n, 1));
    auto qb = quotient_basis(n, sub);
    std::size_t r = bareiss_rank(sub);
    CHECK(qb.representatives.size() == n - r);
    // projection kills the subspace exactly
    for (const auto& v : sub) CHECK(qb.projection.apply(to_sparse(v)).empty());
    // and is the identity on representatives
    for (std::size_t j = 0; j < qb.representatives.size(); ++j) {
      auto img = qb.projection.apply(SparseVec{{qb.representatives[j], Rational(1)}});
      CHECK(img == SparseVec{{j, Rational(1)}});
    }
    // representatives together with the subspace span the ambient space
    auto span = sub;
    for (auto rep : qb.representatives) {
      DenseVec e(n, Rational(0));
      e[rep] = 1;
      span.push_back(e);
    }
    CHECK(bareiss_rank(span) == n);
  }
}

TEST_CASE("echelon basis reduces to canonical representatives") {
  EchelonBasis b;
  CHECK(b.insert({{0, 2}, {2, 4}}));
  CHECK_FALSE(b.insert({{0, 1}, {2, 2}}));
  CHECK(b.insert({{1, 1}, {2, 1}}));
  auto r = b.reduce({{0, 1}, {1, 1}, {2, 5}});
  CHECK(r == SparseVec{{2, Rational(2)}});
}

TEST_CASE("subquotient coordinates") {
  // span{e0, e1, e2} / span{e0 + e1}
  SubquotientCoordinates q({{{0, 1}, {1, 1}}}, {{{0, 1}}, {{1, 1}}, {{2, 1}}});
  CHECK(q.dim() == 2);
  CHECK(q.coordinates({{0, 1}, {1, 1}}).empty());
  auto a = q.coordinates({{0, 1}}), b = q.coordinates({{1, 1}});
  CHECK(a == scaled(b, -1));
  CHECK_THROWS(q.coordinates({{3, 1}}));
  // the classes of the representatives are the coordinate basis
  for (std::size_t k = 0; k < q.dim(); ++k) CHECK(q.coordinates(q.representatives()[k]) == SparseVec{{k, Rational(1)}});
}
