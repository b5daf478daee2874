#pragma once

// Exact rational linear algebra: sparse row reduction, kernels, quotient bases.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace malcev {

using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed input or q == 0.
Rational parse_rational(std::string_view text);
/// Lowest-terms "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Sparse vector keyed by coordinate index. Never stores zeros.
using SparseVec = std::map<std::size_t, Rational>;
using DenseVec = std::vector<Rational>;

void axpy(SparseVec& y, const Rational& a, const SparseVec& x);  // y += a x
SparseVec scaled(const SparseVec& x, const Rational& a);
SparseVec to_sparse(const DenseVec& v);
DenseVec to_dense(const SparseVec& v, std::size_t dim);

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix from_dense(const std::vector<DenseVec>& rows);
  static RatMatrix from_rows(std::size_t cols, std::vector<SparseVec> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  Rational get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Rational& value);
  const SparseVec& row(std::size_t r) const { return rows_[r]; }
  const std::vector<SparseVec>& row_data() const { return rows_; }

  SparseVec apply(const SparseVec& x) const;  // m x
  std::size_t nonzeros() const;

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<SparseVec> rows_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;  // strictly increasing
};

RrefResult rref(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

/// Basis of ker(m) as dense column vectors; one vector per free column.
std::vector<DenseVec> kernel_basis(const RatMatrix& m);

struct QuotientBasis {
  /// Ambient coordinates whose images form a basis of ambient/subspace.
  std::vector<std::size_t> representatives;
  /// representatives.size() x ambient_dim; kills the subspace, identity on representatives.
  RatMatrix projection;
};

QuotientBasis quotient_basis(std::size_t ambient_dim, const std::vector<DenseVec>& subspace);

/// Incrementally maintained reduced echelon basis of a subspace, keyed by pivot.
/// Rows are kept fully reduced against each other, so reduce() yields a canonical
/// representative modulo the span.
class EchelonBasis {
 public:
  /// Reduces v and adds it if independent. Returns true when the span grew.
  bool insert(SparseVec v);
  SparseVec reduce(SparseVec v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  std::size_t size() const { return rows_.size(); }
  const std::map<std::size_t, SparseVec>& rows() const { return rows_; }
  std::vector<std::size_t> pivots() const;

 private:
  std::map<std::size_t, SparseVec> rows_;  // pivot -> row with leading coefficient 1
};

/// Coordinates on span(numerator + denominator) / span(denominator). The
/// representatives are numerator vectors reduced modulo the denominator and
/// echelonized among themselves; coordinates are read at their pivots.
class SubquotientCoordinates {
 public:
  SubquotientCoordinates() = default;
  SubquotientCoordinates(const std::vector<SparseVec>& denominator, const std::vector<SparseVec>& numerator);

  std::size_t dim() const { return reps_.size(); }
  const std::vector<SparseVec>& representatives() const { return reps_; }
  /// Class of v; throws when v is not in the span of numerator and denominator.
  SparseVec coordinates(const SparseVec& v) const;
  /// Same as coordinates() but without the span check (linear extension to all vectors).
  SparseVec coordinates_unchecked(const SparseVec& v) const;

 private:
  EchelonBasis denominator_;
  EchelonBasis numerator_;
  std::vector<std::size_t> pivots_;
  std::vector<SparseVec> reps_;
};

}  // namespace malcev
