#include "malcev/exactla.hpp"

#include <algorithm>
#include <stdexcept>

namespace malcev {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid = [](const std::string& part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid(num, true) || !valid(den, false))
    throw std::invalid_argument("malformed rational '" + s + "'");
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  if (a == 0) return;
  for (const auto& [i, xi] : x) {
    auto it = y.find(i);
    if (it == y.end()) {
      y.emplace(i, a * xi);
    } else {
      it->second += a * xi;
      if (it->second == 0) y.erase(it);
    }
  }
}

SparseVec scaled(const SparseVec& x, const Rational& a) {
  SparseVec out;
  if (a == 0) return out;
  for (const auto& [i, xi] : x) out.emplace(i, a * xi);
  return out;
}

SparseVec to_sparse(const DenseVec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace(i, v[i]);
  return out;
}

DenseVec to_dense(const SparseVec& v, std::size_t dim) {
  DenseVec out(dim, Rational(0));
  for (const auto& [i, x] : v) {
    if (i >= dim) throw std::out_of_range("sparse index exceeds dense dimension");
    out[i] = x;
  }
  return out;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

RatMatrix RatMatrix::from_dense(const std::vector<DenseVec>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged dense matrix");
    m.rows_[r] = to_sparse(rows[r]);
  }
  return m;
}

RatMatrix RatMatrix::from_rows(std::size_t cols, std::vector<SparseVec> rows) {
  RatMatrix m;
  m.cols_ = cols;
  for (auto& r : rows) {
    for (auto it = r.begin(); it != r.end();) {
      if (it->first >= cols) throw std::out_of_range("column index out of range");
      it = it->second == 0 ? r.erase(it) : std::next(it);
    }
  }
  m.rows_ = std::move(rows);
  return m;
}

Rational RatMatrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows() || c >= cols_) throw std::out_of_range("matrix index out of range");
  auto it = rows_[r].find(c);
  return it == rows_[r].end() ? Rational(0) : it->second;
}

void RatMatrix::set(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows() || c >= cols_) throw std::out_of_range("matrix index out of range");
  if (value == 0)
    rows_[r].erase(c);
  else
    rows_[r][c] = value;
}

SparseVec RatMatrix::apply(const SparseVec& x) const {
  SparseVec out;
  for (std::size_t r = 0; r < rows(); ++r) {
    Rational acc = 0;
    for (const auto& [c, v] : rows_[r]) {
      auto it = x.find(c);
      if (it != x.end()) acc += v * it->second;
    }
    if (acc != 0) out.emplace(r, acc);
  }
  return out;
}

std::size_t RatMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

SparseVec EchelonBasis::reduce(SparseVec v) const {
  // Rows are mutually reduced, so a single pass over pivots present in v suffices;
  // eliminating one pivot never reintroduces another.
  for (auto it = v.begin(); it != v.end();) {
    auto row = rows_.find(it->first);
    if (row == rows_.end()) {
      ++it;
      continue;
    }
    Rational c = it->second;
    std::size_t key = it->first;
    axpy(v, -c, row->second);
    it = v.upper_bound(key);
  }
  return v;
}

bool EchelonBasis::insert(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  auto pivot = v.begin()->first;
  Rational lead = v.begin()->second;
  if (lead != 1) v = scaled(v, 1 / lead);
  for (auto& [p, row] : rows_) {
    auto it = row.find(pivot);
    if (it != row.end()) {
      Rational c = it->second;
      axpy(row, -c, v);
    }
  }
  rows_.emplace(pivot, std::move(v));
  return true;
}

std::vector<std::size_t> EchelonBasis::pivots() const {
  std::vector<std::size_t> out;
  out.reserve(rows_.size());
  for (const auto& [p, row] : rows_) out.push_back(p);
  return out;
}

RrefResult rref(const RatMatrix& m) {
  EchelonBasis basis;
  for (const auto& r : m.row_data()) basis.insert(r);
  std::vector<SparseVec> rows;
  std::vector<std::size_t> pivots;
  for (const auto& [p, row] : basis.rows()) {
    pivots.push_back(p);
    rows.push_back(row);
  }
  rows.resize(m.rows());
  return {RatMatrix::from_rows(m.cols(), std::move(rows)), std::move(pivots)};
}

std::size_t rank(const RatMatrix& m) {
  EchelonBasis basis;
  for (const auto& r : m.row_data()) basis.insert(r);
  return basis.size();
}

std::vector<DenseVec> kernel_basis(const RatMatrix& m) {
  EchelonBasis basis;
  for (const auto& r : m.row_data()) basis.insert(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (const auto& [p, row] : basis.rows()) is_pivot[p] = true;
  std::vector<DenseVec> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    DenseVec v(m.cols(), Rational(0));
    v[free] = 1;
    for (const auto& [p, row] : basis.rows()) {
      auto it = row.find(free);
      if (it != row.end()) v[p] = -it->second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

QuotientBasis quotient_basis(std::size_t ambient_dim, const std::vector<DenseVec>& subspace) {
  EchelonBasis basis;
  for (const auto& v : subspace) {
    if (v.size() != ambient_dim) throw std::invalid_argument("subspace vector has wrong length");
    basis.insert(to_sparse(v));
  }
  QuotientBasis q;
  std::vector<std::size_t> slot(ambient_dim, ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    if (!basis.rows().count(i)) {
      slot[i] = q.representatives.size();
      q.representatives.push_back(i);
    }
  }
  q.projection = RatMatrix(q.representatives.size(), ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    if (slot[i] != ambient_dim) {
      q.projection.set(slot[i], i, 1);
      continue;
    }
    // e_i = row_i - (row_i - e_i); the tail of row_i lives on non-pivot columns.
    for (const auto& [c, v] : basis.rows().at(i)) {
      if (c == i) continue;
      q.projection.set(slot[c], i, -v);
    }
  }
  return q;
}

SubquotientCoordinates::SubquotientCoordinates(const std::vector<SparseVec>& denominator,
                                               const std::vector<SparseVec>& numerator) {
  for (const auto& v : denominator) denominator_.insert(v);
  for (const auto& v : numerator) numerator_.insert(denominator_.reduce(v));
  for (const auto& [p, row] : numerator_.rows()) {
    pivots_.push_back(p);
    reps_.push_back(row);
  }
}

SparseVec SubquotientCoordinates::coordinates_unchecked(const SparseVec& v) const {
  SparseVec r = denominator_.reduce(v), out;
  for (std::size_t k = 0; k < pivots_.size(); ++k) {
    auto it = r.find(pivots_[k]);
    if (it != r.end()) out.emplace(k, it->second);
  }
  return out;
}

SparseVec SubquotientCoordinates::coordinates(const SparseVec& v) const {
  SparseVec r = denominator_.reduce(v);
  SparseVec out = coordinates_unchecked(v);
  for (const auto& [k, c] : out) axpy(r, -c, reps_[k]);
  if (!r.empty()) throw std::invalid_argument("vector is outside the subquotient");
  return out;
}

}  // namespace malcev
