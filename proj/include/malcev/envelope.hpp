#pragma once

// Truncated universal enveloping algebras of graded nilpotent Lie algebras in a
// PBW basis, with series arithmetic over exact rationals or complex doubles.

#include "malcev/free_lie.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace malcev {

using Complex = std::complex<double>;

/// Non-decreasing sequence of Lie basis indices.
using Monomial = std::vector<std::size_t>;

class Envelope {
 public:
  /// truncation must not exceed the Lie algebra's truncation.
  Envelope(std::shared_ptr<const GradedNilpotentLie> lie, int truncation);

  const GradedNilpotentLie& lie() const { return *lie_; }
  std::shared_ptr<const GradedNilpotentLie> lie_ptr() const { return lie_; }
  int truncation() const { return truncation_; }

  /// Monomials are ordered by degree, then length, then lexicographically; index 0 is 1.
  std::size_t size() const { return monomials_.size(); }
  const Monomial& monomial(std::size_t i) const { return monomials_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  std::optional<std::size_t> index_of(const Monomial& m) const;
  /// Index of the length-one monomial for Lie basis element j (nullopt above truncation).
  std::optional<std::size_t> lie_monomial(std::size_t j) const { return lie_monomial_[j]; }
  /// Monomial with its last letter removed; only valid for i > 0.
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::vector<std::size_t> dims_by_degree() const;
  std::string label(std::size_t i) const;

  /// PBW coordinates of monomial(u) * x_j, truncated at degree N.
  const SparseVec& right_multiply(std::size_t u, std::size_t j) const { return right_[u * lie_->dim() + j]; }
  const std::vector<std::pair<std::size_t, double>>& right_multiply_real(std::size_t u, std::size_t j) const {
    return right_real_[u * lie_->dim() + j];
  }

  struct CoproductTerm {
    std::size_t left, right;
    Rational multiplicity;
  };
  /// Delta of a PBW monomial, as a sum over sub-multisets of its letters.
  const std::vector<CoproductTerm>& coproduct_terms(std::size_t i) const { return coproduct_[i]; }

 private:
  const SparseVec& compute_right(std::size_t u, std::size_t j, std::vector<char>& state);

  std::shared_ptr<const GradedNilpotentLie> lie_;
  int truncation_;
  std::vector<Monomial> monomials_;
  std::vector<int> degrees_;
  std::vector<std::size_t> parent_;
  std::map<Monomial, std::size_t> index_;
  std::vector<std::optional<std::size_t>> lie_monomial_;
  std::vector<SparseVec> right_;
  std::vector<std::vector<std::pair<std::size_t, double>>> right_real_;
  std::vector<std::vector<CoproductTerm>> coproduct_;
};

template <class C>
C coeff_from(const Rational& r);
template <>
inline Rational coeff_from<Rational>(const Rational& r) {
  return r;
}
template <>
inline Complex coeff_from<Complex>(const Rational& r) {
  return Complex(r.get_d(), 0.0);
}

inline double magnitude(const Rational& r) { return std::abs(r.get_d()); }
inline double magnitude(const Complex& z) { return std::abs(z); }

/// Element of the truncated enveloping algebra, dense over the PBW basis.
template <class C>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::shared_ptr<const Envelope> env)
      : env_(std::move(env)), coeffs_(env_->size(), C(0)) {}

  static TruncatedSeries one(std::shared_ptr<const Envelope> env);
  static TruncatedSeries from_lie(std::shared_ptr<const Envelope> env, const LieElement& x);
  static TruncatedSeries from_lie(std::shared_ptr<const Envelope> env, const std::vector<C>& lie_coords);

  const Envelope& envelope() const { return *env_; }
  const std::shared_ptr<const Envelope>& envelope_ptr() const { return env_; }
  std::size_t size() const { return coeffs_.size(); }
  C& operator[](std::size_t i) { return coeffs_[i]; }
  const C& operator[](std::size_t i) const { return coeffs_[i]; }
  const std::vector<C>& coeffs() const { return coeffs_; }
  std::vector<C>& coeffs() { return coeffs_; }
  const C& constant() const { return coeffs_[0]; }

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const C& c);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const C& c, TruncatedSeries a) { return a *= c; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.env_ == b.env_ && a.coeffs_ == b.coeffs_;
  }

  /// this * x for a Lie element given in Lie-basis coordinates.
  TruncatedSeries right_multiply_lie(const std::vector<std::pair<std::size_t, C>>& x) const;
  /// Sorted (label, coefficient) list of the nonzero terms.
  std::vector<std::pair<std::string, C>> terms(double drop_below = 0.0) const;

 private:
  std::shared_ptr<const Envelope> env_;
  std::vector<C> coeffs_;
};

template <class C>
TruncatedSeries<C> multiply(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b);
template <class C>
TruncatedSeries<C> operator*(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
  return multiply(a, b);
}

/// Requires zero constant term.
template <class C>
TruncatedSeries<C> exp(const TruncatedSeries<C>& x);
/// Requires constant term 1 (exactly for rationals, within 1e-12 for complex).
template <class C>
TruncatedSeries<C> log(const TruncatedSeries<C>& g);
/// Requires nonzero constant term.
template <class C>
TruncatedSeries<C> inverse(const TruncatedSeries<C>& g);

template <class C>
struct CoproductValue {
  std::map<std::pair<std::size_t, std::size_t>, C> terms;
};

template <class C>
CoproductValue<C> coproduct(const TruncatedSeries<C>& a);
/// Maximum coefficient of Delta(g) - g (x) g over pairs of total degree <= N.
template <class C>
double grouplike_defect(const TruncatedSeries<C>& g);
template <class C>
bool is_grouplike(const TruncatedSeries<C>& g, double tol);

/// Image under the algebra automorphism induced by a Lie automorphism given on
/// basis elements (images[j] is the image of x_j in Lie coordinates).
template <class C>
TruncatedSeries<C> apply_lie_map(const TruncatedSeries<C>& a, const std::vector<LieElement>& images);

/// Lie-basis coordinates of the length-one part and the largest coefficient
/// outside it (zero exactly when the series lies in the Lie algebra).
template <class C>
std::pair<std::vector<C>, double> lie_part(const TruncatedSeries<C>& a);

template <class C>
double max_abs_diff(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b);

using RationalSeries = TruncatedSeries<Rational>;
using ComplexSeries = TruncatedSeries<Complex>;

ComplexSeries to_complex(const RationalSeries& s);

}  // namespace malcev
