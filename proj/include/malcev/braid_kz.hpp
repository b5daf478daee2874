#pragma once

// Configuration spaces of n points in C: the Drinfeld-Kohno Lie algebra, the KZ
// form, geometric braid generators, and holonomy of braid words in S_n x| U_N.

#include "malcev/relcomp.hpp"
#include "malcev/transport.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace malcev {

struct BraidLetter {
  std::size_t generator = 1;  // 1..n-1
  int exponent = 1;           // +1 or -1

  friend bool operator==(const BraidLetter& a, const BraidLetter& b) {
    return a.generator == b.generator && a.exponent == b.exponent;
  }
};

struct BraidWord {
  std::size_t strands = 2;
  std::vector<BraidLetter> letters;

  /// Parses "s1 s2^-1 s3"; s_i^k expands to |k| letters. Throws on malformed tokens.
  static BraidWord parse(std::size_t strands, const std::string& text);
  std::string render() const;
  BraidWord concat(const BraidWord& other) const;
  BraidWord inverse() const;
  /// Product of the letters' transpositions from left to right, composed as (p q)(k) = p(q(k)).
  std::vector<std::size_t> permutation() const;
};

/// Generators X_ij (i < j), quadratic relations, truncated at N.
LiePresentation drinfeld_kohno_presentation(std::size_t n, int N);
std::shared_ptr<const GradedNilpotentLie> drinfeld_kohno(std::size_t n, int N);
std::string dk_label(std::size_t i, std::size_t j);  // 1-based, e.g. X12

/// Everything needed for holonomy computations on n strands at truncation N.
class KZSystem {
 public:
  KZSystem(std::size_t n, int N);

  std::size_t strands() const { return n_; }
  int truncation() const { return N_; }
  const NilpotentQuotient& quotient() const { return *quotient_; }
  std::shared_ptr<const GradedNilpotentLie> lie() const { return quotient_->lie(); }
  std::shared_ptr<const Envelope> envelope() const { return env_; }
  std::shared_ptr<const FiniteGroup> group() const { return group_; }
  const SemidirectContext& context() const { return *context_; }
  const LieValuedOneForm& form() const { return form_; }
  Point basepoint() const;
  /// Quotient index of X_ij (0-based strands, either order).
  std::size_t generator(std::size_t i, std::size_t j) const;
  /// Generator permutation X_ab -> X_{s(a) s(b)} for a group element.
  GeneratorAction action(std::size_t s) const;

 private:
  std::size_t n_;
  int N_;
  std::shared_ptr<NilpotentQuotient> quotient_;
  std::shared_ptr<const Envelope> env_;
  std::shared_ptr<const FiniteGroup> group_;
  std::shared_ptr<SemidirectContext> context_;
  LieValuedOneForm form_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index_;
};

/// sum_{i<j} dlog(x_i - x_j) X_ij with coefficients in q, whose generators must be named dk_label(i, j).
LieValuedOneForm kz_form(const NilpotentQuotient& q, std::size_t n);

/// sigma_i: strands i and i+1 (1-based) exchange along counterclockwise half circles
/// of radius 1/2 about their midpoint, starting at the basepoint (1, ..., n).
struct GeneratorPath {
  PiecewisePath path;
  std::vector<std::size_t> permutation;
};
GeneratorPath generator_path(std::size_t i, std::size_t n);

/// The lift of a braid word to ordered configurations starting at (1, ..., n),
/// together with the group element it ends on.
struct LiftedBraid {
  PiecewisePath path;
  std::size_t permutation = 0;  // index in FiniteGroup::symmetric(n)
};
LiftedBraid lift_braid(const BraidWord& w, const FiniteGroup& symmetric_group);

struct BraidHolonomy {
  SemidirectElement element;  // (s, u) with s u the holonomy
  TransportResult raw;        // transport along the lift
};
BraidHolonomy braid_holonomy(const KZSystem& kz, const BraidWord& w, const OdeOptions& opt = {});

/// sigma^* omega = Ad(sigma) omega for every sigma in S_n, in exact arithmetic.
EquivarianceReport check_equivariance(const KZSystem& kz);
/// Pullback of a dlog-affine form along x -> sigma . x, (sigma . x)_k = x_{sigma^-1(k)}.
LieValuedOneForm pullback_by_permutation(const LieValuedOneForm& w, const std::vector<std::size_t>& perm);

/// Half the signed number of crossings between each pair of strands (0-based, i < j).
std::map<std::pair<std::size_t, std::size_t>, Rational> linking_numbers(const BraidWord& w);

}  // namespace malcev
