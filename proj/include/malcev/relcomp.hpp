#pragma once

// Finite reductive layer: irreducible representations, the Peter-Weyl check,
// the semidirect product S x| U_N, relative-completion representations of loops,
// and Lie algebras read off from bar-construction coordinate rings.

#include "malcev/bar.hpp"
#include "malcev/envelope.hpp"
#include "malcev/finite_group.hpp"
#include "malcev/transport.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace malcev {

/// Representation g -> R(g) with R(gh) = R(g) R(h). Matrices are row-major.
struct Irrep {
  std::string label;
  std::size_t dim = 0;
  std::vector<std::vector<Rational>> exact;   // per group element; empty when not rational
  std::vector<std::vector<Complex>> numeric;  // per group element

  bool is_exact() const { return !exact.empty(); }
  Complex character(std::size_t g) const;
  static Irrep from_exact(std::string label, std::size_t dim, std::vector<std::vector<Rational>> matrices);
};

/// Young seminormal form, one irrep per partition of n, for groups built by FiniteGroup::symmetric.
std::vector<Irrep> symmetric_irreps(const FiniteGroup& G);
/// The n characters of FiniteGroup::cyclic(n): g^j -> exp(2 pi i jk / n).
std::vector<Irrep> cyclic_irreps(const FiniteGroup& G);
/// Partitions of n in decreasing lexicographic order.
std::vector<std::vector<int>> partitions(int n);

struct PeterWeylReport {
  bool ok = true;
  std::vector<std::size_t> dims;
  std::size_t sum_of_squares = 0;
  std::size_t rank = 0;  // of the matrix-entry map to functions on S
  bool exact = true;
  std::vector<std::string> problems;
};

/// Multiplicativity, irreducibility (<chi, chi> = 1), pairwise distinctness,
/// sum of squared dimensions and the rank of the matrix-entry map.
PeterWeylReport peter_weyl_check(const FiniteGroup& G, const std::vector<Irrep>& irreps);

/// Action of S on U_N by Lie automorphisms: ad[g][j] is the image of Lie basis element j.
class SemidirectContext {
 public:
  SemidirectContext(std::shared_ptr<const FiniteGroup> group, std::shared_ptr<const Envelope> env,
                    std::vector<std::vector<LieElement>> ad);
  /// Builds Ad from generator permutations, one per group element.
  static SemidirectContext from_generator_actions(std::shared_ptr<const FiniteGroup> group,
                                                  std::shared_ptr<const Envelope> env, const NilpotentQuotient& q,
                                                  const std::vector<GeneratorAction>& actions);

  const FiniteGroup& group() const { return *group_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }
  std::shared_ptr<const Envelope> envelope() const { return env_; }
  const std::vector<LieElement>& ad(std::size_t g) const { return ad_[g]; }
  ComplexSeries apply(std::size_t g, const ComplexSeries& u) const { return apply_lie_map(u, ad_[g]); }
  LieElement apply(std::size_t g, const LieElement& x) const;

 private:
  std::shared_ptr<const FiniteGroup> group_;
  std::shared_ptr<const Envelope> env_;
  std::vector<std::vector<LieElement>> ad_;
};

/// (s, u) stands for the product s u; multiplication is (s1 s2, Ad(s2^-1)(u1) u2).
struct SemidirectElement {
  std::size_t s = 0;
  ComplexSeries u;
};

SemidirectElement semidirect_identity(const SemidirectContext& ctx);
/// Throws when an input is not grouplike at tol.
SemidirectElement semidirect_multiply(const SemidirectContext& ctx, const SemidirectElement& a,
                                      const SemidirectElement& b, double tol = 1e-8);
SemidirectElement semidirect_inverse(const SemidirectContext& ctx, const SemidirectElement& a);
double semidirect_distance(const SemidirectElement& a, const SemidirectElement& b);

/// Raw holonomy (rho, T) composes as (s1 s2, T1 Ad(s1)(T2)); this converts it to (s, Ad(s^-1) T).
SemidirectElement from_raw_holonomy(const SemidirectContext& ctx, std::size_t s, const ComplexSeries& T);

struct EquivarianceReport {
  bool ok = true;
  std::string certificate;
};

/// Scalar letter up to the identities dlog(c l) = dlog(l) and linearity of poly letters.
struct FormKey {
  int kind = 0;  // 0 dlog, 1 poly monomial
  std::size_t coordinate = 0;
  std::vector<int> exponent;
  std::vector<Complex> affine;  // constant then gradient, leading gradient entry 1

  friend bool operator<(const FormKey& a, const FormKey& b);
  friend bool operator==(const FormKey& a, const FormKey& b) {
    return a.kind == b.kind && a.coordinate == b.coordinate && a.exponent == b.exponent && a.affine == b.affine;
  }
  std::string render() const;
};
/// Canonical term set of a Lie-valued form: key -> Lie coordinates (complex).
using CanonicalForm = std::map<FormKey, std::map<std::size_t, Complex>>;
CanonicalForm canonical_form(const LieValuedOneForm& w);
/// Empty when the forms agree, otherwise a description of the first difference.
std::string form_difference(const LieValuedOneForm& a, const LieValuedOneForm& b);
/// Coefficients replaced by their images under a Lie map.
LieValuedOneForm map_coefficients(const LieValuedOneForm& w, const std::vector<LieElement>& images);
/// For sheeted forms: the form on sheet h s equals Ad(h) of the form on sheet s, exactly.
EquivarianceReport check_sheet_equivariance(const SemidirectContext& ctx, const SheetedLieForm& omega);

/// gamma -> (rho(gamma), transport of the lift), in the semidirect convention.
/// Rejects forms that fail the equivariance check.
SemidirectElement relative_rep(const SemidirectContext& ctx, const SheetedPath& loop, const SheetedLieForm& omega,
                               const OdeOptions& opt = {});

/// Dual Lie algebra of the indecomposables of H^0 of the bar construction.
/// Throws when the requested degree exceeds the cap used for h.
std::shared_ptr<const GradedNilpotentLie> lie_from_coordinate_ring(const BarComplex& bar, const H0Result& h,
                                                                   std::size_t degree);

/// Per irrep V of the model's group, three computations of the V-part of the first homology of U.
struct IsotypicReport {
  std::vector<std::string> labels;
  std::vector<std::size_t> irrep_dims;
  std::vector<std::size_t> character_route;             // (H^1(A) (x) V)^S via characters
  std::vector<std::optional<std::size_t>> invariant_route;  // H^1 of (A (x) V)^S, exact irreps only
  std::vector<std::size_t> gr_h1_multiplicity;           // multiplicity of V in Gr H_1(U) from the Q_1 action
  std::vector<std::size_t> gr_h1_isotypic_dim;           // multiplicity times dim V
  bool consistent = true;
};

IsotypicReport isotypic_h1(std::shared_ptr<const DGAModel> model, const std::vector<Irrep>& irreps);

}  // namespace malcev
