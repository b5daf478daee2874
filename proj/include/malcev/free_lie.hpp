#pragma once

// Free graded Lie algebras on weighted generators (Lyndon/Hall basis), graded
// nilpotent quotients by homogeneous ideals, and generator-permutation actions.

#include "malcev/exactla.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace malcev {

struct Generator {
  std::string name;
  int degree = 1;
};

/// Element of a graded Lie algebra in coordinates of its basis (Hall basis for a
/// free algebra, quotient basis for a GradedNilpotentLie).
struct LieElement {
  SparseVec terms;

  bool is_zero() const { return terms.empty(); }
  static LieElement basis(std::size_t i) { return LieElement{{{i, Rational(1)}}}; }

  LieElement& operator+=(const LieElement& o) {
    axpy(terms, 1, o.terms);
    return *this;
  }
  LieElement& operator-=(const LieElement& o) {
    axpy(terms, -1, o.terms);
    return *this;
  }
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(const Rational& c, const LieElement& a) {
    return LieElement{scaled(a.terms, c)};
  }
  friend bool operator==(const LieElement& a, const LieElement& b) { return a.terms == b.terms; }
};

/// Word in the free associative algebra on the generators.
using Word = std::vector<std::size_t>;
using TensorPoly = std::map<Word, Rational>;

TensorPoly tensor_multiply(const TensorPoly& a, const TensorPoly& b);

/// Nested bracket expression over generator names; a leaf has no children.
struct BracketExpr {
  std::string generator;
  std::vector<BracketExpr> children;  // empty or exactly two

  static BracketExpr leaf(std::string name) { return {std::move(name), {}}; }
  static BracketExpr bracket(BracketExpr a, BracketExpr b) {
    return {"", {std::move(a), std::move(b)}};
  }
};

struct LieTerm {
  Rational coefficient;
  BracketExpr word;
};
using LieExpression = std::vector<LieTerm>;

/// Permutation-with-signs of generators: generator g maps to sign * generator(target).
struct GeneratorAction {
  std::string label;
  std::vector<std::size_t> target;
  std::vector<int> sign;

  static GeneratorAction identity(std::size_t generators);
};

struct HallElement {
  Word word;
  int degree = 0;  // weighted
  std::optional<std::size_t> left, right;
  std::string label;
};

class FreeLieAlgebra {
 public:
  FreeLieAlgebra(std::vector<Generator> generators, int truncation);

  int truncation() const { return truncation_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::optional<std::size_t> generator_index(const std::string& name) const;

  std::size_t dim() const { return basis_.size(); }
  const HallElement& basis(std::size_t i) const { return basis_[i]; }
  std::vector<std::vector<std::size_t>> basis_by_degree() const;  // index 0 is degree 1
  std::vector<std::size_t> dims_by_degree() const;
  std::optional<std::size_t> index_of_word(const Word& w) const;

  LieElement generator(std::size_t g) const;
  /// Hall normal form of [a, b]; terms above the truncation are dropped.
  LieElement bracket(const LieElement& a, const LieElement& b) const;
  LieElement evaluate(const BracketExpr& expr) const;
  LieElement evaluate(const LieExpression& expr) const;
  /// Single weighted degree of a nonzero homogeneous element, nullopt otherwise.
  std::optional<int> homogeneous_degree(const LieElement& x) const;

  TensorPoly to_tensor(const LieElement& x) const;
  /// Inverse of to_tensor on Lie polynomials; throws if the input is not a Lie polynomial.
  LieElement from_tensor(TensorPoly p) const;

  LieElement act(const GeneratorAction& sigma, const LieElement& x) const;
  void check_action(const GeneratorAction& sigma) const;

  int word_degree(const Word& w) const;

 private:
  std::vector<Generator> generators_;
  int truncation_;
  std::vector<HallElement> basis_;
  std::map<Word, std::size_t> index_;
  std::vector<TensorPoly> expansion_;
};

bool is_lyndon(const Word& w);

/// Graded nilpotent Lie algebra given by structure constants in a graded basis.
class GradedNilpotentLie {
 public:
  GradedNilpotentLie(int truncation, std::vector<std::string> labels, std::vector<int> degrees,
                     const std::map<std::pair<std::size_t, std::size_t>, LieElement>& brackets);

  int truncation() const { return truncation_; }
  std::size_t dim() const { return labels_.size(); }
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::vector<std::size_t> dims_by_degree() const;

  const LieElement& bracket_basis(std::size_t i, std::size_t j) const {
    return table_[i * dim() + j];
  }
  LieElement bracket(const LieElement& a, const LieElement& b) const;

  struct Report {
    bool ok = true;
    std::vector<std::string> violations;
  };
  /// Antisymmetry, grading and Jacobi on all basis triples.
  Report validate() const;

 private:
  int truncation_;
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  std::vector<LieElement> table_;
};

struct LiePresentation {
  std::vector<Generator> generators;
  std::vector<LieExpression> relations;
  int truncation = 1;
};

class NilpotentQuotient {
 public:
  explicit NilpotentQuotient(const LiePresentation& presentation);

  const FreeLieAlgebra& free_algebra() const { return *free_; }
  std::shared_ptr<const GradedNilpotentLie> lie() const { return lie_; }

  LieElement project(const LieElement& free_element) const;
  LieElement lift(const LieElement& quotient_element) const;
  bool in_ideal(const LieElement& free_element) const;
  /// Induced action on quotient coordinates; the action must preserve the ideal.
  LieElement act(const GeneratorAction& sigma, const LieElement& quotient_element) const;
  /// Images of all defining relations under sigma lie in the ideal.
  bool preserves_relations(const GeneratorAction& sigma) const;

  const std::vector<LieElement>& relations() const { return relations_; }
  std::vector<std::size_t> ideal_dims() const;
  /// Per degree: ideal dimension not accounted for by brackets of generators with
  /// lower-degree ideal elements, i.e. degrees where minimal relations live.
  std::vector<std::size_t> new_relation_dims() const { return new_relations_; }
  /// Quotient index of a generator (nullopt when the generator is killed).
  std::optional<std::size_t> generator(std::size_t g) const;

 private:
  std::shared_ptr<FreeLieAlgebra> free_;
  std::shared_ptr<GradedNilpotentLie> lie_;
  std::vector<LieElement> relations_;
  std::vector<EchelonBasis> ideal_;           // by degree - 1
  std::vector<std::size_t> new_relations_;    // by degree - 1
  std::map<std::size_t, std::size_t> quotient_of_hall_;
  std::vector<std::size_t> hall_of_quotient_;
};

NilpotentQuotient nilpotent_quotient(const LiePresentation& presentation);

/// Per-degree Hall word lists for the free Lie algebra on the given generators.
std::vector<std::vector<Word>> hall_basis(const std::vector<Generator>& generators, int degree_cap);

}  // namespace malcev
