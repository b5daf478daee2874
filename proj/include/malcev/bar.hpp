#pragma once

// Finite connected commutative DGA models and the two-sided reduced bar
// construction B(M, A, N): differential, shuffle product, H^0 with its bar
// filtration, Eilenberg-Moore E1 dimensions, the coproduct with O(S)
// coefficients, and indecomposables with their cobracket.

#include "malcev/exactla.hpp"
#include "malcev/finite_group.hpp"
#include "malcev/free_lie.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace malcev {

class DGAModel {
 public:
  /// products lists a*b for basis pairs; unit products and graded-commutative
  /// partners are filled in when absent. Basis elements may appear in any order.
  DGAModel(std::vector<std::string> labels, std::vector<int> degrees, std::size_t unit,
           std::vector<SparseVec> differential, const std::map<std::pair<std::size_t, std::size_t>, SparseVec>& products);

  std::size_t dim() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  std::size_t unit() const { return unit_; }
  int max_degree() const;
  std::optional<std::size_t> index_of(const std::string& label) const;
  std::vector<std::size_t> basis_in_degree(int k) const;

  const SparseVec& d(std::size_t i) const { return d_[i]; }
  const SparseVec& product(std::size_t i, std::size_t j) const { return product_[i * dim() + j]; }
  SparseVec d(const SparseVec& x) const;
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
  /// Augmentation to the ground field: the unit coefficient of the degree-0 part.
  Rational augmentation(std::size_t i) const { return i == unit_ ? Rational(1) : Rational(0); }

  /// Right action of a finite group by DGA automorphisms; images[g][i] = e_i . g.
  void set_action(std::shared_ptr<const FiniteGroup> group, std::vector<std::vector<SparseVec>> images);
  bool has_action() const { return group_ != nullptr; }
  const FiniteGroup& group() const { return *group_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }
  const SparseVec& act(std::size_t i, std::size_t g) const { return action_[g][i]; }
  SparseVec act(const SparseVec& x, std::size_t g) const;

  struct Report {
    bool ok = true;
    std::vector<std::string> violations;
  };
  /// d^2 = 0, degree of d, Leibniz, graded commutativity, associativity, unit,
  /// connectedness, and (when present) that the action is by DGA automorphisms.
  Report validate() const;

  /// Cohomology in degree k: cocycles modulo coboundaries.
  SubquotientCoordinates cohomology(int k) const;
  std::vector<std::size_t> cohomology_dims() const;  // degrees 0..max_degree
  /// Matrix of the action of g on H^k in the basis of cohomology(k) (column = image).
  RatMatrix cohomology_action(int k, std::size_t g) const;

 private:
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  std::size_t unit_;
  std::vector<SparseVec> d_;
  std::vector<SparseVec> product_;
  std::shared_ptr<const FiniteGroup> group_;
  std::vector<std::vector<SparseVec>> action_;
};

/// Module on one end of the bar construction.
enum class SideKind {
  Ground,        // the ground field, A acting through the augmentation
  Algebra,       // A itself
  Coefficients,  // O(S) for the model's group, A acting through the augmentation
};

/// Word m[a_1|...|a_r]n; letters are positive-degree model basis indices.
struct BarWord {
  std::size_t left = 0;
  std::vector<std::size_t> letters;
  std::size_t right = 0;

  friend bool operator<(const BarWord& a, const BarWord& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    if (a.letters != b.letters) return a.letters < b.letters;
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  }
  friend bool operator==(const BarWord& a, const BarWord& b) {
    return a.left == b.left && a.letters == b.letters && a.right == b.right;
  }
};

using BarElement = std::map<BarWord, Rational>;

void add_term(BarElement& x, const BarWord& w, const Rational& c);
void axpy(BarElement& y, const Rational& a, const BarElement& x);

class BarComplex {
 public:
  BarComplex(std::shared_ptr<const DGAModel> model, SideKind left, SideKind right);

  const DGAModel& model() const { return *model_; }
  std::shared_ptr<const DGAModel> model_ptr() const { return model_; }
  SideKind left() const { return left_; }
  SideKind right() const { return right_; }

  std::size_t side_dim(SideKind side) const;
  int side_degree(SideKind side, std::size_t i) const;
  std::string side_label(SideKind side, std::size_t i) const;

  int total_degree(const BarWord& w) const;
  std::string render(const BarWord& w) const;
  std::string render(const BarElement& x) const;

  BarElement differential(const BarElement& x) const;
  /// Requires Ground or Coefficients on both ends.
  BarElement shuffle(const BarElement& x, const BarElement& y) const;

  /// All words of the given total degree with at most max_length letters, in BarWord order.
  std::vector<BarWord> words(int total_degree, std::size_t max_length) const;
  BarElement random_element(std::mt19937_64& rng, std::size_t max_length, std::size_t terms) const;

 private:
  SparseVec side_d(SideKind side, std::size_t i) const;
  SparseVec left_act(std::size_t m, std::size_t a) const;   // m . a
  SparseVec right_act(std::size_t a, std::size_t n) const;  // a . n

  std::shared_ptr<const DGAModel> model_;
  SideKind left_, right_;
};

struct H0Result {
  std::size_t cap = 0;
  std::vector<std::size_t> new_dims;    // per bar degree 0..cap
  std::vector<std::size_t> cumulative;  // dim of H^0 intersected with B_s
  std::vector<BarElement> basis;        // adapted to the bar filtration
  std::vector<std::size_t> filtration;  // bar degree of each basis element
  /// With O(S) coefficients: whether H^0 equals H^0(trivial) tensor O(S).
  std::optional<bool> tensor_decomposition;
};

/// Degree-0 cocycles in bar degrees <= cap. Columns of the differential are built in parallel.
H0Result h0(const BarComplex& bar, std::size_t cap);

/// E1^{-s,t} dimensions for s = 0..max_s: dims[s][t] from H(M) (x) H^+(A)^{(x)s} (x) H(N).
std::vector<std::vector<std::size_t>> em_e1_dims(const BarComplex& bar, std::size_t max_s);

/// Two-factor value of the coproduct; the left end must be Ground.
using BarTensor = std::map<std::pair<BarWord, BarWord>, Rational>;
BarTensor coproduct_h0(const BarComplex& bar, const BarElement& x);

struct Indecomposables {
  std::size_t cap = 0;
  std::vector<std::size_t> dims;          // Q_r for r = 1..cap (index r - 1)
  std::vector<BarElement> representatives;
  std::vector<std::size_t> degree;        // bar degree of each representative
  /// cobracket[k]: coefficients of Delta^c(q_k) on pairs (q_i, q_j).
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Rational>> cobracket;
  std::shared_ptr<GradedNilpotentLie> dual_lie;
  /// With a group action on the model: matrix of g on Q (column = image).
  std::vector<RatMatrix> action;
};

/// Requires a bar complex with Ground on both ends and h0 of that complex.
Indecomposables indecomposables_and_cobracket(const BarComplex& bar, const H0Result& h);

}  // namespace malcev
