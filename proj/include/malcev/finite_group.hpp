#pragma once

// Finite groups given by multiplication tables.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace malcev {

class FiniteGroup {
 public:
  /// table[a][b] is the index of a*b. Throws unless the table defines a group.
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> table);

  /// Permutations of {0..n-1} with (p*q)(k) = p(q(k)); the identity is element 0.
  static FiniteGroup symmetric(int n);
  static FiniteGroup cyclic(int n);
  static FiniteGroup trivial() { return cyclic(1); }

  std::size_t order() const { return labels_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::string& label(std::size_t a) const { return labels_[a]; }
  std::optional<std::size_t> index_of(const std::string& label) const;
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }

  /// Conjugacy class index of each element; classes numbered by first appearance.
  const std::vector<std::size_t>& class_of() const { return class_of_; }
  std::size_t class_count() const { return class_count_; }

  /// Images of 0..n-1 when the group was built by symmetric(n).
  const std::vector<std::size_t>& permutation(std::size_t a) const;
  std::optional<std::size_t> index_of_permutation(const std::vector<std::size_t>& perm) const;
  bool is_symmetric() const { return !perms_.empty(); }

 private:
  void finish();

  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> table_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> class_of_;
  std::size_t class_count_ = 0;
  std::vector<std::vector<std::size_t>> perms_;
};

/// Cycle notation with 1-based points, "e" for the identity.
std::string cycle_label(const std::vector<std::size_t>& perm);

}  // namespace malcev
