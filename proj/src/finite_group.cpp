#include "malcev/finite_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace malcev {

FiniteGroup::FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  finish();
}

void FiniteGroup::finish() {
  const std::size_t n = labels_.size();
  if (n == 0) throw std::invalid_argument("group must be nonempty");
  if (table_.size() != n) throw std::invalid_argument("multiplication table has wrong size");
  for (const auto& row : table_) {
    if (row.size() != n) throw std::invalid_argument("multiplication table has wrong size");
    std::vector<bool> seen(n, false);
    for (auto x : row) {
      if (x >= n || seen[x]) throw std::invalid_argument("multiplication table row is not a permutation");
      seen[x] = true;
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("multiplication table has no identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw std::invalid_argument("multiplication table is not associative");
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;
  class_of_.assign(n, n);
  class_count_ = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (class_of_[a] != n) continue;
    for (std::size_t g = 0; g < n; ++g) class_of_[table_[table_[g][a]][inverse_[g]]] = class_count_;
    ++class_count_;
  }
}

std::optional<std::size_t> FiniteGroup::index_of(const std::string& label) const {
  for (std::size_t a = 0; a < labels_.size(); ++a)
    if (labels_[a] == label) return a;
  return std::nullopt;
}

std::string cycle_label(const std::vector<std::size_t>& perm) {
  std::string out;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s] || perm[s] == s) continue;
    out += "(";
    for (std::size_t k = s; !seen[k]; k = perm[k]) {
      seen[k] = true;
      if (out.back() != '(') out += " ";
      out += std::to_string(k + 1);
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("symmetric group degree must be in 1..7");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = i;
  std::vector<std::vector<std::size_t>> table(perms.size(), std::vector<std::size_t>(perms.size()));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < perms.size(); ++a) {
    labels.push_back(cycle_label(perms[a]));
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<std::size_t> c(perms[a].size());
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = perms[a][perms[b][k]];
      table[a][b] = index.at(c);
    }
  }
  FiniteGroup g(std::move(labels), std::move(table));
  g.perms_ = std::move(perms);
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  auto m = static_cast<std::size_t>(n);
  std::vector<std::vector<std::size_t>> table(m, std::vector<std::size_t>(m));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < m; ++a) {
    labels.push_back(a == 0 ? "e" : "g^" + std::to_string(a));
    for (std::size_t b = 0; b < m; ++b) table[a][b] = (a + b) % m;
  }
  return FiniteGroup(std::move(labels), std::move(table));
}

const std::vector<std::size_t>& FiniteGroup::permutation(std::size_t a) const {
  if (perms_.empty()) throw std::logic_error("group has no permutation realization");
  return perms_.at(a);
}

std::optional<std::size_t> FiniteGroup::index_of_permutation(const std::vector<std::size_t>& perm) const {
  for (std::size_t a = 0; a < perms_.size(); ++a)
    if (perms_[a] == perm) return a;
  return std::nullopt;
}

}  // namespace malcev
