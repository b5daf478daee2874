#include "malcev/free_lie.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace malcev {

TensorPoly tensor_multiply(const TensorPoly& a, const TensorPoly& b) {
  TensorPoly out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      auto& slot = out[w];
      slot += ca * cb;
      if (slot == 0) out.erase(w);
    }
  }
  return out;
}

GeneratorAction GeneratorAction::identity(std::size_t generators) {
  GeneratorAction a;
  a.label = "e";
  a.target.resize(generators);
  a.sign.assign(generators, 1);
  for (std::size_t g = 0; g < generators; ++g) a.target[g] = g;
  return a;
}

bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    // w must be strictly smaller than each proper suffix
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<long>(i), w.end()))
      return false;
  }
  return true;
}

namespace {

std::vector<Word> lyndon_words(std::size_t letters, std::size_t max_length) {
  std::vector<Word> out;
  if (letters == 0 || max_length == 0) return out;
  Word w{0};
  while (!w.empty()) {
    out.push_back(w);
    std::size_t m = w.size();
    while (w.size() < max_length) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == letters - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return out;
}

}  // namespace

FreeLieAlgebra::FreeLieAlgebra(std::vector<Generator> generators, int truncation)
    : generators_(std::move(generators)), truncation_(truncation) {
  if (truncation_ < 1) throw std::invalid_argument("truncation must be >= 1");
  std::set<std::string> names;
  int min_degree = truncation_ + 1;
  for (const auto& g : generators_) {
    if (g.degree < 1) throw std::invalid_argument("generator '" + g.name + "' has non-positive degree");
    if (!names.insert(g.name).second) throw std::invalid_argument("duplicate generator '" + g.name + "'");
    min_degree = std::min(min_degree, g.degree);
  }
  std::size_t max_length = min_degree > truncation_ ? 0 : static_cast<std::size_t>(truncation_ / min_degree);
  std::vector<Word> words;
  for (auto& w : lyndon_words(generators_.size(), max_length))
    if (word_degree(w) <= truncation_) words.push_back(std::move(w));
  std::stable_sort(words.begin(), words.end(), [this](const Word& a, const Word& b) {
    int da = word_degree(a), db = word_degree(b);
    if (da != db) return da < db;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  for (auto& w : words) {
    HallElement h;
    h.word = w;
    h.degree = word_degree(w);
    TensorPoly expansion;
    if (w.size() == 1) {
      h.label = generators_[w[0]].name;
      expansion[w] = 1;
    } else {
      std::size_t split = 1;
      while (!is_lyndon(Word(w.begin() + static_cast<long>(split), w.end()))) ++split;
      Word u(w.begin(), w.begin() + static_cast<long>(split)), v(w.begin() + static_cast<long>(split), w.end());
      h.left = index_.at(u);
      h.right = index_.at(v);
      h.label = "[" + basis_[*h.left].label + "," + basis_[*h.right].label + "]";
      const auto& eu = expansion_[*h.left];
      const auto& ev = expansion_[*h.right];
      expansion = tensor_multiply(eu, ev);
      for (const auto& [word, c] : tensor_multiply(ev, eu)) {
        auto& slot = expansion[word];
        slot -= c;
        if (slot == 0) expansion.erase(word);
      }
    }
    index_.emplace(w, basis_.size());
    basis_.push_back(std::move(h));
    expansion_.push_back(std::move(expansion));
  }
}

int FreeLieAlgebra::word_degree(const Word& w) const {
  int d = 0;
  for (auto letter : w) d += generators_.at(letter).degree;
  return d;
}

std::optional<std::size_t> FreeLieAlgebra::generator_index(const std::string& name) const {
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (generators_[g].name == name) return g;
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> FreeLieAlgebra::basis_by_degree() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(truncation_));
  for (std::size_t i = 0; i < basis_.size(); ++i)
    out[static_cast<std::size_t>(basis_[i].degree - 1)].push_back(i);
  return out;
}

std::vector<std::size_t> FreeLieAlgebra::dims_by_degree() const {
  std::vector<std::size_t> out;
  for (const auto& d : basis_by_degree()) out.push_back(d.size());
  return out;
}

std::optional<std::size_t> FreeLieAlgebra::index_of_word(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LieElement FreeLieAlgebra::generator(std::size_t g) const {
  if (g >= generators_.size()) throw std::out_of_range("generator index out of range");
  auto idx = index_of_word(Word{g});
  if (!idx) return {};  // generator degree above truncation
  return LieElement::basis(*idx);
}

TensorPoly FreeLieAlgebra::to_tensor(const LieElement& x) const {
  TensorPoly out;
  for (const auto& [i, c] : x.terms) {
    for (const auto& [w, e] : expansion_.at(i)) {
      auto& slot = out[w];
      slot += c * e;
      if (slot == 0) out.erase(w);
    }
  }
  return out;
}

LieElement FreeLieAlgebra::from_tensor(TensorPoly p) const {
  LieElement out;
  for (auto it = p.begin(); it != p.end();) {
    if (word_degree(it->first) > truncation_)
      it = p.erase(it);
    else
      ++it;
  }
  while (!p.empty()) {
    const auto& [w, c] = *p.begin();
    auto idx = index_of_word(w);
    if (!idx) throw std::invalid_argument("tensor is not a Lie polynomial (leading word not Lyndon)");
    Rational coeff = c;
    out.terms[*idx] += coeff;
    for (const auto& [word, e] : expansion_[*idx]) {
      auto& slot = p[word];
      slot -= coeff * e;
      if (slot == 0) p.erase(word);
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = it->second == 0 ? out.terms.erase(it) : std::next(it);
  return out;
}

LieElement FreeLieAlgebra::bracket(const LieElement& a, const LieElement& b) const {
  if (a.is_zero() || b.is_zero()) return {};
  TensorPoly ta = to_tensor(a), tb = to_tensor(b);
  auto truncated = [this](const TensorPoly& x, const TensorPoly& y) {
    TensorPoly out;
    for (const auto& [wx, cx] : x) {
      int dx = word_degree(wx);
      for (const auto& [wy, cy] : y) {
        if (dx + word_degree(wy) > truncation_) continue;
        Word w = wx;
        w.insert(w.end(), wy.begin(), wy.end());
        auto& slot = out[w];
        slot += cx * cy;
        if (slot == 0) out.erase(w);
      }
    }
    return out;
  };
  TensorPoly ab = truncated(ta, tb);
  for (const auto& [w, c] : truncated(tb, ta)) {
    auto& slot = ab[w];
    slot -= c;
    if (slot == 0) ab.erase(w);
  }
  return from_tensor(std::move(ab));
}

LieElement FreeLieAlgebra::evaluate(const BracketExpr& expr) const {
  if (expr.children.empty()) {
    auto g = generator_index(expr.generator);
    if (!g) throw std::invalid_argument("unknown generator '" + expr.generator + "'");
    return generator(*g);
  }
  if (expr.children.size() != 2) throw std::invalid_argument("bracket expression must have two children");
  return bracket(evaluate(expr.children[0]), evaluate(expr.children[1]));
}

LieElement FreeLieAlgebra::evaluate(const LieExpression& expr) const {
  LieElement out;
  for (const auto& term : expr) out += term.coefficient * evaluate(term.word);
  return out;
}

std::optional<int> FreeLieAlgebra::homogeneous_degree(const LieElement& x) const {
  std::optional<int> d;
  for (const auto& [i, c] : x.terms) {
    if (d && *d != basis_[i].degree) return std::nullopt;
    d = basis_[i].degree;
  }
  return d;
}

void FreeLieAlgebra::check_action(const GeneratorAction& sigma) const {
  if (sigma.target.size() != generators_.size() || sigma.sign.size() != generators_.size())
    throw std::invalid_argument("action size does not match generator count");
  std::vector<bool> hit(generators_.size(), false);
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    auto t = sigma.target[g];
    if (t >= generators_.size() || hit[t]) throw std::invalid_argument("action is not a permutation");
    hit[t] = true;
    if (sigma.sign[g] != 1 && sigma.sign[g] != -1) throw std::invalid_argument("action sign must be +-1");
    if (generators_[t].degree != generators_[g].degree)
      throw std::invalid_argument("action does not preserve generator degrees");
  }
}

LieElement FreeLieAlgebra::act(const GeneratorAction& sigma, const LieElement& x) const {
  check_action(sigma);
  std::map<std::size_t, LieElement> memo;
  std::function<const LieElement&(std::size_t)> image = [&](std::size_t i) -> const LieElement& {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    const auto& h = basis_[i];
    LieElement img;
    if (!h.left) {
      auto g = h.word[0];
      img = Rational(sigma.sign[g]) * generator(sigma.target[g]);
    } else {
      img = bracket(image(*h.left), image(*h.right));
    }
    return memo.emplace(i, std::move(img)).first->second;
  };
  LieElement out;
  for (const auto& [i, c] : x.terms) out += c * image(i);
  return out;
}

std::vector<std::vector<Word>> hall_basis(const std::vector<Generator>& generators, int degree_cap) {
  FreeLieAlgebra free(generators, degree_cap);
  std::vector<std::vector<Word>> out(static_cast<std::size_t>(degree_cap));
  for (std::size_t i = 0; i < free.dim(); ++i)
    out[static_cast<std::size_t>(free.basis(i).degree - 1)].push_back(free.basis(i).word);
  return out;
}

// ---------------------------------------------------------------------------

GradedNilpotentLie::GradedNilpotentLie(int truncation, std::vector<std::string> labels, std::vector<int> degrees,
                                       const std::map<std::pair<std::size_t, std::size_t>, LieElement>& brackets)
    : truncation_(truncation), labels_(std::move(labels)), degrees_(std::move(degrees)) {
  if (labels_.size() != degrees_.size()) throw std::invalid_argument("labels/degrees size mismatch");
  for (int d : degrees_)
    if (d < 1 || d > truncation_) throw std::invalid_argument("basis degree outside 1..truncation");
  std::size_t n = labels_.size();
  table_.assign(n * n, LieElement{});
  for (const auto& [key, value] : brackets) {
    auto [i, j] = key;
    if (i >= n || j >= n) throw std::out_of_range("structure constant index out of range");
    table_[i * n + j] = value;
    // fill the antisymmetric partner only if it was not given explicitly
    if (!brackets.count({j, i})) table_[j * n + i] = Rational(-1) * value;
  }
}

std::vector<std::size_t> GradedNilpotentLie::dims_by_degree() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(truncation_), 0);
  for (int d : degrees_) ++out[static_cast<std::size_t>(d - 1)];
  return out;
}

LieElement GradedNilpotentLie::bracket(const LieElement& a, const LieElement& b) const {
  LieElement out;
  for (const auto& [i, ca] : a.terms)
    for (const auto& [j, cb] : b.terms) {
      const auto& t = bracket_basis(i, j);
      if (!t.is_zero()) axpy(out.terms, ca * cb, t.terms);
    }
  return out;
}

GradedNilpotentLie::Report GradedNilpotentLie::validate() const {
  Report r;
  std::size_t n = dim();
  auto fail = [&r](std::string msg) {
    r.ok = false;
    if (r.violations.size() < 20) r.violations.push_back(std::move(msg));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& t = bracket_basis(i, j);
      if (!(t + bracket_basis(j, i)).is_zero()) fail("antisymmetry fails at (" + labels_[i] + "," + labels_[j] + ")");
      for (const auto& [k, c] : t.terms) {
        if (k >= n || degrees_[k] != degrees_[i] + degrees_[j])
          fail("bracket (" + labels_[i] + "," + labels_[j] + ") leaves its degree");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (degrees_[i] + degrees_[j] + degrees_[k] > truncation_) continue;
        auto x = LieElement::basis(i), y = LieElement::basis(j), z = LieElement::basis(k);
        auto jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        if (!jac.is_zero()) fail("Jacobi fails at (" + labels_[i] + "," + labels_[j] + "," + labels_[k] + ")");
      }
  return r;
}

// ---------------------------------------------------------------------------

NilpotentQuotient::NilpotentQuotient(const LiePresentation& p)
    : free_(std::make_shared<FreeLieAlgebra>(p.generators, p.truncation)) {
  const auto N = static_cast<std::size_t>(p.truncation);
  std::vector<std::vector<LieElement>> by_degree(N);
  for (const auto& rel : p.relations) {
    LieElement r = free_->evaluate(rel);
    if (r.is_zero()) continue;
    auto d = free_->homogeneous_degree(r);
    if (!d) throw std::invalid_argument("relation is not homogeneous");
    by_degree[static_cast<std::size_t>(*d - 1)].push_back(r);
    relations_.push_back(std::move(r));
  }
  ideal_.resize(N);
  new_relations_.assign(N, 0);
  for (std::size_t d = 1; d <= N; ++d) {
    auto& ideal = ideal_[d - 1];
    for (std::size_t g = 0; g < free_->generators().size(); ++g) {
      auto e = static_cast<std::size_t>(free_->generators()[g].degree);
      if (e >= d) continue;
      LieElement gen = free_->generator(g);
      for (const auto& [pivot, row] : ideal_[d - e - 1].rows())
        ideal.insert(free_->bracket(gen, LieElement{row}).terms);
    }
    std::size_t from_brackets = ideal.size();
    for (const auto& r : by_degree[d - 1]) ideal.insert(r.terms);
    new_relations_[d - 1] = ideal.size() - from_brackets;
  }
  // Quotient basis: Hall elements that are not ideal pivots, in Hall order.
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (std::size_t i = 0; i < free_->dim(); ++i) {
    const auto& h = free_->basis(i);
    if (ideal_[static_cast<std::size_t>(h.degree - 1)].rows().count(i)) continue;
    quotient_of_hall_.emplace(i, hall_of_quotient_.size());
    hall_of_quotient_.push_back(i);
    labels.push_back(h.label);
    degrees.push_back(h.degree);
  }
  std::map<std::pair<std::size_t, std::size_t>, LieElement> brackets;
  for (std::size_t a = 0; a < hall_of_quotient_.size(); ++a)
    for (std::size_t b = a + 1; b < hall_of_quotient_.size(); ++b) {
      if (degrees[a] + degrees[b] > p.truncation) continue;
      auto br = project(free_->bracket(LieElement::basis(hall_of_quotient_[a]),
                                       LieElement::basis(hall_of_quotient_[b])));
      if (!br.is_zero()) brackets.emplace(std::make_pair(a, b), std::move(br));
    }
  lie_ = std::make_shared<GradedNilpotentLie>(p.truncation, std::move(labels), std::move(degrees), brackets);
}

LieElement NilpotentQuotient::project(const LieElement& x) const {
  // Reduce each homogeneous component modulo its ideal piece.
  std::vector<SparseVec> parts(ideal_.size());
  for (const auto& [i, c] : x.terms) parts[static_cast<std::size_t>(free_->basis(i).degree - 1)].emplace(i, c);
  LieElement out;
  for (std::size_t d = 0; d < parts.size(); ++d) {
    if (parts[d].empty()) continue;
    for (const auto& [i, c] : ideal_[d].reduce(parts[d])) out.terms.emplace(quotient_of_hall_.at(i), c);
  }
  return out;
}

LieElement NilpotentQuotient::lift(const LieElement& q) const {
  LieElement out;
  for (const auto& [i, c] : q.terms) out.terms.emplace(hall_of_quotient_.at(i), c);
  return out;
}

bool NilpotentQuotient::in_ideal(const LieElement& x) const { return project(x).is_zero(); }

LieElement NilpotentQuotient::act(const GeneratorAction& sigma, const LieElement& q) const {
  return project(free_->act(sigma, lift(q)));
}

bool NilpotentQuotient::preserves_relations(const GeneratorAction& sigma) const {
  return std::all_of(relations_.begin(), relations_.end(),
                     [&](const LieElement& r) { return in_ideal(free_->act(sigma, r)); });
}

std::vector<std::size_t> NilpotentQuotient::ideal_dims() const {
  std::vector<std::size_t> out;
  for (const auto& i : ideal_) out.push_back(i.size());
  return out;
}

std::optional<std::size_t> NilpotentQuotient::generator(std::size_t g) const {
  auto q = project(free_->generator(g));
  if (q.is_zero()) return std::nullopt;
  if (q.terms.size() != 1 || q.terms.begin()->second != 1) return std::nullopt;
  return q.terms.begin()->first;
}

NilpotentQuotient nilpotent_quotient(const LiePresentation& presentation) {
  return NilpotentQuotient(presentation);
}

}  // namespace malcev
