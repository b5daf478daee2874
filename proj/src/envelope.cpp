#include "malcev/envelope.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace malcev {

Envelope::Envelope(std::shared_ptr<const GradedNilpotentLie> lie, int truncation)
    : lie_(std::move(lie)), truncation_(truncation) {
  if (!lie_) throw std::invalid_argument("envelope needs a Lie algebra");
  if (truncation_ < 0 || truncation_ > lie_->truncation())
    throw std::invalid_argument("envelope truncation exceeds the Lie algebra truncation");
  const std::size_t L = lie_->dim();

  std::vector<std::pair<Monomial, int>> found;
  Monomial cur;
  std::function<void(std::size_t, int)> grow = [&](std::size_t from, int deg) {
    found.emplace_back(cur, deg);
    for (std::size_t j = from; j < L; ++j) {
      if (deg + lie_->degree(j) > truncation_) continue;
      cur.push_back(j);
      grow(j, deg + lie_->degree(j));
      cur.pop_back();
    }
  };
  grow(0, 0);
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  for (auto& [m, d] : found) {
    index_.emplace(m, monomials_.size());
    monomials_.push_back(std::move(m));
    degrees_.push_back(d);
  }
  parent_.assign(size(), 0);
  for (std::size_t i = 1; i < size(); ++i) {
    Monomial p(monomials_[i].begin(), monomials_[i].end() - 1);
    parent_[i] = index_.at(p);
  }
  lie_monomial_.assign(L, std::nullopt);
  for (std::size_t j = 0; j < L; ++j) {
    auto it = index_.find(Monomial{j});
    if (it != index_.end()) lie_monomial_[j] = it->second;
  }

  right_.assign(size() * L, SparseVec{});
  std::vector<char> state(size() * L, 0);
  for (std::size_t u = 0; u < size(); ++u)
    for (std::size_t j = 0; j < L; ++j) compute_right(u, j, state);
  right_real_.resize(right_.size());
  for (std::size_t k = 0; k < right_.size(); ++k)
    for (const auto& [i, c] : right_[k]) right_real_[k].emplace_back(i, c.get_d());

  coproduct_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& m = monomials_[i];
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m.size()); ++mask) {
      Monomial a, b;
      for (std::size_t k = 0; k < m.size(); ++k) (mask >> k & 1 ? a : b).push_back(m[k]);
      acc[{index_.at(a), index_.at(b)}] += 1;
    }
    for (const auto& [key, c] : acc) coproduct_[i].push_back({key.first, key.second, c});
  }
}

const SparseVec& Envelope::compute_right(std::size_t u, std::size_t j, std::vector<char>& state) {
  const std::size_t slot = u * lie_->dim() + j;
  if (state[slot] == 2) return right_[slot];
  if (state[slot] == 1) throw std::logic_error("PBW straightening did not terminate");
  state[slot] = 1;
  SparseVec out;
  const auto& m = monomials_[u];
  if (degrees_[u] + lie_->degree(j) <= truncation_) {
    if (m.empty() || m.back() <= j) {
      Monomial w = m;
      w.push_back(j);
      out.emplace(index_.at(w), Rational(1));
    } else {
      // u' l x = (u' x) l + u' [l, x]
      std::size_t up = parent_[u], l = m.back();
      SparseVec first = compute_right(up, j, state);
      for (const auto& [w, c] : first) axpy(out, c, compute_right(w, l, state));
      for (const auto& [k, c] : lie_->bracket_basis(l, j).terms) axpy(out, c, compute_right(up, k, state));
    }
  }
  right_[slot] = std::move(out);
  state[slot] = 2;
  return right_[slot];
}

std::optional<std::size_t> Envelope::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Envelope::dims_by_degree() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(truncation_) + 1, 0);
  for (int d : degrees_) ++out[static_cast<std::size_t>(d)];
  return out;
}

std::string Envelope::label(std::size_t i) const {
  const auto& m = monomials_[i];
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < m.size();) {
    std::size_t r = k;
    while (r < m.size() && m[r] == m[k]) ++r;
    if (!s.empty()) s += "*";
    s += lie_->label(m[k]);
    if (r - k > 1) s += "^" + std::to_string(r - k);
    k = r;
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

template <class C>
void require_same(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
  if (a.envelope_ptr() != b.envelope_ptr()) throw std::invalid_argument("series live in different envelopes");
}

template <class C>
bool is_zero(const C& c) {
  return c == C(0);
}

template <class C>
int min_degree(const TruncatedSeries<C>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_zero(a[i])) return a.envelope().degree(i);
  return a.envelope().truncation() + 1;
}

template <class C>
void add_right_product(std::vector<C>& out, const std::vector<C>& s, const Envelope& env, std::size_t j,
                       const C& scale);

template <>
void add_right_product<Rational>(std::vector<Rational>& out, const std::vector<Rational>& s, const Envelope& env,
                                 std::size_t j, const Rational& scale) {
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (s[u] == 0) continue;
    Rational f = scale * s[u];
    for (const auto& [w, c] : env.right_multiply(u, j)) out[w] += f * c;
  }
}

template <>
void add_right_product<Complex>(std::vector<Complex>& out, const std::vector<Complex>& s, const Envelope& env,
                                std::size_t j, const Complex& scale) {
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (s[u] == Complex(0)) continue;
    Complex f = scale * s[u];
    for (const auto& [w, c] : env.right_multiply_real(u, j)) out[w] += f * c;
  }
}

}  // namespace

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::one(std::shared_ptr<const Envelope> env) {
  TruncatedSeries s(std::move(env));
  s.coeffs_[0] = C(1);
  return s;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::from_lie(std::shared_ptr<const Envelope> env, const LieElement& x) {
  TruncatedSeries s(std::move(env));
  for (const auto& [j, c] : x.terms) {
    if (j >= s.env_->lie().dim()) throw std::out_of_range("Lie index out of range");
    if (auto m = s.env_->lie_monomial(j)) s.coeffs_[*m] += coeff_from<C>(c);
  }
  return s;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::from_lie(std::shared_ptr<const Envelope> env, const std::vector<C>& x) {
  TruncatedSeries s(std::move(env));
  if (x.size() != s.env_->lie().dim()) throw std::invalid_argument("Lie coordinate vector has wrong length");
  for (std::size_t j = 0; j < x.size(); ++j)
    if (auto m = s.env_->lie_monomial(j)) s.coeffs_[*m] += x[j];
  return s;
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator+=(const TruncatedSeries& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator-=(const TruncatedSeries& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

template <class C>
TruncatedSeries<C>& TruncatedSeries<C>::operator*=(const C& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

template <class C>
TruncatedSeries<C> TruncatedSeries<C>::right_multiply_lie(const std::vector<std::pair<std::size_t, C>>& x) const {
  TruncatedSeries out(env_);
  for (const auto& [j, c] : x) add_right_product<C>(out.coeffs_, coeffs_, *env_, j, c);
  return out;
}

template <class C>
std::vector<std::pair<std::string, C>> TruncatedSeries<C>::terms(double drop_below) const {
  std::vector<std::pair<std::string, C>> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (is_zero(coeffs_[i]) || magnitude(coeffs_[i]) < drop_below) continue;
    out.emplace_back(env_->label(i), coeffs_[i]);
  }
  return out;
}

template <class C>
TruncatedSeries<C> multiply(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
  require_same(a, b);
  const Envelope& env = a.envelope();
  const int room = env.truncation() - min_degree(a);
  // a * m for every monomial m of degree <= room, built from the prefix m' by a * m = (a * m') * x_last.
  std::vector<std::vector<C>> prefix;
  prefix.reserve(env.size());
  TruncatedSeries<C> out(a.envelope_ptr());
  for (std::size_t v = 0; v < env.size(); ++v) {
    if (env.degree(v) > room) break;
    if (v == 0) {
      prefix.push_back(a.coeffs());
    } else {
      std::vector<C> next(env.size(), C(0));
      add_right_product<C>(next, prefix[env.parent(v)], env, env.monomial(v).back(), C(1));
      prefix.push_back(std::move(next));
    }
    if (is_zero(b[v])) continue;
    const auto& av = prefix[v];
    for (std::size_t i = 0; i < av.size(); ++i) out[i] += b[v] * av[i];
  }
  return out;
}

template <class C>
TruncatedSeries<C> exp(const TruncatedSeries<C>& x) {
  if (!is_zero(x.constant())) throw std::invalid_argument("exp needs a series with zero constant term");
  auto result = TruncatedSeries<C>::one(x.envelope_ptr());
  auto power = result;
  for (int k = 1; k <= x.envelope().truncation(); ++k) {
    power = multiply(power, x);
    power *= C(1) / C(k);
    result += power;
  }
  return result;
}

template <class C>
TruncatedSeries<C> log(const TruncatedSeries<C>& g) {
  if (magnitude(g.constant() - C(1)) > 1e-12 || (std::is_same_v<C, Rational> && !(g.constant() == C(1))))
    throw std::invalid_argument("log needs constant term 1");
  auto y = g;
  y[0] = C(0);
  TruncatedSeries<C> result(g.envelope_ptr());
  auto power = TruncatedSeries<C>::one(g.envelope_ptr());
  for (int k = 1; k <= g.envelope().truncation(); ++k) {
    power = multiply(power, y);
    C c = C(k % 2 ? 1 : -1) / C(k);
    result += c * power;
  }
  return result;
}

template <class C>
TruncatedSeries<C> inverse(const TruncatedSeries<C>& g) {
  if (is_zero(g.constant())) throw std::invalid_argument("series with zero constant term is not invertible");
  C c0 = g.constant();
  // g = c0 (1 - y), g^-1 = c0^-1 sum y^k
  auto y = g;
  y *= C(-1) / c0;
  y[0] = C(0);
  auto result = TruncatedSeries<C>::one(g.envelope_ptr());
  auto power = result;
  for (int k = 1; k <= g.envelope().truncation(); ++k) {
    power = multiply(power, y);
    result += power;
  }
  result *= C(1) / c0;
  return result;
}

template <class C>
CoproductValue<C> coproduct(const TruncatedSeries<C>& a) {
  CoproductValue<C> out;
  const auto& env = a.envelope();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (const auto& t : env.coproduct_terms(i)) {
      auto& slot = out.terms[{t.left, t.right}];
      slot += a[i] * coeff_from<C>(t.multiplicity);
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();) it = is_zero(it->second) ? out.terms.erase(it) : std::next(it);
  return out;
}

template <class C>
double grouplike_defect(const TruncatedSeries<C>& g) {
  const auto& env = g.envelope();
  auto delta = coproduct(g);
  double worst = magnitude(g.constant() - C(1));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (env.degree(i) + env.degree(j) > env.truncation()) break;
      auto it = delta.terms.find({i, j});
      C d = it == delta.terms.end() ? C(0) : it->second;
      worst = std::max(worst, magnitude(d - g[i] * g[j]));
    }
  }
  return worst;
}

template <class C>
bool is_grouplike(const TruncatedSeries<C>& g, double tol) {
  return grouplike_defect(g) <= tol;
}

template <class C>
TruncatedSeries<C> apply_lie_map(const TruncatedSeries<C>& a, const std::vector<LieElement>& images) {
  const auto& env = a.envelope();
  if (images.size() != env.lie().dim()) throw std::invalid_argument("need one image per Lie basis element");
  std::vector<std::vector<std::pair<std::size_t, C>>> img(images.size());
  for (std::size_t j = 0; j < images.size(); ++j)
    for (const auto& [k, c] : images[j].terms) img[j].emplace_back(k, coeff_from<C>(c));
  std::vector<TruncatedSeries<C>> value;
  value.reserve(env.size());
  TruncatedSeries<C> out(a.envelope_ptr());
  for (std::size_t v = 0; v < env.size(); ++v) {
    if (v == 0)
      value.push_back(TruncatedSeries<C>::one(a.envelope_ptr()));
    else
      value.push_back(value[env.parent(v)].right_multiply_lie(img[env.monomial(v).back()]));
    if (!is_zero(a[v])) out += a[v] * value[v];
  }
  return out;
}

template <class C>
std::pair<std::vector<C>, double> lie_part(const TruncatedSeries<C>& a) {
  const auto& env = a.envelope();
  std::vector<C> coords(env.lie().dim(), C(0));
  double rest = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (env.monomial(i).size() == 1)
      coords[env.monomial(i)[0]] = a[i];
    else
      rest = std::max(rest, magnitude(a[i]));
  }
  return {coords, rest};
}

template <class C>
double max_abs_diff(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
  require_same(a, b);
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, magnitude(a[i] - b[i]));
  return worst;
}

ComplexSeries to_complex(const RationalSeries& s) {
  ComplexSeries out(s.envelope_ptr());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = coeff_from<Complex>(s[i]);
  return out;
}

#define MALCEV_INSTANTIATE(C)                                                                          \
  template class TruncatedSeries<C>;                                                                   \
  template TruncatedSeries<C> multiply(const TruncatedSeries<C>&, const TruncatedSeries<C>&);          \
  template TruncatedSeries<C> exp(const TruncatedSeries<C>&);                                          \
  template TruncatedSeries<C> log(const TruncatedSeries<C>&);                                          \
  template TruncatedSeries<C> inverse(const TruncatedSeries<C>&);                                      \
  template CoproductValue<C> coproduct(const TruncatedSeries<C>&);                                     \
  template double grouplike_defect(const TruncatedSeries<C>&);                                         \
  template bool is_grouplike(const TruncatedSeries<C>&, double);                                       \
  template TruncatedSeries<C> apply_lie_map(const TruncatedSeries<C>&, const std::vector<LieElement>&); \
  template std::pair<std::vector<C>, double> lie_part(const TruncatedSeries<C>&);                      \
  template double max_abs_diff(const TruncatedSeries<C>&, const TruncatedSeries<C>&);

MALCEV_INSTANTIATE(Rational)
MALCEV_INSTANTIATE(Complex)

#undef MALCEV_INSTANTIATE

}  // namespace malcev
