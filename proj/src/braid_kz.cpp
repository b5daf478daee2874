#include "malcev/braid_kz.hpp"

#include <cmath>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace malcev {

namespace {

const double PI = std::acos(-1.0);

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

std::vector<std::size_t> compose(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
  std::vector<std::size_t> r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[k] = p[q[k]];
  return r;
}

LieTerm bracket_term(int c, const std::string& a, const std::string& b) {
  return LieTerm{Rational(c), BracketExpr::bracket(BracketExpr::leaf(a), BracketExpr::leaf(b))};
}

// Arc movers of sigma_i^{+-1} starting at the basepoint, 0-based left strand position p.
std::vector<ArcMover> generator_movers(std::size_t p, int exponent) {
  Complex center(double(p) + 1.5, 0.0);
  if (exponent > 0)
    return {ArcMover{p, center, 0.5, PI, 2 * PI}, ArcMover{p + 1, center, 0.5, 0.0, PI}};
  return {ArcMover{p + 1, center, 0.5, 2 * PI, PI}, ArcMover{p, center, 0.5, PI, 0.0}};
}

using ExactDlog = std::map<std::vector<Rational>, LieElement>;

ExactDlog exact_dlog_terms(const LieValuedOneForm& w) {
  ExactDlog out;
  for (const auto& [f, x] : w.terms) {
    if (f.kind != ScalarOneForm::Kind::DlogAffine) throw std::invalid_argument("expected dlog letters only");
    std::vector<Rational> l;
    auto exact = [](Complex z) {
      if (z.imag() != 0) throw std::invalid_argument("expected real letters");
      return Rational(z.real());
    };
    l.push_back(exact(f.constant));
    for (auto g : f.gradient) l.push_back(exact(g));
    std::size_t p = 1;
    while (p < l.size() && l[p] == 0) ++p;
    if (p == l.size()) continue;
    Rational lead = l[p];
    for (auto& c : l) c /= lead;
    out[l] += x;
    if (out[l].is_zero()) out.erase(l);
  }
  return out;
}

std::string render_affine(const std::vector<Rational>& l) {
  std::ostringstream os;
  os << "dlog(" << to_string(l[0]);
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i] != 0) os << (l[i] > 0 ? " + " : " - ") << to_string(abs(l[i])) << "*x" << i;
  os << ")";
  return os.str();
}

}  // namespace

BraidWord BraidWord::parse(std::size_t strands, const std::string& text) {
  if (strands < 1) throw std::invalid_argument("braid needs at least one strand");
  BraidWord w;
  w.strands = strands;
  static const std::regex token(R"(s(\d+)(?:\^(-?\d+))?)");
  std::istringstream is(text);
  std::string tok;
  std::size_t index = 0;
  while (is >> tok) {
    ++index;
    std::smatch m;
    if (!std::regex_match(tok, m, token))
      throw std::invalid_argument("braid word token " + std::to_string(index) + " '" + tok + "' is not s<i> or s<i>^<k>");
    std::size_t gen = std::stoul(m[1].str());
    long k = m[2].matched ? std::stol(m[2].str()) : 1;
    if (gen < 1 || gen >= strands)
      throw std::invalid_argument("braid word token " + std::to_string(index) + " '" + tok + "': generator out of range for " +
                                  std::to_string(strands) + " strands");
    if (k == 0) throw std::invalid_argument("braid word token " + std::to_string(index) + " '" + tok + "': zero exponent");
    for (long r = 0; r < std::labs(k); ++r) w.letters.push_back({gen, k > 0 ? 1 : -1});
  }
  return w;
}

std::string BraidWord::render() const {
  std::string s;
  for (const auto& l : letters) {
    if (!s.empty()) s += ' ';
    s += "s" + std::to_string(l.generator);
    if (l.exponent < 0) s += "^-1";
  }
  return s;
}

BraidWord BraidWord::concat(const BraidWord& other) const {
  if (other.strands != strands) throw std::invalid_argument("braid words have different strand counts");
  BraidWord w = *this;
  w.letters.insert(w.letters.end(), other.letters.begin(), other.letters.end());
  return w;
}

BraidWord BraidWord::inverse() const {
  BraidWord w;
  w.strands = strands;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back({it->generator, -it->exponent});
  return w;
}

std::vector<std::size_t> BraidWord::permutation() const {
  auto p = identity_perm(strands);
  for (const auto& l : letters) {
    auto s = identity_perm(strands);
    std::swap(s[l.generator - 1], s[l.generator]);
    p = compose(p, s);
  }
  return p;
}

std::string dk_label(std::size_t i, std::size_t j) {
  if (i < 10 && j < 10) return "X" + std::to_string(i) + std::to_string(j);
  return "X" + std::to_string(i) + "_" + std::to_string(j);
}

LiePresentation drinfeld_kohno_presentation(std::size_t n, int N) {
  if (n < 2) throw std::invalid_argument("Drinfeld-Kohno algebra needs n >= 2");
  if (N < 1) throw std::invalid_argument("truncation must be at least 1");
  LiePresentation p;
  p.truncation = N;
  auto X = [&](std::size_t i, std::size_t j) { return i < j ? dk_label(i + 1, j + 1) : dk_label(j + 1, i + 1); };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.push_back({i, j});
      p.generators.push_back({X(i, j), 1});
    }
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      auto [i, j] = pairs[a];
      auto [k, l] = pairs[b];
      if (i != k && i != l && j != k && j != l) p.relations.push_back({bracket_term(1, X(i, j), X(k, l))});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        p.relations.push_back({bracket_term(1, X(i, j), X(i, k)), bracket_term(1, X(i, j), X(j, k))});
        p.relations.push_back({bracket_term(1, X(i, k), X(i, j)), bracket_term(1, X(i, k), X(j, k))});
        p.relations.push_back({bracket_term(1, X(j, k), X(i, j)), bracket_term(1, X(j, k), X(i, k))});
      }
  return p;
}

std::shared_ptr<const GradedNilpotentLie> drinfeld_kohno(std::size_t n, int N) {
  return NilpotentQuotient(drinfeld_kohno_presentation(n, N)).lie();
}

LieValuedOneForm kz_form(const NilpotentQuotient& q, std::size_t n) {
  LieValuedOneForm w;
  w.lie = q.lie();
  w.dimension = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto g = q.free_algebra().generator_index(dk_label(i + 1, j + 1));
      if (!g) throw std::invalid_argument("Lie algebra has no generator " + dk_label(i + 1, j + 1));
      auto qi = q.generator(*g);
      if (!qi) continue;
      std::vector<Complex> grad(n, 0.0);
      grad[i] = 1.0;
      grad[j] = -1.0;
      w.terms.push_back({ScalarOneForm::dlog(0.0, grad), LieElement::basis(*qi)});
    }
  return w;
}

KZSystem::KZSystem(std::size_t n, int N) : n_(n), N_(N) {
  if (n > 7) throw std::invalid_argument("KZ systems are limited to n <= 7");
  quotient_ = std::make_shared<NilpotentQuotient>(drinfeld_kohno_presentation(n, N));
  env_ = std::make_shared<const Envelope>(quotient_->lie(), N);
  group_ = std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(int(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t g = *quotient_->free_algebra().generator_index(dk_label(i + 1, j + 1));
      index_[{i, j}] = g;
    }
  std::vector<GeneratorAction> actions;
  for (std::size_t s = 0; s < group_->order(); ++s) actions.push_back(action(s));
  context_ = std::make_shared<SemidirectContext>(
      SemidirectContext::from_generator_actions(group_, env_, *quotient_, actions));
  form_ = kz_form(*quotient_, n);
}

Point KZSystem::basepoint() const {
  Point p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = double(i + 1);
  return p;
}

std::size_t KZSystem::generator(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return *quotient_->generator(index_.at({i, j}));
}

GeneratorAction KZSystem::action(std::size_t s) const {
  const auto& perm = group_->permutation(s);
  GeneratorAction a;
  a.label = group_->label(s);
  a.target.resize(index_.size());
  a.sign.assign(index_.size(), 1);
  for (const auto& [ij, g] : index_) {
    std::size_t x = perm[ij.first], y = perm[ij.second];
    if (x > y) std::swap(x, y);
    a.target[g] = index_.at({x, y});
  }
  return a;
}

GeneratorPath generator_path(std::size_t i, std::size_t n) {
  if (i < 1 || i >= n) throw std::invalid_argument("generator index out of range");
  GeneratorPath g{PiecewisePath(n), identity_perm(n)};
  Point base(n);
  for (std::size_t k = 0; k < n; ++k) base[k] = double(k + 1);
  g.path.add_arc(generator_movers(i - 1, 1), base);
  std::swap(g.permutation[i - 1], g.permutation[i]);
  return g;
}

LiftedBraid lift_braid(const BraidWord& w, const FiniteGroup& G) {
  const std::size_t n = w.strands;
  if (!G.is_symmetric() || G.permutation(0).size() != n) throw std::invalid_argument("lift needs the symmetric group on the strands");
  LiftedBraid out{PiecewisePath(n), G.identity()};
  Point cur(n);
  for (std::size_t k = 0; k < n; ++k) cur[k] = double(k + 1);
  for (const auto& l : w.letters) {
    if (l.generator < 1 || l.generator >= n) throw std::invalid_argument("braid letter out of range");
    const auto& pi = G.permutation(out.permutation);
    // the letter's lift from pi . basepoint is pi applied to its lift from the basepoint
    auto movers = generator_movers(l.generator - 1, l.exponent);
    for (auto& m : movers) m.coordinate = pi[m.coordinate];
    out.path.add_arc(movers, cur);
    cur = out.path.end();
    auto s = identity_perm(n);
    std::swap(s[l.generator - 1], s[l.generator]);
    out.permutation = G.multiply(out.permutation, *G.index_of_permutation(s));
  }
  return out;
}

BraidHolonomy braid_holonomy(const KZSystem& kz, const BraidWord& w, const OdeOptions& opt) {
  if (w.strands != kz.strands()) throw std::invalid_argument("braid word and KZ system have different strand counts");
  LiftedBraid lift = lift_braid(w, *kz.group());
  BraidHolonomy h{semidirect_identity(kz.context()), TransportResult{ComplexSeries::one(kz.envelope()), 0, 0}};
  if (!lift.path.empty()) h.raw = transport(lift.path, kz.form(), kz.envelope(), opt);
  h.element = from_raw_holonomy(kz.context(), lift.permutation, h.raw.series);
  return h;
}

LieValuedOneForm pullback_by_permutation(const LieValuedOneForm& w, const std::vector<std::size_t>& perm) {
  LieValuedOneForm r = w;
  for (auto& [f, x] : r.terms) {
    if (f.kind != ScalarOneForm::Kind::DlogAffine) throw std::invalid_argument("pullback supports dlog letters only");
    std::vector<Complex> g(f.gradient.size());
    for (std::size_t m = 0; m < g.size(); ++m) g[m] = f.gradient[perm[m]];
    f.gradient = g;
  }
  return r;
}

EquivarianceReport check_equivariance(const KZSystem& kz) {
  EquivarianceReport rep;
  const FiniteGroup& G = *kz.group();
  const GradedNilpotentLie& L = *kz.lie();
  for (std::size_t s = 0; s < G.order(); ++s) {
    auto a = exact_dlog_terms(pullback_by_permutation(kz.form(), G.permutation(s)));
    auto b = exact_dlog_terms(map_coefficients(kz.form(), kz.context().ad(s)));
    if (a == b) continue;
    rep.ok = false;
    for (const auto& [l, x] : a) {
      auto it = b.find(l);
      LieElement y = it == b.end() ? LieElement{} : it->second;
      if (!(x == y)) {
        LieElement diff = x - y;
        std::string lie;
        for (const auto& [j, c] : diff.terms) lie += (lie.empty() ? "" : " + ") + to_string(c) + "*" + L.label(j);
        rep.certificate = "sigma = " + G.label(s) + ": letter " + render_affine(l) + " differs by " + lie;
        return rep;
      }
    }
    rep.certificate = "sigma = " + G.label(s) + ": letter sets differ";
    return rep;
  }
  return rep;
}

std::map<std::pair<std::size_t, std::size_t>, Rational> linking_numbers(const BraidWord& w) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> lk;
  auto pos = identity_perm(w.strands);  // strand at each position
  for (const auto& l : w.letters) {
    std::size_t a = pos[l.generator - 1], b = pos[l.generator];
    auto key = std::minmax(a, b);
    Rational& v = lk[{key.first, key.second}];
    v += Rational(l.exponent, 2);
    v.canonicalize();
    std::swap(pos[l.generator - 1], pos[l.generator]);
  }
  for (auto it = lk.begin(); it != lk.end();) it = it->second == 0 ? lk.erase(it) : std::next(it);
  return lk;
}

}  // namespace malcev
