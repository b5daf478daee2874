#include "malcev/relcomp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace malcev {

namespace {

const double PI = std::acos(-1.0);

std::vector<Complex> to_numeric(const std::vector<Rational>& m) {
  std::vector<Complex> r;
  r.reserve(m.size());
  for (const auto& x : m) r.emplace_back(x.get_d(), 0.0);
  return r;
}

template <class T>
std::vector<T> matmul(const std::vector<T>& a, const std::vector<T>& b, std::size_t d) {
  std::vector<T> c(d * d, T(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i * d + k] == T(0)) continue;
      for (std::size_t j = 0; j < d; ++j) c[i * d + j] += a[i * d + k] * b[k * d + j];
    }
  return c;
}

// Standard Young tableaux of a shape, as (row, column) of each entry 0..n-1.
struct Tableau {
  std::vector<int> row, col;
};

void tableaux_rec(const std::vector<int>& shape, std::vector<int>& filled, Tableau& cur, int k, int n,
                  std::vector<Tableau>& out) {
  if (k == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t r = 0; r < shape.size(); ++r) {
    if (filled[r] >= shape[r]) continue;
    if (r > 0 && filled[r - 1] <= filled[r]) continue;
    cur.row[k] = int(r);
    cur.col[k] = filled[r];
    ++filled[r];
    tableaux_rec(shape, filled, cur, k + 1, n, out);
    --filled[r];
  }
}

std::vector<Tableau> standard_tableaux(const std::vector<int>& shape) {
  int n = 0;
  for (int p : shape) n += p;
  std::vector<int> filled(shape.size(), 0);
  Tableau cur{std::vector<int>(n), std::vector<int>(n)};
  std::vector<Tableau> out;
  tableaux_rec(shape, filled, cur, 0, n, out);
  return out;
}

std::string shape_label(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + "]";
}

// Numerical rank by Gaussian elimination with partial pivoting.
std::size_t numeric_rank(std::vector<std::vector<Complex>> m, double tol) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    if (std::abs(m[piv][c]) <= tol) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      Complex f = m[i][c] / m[r][c];
      if (f == Complex(0)) continue;
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

Complex Irrep::character(std::size_t g) const {
  Complex t = 0;
  for (std::size_t i = 0; i < dim; ++i) t += numeric[g][i * dim + i];
  return t;
}

Irrep Irrep::from_exact(std::string label, std::size_t dim, std::vector<std::vector<Rational>> matrices) {
  Irrep r;
  r.label = std::move(label);
  r.dim = dim;
  for (const auto& m : matrices) {
    if (m.size() != dim * dim) throw std::invalid_argument("irrep matrix has wrong size");
    r.numeric.push_back(to_numeric(m));
  }
  r.exact = std::move(matrices);
  return r;
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int maxpart) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(left, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<Irrep> symmetric_irreps(const FiniteGroup& G) {
  if (!G.is_symmetric()) throw std::invalid_argument("symmetric_irreps needs a group built as a symmetric group");
  const std::size_t n = G.permutation(0).size();
  std::vector<Irrep> out;
  for (const auto& shape : partitions(int(n))) {
    auto tabs = standard_tableaux(shape);
    const std::size_t d = tabs.size();
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> index;
    for (std::size_t a = 0; a < d; ++a) index[{tabs[a].row, tabs[a].col}] = a;

    // seminormal matrices of the adjacent transpositions (k k+1)
    std::vector<std::size_t> gens;
    std::vector<std::vector<Rational>> gen_mats;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      std::swap(perm[k], perm[k + 1]);
      gens.push_back(*G.index_of_permutation(perm));
      std::vector<Rational> m(d * d, Rational(0));
      for (std::size_t a = 0; a < d; ++a) {
        const Tableau& T = tabs[a];
        if (T.row[k] == T.row[k + 1]) {
          m[a * d + a] = 1;
        } else if (T.col[k] == T.col[k + 1]) {
          m[a * d + a] = -1;
        } else {
          int r = (T.col[k + 1] - T.row[k + 1]) - (T.col[k] - T.row[k]);
          Tableau S = T;
          std::swap(S.row[k], S.row[k + 1]);
          std::swap(S.col[k], S.col[k + 1]);
          std::size_t b = index.at({S.row, S.col});
          Rational inv(1, r);
          inv.canonicalize();
          m[a * d + a] = inv;
          m[b * d + a] = r > 0 ? Rational(1) : Rational(1) - inv * inv;
        }
      }
      gen_mats.push_back(std::move(m));
    }

    // extend along words in the generators: R(g s) = R(g) R(s)
    std::vector<std::vector<Rational>> mats(G.order());
    std::vector<char> seen(G.order(), 0);
    std::vector<Rational> id(d * d, Rational(0));
    for (std::size_t i = 0; i < d; ++i) id[i * d + i] = 1;
    mats[G.identity()] = id;
    seen[G.identity()] = 1;
    std::queue<std::size_t> q;
    q.push(G.identity());
    while (!q.empty()) {
      std::size_t g = q.front();
      q.pop();
      for (std::size_t k = 0; k < gens.size(); ++k) {
        std::size_t h = G.multiply(g, gens[k]);
        if (seen[h]) continue;
        seen[h] = 1;
        mats[h] = matmul(mats[g], gen_mats[k], d);
        q.push(h);
      }
    }
    out.push_back(Irrep::from_exact(shape_label(shape), d, std::move(mats)));
  }
  return out;
}

std::vector<Irrep> cyclic_irreps(const FiniteGroup& G) {
  const std::size_t n = G.order();
  std::vector<Irrep> out;
  for (std::size_t k = 0; k < n; ++k) {
    Irrep r;
    r.label = "chi" + std::to_string(k);
    r.dim = 1;
    bool rational = (2 * k) % n == 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (rational) {
        int sign = ((j * k * 2 / n) % 2 == 0) ? 1 : -1;
        r.exact.push_back({Rational(sign)});
        r.numeric.push_back({Complex(sign, 0)});
      } else {
        r.numeric.push_back({std::exp(Complex(0, 2 * PI * double(j * k % n) / double(n)))});
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

PeterWeylReport peter_weyl_check(const FiniteGroup& G, const std::vector<Irrep>& irreps) {
  PeterWeylReport rep;
  const std::size_t order = G.order();
  auto problem = [&](std::string s) {
    rep.ok = false;
    rep.problems.push_back(std::move(s));
  };
  for (const auto& V : irreps) {
    rep.dims.push_back(V.dim);
    rep.sum_of_squares += V.dim * V.dim;
    if (!V.is_exact()) rep.exact = false;
    if (V.numeric.size() != order) {
      problem(V.label + ": needs one matrix per group element");
      return rep;
    }
  }
  // multiplicativity
  for (const auto& V : irreps) {
    bool ok = true;
    for (std::size_t g = 0; g < order && ok; ++g)
      for (std::size_t h = 0; h < order && ok; ++h) {
        std::size_t gh = G.multiply(g, h);
        if (V.is_exact()) {
          ok = matmul(V.exact[g], V.exact[h], V.dim) == V.exact[gh];
        } else {
          auto p = matmul(V.numeric[g], V.numeric[h], V.dim);
          for (std::size_t i = 0; i < p.size(); ++i)
            if (std::abs(p[i] - V.numeric[gh][i]) > 1e-9) ok = false;
        }
      }
    if (!ok) problem(V.label + ": not multiplicative");
  }
  // character inner products <chi_a, chi_b> = (1/|S|) sum chi_a(g) chi_b(g^-1)
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = a; b < irreps.size(); ++b) {
      const Irrep &A = irreps[a], &B = irreps[b];
      bool is_one;
      bool is_zero;
      if (A.is_exact() && B.is_exact()) {
        Rational s = 0;
        for (std::size_t g = 0; g < order; ++g) {
          Rational ta = 0, tb = 0;
          std::size_t gi = G.inverse(g);
          for (std::size_t i = 0; i < A.dim; ++i) ta += A.exact[g][i * A.dim + i];
          for (std::size_t i = 0; i < B.dim; ++i) tb += B.exact[gi][i * B.dim + i];
          s += ta * tb;
        }
        s /= Rational(long(order));
        is_one = s == 1;
        is_zero = s == 0;
      } else {
        Complex s = 0;
        for (std::size_t g = 0; g < order; ++g) s += A.character(g) * B.character(G.inverse(g));
        s /= double(order);
        is_one = std::abs(s - 1.0) < 1e-9;
        is_zero = std::abs(s) < 1e-9;
      }
      if (a == b && !is_one) problem(A.label + ": character norm is not 1 (reducible)");
      if (a != b && !is_zero) problem(A.label + " and " + B.label + ": isomorphic or overlapping");
    }
  if (rep.sum_of_squares != order) {
    std::ostringstream os;
    if (rep.sum_of_squares < order)
      os << "dimension deficit " << order - rep.sum_of_squares << " (sum of squares " << rep.sum_of_squares
         << ", group order " << order << ")";
    else
      os << "sum of squares " << rep.sum_of_squares << " exceeds group order " << order;
    problem(os.str());
  }
  // matrix-entry map: rows are the functions g -> R(g)_{ij}
  if (rep.exact) {
    std::vector<SparseVec> rows;
    for (const auto& V : irreps)
      for (std::size_t e = 0; e < V.dim * V.dim; ++e) {
        SparseVec r;
        for (std::size_t g = 0; g < order; ++g)
          if (V.exact[g][e] != 0) r[g] = V.exact[g][e];
        rows.push_back(std::move(r));
      }
    rep.rank = rank(RatMatrix::from_rows(order, rows));
  } else {
    std::vector<std::vector<Complex>> rows;
    for (const auto& V : irreps)
      for (std::size_t e = 0; e < V.dim * V.dim; ++e) {
        std::vector<Complex> r(order);
        for (std::size_t g = 0; g < order; ++g) r[g] = V.numeric[g][e];
        rows.push_back(std::move(r));
      }
    rep.rank = numeric_rank(rows, 1e-9);
  }
  if (rep.rank != order) problem("matrix-entry map has rank " + std::to_string(rep.rank) + ", not " + std::to_string(order));
  return rep;
}

// ---------------------------------------------------------------------------

SemidirectContext::SemidirectContext(std::shared_ptr<const FiniteGroup> group, std::shared_ptr<const Envelope> env,
                                     std::vector<std::vector<LieElement>> ad)
    : group_(std::move(group)), env_(std::move(env)), ad_(std::move(ad)) {
  if (!group_ || !env_) throw std::invalid_argument("semidirect context needs a group and an envelope");
  const GradedNilpotentLie& L = env_->lie();
  if (ad_.size() != group_->order()) throw std::invalid_argument("need one automorphism per group element");
  for (const auto& m : ad_)
    if (m.size() != L.dim()) throw std::invalid_argument("automorphism has wrong size");
  for (std::size_t j = 0; j < L.dim(); ++j)
    if (!(ad_[group_->identity()][j] == LieElement::basis(j)))
      throw std::invalid_argument("identity must act trivially");
  for (std::size_t g = 0; g < ad_.size(); ++g)
    for (std::size_t h = 0; h < ad_.size(); ++h)
      for (std::size_t j = 0; j < L.dim(); ++j)
        if (!(apply(g, ad_[h][j]) == ad_[group_->multiply(g, h)][j]))
          throw std::invalid_argument("Ad is not a homomorphism at " + group_->label(g) + ", " + group_->label(h));
  for (std::size_t g = 0; g < ad_.size(); ++g)
    for (std::size_t i = 0; i < L.dim(); ++i)
      for (std::size_t j = i + 1; j < L.dim(); ++j)
        if (!(apply(g, L.bracket_basis(i, j)) == L.bracket(ad_[g][i], ad_[g][j])))
          throw std::invalid_argument("Ad(" + group_->label(g) + ") does not preserve brackets");
}

SemidirectContext SemidirectContext::from_generator_actions(std::shared_ptr<const FiniteGroup> group,
                                                            std::shared_ptr<const Envelope> env,
                                                            const NilpotentQuotient& q,
                                                            const std::vector<GeneratorAction>& actions) {
  if (actions.size() != group->order()) throw std::invalid_argument("need one generator action per group element");
  std::vector<std::vector<LieElement>> ad;
  for (const auto& a : actions) {
    std::vector<LieElement> images;
    for (std::size_t j = 0; j < q.lie()->dim(); ++j) images.push_back(q.act(a, LieElement::basis(j)));
    ad.push_back(std::move(images));
  }
  return SemidirectContext(std::move(group), std::move(env), std::move(ad));
}

LieElement SemidirectContext::apply(std::size_t g, const LieElement& x) const {
  LieElement r;
  for (const auto& [j, c] : x.terms) axpy(r.terms, c, ad_[g][j].terms);
  return r;
}

SemidirectElement semidirect_identity(const SemidirectContext& ctx) {
  return {ctx.group().identity(), ComplexSeries::one(ctx.envelope())};
}

SemidirectElement semidirect_multiply(const SemidirectContext& ctx, const SemidirectElement& a,
                                      const SemidirectElement& b, double tol) {
  if (!is_grouplike(a.u, tol) || !is_grouplike(b.u, tol))
    throw std::invalid_argument("semidirect product: input is not grouplike within tolerance");
  return {ctx.group().multiply(a.s, b.s), ctx.apply(ctx.group().inverse(b.s), a.u) * b.u};
}

SemidirectElement semidirect_inverse(const SemidirectContext& ctx, const SemidirectElement& a) {
  return {ctx.group().inverse(a.s), ctx.apply(a.s, inverse(a.u))};
}

double semidirect_distance(const SemidirectElement& a, const SemidirectElement& b) {
  if (a.s != b.s) return std::numeric_limits<double>::infinity();
  return max_abs_diff(a.u, b.u);
}

SemidirectElement from_raw_holonomy(const SemidirectContext& ctx, std::size_t s, const ComplexSeries& T) {
  return {s, ctx.apply(ctx.group().inverse(s), T)};
}

// ---------------------------------------------------------------------------

namespace {

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::string render_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  if (z.imag() == 0)
    os << z.real();
  else
    os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
  return os.str();
}

}  // namespace

bool operator<(const FormKey& a, const FormKey& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.coordinate != b.coordinate) return a.coordinate < b.coordinate;
  if (a.exponent != b.exponent) return a.exponent < b.exponent;
  return std::lexicographical_compare(a.affine.begin(), a.affine.end(), b.affine.begin(), b.affine.end(),
                                      complex_less);
}

std::string FormKey::render() const {
  std::ostringstream os;
  if (kind == 0) {
    os << "dlog(" << render_complex(affine[0]);
    for (std::size_t i = 1; i < affine.size(); ++i)
      if (affine[i] != Complex(0)) os << " + " << render_complex(affine[i]) << "*x" << i;
    os << ")";
  } else {
    for (std::size_t i = 0; i < exponent.size(); ++i)
      if (exponent[i]) os << "x" << i + 1 << "^" << exponent[i] << " ";
    os << "dx" << coordinate + 1;
  }
  return os.str();
}

CanonicalForm canonical_form(const LieValuedOneForm& w) {
  CanonicalForm out;
  auto add = [&](const FormKey& k, Complex c, const LieElement& x) {
    if (c == Complex(0)) return;
    auto& slot = out[k];
    for (const auto& [j, r] : x.terms) {
      Complex& v = slot[j];
      v += c * r.get_d();
      if (v == Complex(0)) slot.erase(j);
    }
    if (slot.empty()) out.erase(k);
  };
  for (const auto& [f, x] : w.terms) {
    if (f.kind == ScalarOneForm::Kind::DlogAffine) {
      std::size_t p = 0;
      while (p < f.gradient.size() && f.gradient[p] == Complex(0)) ++p;
      if (p == f.gradient.size()) continue;  // dlog of a constant
      Complex lead = f.gradient[p];
      FormKey k;
      k.kind = 0;
      k.affine.push_back(f.constant / lead);
      for (auto g : f.gradient) k.affine.push_back(g / lead);
      add(k, 1.0, x);
    } else {
      for (const auto& [e, c] : f.monomials) {
        FormKey k;
        k.kind = 1;
        k.coordinate = f.coordinate;
        k.exponent = e;
        add(k, c, x);
      }
    }
  }
  return out;
}

std::string form_difference(const LieValuedOneForm& a, const LieValuedOneForm& b) {
  auto ca = canonical_form(a), cb = canonical_form(b);
  if (ca == cb) return "";
  const GradedNilpotentLie* L = a.lie ? a.lie.get() : b.lie.get();
  auto render = [&](const std::map<std::size_t, Complex>& x) {
    if (x.empty()) return std::string("0");
    std::string s;
    for (const auto& [j, c] : x) s += (s.empty() ? "" : " + ") + render_complex(c) + "*" + (L ? L->label(j) : "#" + std::to_string(j));
    return s;
  };
  auto ia = ca.begin(), ib = cb.begin();
  while (true) {
    if (ia == ca.end() && ib == cb.end()) return "";
    if (ib == cb.end() || (ia != ca.end() && ia->first < ib->first))
      return "letter " + ia->first.render() + ": " + render(ia->second) + " vs 0";
    if (ia == ca.end() || ib->first < ia->first)
      return "letter " + ib->first.render() + ": 0 vs " + render(ib->second);
    if (ia->second != ib->second)
      return "letter " + ia->first.render() + ": " + render(ia->second) + " vs " + render(ib->second);
    ++ia;
    ++ib;
  }
}

LieValuedOneForm map_coefficients(const LieValuedOneForm& w, const std::vector<LieElement>& images) {
  LieValuedOneForm r = w;
  for (auto& [f, x] : r.terms) {
    LieElement y;
    for (const auto& [j, c] : x.terms) axpy(y.terms, c, images.at(j).terms);
    x = y;
  }
  return r;
}

EquivarianceReport check_sheet_equivariance(const SemidirectContext& ctx, const SheetedLieForm& omega) {
  const FiniteGroup& G = ctx.group();
  EquivarianceReport rep;
  if (omega.on_sheet.size() != G.order()) {
    rep.ok = false;
    rep.certificate = "one form per sheet required";
    return rep;
  }
  for (std::size_t h = 0; h < G.order(); ++h)
    for (std::size_t s = 0; s < G.order(); ++s) {
      std::string diff = form_difference(omega.on_sheet[G.multiply(h, s)], map_coefficients(omega.on_sheet[s], ctx.ad(h)));
      if (!diff.empty()) {
        rep.ok = false;
        rep.certificate = "h = " + G.label(h) + ", sheet " + G.label(s) + ": " + diff;
        return rep;
      }
    }
  return rep;
}

SemidirectElement relative_rep(const SemidirectContext& ctx, const SheetedPath& loop, const SheetedLieForm& omega,
                               const OdeOptions& opt) {
  auto eq = check_sheet_equivariance(ctx, omega);
  if (!eq.ok) throw std::invalid_argument("form is not equivariant: " + eq.certificate);
  if (loop.path.empty()) return semidirect_identity(ctx);
  Monodromy m = monodromy(loop, omega, ctx.envelope(), opt);
  return from_raw_holonomy(ctx, m.sheet, m.transport.series);
}

std::shared_ptr<const GradedNilpotentLie> lie_from_coordinate_ring(const BarComplex& bar, const H0Result& h,
                                                                   std::size_t degree) {
  if (degree > h.cap)
    throw std::invalid_argument("bar degree cap " + std::to_string(h.cap) + " is too small for Lie degree " +
                                std::to_string(degree));
  return indecomposables_and_cobracket(bar, h).dual_lie;
}

// ---------------------------------------------------------------------------

namespace {

Rational trace(const RatMatrix& m) {
  Rational t = 0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m.get(i, i);
  return t;
}

std::size_t round_count(Complex z, bool& consistent) {
  double r = std::round(z.real());
  if (std::abs(z - Complex(r, 0)) > 1e-9 || r < 0) consistent = false;
  return r < 0 ? 0 : std::size_t(r);
}

std::size_t count_of(const Rational& q, bool& consistent) {
  if (q.get_den() != 1 || q < 0) {
    consistent = false;
    return 0;
  }
  return q.get_num().get_ui();
}

// dim H^1 of the S-invariant part of A (x) V, with (a (x) v) g = a.g (x) R(g^-1) v.
std::size_t invariant_h1(const DGAModel& A, const Irrep& V) {
  const FiniteGroup& G = A.group();
  const std::size_t dv = V.dim;
  auto invariants = [&](int k) {
    EchelonBasis e;
    std::vector<SparseVec> basis;
    for (std::size_t i : A.basis_in_degree(k))
      for (std::size_t a = 0; a < dv; ++a) {
        SparseVec v;
        for (std::size_t g = 0; g < G.order(); ++g) {
          const auto& R = V.exact[G.inverse(g)];
          for (const auto& [ii, c] : A.act(i, g))
            for (std::size_t b = 0; b < dv; ++b)
              if (R[b * dv + a] != 0) axpy(v, c * R[b * dv + a], {{ii * dv + b, Rational(1)}});
        }
        if (!v.empty() && e.insert(v)) basis.push_back(v);
      }
    return basis;
  };
  auto d_rank = [&](const std::vector<SparseVec>& basis) {
    EchelonBasis e;
    for (const auto& v : basis) {
      SparseVec dv_;
      for (const auto& [idx, c] : v) {
        std::size_t i = idx / dv, b = idx % dv;
        for (const auto& [j, cj] : A.d(i)) axpy(dv_, c * cj, {{j * dv + b, Rational(1)}});
      }
      e.insert(dv_);
    }
    return e.size();
  };
  auto inv0 = invariants(0), inv1 = invariants(1);
  return inv1.size() - d_rank(inv1) - d_rank(inv0);
}

}  // namespace

IsotypicReport isotypic_h1(std::shared_ptr<const DGAModel> model, const std::vector<Irrep>& irreps) {
  if (!model || !model->has_action()) throw std::invalid_argument("isotypic_h1 needs a model with a group action");
  const FiniteGroup& G = model->group();
  const std::size_t order = G.order();

  std::vector<Rational> chi_h1(order);
  for (std::size_t g = 0; g < order; ++g) chi_h1[g] = trace(model->cohomology_action(1, g));

  BarComplex bar(model, SideKind::Ground, SideKind::Ground);
  H0Result h = h0(bar, 2);
  Indecomposables q = indecomposables_and_cobracket(bar, h);
  std::vector<Rational> chi_q1(order, Rational(0));
  for (std::size_t g = 0; g < order; ++g)
    for (std::size_t k = 0; k < q.degree.size(); ++k)
      if (q.degree[k] == 1) chi_q1[g] += q.action[g].get(k, k);

  IsotypicReport rep;
  for (const auto& V : irreps) {
    if (V.numeric.size() != order) throw std::invalid_argument("irrep does not match the model's group");
    rep.labels.push_back(V.label);
    rep.irrep_dims.push_back(V.dim);
    std::size_t via_char, via_q;
    if (V.is_exact()) {
      Rational s = 0, t = 0;
      for (std::size_t g = 0; g < order; ++g) {
        std::size_t gi = G.inverse(g);
        Rational cv = 0, cvi = 0;
        for (std::size_t i = 0; i < V.dim; ++i) {
          cv += V.exact[g][i * V.dim + i];
          cvi += V.exact[gi][i * V.dim + i];
        }
        s += chi_h1[g] * cvi;
        t += chi_q1[gi] * cv;
      }
      s /= Rational(long(order));
      t /= Rational(long(order));
      via_char = count_of(s, rep.consistent);
      via_q = count_of(t, rep.consistent);
      rep.invariant_route.push_back(invariant_h1(*model, V));
    } else {
      Complex s = 0, t = 0;
      for (std::size_t g = 0; g < order; ++g) {
        std::size_t gi = G.inverse(g);
        s += chi_h1[g].get_d() * V.character(gi);
        t += chi_q1[gi].get_d() * V.character(g);
      }
      via_char = round_count(s / double(order), rep.consistent);
      via_q = round_count(t / double(order), rep.consistent);
      rep.invariant_route.push_back(std::nullopt);
    }
    rep.character_route.push_back(via_char);
    rep.gr_h1_multiplicity.push_back(via_q);
    rep.gr_h1_isotypic_dim.push_back(via_q * V.dim);
    if (via_char != via_q) rep.consistent = false;
    if (rep.invariant_route.back() && *rep.invariant_route.back() != via_char) rep.consistent = false;
  }
  return rep;
}

}  // namespace malcev
