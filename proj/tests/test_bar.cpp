#include "doctest.h"
#include "malcev/models.hpp"

#include <random>

using namespace malcev;

namespace {

using Products = std::map<std::pair<std::size_t, std::size_t>, SparseVec>;

BarElement word(std::vector<std::size_t> letters, std::size_t left = 0, std::size_t right = 0, int c = 1) {
  return {{BarWord{left, std::move(letters), right}, Rational(c)}};
}

std::vector<std::shared_ptr<DGAModel>> corpus() {
  return {models::circle(),  models::wedge(2),         models::wedge(3),    models::circle_with_cell(),
          models::torus(),   models::circle_tensor_cell(), models::circle_sigma2(), models::torus_swap()};
}

// Binomial-free count of monomials of degree s in k commuting variables.
std::size_t monomials(std::size_t k, std::size_t s) {
  std::size_t num = 1, den = 1;
  for (std::size_t i = 1; i < k; ++i) {
    num *= s + i;
    den *= i;
  }
  return num / den;
}

// Brute-force E1: cohomology of the tensor complex M (x) (A^+)^{(x)s} (x) N with
// the Koszul-signed tensor differential, degree by degree.
std::vector<std::size_t> tensor_cohomology(const BarComplex& bar, std::size_t s, std::size_t tmax) {
  const DGAModel& A = bar.model();
  struct Factor {
    std::vector<int> degree;
    std::vector<SparseVec> d;
  };
  auto side = [&](SideKind k) {
    Factor f;
    for (std::size_t i = 0; i < bar.side_dim(k); ++i) {
      f.degree.push_back(bar.side_degree(k, i));
      f.d.push_back(k == SideKind::Algebra ? A.d(i) : SparseVec{});
    }
    return f;
  };
  Factor plus;
  std::vector<std::size_t> plus_index(A.dim(), A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    if (A.degree(i) > 0) {
      plus_index[i] = plus.degree.size();
      plus.degree.push_back(A.degree(i));
    }
  for (std::size_t i = 0; i < A.dim(); ++i)
    if (A.degree(i) > 0) {
      SparseVec v;
      for (const auto& [j, c] : A.d(i)) v.emplace(plus_index[j], c);
      plus.d.push_back(v);
    }
  std::vector<Factor> factors{side(bar.left())};
  for (std::size_t k = 0; k < s; ++k) factors.push_back(plus);
  factors.push_back(side(bar.right()));

  using Tuple = std::vector<std::size_t>;
  std::map<int, std::vector<Tuple>> by_degree;
  Tuple cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t f, int deg) {
    if (f == factors.size()) {
      by_degree[deg].push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < factors[f].degree.size(); ++i) {
      cur.push_back(i);
      rec(f + 1, deg + factors[f].degree[i]);
      cur.pop_back();
    }
  };
  rec(0, 0);
  auto dmatrix = [&](int t) {
    const auto& src = by_degree[t];
    const auto& dst = by_degree[t + 1];
    std::map<Tuple, std::size_t> index;
    for (std::size_t i = 0; i < dst.size(); ++i) index[dst[i]] = i;
    std::vector<SparseVec> rows(dst.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      int sign = 1;
      for (std::size_t f = 0; f < factors.size(); ++f) {
        for (const auto& [k, c] : factors[f].d[src[j][f]]) {
          Tuple t2 = src[j];
          t2[f] = k;
          auto& slot = rows[index.at(t2)][j];
          slot += c * sign;
        }
        if (factors[f].degree[src[j][f]] % 2) sign = -sign;
      }
    }
    for (auto& r : rows)
      for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return RatMatrix::from_rows(src.size(), rows);
  };
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t <= tmax; ++t) {
    int ti = static_cast<int>(t);
    std::size_t n = by_degree[ti].size();
    std::size_t r_out = n ? rank(dmatrix(ti)) : 0;
    std::size_t r_in = ti > 0 && !by_degree[ti - 1].empty() ? rank(dmatrix(ti - 1)) : 0;
    out.push_back(n - r_out - r_in);
  }
  return out;
}

}  // namespace

TEST_CASE("model validation") {
  for (const auto& m : corpus()) CHECK(m->validate().ok);
  std::vector<SparseVec> d(2);
  d[1] = {{1, Rational(1)}};
  DGAModel bad({"1", "w"}, {0, 1}, 0, d, Products{});
  auto report = bad.validate();
  CHECK_FALSE(report.ok);
  CHECK_FALSE(report.violations.empty());

  // graded commutativity violated: x*y = y*x in odd degrees
  Products p;
  p[{1, 2}] = {{3, Rational(1)}};
  p[{2, 1}] = {{3, Rational(1)}};
  DGAModel noncomm({"1", "x", "y", "xy"}, {0, 1, 1, 2}, 0, std::vector<SparseVec>(4), p);
  CHECK_FALSE(noncomm.validate().ok);

  DGAModel disconnected({"1", "u"}, {0, 0}, 0, std::vector<SparseVec>(2), Products{});
  CHECK_FALSE(disconnected.validate().ok);

  CHECK(models::circle()->cohomology_dims() == std::vector<std::size_t>{1, 1});
  CHECK(models::circle_with_cell()->cohomology_dims() == std::vector<std::size_t>{1, 1, 0});
  CHECK(models::circle_tensor_cell()->cohomology_dims() == std::vector<std::size_t>{1, 1, 0, 0});
  CHECK(models::torus()->cohomology_dims() == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("bar differential on small words") {
  BarComplex circle(models::circle(), SideKind::Ground, SideKind::Ground);
  CHECK(circle.differential(word({1})).empty());
  auto cell = models::circle_with_cell();
  BarComplex bc(cell, SideKind::Ground, SideKind::Ground);
  CHECK(bc.differential(word({3})).empty());
  CHECK(bc.differential(word({2})) == word({3}, 0, 0, -1));
  // torus: d[x|y] = (Jx)xy = -[xy] from the merge term
  BarComplex t(models::torus(), SideKind::Ground, SideKind::Ground);
  CHECK(t.differential(word({1, 2})) == word({3}, 0, 0, -1));
  CHECK(t.render(word({1, 2})) == "[x|y]");
}

TEST_CASE("d^2 = 0 on random bar elements (property)") {
  std::mt19937_64 rng(2024);
  const std::vector<std::pair<SideKind, SideKind>> ends = {{SideKind::Ground, SideKind::Ground},
                                                           {SideKind::Algebra, SideKind::Algebra},
                                                           {SideKind::Ground, SideKind::Algebra},
                                                           {SideKind::Algebra, SideKind::Ground}};
  for (const auto& m : corpus())
    for (const auto& [l, r] : ends) {
      BarComplex bar(m, l, r);
      for (int t = 0; t < 40; ++t) {
        auto x = bar.random_element(rng, 4, 6);
        auto dd = bar.differential(bar.differential(x));
        CHECK_MESSAGE(dd.empty(), bar.render(x));
      }
    }
  BarComplex coeff(models::circle_sigma2(), SideKind::Ground, SideKind::Coefficients);
  for (int t = 0; t < 40; ++t) CHECK(coeff.differential(coeff.differential(coeff.random_element(rng, 4, 6))).empty());
}

TEST_CASE("shuffle product") {
  BarComplex bar(models::circle(), SideKind::Ground, SideKind::Ground);
  auto w = word({1});
  CHECK(bar.shuffle(w, w) == word({1, 1}, 0, 0, 2));
  CHECK(bar.shuffle(word({}), w) == w);
  CHECK(bar.shuffle(bar.shuffle(w, w), w) == word({1, 1, 1}, 0, 0, 6));
  CHECK(bar.shuffle(w, bar.shuffle(w, w)) == word({1, 1, 1}, 0, 0, 6));

  std::mt19937_64 rng(5);
  for (const auto& m : {models::torus(), models::circle_tensor_cell(), models::wedge(2)}) {
    BarComplex b(m, SideKind::Ground, SideKind::Ground);
    for (int t = 0; t < 15; ++t) {
      auto x = b.random_element(rng, 3, 3), y = b.random_element(rng, 3, 3), z = b.random_element(rng, 2, 3);
      CHECK(b.shuffle(b.shuffle(x, y), z) == b.shuffle(x, b.shuffle(y, z)));
    }
    // graded commutativity and the derivation rule on homogeneous elements
    for (int t = 0; t < 15; ++t) {
      auto pick = [&](int deg) {
        auto all = b.words(deg, 3);
        BarElement x;
        for (int k = 0; k < 3 && !all.empty(); ++k)
          add_term(x, all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)], Rational(k + 1));
        return x;
      };
      int p = t % 2, q = (t / 2) % 2;
      auto x = pick(p), y = pick(q);
      auto xy = b.shuffle(x, y), yx = b.shuffle(y, x);
      BarElement expect;
      axpy(expect, (p * q) % 2 ? -1 : 1, yx);
      CHECK(xy == expect);
      BarElement rhs = b.shuffle(b.differential(x), y);
      axpy(rhs, p % 2 ? -1 : 1, b.shuffle(x, b.differential(y)));
      CHECK(b.differential(xy) == rhs);
    }
  }
}

TEST_CASE("H0 bar filtration tables") {
  auto circle = h0(BarComplex(models::circle(), SideKind::Ground, SideKind::Ground), 6);
  CHECK(circle.new_dims == std::vector<std::size_t>(7, 1));
  CHECK(circle.cumulative == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7});

  auto wedge = h0(BarComplex(models::wedge(2), SideKind::Ground, SideKind::Ground), 3);
  CHECK(wedge.new_dims == std::vector<std::size_t>{1, 2, 4, 8});

  // quasi-isomorphic models give the same tables
  for (const auto& m : {models::circle_with_cell(), models::circle_tensor_cell()}) {
    auto t = h0(BarComplex(m, SideKind::Ground, SideKind::Ground), 6);
    CHECK(t.new_dims == circle.new_dims);
  }

  // torus: graded pieces of a polynomial ring in two variables
  auto torus = h0(BarComplex(models::torus(), SideKind::Ground, SideKind::Ground), 5);
  for (std::size_t s = 0; s <= 5; ++s) CHECK(torus.new_dims[s] == monomials(2, s));

  // every basis element is a cocycle of the stated bar degree
  BarComplex tb(models::torus(), SideKind::Ground, SideKind::Ground);
  for (std::size_t i = 0; i < torus.basis.size(); ++i) {
    CHECK(tb.differential(torus.basis[i]).empty());
    std::size_t longest = 0;
    for (const auto& [w, c] : torus.basis[i]) longest = std::max(longest, w.letters.size());
    CHECK(longest == torus.filtration[i]);
  }

  // kernel dimension against rank-nullity of the full differential matrix
  for (std::size_t cap = 0; cap <= 4; ++cap) {
    auto dom = tb.words(0, cap);
    auto cod = tb.words(1, cap);
    std::map<BarWord, std::size_t> idx;
    for (std::size_t i = 0; i < cod.size(); ++i) idx[cod[i]] = i;
    std::vector<SparseVec> rows(cod.size());
    for (std::size_t j = 0; j < dom.size(); ++j)
      for (const auto& [w, c] : tb.differential(word(dom[j].letters))) rows[idx.at(w)][j] = c;
    CHECK(torus.cumulative[std::min<std::size_t>(cap, 5)] == dom.size() - rank(RatMatrix::from_rows(dom.size(), rows)));
  }
}

TEST_CASE("H0 with O(S) coefficients") {
  auto m = models::circle_sigma2();
  auto trivial = h0(BarComplex(m, SideKind::Ground, SideKind::Ground), 4);
  auto coeff = h0(BarComplex(m, SideKind::Ground, SideKind::Coefficients), 4);
  for (std::size_t s = 0; s <= 4; ++s) CHECK(coeff.new_dims[s] == 2 * trivial.new_dims[s]);
  REQUIRE(coeff.tensor_decomposition.has_value());
  CHECK(*coeff.tensor_decomposition);
  auto swap = h0(BarComplex(models::torus_swap(), SideKind::Ground, SideKind::Coefficients), 3);
  CHECK(swap.new_dims == std::vector<std::size_t>{2, 4, 6, 8});
  CHECK(*swap.tensor_decomposition);
}

TEST_CASE("Eilenberg-Moore E1 dimensions match the tensor-complex oracle") {
  const std::vector<std::pair<SideKind, SideKind>> ends = {{SideKind::Ground, SideKind::Ground},
                                                           {SideKind::Algebra, SideKind::Ground},
                                                           {SideKind::Algebra, SideKind::Algebra}};
  for (const auto& m : corpus())
    for (const auto& [l, r] : ends) {
      BarComplex bar(m, l, r);
      auto e1 = em_e1_dims(bar, 3);
      for (std::size_t s = 0; s <= 3; ++s) {
        auto brute = tensor_cohomology(bar, s, e1[s].size() + 1);
        for (std::size_t t = 0; t < brute.size(); ++t) CHECK(brute[t] == (t < e1[s].size() ? e1[s][t] : 0));
      }
    }
  auto circle = em_e1_dims(BarComplex(models::circle(), SideKind::Ground, SideKind::Ground), 5);
  for (std::size_t s = 0; s <= 5; ++s) CHECK(circle[s][s] == 1);
  auto wedge = em_e1_dims(BarComplex(models::wedge(2), SideKind::Ground, SideKind::Ground), 5);
  for (std::size_t s = 0; s <= 5; ++s) CHECK(wedge[s][s] == std::size_t{1} << s);
  // a model with no positive cohomology
  std::vector<SparseVec> d(3);
  d[1] = {{2, Rational(1)}};
  auto acyclic = std::make_shared<DGAModel>(std::vector<std::string>{"1", "b", "a"}, std::vector<int>{0, 1, 2}, 0, d,
                                            Products{});
  auto e = em_e1_dims(BarComplex(acyclic, SideKind::Ground, SideKind::Ground), 3);
  for (std::size_t s = 1; s <= 3; ++s)
    for (auto x : e[s]) CHECK(x == 0);
}

TEST_CASE("coproduct on H0") {
  BarComplex circle(models::circle(), SideKind::Ground, SideKind::Ground);
  auto dw = coproduct_h0(circle, word({1}));
  CHECK(dw == BarTensor{{{BarWord{0, {1}, 0}, BarWord{0, {}, 0}}, 1}, {{BarWord{0, {}, 0}, BarWord{0, {1}, 0}}, 1}});

  auto m = models::circle_sigma2();
  BarComplex bar(m, SideKind::Ground, SideKind::Coefficients);
  const auto& G = m->group();
  for (std::size_t c = 0; c < G.order(); ++c) {
    auto dc = coproduct_h0(bar, word({}, 0, c));
    BarTensor expect;
    for (std::size_t h = 0; h < G.order(); ++h)
      for (std::size_t k = 0; k < G.order(); ++k)
        if (G.multiply(h, k) == c) expect[{BarWord{0, {}, h}, BarWord{0, {}, k}}] += 1;
    CHECK(dc == expect);
  }

  // coassociativity and cocycle factors on random cocycles
  for (const auto& model : {models::circle_sigma2(), models::torus_swap()}) {
    BarComplex b(model, SideKind::Ground, SideKind::Coefficients);
    auto basis = h0(b, 3).basis;
    std::mt19937_64 rng(9);
    for (int t = 0; t < 6; ++t) {
      BarElement x;
      for (const auto& v : basis) axpy(x, Rational(std::uniform_int_distribution<int>(-2, 2)(rng)), v);
      auto dx = coproduct_h0(b, x);
      std::map<std::tuple<BarWord, BarWord, BarWord>, Rational> left, right;
      for (const auto& [pq, c] : dx) {
        for (const auto& [pq2, c2] : coproduct_h0(b, BarElement{{pq.first, Rational(1)}}))
          left[{pq2.first, pq2.second, pq.second}] += c * c2;
        for (const auto& [pq2, c2] : coproduct_h0(b, BarElement{{pq.second, Rational(1)}}))
          right[{pq.first, pq2.first, pq2.second}] += c * c2;
      }
      for (auto* mp : {&left, &right})
        for (auto it = mp->begin(); it != mp->end();) it = it->second == 0 ? mp->erase(it) : std::next(it);
      CHECK(left == right);
      // (d x 1) and (1 x d) both vanish
      std::map<BarWord, BarElement> by_right, by_left;
      for (const auto& [pq, c] : dx) {
        add_term(by_right[pq.second], pq.first, c);
        add_term(by_left[pq.first], pq.second, c);
      }
      for (const auto& [w, e] : by_right) CHECK(b.differential(e).empty());
      for (const auto& [w, e] : by_left) CHECK(b.differential(e).empty());
    }
  }
}

TEST_CASE("indecomposables, cobracket and the dual Lie algebra") {
  auto circle_bar = BarComplex(models::circle(), SideKind::Ground, SideKind::Ground);
  auto qc = indecomposables_and_cobracket(circle_bar, h0(circle_bar, 5));
  CHECK(qc.dims == std::vector<std::size_t>{1, 0, 0, 0, 0});

  auto torus_bar = BarComplex(models::torus(), SideKind::Ground, SideKind::Ground);
  auto qt = indecomposables_and_cobracket(torus_bar, h0(torus_bar, 4));
  CHECK(qt.dims == std::vector<std::size_t>{2, 0, 0, 0});

  for (int k : {2, 3}) {
    BarComplex bar(models::wedge(k), SideKind::Ground, SideKind::Ground);
    auto q = indecomposables_and_cobracket(bar, h0(bar, 3));
    std::vector<Generator> gens;
    for (int i = 0; i < k; ++i) gens.push_back({"y" + std::to_string(i), 1});
    FreeLieAlgebra free(gens, 3);
    CHECK(q.dims == free.dims_by_degree());
    CHECK(q.dual_lie->dims_by_degree() == free.dims_by_degree());
    CHECK(q.dual_lie->validate().ok);
    // antisymmetry of the cobracket
    for (const auto& cb : q.cobracket)
      for (const auto& [ij, c] : cb) {
        auto it = cb.find({ij.second, ij.first});
        REQUIRE(it != cb.end());
        CHECK(it->second == -c);
      }
    // degree-1 brackets span degree 2 (the dual is generated in degree 1)
    EchelonBasis span;
    for (std::size_t i = 0; i < q.dims[0]; ++i)
      for (std::size_t j = 0; j < q.dims[0]; ++j) span.insert(q.dual_lie->bracket_basis(i, j).terms);
    CHECK(span.size() == q.dims[1]);
  }

  auto sig = models::circle_sigma2();
  BarComplex sb(sig, SideKind::Ground, SideKind::Ground);
  auto qs = indecomposables_and_cobracket(sb, h0(sb, 3));
  CHECK(qs.dims[0] == 1);
  REQUIRE(qs.action.size() == 2);
  CHECK(qs.action[1].get(0, 0) == 1);
  auto sw = models::torus_swap();
  BarComplex swb(sw, SideKind::Ground, SideKind::Ground);
  auto qw = indecomposables_and_cobracket(swb, h0(swb, 2));
  CHECK(qw.dims[0] == 2);
  CHECK(qw.action[1].get(0, 0) + qw.action[1].get(1, 1) == 0);
}
