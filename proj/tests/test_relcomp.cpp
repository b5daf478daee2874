#include "doctest.h"
#include "malcev/models.hpp"
#include "malcev/relcomp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace malcev;

namespace {

const double PI = std::acos(-1.0);

LiePresentation free_on(const std::vector<std::string>& names, int N) {
  LiePresentation p;
  for (const auto& n : names) p.generators.push_back({n, 1});
  p.truncation = N;
  return p;
}

// Sigma_2 = C_2 swapping two generators.
SemidirectContext swap_context(const NilpotentQuotient& q, std::shared_ptr<const Envelope> env) {
  auto G = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
  GeneratorAction id = GeneratorAction::identity(2);
  GeneratorAction sw{"swap", {1, 0}, {1, 1}};
  return SemidirectContext::from_generator_actions(G, env, q, {id, sw});
}

ComplexSeries random_grouplike(std::mt19937_64& rng, std::shared_ptr<const Envelope> env) {
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  std::vector<Complex> c(env->lie().dim());
  for (auto& z : c) z = Complex(u(rng), u(rng));
  return exp(ComplexSeries::from_lie(env, c));
}

}  // namespace

TEST_CASE("partitions and Young seminormal irreps") {
  CHECK(partitions(4).size() == 5);
  CHECK(partitions(5).size() == 7);
  CHECK(partitions(3) == std::vector<std::vector<int>>{{3}, {2, 1}, {1, 1, 1}});
  for (int n = 1; n <= 5; ++n) {
    FiniteGroup G = FiniteGroup::symmetric(n);
    auto irreps = symmetric_irreps(G);
    auto rep = peter_weyl_check(G, irreps);
    CHECK(rep.ok);
    CHECK(rep.exact);
    CHECK(rep.sum_of_squares == G.order());
    CHECK(rep.rank == G.order());
    // brute-force oracle: one irrep per conjugacy class
    CHECK(irreps.size() == G.class_count());
  }
  auto dims = peter_weyl_check(FiniteGroup::symmetric(4), symmetric_irreps(FiniteGroup::symmetric(4))).dims;
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<std::size_t>{1, 1, 2, 3, 3});
  // sign representation on a transposition
  FiniteGroup S3 = FiniteGroup::symmetric(3);
  auto ir = symmetric_irreps(S3);
  std::size_t t = *S3.index_of_permutation({1, 0, 2});
  CHECK(ir.back().exact[t][0] == -1);
  CHECK(ir.front().exact[t][0] == 1);
}

TEST_CASE("cyclic characters") {
  for (int n = 1; n <= 6; ++n) {
    FiniteGroup G = FiniteGroup::cyclic(n);
    auto rep = peter_weyl_check(G, cyclic_irreps(G));
    CHECK(rep.ok);
    CHECK(rep.rank == std::size_t(n));
    CHECK(rep.exact == (n <= 2));
  }
}

TEST_CASE("Peter-Weyl failures are reported") {
  FiniteGroup G = FiniteGroup::symmetric(3);
  auto irreps = symmetric_irreps(G);
  auto missing = irreps;
  missing.erase(missing.begin() + 1);
  auto rep = peter_weyl_check(G, missing);
  CHECK_FALSE(rep.ok);
  CHECK(rep.problems.back().find("rank") != std::string::npos);
  bool deficit = false;
  for (const auto& p : rep.problems) deficit = deficit || p.find("deficit 4") != std::string::npos;
  CHECK(deficit);
  auto doubled = irreps;
  doubled.push_back(irreps[0]);
  CHECK_FALSE(peter_weyl_check(G, doubled).ok);
  // regular-like reducible: trivial plus sign as a 2-dimensional block
  std::vector<std::vector<Rational>> mats;
  for (std::size_t g = 0; g < G.order(); ++g)
    mats.push_back({irreps[0].exact[g][0], 0, 0, irreps[2].exact[g][0]});
  auto red = peter_weyl_check(G, {Irrep::from_exact("sum", 2, mats), irreps[1]});
  CHECK_FALSE(red.ok);
}

TEST_CASE("semidirect product laws") {
  NilpotentQuotient q(free_on({"X", "Y"}, 3));
  auto env = std::make_shared<const Envelope>(q.lie(), 3);
  SemidirectContext ctx = swap_context(q, env);
  std::mt19937_64 rng(3);
  SemidirectElement e = semidirect_identity(ctx);
  SemidirectElement a{1, random_grouplike(rng, env)};
  CHECK(semidirect_distance(semidirect_multiply(ctx, e, a), a) < 1e-14);
  CHECK(semidirect_distance(semidirect_multiply(ctx, a, e), a) < 1e-14);
  SemidirectElement s{1, ComplexSeries::one(env)};
  CHECK(semidirect_distance(semidirect_multiply(ctx, s, semidirect_inverse(ctx, s)), e) == 0.0);
  CHECK(semidirect_distance(semidirect_multiply(ctx, a, semidirect_inverse(ctx, a)), e) < 1e-12);
  CHECK(semidirect_distance(semidirect_multiply(ctx, semidirect_inverse(ctx, a), a), e) < 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    SemidirectElement x{rng() % 2, random_grouplike(rng, env)}, y{rng() % 2, random_grouplike(rng, env)},
        z{rng() % 2, random_grouplike(rng, env)};
    auto l = semidirect_multiply(ctx, semidirect_multiply(ctx, x, y), z);
    auto r = semidirect_multiply(ctx, x, semidirect_multiply(ctx, y, z));
    CHECK(semidirect_distance(l, r) < 1e-8);
  }
  SemidirectElement bad{0, ComplexSeries::from_lie(env, std::vector<Complex>(env->lie().dim(), 1.0))};
  CHECK_THROWS(semidirect_multiply(ctx, bad, a));
  // (s, u) is s u: the product (s,1)(e,u) = (s, u) and (e,u)(s,1) = (s, Ad(s^-1) u)
  SemidirectElement uu{0, a.u};
  CHECK(semidirect_distance(semidirect_multiply(ctx, s, uu), SemidirectElement{1, a.u}) < 1e-14);
  CHECK(semidirect_distance(semidirect_multiply(ctx, uu, s), SemidirectElement{1, ctx.apply(1, a.u)}) < 1e-14);
}

TEST_CASE("Ad must be a homomorphism by Lie automorphisms") {
  NilpotentQuotient q(free_on({"X", "Y"}, 2));
  auto env = std::make_shared<const Envelope>(q.lie(), 2);
  auto G = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
  GeneratorAction id = GeneratorAction::identity(2);
  CHECK_NOTHROW(SemidirectContext::from_generator_actions(G, env, q, {id, GeneratorAction{"neg", {0, 1}, {-1, 1}}}));
  // an involution that does not preserve brackets
  std::vector<LieElement> ident, flip;
  for (std::size_t j = 0; j < 3; ++j) {
    ident.push_back(LieElement::basis(j));
    flip.push_back(Rational(j == 2 ? -1 : 1) * LieElement::basis(j));
  }
  CHECK_THROWS(SemidirectContext(G, env, {ident, flip}));
  auto C3 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(3));
  GeneratorAction sw{"swap", {1, 0}, {1, 1}};
  CHECK_THROWS(SemidirectContext::from_generator_actions(C3, env, q, {id, sw, sw}));
}

TEST_CASE("relative completion representation of the double cover of C*") {
  NilpotentQuotient q(free_on({"X", "Y"}, 3));
  auto env = std::make_shared<const Envelope>(q.lie(), 3);
  SemidirectContext ctx = swap_context(q, env);
  auto G = ctx.group_ptr();
  // omega on sheet e: dlog z X + z dz Y; on the other sheet: Ad(swap) of it
  LieValuedOneForm w0;
  w0.lie = q.lie();
  w0.terms.push_back({ScalarOneForm::dlog(0.0, {1.0}), LieElement::basis(0)});
  w0.terms.push_back({ScalarOneForm::poly(1, 0, {0.0, 1.0}), LieElement::basis(1)});
  SheetedLieForm omega{{w0, map_coefficients(w0, ctx.ad(1))}};
  CHECK(check_sheet_equivariance(ctx, omega).ok);

  PiecewisePath circle(1);
  circle.add_arc({ArcMover{0, 0.0, 1.0, 0.0, 2 * PI}}, Point{1.0});
  SheetedPath loop{circle, G, {0}, 1};
  OdeOptions o;
  o.tol = 1e-12;
  auto r1 = relative_rep(ctx, loop, omega, o);
  CHECK(r1.s == 1);
  CHECK(is_grouplike(r1.u, 1e-8));
  auto r2 = relative_rep(ctx, loop.concat(loop), omega, o);
  CHECK(r2.s == 0);
  CHECK(semidirect_distance(r2, semidirect_multiply(ctx, r1, r1)) < 1e-8);
  auto back = relative_rep(ctx, loop.concat(loop.reversed()), omega, o);
  CHECK(semidirect_distance(back, semidirect_identity(ctx)) < 1e-8);
  CHECK(semidirect_distance(relative_rep(ctx, loop.reversed(), omega, o), semidirect_inverse(ctx, r1)) < 1e-8);
  SheetedPath empty{PiecewisePath(1), G, {}, 0};
  CHECK(semidirect_distance(relative_rep(ctx, empty, omega, o), semidirect_identity(ctx)) == 0.0);
  // degree-one part: on the first sheet the loop integrates dlog z to 2 pi i
  auto raw = ctx.apply(r1.s, r1.u);
  CHECK(std::abs(raw[*env->lie_monomial(0)] - Complex(0, 2 * PI)) < 1e-8);
  CHECK(std::abs(raw[*env->lie_monomial(1)]) < 1e-8);

  SheetedLieForm bad{{w0, w0}};
  auto rep = check_sheet_equivariance(ctx, bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.certificate.find("dlog") != std::string::npos);
  CHECK_THROWS(relative_rep(ctx, loop, bad, o));
}

TEST_CASE("canonical form identities") {
  NilpotentQuotient q(free_on({"X"}, 1));
  LieValuedOneForm a, b;
  a.lie = b.lie = q.lie();
  a.dimension = b.dimension = 2;
  a.terms.push_back({ScalarOneForm::dlog(0.0, {1.0, -1.0}), LieElement::basis(0)});
  b.terms.push_back({ScalarOneForm::dlog(0.0, {-1.0, 1.0}), LieElement::basis(0)});
  CHECK(form_difference(a, b).empty());
  b.terms.push_back({ScalarOneForm::dlog(0.0, {2.0, -2.0}), Rational(-1) * LieElement::basis(0)});
  CHECK_FALSE(form_difference(a, b).empty());
}

TEST_CASE("Lie algebras from coordinate rings") {
  auto wedge = std::shared_ptr<const DGAModel>(models::wedge(2));
  BarComplex bw(wedge, SideKind::Ground, SideKind::Ground);
  auto hw = h0(bw, 3);
  auto L = lie_from_coordinate_ring(bw, hw, 3);
  CHECK(L->dims_by_degree() == std::vector<std::size_t>{2, 1, 2});
  CHECK(L->validate().ok);
  CHECK_THROWS(lie_from_coordinate_ring(bw, hw, 4));
  auto circle = std::shared_ptr<const DGAModel>(models::circle());
  BarComplex bc(circle, SideKind::Ground, SideKind::Ground);
  auto Lc = lie_from_coordinate_ring(bc, h0(bc, 4), 1);
  CHECK(Lc->dims_by_degree().at(0) == 1);
  for (std::size_t d = 1; d < Lc->dims_by_degree().size(); ++d) CHECK(Lc->dims_by_degree()[d] == 0);
}

TEST_CASE("isotypic parts of the first homology") {
  auto m = std::shared_ptr<const DGAModel>(models::circle_sigma2());
  auto irreps = symmetric_irreps(m->group());
  REQUIRE(irreps.size() == 2);
  auto rep = isotypic_h1(m, irreps);
  CHECK(rep.consistent);
  CHECK(rep.labels == std::vector<std::string>{"[2]", "[1,1]"});
  CHECK(rep.gr_h1_isotypic_dim == std::vector<std::size_t>{1, 0});
  CHECK(rep.character_route == std::vector<std::size_t>{1, 0});
  CHECK(rep.invariant_route[0] == 1u);
  CHECK(rep.invariant_route[1] == 0u);

  auto t = std::shared_ptr<const DGAModel>(models::torus_swap());
  auto rt = isotypic_h1(t, symmetric_irreps(t->group()));
  CHECK(rt.consistent);
  CHECK(rt.gr_h1_isotypic_dim == std::vector<std::size_t>{1, 1});
  CHECK(rt.invariant_route[1] == 1u);
  CHECK_THROWS(isotypic_h1(std::shared_ptr<const DGAModel>(models::circle()), irreps));
}
