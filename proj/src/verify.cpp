#include "malcev/verify.hpp"

#include "malcev/bar.hpp"
#include "malcev/braid_kz.hpp"
#include "malcev/models.hpp"
#include "malcev/relcomp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace malcev::verify {

namespace {

constexpr double CHEN_TOL = 1e-8;
constexpr double GROUPLIKE_TOL = 1e-8;
constexpr double BRAID_TOL = 1e-7;

std::uint64_t case_seed(std::uint64_t seed, std::size_t k) { return seed * 1000003ULL + k; }

// Runs independent cases in parallel; results keep case order.
std::vector<Case> run_cases(std::size_t n, const std::function<Case(std::size_t)>& body) {
  std::vector<Case> out(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < n; ++k) {
    try {
      out[k] = body(k);
    } catch (const std::exception& e) {
      out[k].name = "case " + std::to_string(k);
      out[k].pass = false;
      out[k].numeric = dynamic_cast<const ToleranceError*>(&e) != nullptr;
      out[k].detail = e.what();
    }
  }
  return out;
}

Case numeric_case(std::string name, double err, double tol) {
  Case c;
  c.name = std::move(name);
  c.numeric = true;
  c.measure = err;
  c.pass = err <= tol;
  return c;
}

Case exact_case(std::string name, bool pass, std::string detail = {}) {
  Case c;
  c.name = std::move(name);
  c.pass = pass;
  c.measure = pass ? 0 : 1;
  c.detail = std::move(detail);
  return c;
}

std::vector<ScalarOneForm> random_letters(std::mt19937_64& rng, std::size_t r) {
  std::vector<ScalarOneForm> w;
  for (std::size_t k = 0; k < r; ++k) w.push_back(random_form(rng));
  return w;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream s;
  for (std::size_t k = 0; k < v.size(); ++k) s << (k ? "," : "") << v[k];
  return s.str();
}

std::size_t witt(int k, int d) {
  auto mobius = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    return m > 1 ? -r : r;
  };
  long s = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) {
      long pw = 1;
      for (int t = 0; t < d / e; ++t) pw *= k;
      s += mobius(e) * pw;
    }
  return std::size_t(s / d);
}

SuiteResult d2(const Options& opt) {
  struct Setup {
    std::string name;
    SideKind left, right;
  };
  std::vector<Setup> setups;
  for (const auto& n : models::names()) {
    bool coeff = models::by_name(n)->has_action();
    setups.push_back({n, SideKind::Ground, coeff ? SideKind::Coefficients : SideKind::Ground});
  }
  setups.push_back({"circle_cell", SideKind::Algebra, SideKind::Algebra});
  std::size_t per = opt.cases ? opt.cases : 100;
  SuiteResult r{"d2", {}};
  r.cases = run_cases(setups.size(), [&](std::size_t k) {
    BarComplex bar(models::by_name(setups[k].name), setups[k].left, setups[k].right);
    std::mt19937_64 rng(case_seed(opt.seed, k));
    std::size_t bad = 0;
    for (std::size_t t = 0; t < per; ++t)
      if (!bar.differential(bar.differential(bar.random_element(rng, 4, 6))).empty()) ++bad;
    std::string name = setups[k].name + (setups[k].left == SideKind::Algebra ? " (algebra ends)" : "");
    Case c = exact_case(name, bad == 0, std::to_string(per) + " random elements");
    c.measure = double(bad);
    return c;
  });
  return r;
}

SuiteResult chen(const std::string& which, const Options& opt) {
  std::size_t n = opt.cases ? opt.cases : 50;
  OdeOptions o;
  o.tol = std::min(opt.tol, 1e-11);
  SuiteResult r{which, {}};
  r.cases = run_cases(n, [&](std::size_t k) {
    std::mt19937_64 rng(case_seed(opt.seed, k));
    PiecewisePath g = random_path(rng, {1.0, 2.0});
    std::string name = which + " " + std::to_string(k);
    if (which == "shuffle") {
      std::size_t p = 1 + rng() % 2, q = 1 + rng() % 2;
      auto a = random_letters(rng, p), b = random_letters(rng, q);
      Complex lhs = iterated_integral(g, a, o) * iterated_integral(g, b, o);
      // sum over (p, q) shuffles: choose the positions of the a-letters
      Complex rhs = 0;
      std::vector<bool> mask(p + q, false);
      std::fill(mask.begin(), mask.begin() + long(p), true);
      std::sort(mask.begin(), mask.end());
      do {
        std::vector<ScalarOneForm> w;
        std::size_t ia = 0, ib = 0;
        for (bool m : mask) w.push_back(m ? a[ia++] : b[ib++]);
        rhs += iterated_integral(g, w, o);
      } while (std::next_permutation(mask.begin(), mask.end()));
      return numeric_case(name, relative_error(lhs, rhs), CHEN_TOL);
    }
    if (which == "inverse") {
      std::size_t len = 1 + rng() % 3;
      auto w = random_letters(rng, len);
      auto rev = w;
      std::reverse(rev.begin(), rev.end());
      Complex lhs = iterated_integral(g.reversed(), w, o);
      Complex rhs = (len % 2 ? -1.0 : 1.0) * iterated_integral(g, rev, o);
      return numeric_case(name, relative_error(lhs, rhs), CHEN_TOL);
    }
    PiecewisePath m = random_path(rng, g.end());
    std::size_t len = 1 + rng() % 3;
    auto w = random_letters(rng, len);
    Complex lhs = iterated_integral(g.concat(m), w, o);
    Complex rhs = 0;
    for (std::size_t s = 0; s <= len; ++s) {
      std::vector<ScalarOneForm> head(w.begin(), w.begin() + long(s)), tail(w.begin() + long(s), w.end());
      rhs += (head.empty() ? Complex(1) : iterated_integral(g, head, o)) *
             (tail.empty() ? Complex(1) : iterated_integral(m, tail, o));
    }
    return numeric_case(name, relative_error(lhs, rhs), CHEN_TOL);
  });
  return r;
}

SuiteResult grouplike(const Options& opt) {
  int N = opt.truncation ? opt.truncation : 4;
  LiePresentation p;
  p.generators = {{"X", 1}, {"Y", 1}};
  p.truncation = N;
  NilpotentQuotient q(p);
  auto env = std::make_shared<const Envelope>(q.lie(), N);
  std::size_t n = opt.cases ? opt.cases : 20;
  OdeOptions o;
  o.tol = opt.tol;
  SuiteResult r{"grouplike", {}};
  r.cases = run_cases(n, [&](std::size_t k) {
    std::mt19937_64 rng(case_seed(opt.seed, k));
    LieValuedOneForm w;
    w.lie = q.lie();
    w.dimension = 2;
    std::size_t terms = 1 + rng() % 3;
    for (std::size_t t = 0; t < terms; ++t) {
      LieElement x = LieElement::basis(rng() % std::min<std::size_t>(q.lie()->dim(), 3));
      w.terms.emplace_back(random_form(rng), x);
    }
    PiecewisePath g = random_path(rng, {1.0, 2.0});
    auto T = transport(g, w, env, o);
    Case c = numeric_case("transport " + std::to_string(k), T.error_estimate, GROUPLIKE_TOL);
    c.pass = is_grouplike(T.series, GROUPLIKE_TOL);
    return c;
  });
  KZSystem kz(3, std::min(N, 3));
  for (const char* word : {"s1", "s1 s2 s1", "s2^-1 s1 s1"}) {
    auto h = braid_holonomy(kz, BraidWord::parse(3, word), o);
    Case c = numeric_case(std::string("braid ") + word, h.raw.error_estimate, GROUPLIKE_TOL);
    c.pass = is_grouplike(h.raw.series, GROUPLIKE_TOL);
    r.cases.push_back(c);
  }
  return r;
}

SuiteResult equivariance(const Options& opt) {
  SuiteResult r{"equivariance", {}};
  int N = opt.truncation ? opt.truncation : 3;
  for (std::size_t n = 2; n <= 4; ++n) {
    KZSystem kz(n, N);
    auto rep = check_equivariance(kz);
    auto integ = check_integrability(kz.form());
    r.cases.push_back(exact_case("KZ n=" + std::to_string(n) + " equivariance", rep.ok, rep.certificate));
    r.cases.push_back(exact_case("KZ n=" + std::to_string(n) + " integrability", integ.integrable, integ.certificate));
  }
  return r;
}

SuiteResult braid_relations(const Options& opt) {
  SuiteResult r{"braid-relations", {}};
  OdeOptions o;
  o.tol = opt.tol;
  struct Pair {
    std::size_t n;
    int N;
    std::string a, b;
  };
  int N3 = opt.truncation ? opt.truncation : 4;
  std::vector<Pair> pairs{{3, N3, "s1 s2 s1", "s2 s1 s2"},
                          {4, 3, "s1 s3", "s3 s1"},
                          {4, 3, "s2 s3 s2", "s3 s2 s3"},
                          {4, 3, "s1 s2 s1", "s2 s1 s2"}};
  std::vector<Case> rel = run_cases(pairs.size(), [&](std::size_t k) {
    KZSystem kz(pairs[k].n, pairs[k].N);
    auto ha = braid_holonomy(kz, BraidWord::parse(pairs[k].n, pairs[k].a), o);
    auto hb = braid_holonomy(kz, BraidWord::parse(pairs[k].n, pairs[k].b), o);
    return numeric_case("B" + std::to_string(pairs[k].n) + " " + pairs[k].a + " = " + pairs[k].b,
                        semidirect_distance(ha.element, hb.element), BRAID_TOL);
  });
  r.cases = rel;
  KZSystem kz(3, 3);
  std::size_t n = opt.cases ? opt.cases : 20;
  auto hom = run_cases(n, [&](std::size_t k) {
    std::mt19937_64 rng(case_seed(opt.seed, k));
    auto word = [&](std::size_t len) {
      BraidWord w;
      w.strands = 3;
      for (std::size_t t = 0; t < len; ++t) w.letters.push_back({1 + rng() % 2, rng() % 2 ? 1 : -1});
      return w;
    };
    BraidWord u = word(1 + rng() % 3), v = word(1 + rng() % 3);
    auto hu = braid_holonomy(kz, u, o), hv = braid_holonomy(kz, v, o), huv = braid_holonomy(kz, u.concat(v), o);
    return numeric_case("hom (" + u.render() + ")(" + v.render() + ")",
                        semidirect_distance(huv.element, semidirect_multiply(kz.context(), hu.element, hv.element)),
                        BRAID_TOL);
  });
  r.cases.insert(r.cases.end(), hom.begin(), hom.end());
  return r;
}

SuiteResult peter_weyl(const Options&) {
  SuiteResult r{"peter-weyl", {}};
  for (int n = 1; n <= 5; ++n) {
    FiniteGroup G = FiniteGroup::symmetric(n);
    auto rep = peter_weyl_check(G, symmetric_irreps(G));
    bool ok = rep.ok && rep.sum_of_squares == G.order() && rep.rank == G.order() &&
              rep.dims.size() == G.class_count();
    r.cases.push_back(exact_case("S" + std::to_string(n) + " dims " + join(rep.dims), ok,
                                 "sum of squares " + std::to_string(rep.sum_of_squares) + ", rank " +
                                     std::to_string(rep.rank)));
  }
  for (int n = 1; n <= 6; ++n) {
    FiniteGroup G = FiniteGroup::cyclic(n);
    auto rep = peter_weyl_check(G, cyclic_irreps(G));
    r.cases.push_back(exact_case("C" + std::to_string(n), rep.ok && rep.rank == G.order()));
  }
  return r;
}

SuiteResult witt_suite(const Options& opt) {
  SuiteResult r{"witt", {}};
  for (int k = 1; k <= 3; ++k) {
    int cap = k == 3 ? 4 : 6;
    LiePresentation p;
    for (int g = 0; g < k; ++g) p.generators.push_back({"x" + std::to_string(g + 1), 1});
    p.truncation = cap;
    auto dims = NilpotentQuotient(p).lie()->dims_by_degree();
    std::vector<std::size_t> oracle;
    for (int d = 1; d <= cap; ++d) oracle.push_back(witt(k, d));
    r.cases.push_back(exact_case("free Lie on " + std::to_string(k) + ": " + join(dims), dims == oracle));
  }
  std::size_t cap = opt.cap ? std::min<std::size_t>(opt.cap, 4) : 3;
  for (int k = 2; k <= 3; ++k) {
    if (k == 3 && cap > 3) continue;
    BarComplex bar(models::wedge(k), SideKind::Ground, SideKind::Ground);
    auto h = h0(bar, cap);
    auto q = indecomposables_and_cobracket(bar, h);
    auto dims = q.dual_lie->dims_by_degree();
    std::vector<std::size_t> oracle;
    for (std::size_t d = 1; d <= cap; ++d) oracle.push_back(witt(k, int(d)));
    r.cases.push_back(exact_case("bar dual of wedge" + std::to_string(k) + ": " + join(dims),
                                 dims == oracle && q.dual_lie->validate().ok));
  }
  return r;
}

}  // namespace

bool SuiteResult::ok() const {
  return std::all_of(cases.begin(), cases.end(), [](const Case& c) { return c.pass; });
}

bool SuiteResult::only_numeric_failures() const {
  return std::all_of(cases.begin(), cases.end(), [](const Case& c) { return c.pass || c.numeric; });
}

std::vector<std::string> suite_names() {
  return {"d2", "shuffle", "inverse", "composition", "grouplike", "equivariance", "braid-relations", "peter-weyl", "witt"};
}

SuiteResult run_suite(const std::string& name, const Options& opt) {
  if (name == "d2") return d2(opt);
  if (name == "shuffle" || name == "inverse" || name == "composition") return chen(name, opt);
  if (name == "grouplike") return grouplike(opt);
  if (name == "equivariance") return equivariance(opt);
  if (name == "braid-relations") return braid_relations(opt);
  if (name == "peter-weyl") return peter_weyl(opt);
  if (name == "witt") return witt_suite(opt);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

double relative_error(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

PiecewisePath random_path(std::mt19937_64& rng, const Point& start) {
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  PiecewisePath p(2);
  Point cur = start;
  for (int s = 0; s < 2; ++s) {
    std::vector<std::vector<Complex>> c(2);
    for (int i = 0; i < 2; ++i) c[i] = {cur[i], Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    p.add_polynomial(c);
    cur = p.end();
  }
  return p;
}

ScalarOneForm random_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  if (rng() % 2) {
    // zero set stays at distance > 0.5 from paths within 2.3 of (1, 2)
    return ScalarOneForm::dlog(Complex(3 + 0.1 * u(rng), 0.1 * u(rng)), {1.0, Complex(0.2 * u(rng), 0)});
  }
  ScalarOneForm w = ScalarOneForm::poly(2, rng() % 2, {Complex(u(rng), u(rng)), Complex(u(rng), 0)});
  w.monomials.push_back({{1, 1}, Complex(0, u(rng))});
  return w;
}

}  // namespace malcev::verify
