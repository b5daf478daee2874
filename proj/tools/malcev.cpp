// malcev: command-line front end for the bar, Lie, transport and braid modules.

#include "malcev/bar.hpp"
#include "malcev/braid_kz.hpp"
#include "malcev/io.hpp"
#include "malcev/verify.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace malcev;
using io::json;

namespace {

enum Exit { OK = 0, VALIDATION = 1, TOLERANCE = 2, INPUT = 3 };

struct RunConfig {
  std::string dga, path, form, lie, word, suite = "all";
  int trunc = 0;
  std::size_t cap = 6;
  std::size_t n = 3;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  bool json = false;
};

std::string join(const std::vector<std::size_t>& v, const char* sep = ",") {
  std::ostringstream s;
  for (std::size_t k = 0; k < v.size(); ++k) s << (k ? sep : "") << v[k];
  return s.str();
}

std::string complex_text(Complex z) {
  std::string re = io::format12(z.real()), im = io::format12(std::abs(z.imag()));
  if (io::round12(z.imag()) == 0) return re;
  if (io::round12(z.real()) == 0) return (z.imag() < 0 ? "-" : "") + im + "i";
  return re + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

void print_series(const ComplexSeries& s) {
  for (const auto& t : io::series_to_json(s))
    std::cout << "  " << t["monomial"].get<std::string>() << "  "
              << complex_text({t["value"][0].get<double>(), t["value"][1].get<double>()}) << "\n";
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int validate_dga(const RunConfig& cfg) {
  auto doc = io::dga_from_json(io::read_file(cfg.dga), cfg.dga);
  auto rep = doc.model->validate();
  std::vector<std::size_t> h = rep.ok ? doc.model->cohomology_dims() : std::vector<std::size_t>{};
  if (cfg.json) {
    json j = {{"valid", rep.ok}, {"violations", rep.violations}, {"dimension", doc.model->dim()}};
    if (rep.ok) j["cohomology"] = h;
    if (doc.model->has_action()) j["group_order"] = doc.model->group().order();
    emit(j);
  } else {
    std::cout << "basis elements: " << doc.model->dim() << "\n";
    if (doc.model->has_action()) std::cout << "group order: " << doc.model->group().order() << "\n";
    if (rep.ok) {
      std::cout << "cohomology dims: (" << join(h) << ")\n";
      std::cout << "valid\n";
    } else {
      for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
      std::cout << "invalid\n";
    }
  }
  return rep.ok ? OK : VALIDATION;
}

int bar_h0(const RunConfig& cfg) {
  auto doc = io::dga_from_json(io::read_file(cfg.dga), cfg.dga);
  auto rep = doc.model->validate();
  if (!rep.ok) {
    std::cerr << cfg.dga << ": model fails validation: " << rep.violations.front() << "\n";
    return VALIDATION;
  }
  BarComplex bar(doc.model, doc.left, doc.right);
  H0Result h = h0(bar, cfg.cap);
  auto e1 = em_e1_dims(bar, cfg.cap);
  std::vector<std::size_t> e1_diag;
  for (std::size_t s = 0; s < e1.size(); ++s) {
    std::size_t total = 0;
    for (auto v : e1[s]) total += v;
    e1_diag.push_back(total);
  }
  // indecomposables grow quickly with the cap; report them for small caps only
  std::optional<Indecomposables> q;
  if (doc.left == SideKind::Ground && doc.right == SideKind::Ground && cfg.cap >= 1 && cfg.cap <= 4)
    q = indecomposables_and_cobracket(bar, h);
  bool ok = !h.tensor_decomposition || *h.tensor_decomposition;
  if (cfg.json) {
    json j = {{"cap", cfg.cap}, {"new_dims", h.new_dims}, {"cumulative", h.cumulative}, {"e1_totals", e1_diag}};
    if (h.tensor_decomposition) j["tensor_decomposition"] = *h.tensor_decomposition;
    if (q) {
      j["indecomposables"] = q->dims;
      j["dual_lie_dims"] = q->dual_lie->dims_by_degree();
    }
    emit(j);
  } else {
    std::cout << "bar degree  new  cumulative  E1 total\n";
    for (std::size_t s = 0; s <= cfg.cap; ++s)
      std::cout << s << "  " << h.new_dims[s] << "  " << h.cumulative[s] << "  " << e1_diag[s] << "\n";
    std::cout << "dimension table (" << join(h.new_dims) << ")\n";
    if (h.tensor_decomposition)
      std::cout << "tensor decomposition with O(S): " << (*h.tensor_decomposition ? "holds" : "fails") << "\n";
    if (q) {
      std::cout << "indecomposables by bar degree (" << join(q->dims) << ")\n";
      std::cout << "dual Lie algebra dims (" << join(q->dual_lie->dims_by_degree()) << ")\n";
    }
  }
  return ok ? OK : VALIDATION;
}

LiePresentation load_presentation(const RunConfig& cfg) {
  LiePresentation p = io::presentation_from_json(io::read_file(cfg.lie), cfg.lie);
  if (cfg.trunc > 0) p.truncation = cfg.trunc;
  return p;
}

int lie_quotient(const RunConfig& cfg) {
  NilpotentQuotient q(load_presentation(cfg));
  const auto& L = *q.lie();
  auto rep = L.validate();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, LieElement>> brackets;
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j)
      if (!L.bracket_basis(i, j).is_zero()) brackets.push_back({{i, j}, L.bracket_basis(i, j)});
  auto render = [&](const LieElement& x) {
    std::ostringstream s;
    bool first = true;
    for (const auto& [k, c] : x.terms) {
      s << (first ? "" : " + ") << "(" << to_string(c) << ") " << L.label(k);
      first = false;
    }
    return s.str();
  };
  if (cfg.json) {
    json basis = json::array(), br = json::array();
    for (std::size_t i = 0; i < L.dim(); ++i) basis.push_back({{"label", L.label(i)}, {"degree", L.degree(i)}});
    for (const auto& [ij, x] : brackets) {
      json terms = json::array();
      for (const auto& [k, c] : x.terms) terms.push_back({{"coeff", to_string(c)}, {"label", L.label(k)}});
      br.push_back({{"left", L.label(ij.first)}, {"right", L.label(ij.second)}, {"value", terms}});
    }
    emit({{"truncation", L.truncation()}, {"dims", L.dims_by_degree()}, {"basis", basis}, {"brackets", br},
          {"new_relation_dims", q.new_relation_dims()}, {"jacobi", rep.ok}});
  } else {
    std::cout << "truncation " << L.truncation() << "\n";
    std::cout << "dims by degree (" << join(L.dims_by_degree()) << ")\n";
    for (std::size_t i = 0; i < L.dim(); ++i) std::cout << "  " << L.degree(i) << "  " << L.label(i) << "\n";
    for (const auto& [ij, x] : brackets)
      std::cout << "[" << L.label(ij.first) << ", " << L.label(ij.second) << "] = " << render(x) << "\n";
    std::cout << "minimal relations by degree (" << join(q.new_relation_dims()) << ")\n";
    std::cout << "Jacobi: " << (rep.ok ? "holds" : "fails") << "\n";
  }
  return rep.ok ? OK : VALIDATION;
}

int run_transport(const RunConfig& cfg) {
  NilpotentQuotient q(load_presentation(cfg));
  PiecewisePath path = io::path_from_json(io::read_file(cfg.path), cfg.path);
  LieValuedOneForm w = io::form_from_json(q, io::read_file(cfg.form), cfg.form);
  if (w.dimension != path.dimension())
    throw io::InputError(cfg.form, "form dimension " + std::to_string(w.dimension) + " differs from path dimension " +
                                       std::to_string(path.dimension()));
  std::optional<IntegrabilityReport> integ;
  try {
    integ = check_integrability(w);
  } catch (const std::invalid_argument&) {
    // complex coefficients: the exact check does not apply
  }
  auto env = std::make_shared<const Envelope>(q.lie(), q.lie()->truncation());
  OdeOptions o;
  o.tol = cfg.tol;
  TransportResult T = transport(path, w, env, o);
  bool gl = is_grouplike(T.series, 1e-8);
  if (cfg.json) {
    json j = {{"truncation", env->truncation()}, {"steps", T.steps}, {"error_estimate", io::round12(T.error_estimate)},
              {"grouplike", gl}, {"series", io::series_to_json(T.series)}};
    if (integ) j["integrable"] = integ->integrable;
    emit(j);
  } else {
    if (integ)
      std::cout << "integrable: " << (integ->integrable ? "yes" : "no (" + integ->certificate + ")") << "\n";
    std::cout << "steps " << T.steps << ", error estimate " << io::format12(T.error_estimate) << "\n";
    std::cout << "grouplike: " << (gl ? "yes" : "no") << "\n";
    print_series(T.series);
  }
  return gl ? OK : TOLERANCE;
}

int run_braid(const RunConfig& cfg) {
  if (cfg.n < 2 || cfg.n > 7) throw io::InputError("--n", "strand count must be between 2 and 7");
  BraidWord w;
  try {
    w = BraidWord::parse(cfg.n, cfg.word);
  } catch (const std::invalid_argument& e) {
    throw io::InputError("--word", e.what());
  }
  KZSystem kz(cfg.n, cfg.trunc > 0 ? cfg.trunc : 4);
  OdeOptions o;
  o.tol = cfg.tol;
  auto h = braid_holonomy(kz, w, o);
  bool gl = is_grouplike(h.raw.series, 1e-8);
  const auto& perm = kz.group()->permutation(h.element.s);
  auto lk = linking_numbers(w);
  if (cfg.json) {
    json links = json::array();
    for (const auto& [ij, v] : lk) links.push_back({{"pair", dk_label(ij.first + 1, ij.second + 1)}, {"value", to_string(v)}});
    emit({{"strands", cfg.n}, {"word", w.render()}, {"truncation", kz.truncation()}, {"permutation", perm},
          {"linking", links}, {"error_estimate", io::round12(h.raw.error_estimate)}, {"grouplike", gl},
          {"series", io::series_to_json(h.element.u)}});
  } else {
    std::cout << "word " << (w.letters.empty() ? "(empty)" : w.render()) << " on " << cfg.n << " strands, truncation "
              << kz.truncation() << "\n";
    std::vector<std::size_t> one_based;
    for (auto p : perm) one_based.push_back(p + 1);
    std::cout << "permutation (" << join(one_based, " ") << ")\n";
    for (const auto& [ij, v] : lk)
      if (v != 0) std::cout << "linking " << dk_label(ij.first + 1, ij.second + 1) << " " << to_string(v) << "\n";
    std::cout << "grouplike: " << (gl ? "yes" : "no") << ", error estimate " << io::format12(h.raw.error_estimate) << "\n";
    std::cout << "unipotent part:\n";
    print_series(h.element.u);
  }
  return gl ? OK : TOLERANCE;
}

int run_verify(const RunConfig& cfg) {
  std::vector<std::string> suites = cfg.suite == "all" ? verify::suite_names() : std::vector<std::string>{cfg.suite};
  verify::Options opt;
  opt.seed = cfg.seed;
  opt.truncation = cfg.trunc;
  opt.cap = cfg.cap == 6 ? 0 : cfg.cap;
  opt.tol = cfg.tol;
  bool exact_failure = false, numeric_failure = false;
  json all = json::array();
  for (const auto& name : suites) {
    verify::SuiteResult r;
    try {
      r = verify::run_suite(name, opt);
    } catch (const std::invalid_argument& e) {
      throw io::InputError("--suite", e.what());
    }
    if (!r.ok()) (r.only_numeric_failures() ? numeric_failure : exact_failure) = true;
    if (cfg.json) {
      json cases = json::array();
      for (const auto& c : r.cases)
        cases.push_back({{"name", c.name}, {"pass", c.pass}, {"numeric", c.numeric}, {"measure", io::round12(c.measure)},
                         {"detail", c.detail}});
      all.push_back({{"suite", r.suite}, {"ok", r.ok()}, {"cases", cases}});
    } else {
      std::size_t passed = 0;
      for (const auto& c : r.cases) passed += c.pass;
      std::cout << "suite " << r.suite << ": " << passed << "/" << r.cases.size() << " passed\n";
      for (const auto& c : r.cases) {
        std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (c.numeric) std::cout << "  err " << io::format12(c.measure);
        if (!c.detail.empty() && !c.pass) std::cout << "  " << c.detail;
        std::cout << "\n";
      }
    }
  }
  if (cfg.json) emit({{"seed", cfg.seed}, {"suites", all}});
  if (exact_failure) return VALIDATION;
  if (numeric_failure) return TOLERANCE;
  return OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Malcev and relative completions: bar constructions, iterated integrals, KZ holonomy"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto positive = CLI::PositiveNumber;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "JSON output");
    sub->add_option("--tol", cfg.tol, "ODE tolerance")->check(positive);
  };

  auto* vd = app.add_subcommand("validate-dga", "Check the DGA axioms and print cohomology");
  vd->add_option("--dga", cfg.dga, "DGA model (JSON)")->required();
  add_common(vd);

  auto* bh = app.add_subcommand("bar-h0", "H0 of the bar construction by bar degree");
  bh->add_option("--dga", cfg.dga, "DGA model (JSON)")->required();
  bh->add_option("--cap", cfg.cap, "bar degree cap")->check(CLI::NonNegativeNumber);
  add_common(bh);

  auto* lq = app.add_subcommand("lie-quotient", "Graded nilpotent quotient of a Lie presentation");
  lq->add_option("--lie", cfg.lie, "Lie presentation (JSON)")->required();
  lq->add_option("--trunc", cfg.trunc, "truncation, overriding the file")->check(positive);
  add_common(lq);

  auto* tr = app.add_subcommand("transport", "Parallel transport of a Lie-valued form along a path");
  tr->add_option("--path", cfg.path, "path (JSON)")->required();
  tr->add_option("--form", cfg.form, "form (JSON)")->required();
  tr->add_option("--lie", cfg.lie, "Lie presentation for the coefficients (JSON)")->required();
  tr->add_option("--trunc", cfg.trunc, "truncation, overriding the presentation")->check(positive);
  add_common(tr);

  auto* br = app.add_subcommand("braid", "KZ holonomy of a braid word");
  br->add_option("--n", cfg.n, "number of strands")->required();
  br->add_option("--word", cfg.word, "braid word, e.g. \"s1 s2^-1 s1\"")->required();
  br->add_option("--trunc", cfg.trunc, "truncation (default 4)")->check(positive);
  add_common(br);

  auto* vf = app.add_subcommand("verify", "Run verification suites");
  std::string suites_help = "suite name or all:";
  for (const auto& s : verify::suite_names()) suites_help += " " + s;
  vf->add_option("--suite", cfg.suite, suites_help);
  vf->add_option("--seed", cfg.seed, "random seed");
  vf->add_option("--trunc", cfg.trunc, "truncation for suites that use one")->check(positive);
  vf->add_option("--cap", cfg.cap, "bar degree cap for suites that use one")->check(CLI::NonNegativeNumber);
  add_common(vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? OK : INPUT;
  }

  try {
    if (vd->parsed()) return validate_dga(cfg);
    if (bh->parsed()) return bar_h0(cfg);
    if (lq->parsed()) return lie_quotient(cfg);
    if (tr->parsed()) return run_transport(cfg);
    if (br->parsed()) return run_braid(cfg);
    if (vf->parsed()) return run_verify(cfg);
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return INPUT;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance not met: " << e.what() << "\n";
    return TOLERANCE;
  } catch (const SingularityError& e) {
    std::cerr << "path meets the singular locus: " << e.what() << "\n";
    return VALIDATION;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return VALIDATION;
  }
  return OK;
}
