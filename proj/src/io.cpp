#include "malcev/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace malcev::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where.empty() ? "/" : where, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

long get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

std::size_t get_index(const json& j, const std::string& where) {
  long v = get_int(j, where);
  if (v < 0) fail(where, "expected a nonnegative integer");
  return std::size_t(v);
}

double get_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Rational get_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(where, "expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

Complex get_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
  return {get_double(j[0], at(where, 0)), get_double(j[1], at(where, 1))};
}

const json& get_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::string side_name(SideKind s) {
  switch (s) {
    case SideKind::Ground: return "ground";
    case SideKind::Algebra: return "algebra";
    case SideKind::Coefficients: return "coefficients";
  }
  return "ground";
}

SideKind side_from(const json& j, const std::string& where) {
  std::string s = get_string(j, where);
  if (s == "ground") return SideKind::Ground;
  if (s == "algebra") return SideKind::Algebra;
  if (s == "coefficients") return SideKind::Coefficients;
  fail(where, "unknown augmentation '" + s + "'");
}

json combination_to_json(const SparseVec& v, const std::vector<std::string>& labels) {
  json out = json::array();
  for (const auto& [i, c] : v) out.push_back({{"coeff", to_string(c)}, {"label", labels[i]}});
  return out;
}

SparseVec combination_from_json(const json& j, const std::map<std::string, std::size_t>& index,
                                const std::string& where) {
  SparseVec v;
  const json& arr = get_array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string w = at(where, k);
    std::string label = get_string(field(arr[k], "label", w), at(w, "label"));
    auto it = index.find(label);
    if (it == index.end()) fail(at(w, "label"), "unknown basis label '" + label + "'");
    axpy(v, get_rational(field(arr[k], "coeff", w), at(w, "coeff")), {{it->second, Rational(1)}});
  }
  return v;
}

BracketExpr hall_expr(const FreeLieAlgebra& f, std::size_t i) {
  const HallElement& h = f.basis(i);
  if (!h.left) return BracketExpr::leaf(f.generators()[h.word[0]].name);
  return BracketExpr::bracket(hall_expr(f, *h.left), hall_expr(f, *h.right));
}

json scalar_to_json(const ScalarOneForm& s) {
  json j;
  if (s.kind == ScalarOneForm::Kind::DlogAffine) {
    j["kind"] = "dlog";
    json g = json::array();
    for (Complex z : s.gradient) g.push_back(complex_json(z));
    j["affine"] = {{"constant", complex_json(s.constant)}, {"gradient", g}};
  } else {
    j["kind"] = "poly";
    j["coordinate"] = s.coordinate;
    json m = json::array();
    for (const auto& [e, c] : s.monomials) m.push_back({{"exponents", e}, {"value", complex_json(c)}});
    j["monomials"] = m;
  }
  return j;
}

ScalarOneForm scalar_from_json(const json& j, std::size_t dim, const std::string& where) {
  std::string kind = get_string(field(j, "kind", where), at(where, "kind"));
  if (kind == "dlog") {
    const json& a = field(j, "affine", where);
    std::string w = at(where, "affine");
    Complex c = get_complex(field(a, "constant", w), at(w, "constant"));
    const json& g = get_array(field(a, "gradient", w), at(w, "gradient"));
    if (g.size() != dim) fail(at(w, "gradient"), "gradient length differs from the path dimension");
    std::vector<Complex> grad;
    for (std::size_t k = 0; k < g.size(); ++k) grad.push_back(get_complex(g[k], at(at(w, "gradient"), k)));
    try {
      return ScalarOneForm::dlog(c, grad);
    } catch (const std::exception& e) {
      fail(w, e.what());
    }
  }
  if (kind == "poly") {
    std::size_t coord = get_index(field(j, "coordinate", where), at(where, "coordinate"));
    if (coord >= dim) fail(at(where, "coordinate"), "coordinate out of range");
    if (j.contains("coefficients")) {
      const json& c = get_array(j["coefficients"], at(where, "coefficients"));
      std::vector<Complex> coeffs;
      for (std::size_t k = 0; k < c.size(); ++k) coeffs.push_back(get_complex(c[k], at(at(where, "coefficients"), k)));
      return ScalarOneForm::poly(dim, coord, coeffs);
    }
    ScalarOneForm s = ScalarOneForm::poly(dim, coord, {});
    const json& m = get_array(field(j, "monomials", where), at(where, "monomials"));
    for (std::size_t k = 0; k < m.size(); ++k) {
      std::string w = at(at(where, "monomials"), k);
      const json& e = get_array(field(m[k], "exponents", w), at(w, "exponents"));
      if (e.size() != dim) fail(at(w, "exponents"), "exponent vector length differs from the path dimension");
      std::vector<int> ex;
      for (std::size_t r = 0; r < e.size(); ++r) {
        long v = get_int(e[r], at(at(w, "exponents"), r));
        if (v < 0) fail(at(at(w, "exponents"), r), "negative exponent");
        ex.push_back(int(v));
      }
      s.monomials.emplace_back(ex, get_complex(field(m[k], "value", w), at(w, "value")));
    }
    return s;
  }
  fail(at(where, "kind"), "unknown form kind '" + kind + "'");
}

}  // namespace

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path, std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string format12(double x) {
  if (x == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return x == 0 ? 0.0 : std::stod(format12(x)); }

json complex_json(Complex z) { return json::array({round12(z.real()), round12(z.imag())}); }

json group_to_json(const FiniteGroup& G) {
  if (G.is_symmetric()) return {{"symmetric", G.permutation(G.identity()).size()}};
  json labels = json::array(), table = json::array();
  for (std::size_t a = 0; a < G.order(); ++a) {
    labels.push_back(G.label(a));
    table.push_back(G.table()[a]);
  }
  return {{"labels", labels}, {"table", table}};
}

FiniteGroup group_from_json(const json& j, const std::string& where) {
  if (j.is_object() && j.contains("symmetric")) {
    long n = get_int(j["symmetric"], at(where, "symmetric"));
    if (n < 1 || n > 7) fail(at(where, "symmetric"), "symmetric groups are supported for 1 <= n <= 7");
    return FiniteGroup::symmetric(int(n));
  }
  if (j.is_object() && j.contains("cyclic")) {
    long n = get_int(j["cyclic"], at(where, "cyclic"));
    if (n < 1) fail(at(where, "cyclic"), "order must be positive");
    return FiniteGroup::cyclic(int(n));
  }
  const json& t = get_array(j.is_array() ? j : field(j, "table", where), j.is_array() ? where : at(where, "table"));
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t a = 0; a < t.size(); ++a) {
    const json& row = get_array(t[a], at(at(where, "table"), a));
    std::vector<std::size_t> r;
    for (std::size_t b = 0; b < row.size(); ++b) r.push_back(get_index(row[b], at(at(at(where, "table"), a), b)));
    table.push_back(r);
  }
  std::vector<std::string> labels;
  if (j.is_object() && j.contains("labels")) {
    for (std::size_t a = 0; a < j["labels"].size(); ++a)
      labels.push_back(get_string(j["labels"][a], at(at(where, "labels"), a)));
  } else {
    for (std::size_t a = 0; a < table.size(); ++a) labels.push_back("g" + std::to_string(a));
  }
  try {
    return FiniteGroup(labels, table);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

json dga_to_json(const DGAModel& m, SideKind left, SideKind right) {
  std::vector<std::string> labels;
  json basis = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    labels.push_back(m.label(i));
    basis.push_back({{"label", m.label(i)}, {"degree", m.degree(i)}});
  }
  json d = json::object(), product = json::object();
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (!m.d(i).empty()) d[labels[i]] = combination_to_json(m.d(i), labels);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (i != m.unit() && j != m.unit() && !m.product(i, j).empty())
        product[labels[i] + "*" + labels[j]] = combination_to_json(m.product(i, j), labels);
  json out = {{"basis", basis}, {"unit", labels[m.unit()]}, {"d", d}, {"product", product},
              {"augmentations", json::array({side_name(left), side_name(right)})}};
  if (m.has_action()) {
    const FiniteGroup& G = m.group();
    json action = json::object();
    for (std::size_t g = 0; g < G.order(); ++g) {
      json images = json::object();
      for (std::size_t i = 0; i < m.dim(); ++i) images[labels[i]] = combination_to_json(m.act(i, g), labels);
      action[G.label(g)] = images;
    }
    out["coefficients"] = {{"group", group_to_json(G)}, {"action", action}};
  }
  return out;
}

DGADocument dga_from_json(const json& j, const std::string& where) {
  const json& basis = get_array(field(j, "basis", where), at(where, "basis"));
  std::vector<std::string> labels;
  std::vector<int> degrees;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::string w = at(at(where, "basis"), i);
    std::string label = get_string(field(basis[i], "label", w), at(w, "label"));
    if (label.find('*') != std::string::npos) fail(at(w, "label"), "labels may not contain '*'");
    long deg = get_int(field(basis[i], "degree", w), at(w, "degree"));
    if (deg < 0) fail(at(w, "degree"), "negative degree");
    if (!index.emplace(label, i).second) fail(at(w, "label"), "duplicate label '" + label + "'");
    labels.push_back(label);
    degrees.push_back(int(deg));
  }
  std::string unit = get_string(field(j, "unit", where), at(where, "unit"));
  if (!index.count(unit)) fail(at(where, "unit"), "unknown unit label '" + unit + "'");

  std::vector<SparseVec> d(labels.size());
  if (j.contains("d")) {
    if (!j["d"].is_object()) fail(at(where, "d"), "expected an object");
    for (const auto& [key, val] : j["d"].items()) {
      auto it = index.find(key);
      if (it == index.end()) fail(at(where, "d"), "unknown basis label '" + key + "'");
      d[it->second] = combination_from_json(val, index, at(at(where, "d"), key));
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> products;
  if (j.contains("product")) {
    if (!j["product"].is_object()) fail(at(where, "product"), "expected an object");
    for (const auto& [key, val] : j["product"].items()) {
      std::string w = at(at(where, "product"), key);
      auto star = key.find('*');
      if (star == std::string::npos) fail(w, "product keys have the form \"a*b\"");
      auto a = index.find(key.substr(0, star)), b = index.find(key.substr(star + 1));
      if (a == index.end() || b == index.end()) fail(w, "unknown basis label in '" + key + "'");
      products[{a->second, b->second}] = combination_from_json(val, index, w);
    }
  }
  DGADocument doc;
  try {
    doc.model = std::make_shared<DGAModel>(labels, degrees, index[unit], d, products);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  if (j.contains("augmentations")) {
    const json& a = get_array(j["augmentations"], at(where, "augmentations"));
    if (a.size() != 1 && a.size() != 2) fail(at(where, "augmentations"), "expected one or two augmentations");
    doc.left = side_from(a[0], at(at(where, "augmentations"), 0));
    doc.right = a.size() == 2 ? side_from(a[1], at(at(where, "augmentations"), 1)) : doc.left;
  }
  if (j.contains("coefficients")) {
    std::string w = at(where, "coefficients");
    const json& c = j["coefficients"];
    auto G = std::make_shared<FiniteGroup>(group_from_json(field(c, "group", w), at(w, "group")));
    const json& action = field(c, "action", w);
    std::vector<std::vector<SparseVec>> images(G->order());
    for (std::size_t g = 0; g < G->order(); ++g) {
      if (!action.contains(G->label(g))) fail(at(w, "action"), "missing images for group element '" + G->label(g) + "'");
      std::string wg = at(at(w, "action"), G->label(g));
      const json& img = action[G->label(g)];
      images[g].assign(labels.size(), SparseVec{});
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!img.contains(labels[i])) fail(wg, "missing image of '" + labels[i] + "'");
        images[g][i] = combination_from_json(img[labels[i]], index, at(wg, labels[i]));
      }
    }
    try {
      doc.model->set_action(G, images);
    } catch (const std::exception& e) {
      fail(w, e.what());
    }
  }
  if ((doc.left == SideKind::Coefficients || doc.right == SideKind::Coefficients) && !doc.model->has_action())
    fail(at(where, "augmentations"), "coefficient augmentation requires a coefficients block");
  return doc;
}

json bracket_to_json(const BracketExpr& e) {
  if (e.children.empty()) return e.generator;
  return json::array({bracket_to_json(e.children[0]), bracket_to_json(e.children[1])});
}

BracketExpr bracket_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return BracketExpr::leaf(j.get<std::string>());
  if (!j.is_array() || j.size() != 2) fail(where, "expected a generator name or a 2-array");
  return BracketExpr::bracket(bracket_from_json(j[0], at(where, 0)), bracket_from_json(j[1], at(where, 1)));
}

json lie_expression_to_json(const LieExpression& e) {
  json out = json::array();
  for (const auto& t : e) out.push_back({{"coefficient", to_string(t.coefficient)}, {"word", bracket_to_json(t.word)}});
  return out;
}

LieExpression lie_expression_from_json(const json& j, const std::string& where) {
  LieExpression e;
  const json& arr = get_array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string w = at(where, k);
    e.push_back({get_rational(field(arr[k], "coefficient", w), at(w, "coefficient")),
                 bracket_from_json(field(arr[k], "word", w), at(w, "word"))});
  }
  return e;
}

json presentation_to_json(const LiePresentation& p) {
  json gens = json::array(), rels = json::array();
  for (const auto& g : p.generators) gens.push_back({{"name", g.name}, {"degree", g.degree}});
  for (const auto& r : p.relations) rels.push_back(lie_expression_to_json(r));
  return {{"generators", gens}, {"relations", rels}, {"truncation", p.truncation}};
}

LiePresentation presentation_from_json(const json& j, const std::string& where) {
  LiePresentation p;
  const json& gens = get_array(field(j, "generators", where), at(where, "generators"));
  std::map<std::string, int> names;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    std::string w = at(at(where, "generators"), k);
    Generator g;
    g.name = get_string(field(gens[k], "name", w), at(w, "name"));
    if (gens[k].contains("degree")) g.degree = int(get_int(gens[k]["degree"], at(w, "degree")));
    if (g.degree < 1) fail(at(w, "degree"), "generator degrees must be positive");
    if (!names.emplace(g.name, 1).second) fail(at(w, "name"), "duplicate generator '" + g.name + "'");
    p.generators.push_back(g);
  }
  if (j.contains("relations")) {
    const json& rels = get_array(j["relations"], at(where, "relations"));
    for (std::size_t k = 0; k < rels.size(); ++k) {
      LieExpression e = lie_expression_from_json(rels[k], at(at(where, "relations"), k));
      for (std::size_t t = 0; t < e.size(); ++t) {
        std::vector<const BracketExpr*> stack{&e[t].word};
        while (!stack.empty()) {
          const BracketExpr* b = stack.back();
          stack.pop_back();
          if (b->children.empty() && !names.count(b->generator))
            fail(at(at(at(at(where, "relations"), k), t), "word"), "unknown generator '" + b->generator + "'");
          for (const auto& c : b->children) stack.push_back(&c);
        }
      }
      p.relations.push_back(e);
    }
  }
  long N = get_int(field(j, "truncation", where), at(where, "truncation"));
  if (N < 1) fail(at(where, "truncation"), "truncation must be at least 1");
  p.truncation = int(N);
  return p;
}

json lie_element_to_json(const NilpotentQuotient& q, const LieElement& x) {
  json out = json::array();
  for (const auto& [i, c] : q.lift(x).terms)
    out.push_back({{"coefficient", to_string(c)}, {"word", bracket_to_json(hall_expr(q.free_algebra(), i))}});
  return out;
}

LieElement lie_element_from_json(const NilpotentQuotient& q, const json& j, const std::string& where) {
  LieExpression e = lie_expression_from_json(j, where);
  try {
    return q.project(q.free_algebra().evaluate(e));
  } catch (const std::exception& ex) {
    fail(where, ex.what());
  }
}

json path_to_json(const PiecewisePath& p) {
  json segs = json::array();
  for (const auto& s : p.segments()) {
    json js;
    if (s.kind == Segment::Kind::Polynomial) {
      js["kind"] = "polynomial";
      json coeffs = json::array();
      for (const auto& c : s.coeffs) {
        json row = json::array();
        for (Complex z : c) row.push_back(complex_json(z));
        coeffs.push_back(row);
      }
      js["coeffs"] = coeffs;
    } else {
      js["kind"] = "arc";
      json movers = json::array();
      for (const auto& m : s.movers)
        movers.push_back({{"coordinate", m.coordinate}, {"center", complex_json(m.center)}, {"radius", round12(m.radius)},
                          {"theta0", round12(m.theta0)}, {"theta1", round12(m.theta1)}});
      js["movers"] = movers;
      json fixed = json::array();
      for (Complex z : s.fixed) fixed.push_back(complex_json(z));
      js["fixed"] = fixed;
    }
    if (!s.time_maps.empty()) {
      json maps = json::array();
      for (const auto& m : s.time_maps) {
        json row = json::array();
        for (double c : m) row.push_back(round12(c));
        maps.push_back(row);
      }
      js["time_maps"] = maps;
    }
    segs.push_back(js);
  }
  return {{"dimension", p.dimension()}, {"segments", segs}};
}

PiecewisePath path_from_json(const json& j, const std::string& where) {
  std::size_t dim = get_index(field(j, "dimension", where), at(where, "dimension"));
  if (dim == 0) fail(at(where, "dimension"), "dimension must be positive");
  PiecewisePath p(dim);
  const json& segs = get_array(field(j, "segments", where), at(where, "segments"));
  for (std::size_t k = 0; k < segs.size(); ++k) {
    std::string w = at(at(where, "segments"), k);
    std::string kind = get_string(field(segs[k], "kind", w), at(w, "kind"));
    Segment s;
    if (kind == "polynomial") {
      const json& c = get_array(field(segs[k], "coeffs", w), at(w, "coeffs"));
      if (c.size() != dim) fail(at(w, "coeffs"), "expected one coefficient list per coordinate");
      s.kind = Segment::Kind::Polynomial;
      for (std::size_t r = 0; r < dim; ++r) {
        const json& row = get_array(c[r], at(at(w, "coeffs"), r));
        std::vector<Complex> v;
        for (std::size_t m = 0; m < row.size(); ++m) v.push_back(get_complex(row[m], at(at(at(w, "coeffs"), r), m)));
        if (v.empty()) v.push_back(0.0);
        s.coeffs.push_back(v);
      }
    } else if (kind == "arc") {
      s.kind = Segment::Kind::Arc;
      auto mover = [&](const json& m, const std::string& wm) {
        ArcMover a;
        a.coordinate = get_index(field(m, "coordinate", wm), at(wm, "coordinate"));
        if (a.coordinate >= dim) fail(at(wm, "coordinate"), "coordinate out of range");
        a.center = get_complex(field(m, "center", wm), at(wm, "center"));
        a.radius = get_double(field(m, "radius", wm), at(wm, "radius"));
        if (!(a.radius > 0)) fail(at(wm, "radius"), "radius must be positive");
        a.theta0 = get_double(field(m, "theta0", wm), at(wm, "theta0"));
        a.theta1 = get_double(field(m, "theta1", wm), at(wm, "theta1"));
        return a;
      };
      if (segs[k].contains("movers")) {
        const json& ms = get_array(segs[k]["movers"], at(w, "movers"));
        for (std::size_t m = 0; m < ms.size(); ++m) s.movers.push_back(mover(ms[m], at(at(w, "movers"), m)));
      } else {
        s.movers.push_back(mover(segs[k], w));
      }
      if (segs[k].contains("fixed")) {
        const json& f = get_array(segs[k]["fixed"], at(w, "fixed"));
        if (f.size() != dim) fail(at(w, "fixed"), "expected one value per coordinate");
        for (std::size_t r = 0; r < dim; ++r) s.fixed.push_back(get_complex(f[r], at(at(w, "fixed"), r)));
      } else if (!p.empty()) {
        s.fixed = p.end();
      } else {
        s.fixed.assign(dim, 0.0);
        if (dim > 1) fail(w, "a leading arc in more than one dimension needs 'fixed'");
      }
    } else {
      fail(at(w, "kind"), "unknown segment kind '" + kind + "'");
    }
    if (segs[k].contains("time_maps")) {
      const json& maps = get_array(segs[k]["time_maps"], at(w, "time_maps"));
      for (std::size_t m = 0; m < maps.size(); ++m) {
        const json& row = get_array(maps[m], at(at(w, "time_maps"), m));
        std::vector<double> v;
        for (std::size_t r = 0; r < row.size(); ++r) v.push_back(get_double(row[r], at(at(at(w, "time_maps"), m), r)));
        s.time_maps.push_back(v);
      }
    }
    try {
      p.add_segment(s);
    } catch (const std::exception& e) {
      fail(w, e.what());
    }
  }
  return p;
}

json form_to_json(const NilpotentQuotient& q, const LieValuedOneForm& w) {
  json out = json::array();
  for (const auto& [s, x] : w.terms) {
    json j = scalar_to_json(s);
    j["lie"] = lie_element_to_json(q, x);
    out.push_back(j);
  }
  return out;
}

LieValuedOneForm form_from_json(const NilpotentQuotient& q, const json& j, const std::string& where) {
  const json& arr = get_array(j.is_object() ? field(j, "terms", where) : j, j.is_object() ? at(where, "terms") : where);
  std::size_t dim = 0;
  if (j.is_object()) {
    dim = get_index(field(j, "dimension", where), at(where, "dimension"));
  } else if (!arr.empty()) {
    // infer from the first term
    const json& t = arr[0];
    if (t.is_object() && t.contains("affine") && t["affine"].contains("gradient") && t["affine"]["gradient"].is_array())
      dim = t["affine"]["gradient"].size();
    else if (t.is_object() && t.contains("monomials") && t["monomials"].is_array() && !t["monomials"].empty() &&
             t["monomials"][0].contains("exponents"))
      dim = t["monomials"][0]["exponents"].size();
    else if (t.is_object() && t.contains("coordinate") && t["coordinate"].is_number_integer())
      dim = t["coordinate"].get<std::size_t>() + 1;
  }
  if (dim == 0) fail(where, "cannot determine the form's dimension");
  LieValuedOneForm w;
  w.lie = q.lie();
  w.dimension = dim;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string wk = at(where, k);
    ScalarOneForm s = scalar_from_json(arr[k], dim, wk);
    LieElement x = lie_element_from_json(q, field(arr[k], "lie", wk), at(wk, "lie"));
    w.terms.emplace_back(s, x);
  }
  return w;
}

json irreps_to_json(const std::vector<Irrep>& irreps) {
  json out = json::array();
  for (const auto& r : irreps) {
    json mats = json::array();
    std::size_t n = r.is_exact() ? r.exact.size() : r.numeric.size();
    for (std::size_t g = 0; g < n; ++g) {
      json m = json::array();
      for (std::size_t a = 0; a < r.dim; ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < r.dim; ++b) {
          if (r.is_exact())
            row.push_back(to_string(r.exact[g][a * r.dim + b]));
          else
            row.push_back(complex_json(r.numeric[g][a * r.dim + b]));
        }
        m.push_back(row);
      }
      mats.push_back(m);
    }
    out.push_back({{"label", r.label}, {"dim", r.dim}, {"matrices", mats}});
  }
  return out;
}

std::vector<Irrep> irreps_from_json(const json& j, const FiniteGroup& G, const std::string& where) {
  std::vector<Irrep> out;
  const json& arr = get_array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string w = at(where, k);
    std::string label = get_string(field(arr[k], "label", w), at(w, "label"));
    std::size_t dim = get_index(field(arr[k], "dim", w), at(w, "dim"));
    const json& mats = get_array(field(arr[k], "matrices", w), at(w, "matrices"));
    if (mats.size() != G.order()) fail(at(w, "matrices"), "expected one matrix per group element");
    bool exact = true;
    std::vector<std::vector<Rational>> ex(G.order());
    std::vector<std::vector<Complex>> num(G.order());
    for (std::size_t g = 0; g < G.order(); ++g) {
      std::string wg = at(at(w, "matrices"), g);
      const json& m = get_array(mats[g], wg);
      if (m.size() != dim) fail(wg, "matrix has the wrong number of rows");
      for (std::size_t a = 0; a < dim; ++a) {
        const json& row = get_array(m[a], at(wg, a));
        if (row.size() != dim) fail(at(wg, a), "matrix row has the wrong length");
        for (std::size_t b = 0; b < dim; ++b) {
          std::string we = at(at(wg, a), b);
          if (row[b].is_array()) {
            exact = false;
            num[g].push_back(get_complex(row[b], we));
          } else {
            Rational r = get_rational(row[b], we);
            ex[g].push_back(r);
            num[g].push_back(r.get_d());
          }
        }
      }
    }
    if (exact) {
      out.push_back(Irrep::from_exact(label, dim, ex));
    } else {
      Irrep r;
      r.label = label;
      r.dim = dim;
      r.numeric = num;
      out.push_back(r);
    }
  }
  return out;
}

json series_to_json(const ComplexSeries& s) {
  json out = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto chop = [](double x) { return std::abs(x) < 1e-14 ? 0.0 : round12(x); };
    Complex c(chop(s[i].real()), chop(s[i].imag()));
    if (c == Complex(0.0)) continue;
    out.push_back({{"monomial", s.envelope().label(i)}, {"value", complex_json(c)}});
  }
  return out;
}

}  // namespace malcev::io
