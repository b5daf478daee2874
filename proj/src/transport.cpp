#include "malcev/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace malcev {

namespace {

const Complex I(0.0, 1.0);

double poly_real(const std::vector<double>& p, double s) {
  double v = 0;
  for (std::size_t k = p.size(); k-- > 0;) v = v * s + p[k];
  return v;
}

double poly_real_derivative(const std::vector<double>& p, double s) {
  double v = 0;
  for (std::size_t k = p.size(); k-- > 1;) v = v * s + double(k) * p[k];
  return v;
}

Complex poly_complex(const std::vector<Complex>& p, double s) {
  Complex v = 0;
  for (std::size_t k = p.size(); k-- > 0;) v = v * s + p[k];
  return v;
}

Complex poly_complex_derivative(const std::vector<Complex>& p, double s) {
  Complex v = 0;
  for (std::size_t k = p.size(); k-- > 1;) v = v * s + double(k) * p[k];
  return v;
}

// Applies the time maps innermost first; returns the base parameter and ds/dt.
std::pair<double, double> base_time(const Segment& seg, double t) {
  double s = t, factor = 1;
  for (std::size_t m = seg.time_maps.size(); m-- > 0;) {
    factor *= poly_real_derivative(seg.time_maps[m], s);
    s = poly_real(seg.time_maps[m], s);
  }
  return {s, factor};
}

double distance(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

Point Segment::point(double t) const {
  double s = base_time(*this, t).first;
  if (kind == Kind::Polynomial) {
    Point p(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) p[i] = poly_complex(coeffs[i], s);
    return p;
  }
  Point p = fixed;
  for (const auto& m : movers) {
    double th = m.theta0 + (m.theta1 - m.theta0) * s;
    p[m.coordinate] = m.center + m.radius * std::exp(I * th);
  }
  return p;
}

Point Segment::velocity(double t) const {
  auto [s, factor] = base_time(*this, t);
  if (kind == Kind::Polynomial) {
    Point v(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) v[i] = poly_complex_derivative(coeffs[i], s) * factor;
    return v;
  }
  Point v(fixed.size(), 0.0);
  for (const auto& m : movers) {
    double dth = m.theta1 - m.theta0;
    double th = m.theta0 + dth * s;
    v[m.coordinate] = I * m.radius * dth * std::exp(I * th) * factor;
  }
  return v;
}

PiecewisePath PiecewisePath::constant(const Point& p) {
  PiecewisePath path(p.size());
  std::vector<std::vector<Complex>> c;
  for (auto z : p) c.push_back({z});
  path.add_polynomial(c);
  return path;
}

PiecewisePath PiecewisePath::line(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("line: dimension mismatch");
  PiecewisePath path(a.size());
  std::vector<std::vector<Complex>> c;
  for (std::size_t i = 0; i < a.size(); ++i) c.push_back({a[i], b[i] - a[i]});
  path.add_polynomial(c);
  return path;
}

void PiecewisePath::add_polynomial(std::vector<std::vector<Complex>> coeffs) {
  if (coeffs.size() != dimension_) throw std::invalid_argument("polynomial segment: wrong number of coordinates");
  Segment s;
  s.kind = Segment::Kind::Polynomial;
  s.coeffs = std::move(coeffs);
  for (auto& c : s.coeffs)
    if (c.empty()) c.push_back(0.0);
  segments_.push_back(std::move(s));
}

void PiecewisePath::add_arc(std::vector<ArcMover> movers, std::optional<Point> start) {
  Segment s;
  s.kind = Segment::Kind::Arc;
  if (start) {
    s.fixed = *start;
  } else {
    if (segments_.empty()) throw std::invalid_argument("arc segment needs a start point");
    s.fixed = end();
  }
  if (s.fixed.size() != dimension_) throw std::invalid_argument("arc segment: wrong dimension");
  for (const auto& m : movers) {
    if (m.coordinate >= dimension_) throw std::invalid_argument("arc segment: coordinate out of range");
    if (!(m.radius > 0)) throw std::invalid_argument("arc segment: radius must be positive");
  }
  s.movers = std::move(movers);
  segments_.push_back(std::move(s));
}

void PiecewisePath::add_segment(Segment s) {
  std::size_t dim = s.kind == Segment::Kind::Polynomial ? s.coeffs.size() : s.fixed.size();
  if (dim != dimension_) throw std::invalid_argument("segment: wrong dimension");
  segments_.push_back(std::move(s));
}

Point PiecewisePath::start() const {
  if (segments_.empty()) throw std::logic_error("empty path");
  return segments_.front().point(0.0);
}

Point PiecewisePath::end() const {
  if (segments_.empty()) throw std::logic_error("empty path");
  return segments_.back().point(1.0);
}

PiecewisePath PiecewisePath::reversed() const {
  PiecewisePath r(dimension_);
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    Segment s = *it;
    s.time_maps.push_back({1.0, -1.0});
    r.segments_.push_back(std::move(s));
  }
  return r;
}

PiecewisePath PiecewisePath::concat(const PiecewisePath& other) const {
  if (other.dimension_ != dimension_) throw std::invalid_argument("concat: dimension mismatch");
  if (segments_.empty()) return other;
  if (other.segments_.empty()) return *this;
  Point a = end(), b = other.start();
  double scale = 1;
  for (auto z : a) scale = std::max(scale, std::abs(z));
  if (distance(a, b) > 1e-9 * scale) throw std::invalid_argument("concat: end point does not match start point");
  PiecewisePath r = *this;
  r.segments_.insert(r.segments_.end(), other.segments_.begin(), other.segments_.end());
  return r;
}

PiecewisePath PiecewisePath::reparametrized(const std::vector<double>& phi) const {
  if (std::abs(poly_real(phi, 0.0)) > 1e-14 || std::abs(poly_real(phi, 1.0) - 1.0) > 1e-14)
    throw std::invalid_argument("reparametrization must fix 0 and 1");
  for (int k = 0; k <= 64; ++k)
    if (poly_real_derivative(phi, k / 64.0) < 0) throw std::invalid_argument("reparametrization must be increasing");
  PiecewisePath r = *this;
  for (auto& s : r.segments_) s.time_maps.push_back(phi);
  return r;
}

double PiecewisePath::continuity_defect() const {
  double worst = 0;
  for (std::size_t k = 1; k < segments_.size(); ++k)
    worst = std::max(worst, distance(segments_[k - 1].point(1.0), segments_[k].point(0.0)));
  return worst;
}

double PiecewisePath::diameter() const {
  std::vector<Point> samples;
  const int per = 32;
  for (const auto& s : segments_)
    for (int k = 0; k <= per; ++k) samples.push_back(s.point(double(k) / per));
  double d = 1e-300;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) d = std::max(d, distance(samples[i], samples[j]));
  return d;
}

// ---------------------------------------------------------------------------

ScalarOneForm ScalarOneForm::dlog(Complex constant, std::vector<Complex> gradient) {
  ScalarOneForm w;
  w.kind = Kind::DlogAffine;
  w.dimension = gradient.size();
  w.constant = constant;
  w.gradient = std::move(gradient);
  return w;
}

ScalarOneForm ScalarOneForm::poly(std::size_t dimension, std::size_t coordinate,
                                  const std::vector<Complex>& coefficients) {
  if (coordinate >= dimension) throw std::invalid_argument("poly form: coordinate out of range");
  ScalarOneForm w;
  w.kind = Kind::Polynomial;
  w.dimension = dimension;
  w.coordinate = coordinate;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] == Complex(0)) continue;
    std::vector<int> e(dimension, 0);
    e[coordinate] = int(k);
    w.monomials.push_back({e, coefficients[k]});
  }
  return w;
}

Complex ScalarOneForm::affine(const Point& x) const {
  Complex v = constant;
  for (std::size_t i = 0; i < gradient.size(); ++i) v += gradient[i] * x[i];
  return v;
}

Complex ScalarOneForm::poly_value(const Point& x) const {
  Complex v = 0;
  for (const auto& [e, c] : monomials) {
    Complex m = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int p = 0; p < e[i]; ++p) m *= x[i];
    v += m;
  }
  return v;
}

Complex ScalarOneForm::evaluate(const Point& x, const Point& v) const {
  if (kind == Kind::DlogAffine) {
    Complex dl = 0;
    for (std::size_t i = 0; i < gradient.size(); ++i) dl += gradient[i] * v[i];
    return dl / affine(x);
  }
  return poly_value(x) * v[coordinate];
}

// ---------------------------------------------------------------------------

void integrate_dopri5(std::vector<Complex>& y, const OdeRhs& rhs, const OdeOptions& opt, OdeStats& stats) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = y.size();
  std::vector<Complex> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  double t = 0, h = 0.02;
  rhs(t, y, k1);
  std::size_t steps = 0;
  while (t < 1.0) {
    if (++steps > opt.max_steps) throw ToleranceError("step limit reached before the end of the path", stats.error);
    bool last = false;
    if (t + h >= 1.0) {
      h = 1.0 - t;
      last = true;
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    double tn = last ? 1.0 : t + h;
    rhs(tn, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(tn, ynew, k7);
    double err = 0, err_abs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double scale = opt.tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
      err = std::max(err, std::abs(e) / scale);
      err_abs = std::max(err_abs, std::abs(e));
    }
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      t = tn;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      stats.error += err_abs;
    } else {
      ++stats.rejected;
    }
    double factor = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err > 1.0) factor = std::min(factor, 1.0);
    h *= factor;
    if (t < 1.0 && h < opt.min_step)
      throw ToleranceError("step size underflow: requested tolerance not reachable", stats.error);
  }
}

namespace {

// Rejects paths that come within 1e-6 * diameter of a dlog divisor.
void guard_segment(const Segment& seg, std::size_t index, const std::vector<const ScalarOneForm*>& letters,
                   double diameter) {
  const int samples = 512;
  for (const auto* w : letters) {
    if (w->kind != ScalarOneForm::Kind::DlogAffine) continue;
    double g = 0;
    for (auto c : w->gradient) g += std::norm(c);
    g = std::sqrt(g);
    if (g == 0) continue;
    for (int k = 0; k <= samples; ++k) {
      double t = double(k) / samples;
      Point x = seg.point(t);
      double dist = std::abs(w->affine(x)) / g;
      if (dist <= 1e-6 * diameter) {
        std::ostringstream os;
        os << "path meets a singular divisor on segment " << index << " near t = " << t << " (distance " << dist
           << ")";
        throw SingularityError(os.str(), index, t);
      }
    }
  }
}

using LetterLookup = std::function<const ScalarOneForm&(std::size_t segment, std::size_t letter)>;

Complex chen_integral(const PiecewisePath& path, std::size_t r, const LetterLookup& letter, const OdeOptions& opt) {
  std::vector<Complex> y(r + 1, 0.0);
  y[0] = 1.0;
  if (r == 0) return 1.0;
  double diam = path.diameter();
  OdeStats stats;
  for (std::size_t k = 0; k < path.segments().size(); ++k) {
    const Segment& seg = path.segments()[k];
    std::vector<const ScalarOneForm*> letters;
    for (std::size_t j = 0; j < r; ++j) {
      letters.push_back(&letter(k, j));
      if (letters.back()->dimension != path.dimension())
        throw std::invalid_argument("form dimension does not match path dimension");
    }
    guard_segment(seg, k, letters, diam);
    OdeRhs rhs = [&](double t, const std::vector<Complex>& state, std::vector<Complex>& dy) {
      Point x = seg.point(t), v = seg.velocity(t);
      dy[0] = 0;
      for (std::size_t j = 0; j < r; ++j) dy[j + 1] = state[j] * letters[j]->evaluate(x, v);
    };
    integrate_dopri5(y, rhs, opt, stats);
  }
  return y[r];
}

}  // namespace

Complex iterated_integral(const PiecewisePath& path, const std::vector<ScalarOneForm>& forms, const OdeOptions& opt) {
  return chen_integral(
      path, forms.size(), [&](std::size_t, std::size_t j) -> const ScalarOneForm& { return forms[j]; }, opt);
}

// ---------------------------------------------------------------------------

TransportKernel::TransportKernel(const Envelope& env, const std::vector<LieElement>& coefficients) {
  const std::size_t P = env.size();
  std::vector<std::map<std::pair<std::size_t, std::size_t>, double>> rows(P);
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    for (const auto& [j, c] : coefficients[k].terms) {
      if (j >= env.lie().dim()) throw std::invalid_argument("Lie coefficient out of range");
      double cd = c.get_d();
      for (std::size_t u = 0; u < P; ++u)
        for (const auto& [v, val] : env.right_multiply_real(u, j)) rows[v][{u, k}] += cd * val;
    }
  }
  row_start_.assign(P + 1, 0);
  for (std::size_t v = 0; v < P; ++v) {
    for (const auto& [key, val] : rows[v])
      if (val != 0) entries_.push_back({key.first, key.second, val});
    row_start_[v + 1] = entries_.size();
  }
}

void TransportKernel::apply_serial(const std::vector<Complex>& f, const std::vector<Complex>& y,
                                   std::vector<Complex>& out) const {
  const std::size_t P = size();
  for (std::size_t v = 0; v < P; ++v) {
    Complex acc = 0;
    for (std::size_t e = row_start_[v]; e < row_start_[v + 1]; ++e)
      acc += entries_[e].value * f[entries_[e].letter] * y[entries_[e].source];
    out[v] = acc;
  }
}

void TransportKernel::apply_parallel(const std::vector<Complex>& f, const std::vector<Complex>& y,
                                     std::vector<Complex>& out) const {
  const long P = long(size());
#pragma omp parallel for schedule(static) if (P > 512)
  for (long v = 0; v < P; ++v) {
    Complex acc = 0;
    for (std::size_t e = row_start_[v]; e < row_start_[v + 1]; ++e)
      acc += entries_[e].value * f[entries_[e].letter] * y[entries_[e].source];
    out[v] = acc;
  }
}

namespace {

using FormLookup = std::function<const LieValuedOneForm&(std::size_t segment)>;

TransportResult transport_impl(const PiecewisePath& path, const FormLookup& form, std::size_t form_count,
                               std::shared_ptr<const Envelope> env, const OdeOptions& opt) {
  if (!env) throw std::invalid_argument("transport: no envelope");
  std::vector<std::unique_ptr<TransportKernel>> kernels(form_count);
  auto kernel_for = [&](std::size_t segment, std::size_t slot) -> const TransportKernel& {
    if (!kernels[slot]) {
      const auto& w = form(segment);
      if (w.lie && w.lie.get() != &env->lie() && w.lie->labels() != env->lie().labels())
        throw std::invalid_argument("transport: form and envelope use different Lie algebras");
      std::vector<LieElement> coeffs;
      for (const auto& t : w.terms) coeffs.push_back(t.second);
      kernels[slot] = std::make_unique<TransportKernel>(*env, coeffs);
    }
    return *kernels[slot];
  };

  TransportResult result{ComplexSeries::one(env), 0, 0};
  std::vector<Complex>& y = result.series.coeffs();
  double diam = path.diameter();
  OdeStats stats;
  std::map<const LieValuedOneForm*, std::size_t> slot_of;
  for (std::size_t k = 0; k < path.segments().size(); ++k) {
    const Segment& seg = path.segments()[k];
    const LieValuedOneForm& w = form(k);
    if (w.dimension != path.dimension()) throw std::invalid_argument("form dimension does not match path dimension");
    auto it = slot_of.find(&w);
    if (it == slot_of.end()) it = slot_of.emplace(&w, slot_of.size()).first;
    if (it->second >= form_count) throw std::logic_error("transport: too many distinct forms");
    const TransportKernel& K = kernel_for(k, it->second);
    std::vector<const ScalarOneForm*> letters;
    for (const auto& t : w.terms) letters.push_back(&t.first);
    guard_segment(seg, k, letters, diam);
    std::vector<Complex> f(letters.size());
    OdeRhs rhs = [&](double t, const std::vector<Complex>& state, std::vector<Complex>& dy) {
      Point x = seg.point(t), v = seg.velocity(t);
      for (std::size_t j = 0; j < letters.size(); ++j) f[j] = letters[j]->evaluate(x, v);
      if (opt.parallel)
        K.apply_parallel(f, state, dy);
      else
        K.apply_serial(f, state, dy);
    };
    integrate_dopri5(y, rhs, opt, stats);
  }
  result.error_estimate = stats.error;
  result.steps = stats.accepted;
  return result;
}

}  // namespace

TransportResult transport(const PiecewisePath& path, const LieValuedOneForm& omega,
                          std::shared_ptr<const Envelope> env, const OdeOptions& opt) {
  return transport_impl(
      path, [&](std::size_t) -> const LieValuedOneForm& { return omega; }, 1, std::move(env), opt);
}

// ---------------------------------------------------------------------------
// Exact integrability

namespace {

using Exponent = std::vector<int>;
using Poly = std::map<Exponent, Rational>;

Rational exact(Complex z, const char* what) {
  if (z.imag() != 0) throw std::invalid_argument(std::string("integrability check needs real coefficients (") + what + ")");
  return Rational(z.real());
}

Poly poly_multiply(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      Rational& slot = r[e];
      slot += ca * cb;
      if (slot == 0) r.erase(e);
    }
  return r;
}

Poly affine_poly(const std::vector<Rational>& l) {  // l[0] + sum l[i+1] x_i
  std::size_t n = l.size() - 1;
  Poly p;
  if (l[0] != 0) p[Exponent(n, 0)] = l[0];
  for (std::size_t i = 0; i < n; ++i)
    if (l[i + 1] != 0) {
      Exponent e(n, 0);
      e[i] = 1;
      p[e] = l[i + 1];
    }
  return p;
}

Poly derivative(const Poly& p, std::size_t i) {
  Poly r;
  for (const auto& [e, c] : p)
    if (e[i] > 0) {
      Exponent f = e;
      --f[i];
      r[f] += c * e[i];
    }
  return r;
}

struct TwoForm {
  // (a, b) with a < b, then monomial, then Lie coefficient
  std::map<std::pair<std::size_t, std::size_t>, std::map<Exponent, LieElement>> terms;

  void add(std::size_t a, std::size_t b, const Poly& f, const LieElement& x) {
    if (a == b || x.is_zero()) return;
    Rational sign = 1;
    if (a > b) {
      std::swap(a, b);
      sign = -1;
    }
    auto& slot = terms[{a, b}];
    for (const auto& [e, c] : f) slot[e] += (sign * c) * x;
  }
};

std::string render_lie(const GradedNilpotentLie& L, const LieElement& x) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*" << L.label(i);
  }
  return os.str();
}

}  // namespace

IntegrabilityReport check_integrability(const LieValuedOneForm& omega) {
  if (!omega.lie) throw std::invalid_argument("integrability: form has no Lie algebra");
  const GradedNilpotentLie& L = *omega.lie;
  const std::size_t n = omega.dimension;

  // dlog letters grouped by normalized functional; polynomial letters kept apart.
  std::map<std::vector<Rational>, LieElement> dlogs;
  struct PolyLetter {
    std::size_t coordinate;
    Poly f;
    LieElement x;
  };
  std::vector<PolyLetter> polys;
  for (const auto& [w, x] : omega.terms) {
    if (w.kind == ScalarOneForm::Kind::DlogAffine) {
      std::vector<Rational> l(n + 1);
      l[0] = exact(w.constant, "dlog constant");
      for (std::size_t i = 0; i < n; ++i) l[i + 1] = exact(w.gradient.at(i), "dlog gradient");
      std::size_t p = 1;
      while (p <= n && l[p] == 0) ++p;
      if (p > n) continue;
      Rational lead = l[p];
      for (auto& c : l) c /= lead;
      dlogs[l] += x;
    } else {
      PolyLetter pl{w.coordinate, {}, x};
      for (const auto& [e, c] : w.monomials) {
        Rational v = exact(c, "polynomial coefficient");
        if (v != 0) pl.f[e] += v;
      }
      polys.push_back(std::move(pl));
    }
  }
  std::vector<std::vector<Rational>> ls;
  std::vector<LieElement> xs;
  for (const auto& [l, x] : dlogs) {
    ls.push_back(l);
    xs.push_back(x);
  }
  const std::size_t m = ls.size();
  std::vector<Poly> lp;
  for (const auto& l : ls) lp.push_back(affine_poly(l));
  auto product_except = [&](std::size_t skip1, std::size_t skip2) {
    Poly p{{Exponent(n, 0), Rational(1)}};
    for (std::size_t i = 0; i < m; ++i)
      if (i != skip1 && i != skip2) p = poly_multiply(p, lp[i]);
    return p;
  };
  const std::size_t none = std::size_t(-1);
  const Poly D = product_except(none, none);

  TwoForm out;  // D * (d omega + omega ^ omega)
  for (const auto& pl : polys)
    for (std::size_t j = 0; j < n; ++j) out.add(j, pl.coordinate, poly_multiply(D, derivative(pl.f, j)), pl.x);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      LieElement br = L.bracket(xs[i], xs[j]);
      if (br.is_zero()) continue;
      Poly q = product_except(i, j);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          Rational c = ls[i][a + 1] * ls[j][b + 1];
          if (c != 0) out.add(a, b, poly_multiply(q, Poly{{Exponent(n, 0), c}}), br);
        }
    }
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& pl : polys) {
      LieElement br = L.bracket(xs[i], pl.x);
      if (br.is_zero()) continue;
      Poly q = poly_multiply(product_except(i, none), pl.f);
      for (std::size_t a = 0; a < n; ++a)
        if (ls[i][a + 1] != 0) out.add(a, pl.coordinate, poly_multiply(q, Poly{{Exponent(n, 0), ls[i][a + 1]}}), br);
    }
  for (std::size_t p = 0; p < polys.size(); ++p)
    for (std::size_t q = p + 1; q < polys.size(); ++q) {
      LieElement br = L.bracket(polys[p].x, polys[q].x);
      if (br.is_zero()) continue;
      out.add(polys[p].coordinate, polys[q].coordinate,
              poly_multiply(D, poly_multiply(polys[p].f, polys[q].f)), br);
    }

  IntegrabilityReport rep;
  for (const auto& [ab, mons] : out.terms)
    for (const auto& [e, x] : mons) {
      if (x.is_zero()) continue;
      std::ostringstream os;
      os << "coefficient of dx" << ab.first + 1 << "^dx" << ab.second + 1 << " at monomial";
      bool any = false;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) {
          os << " x" << i + 1 << "^" << e[i];
          any = true;
        }
      if (!any) os << " 1";
      os << " (after clearing " << m << " denominators) is " << render_lie(L, x);
      rep.integrable = false;
      rep.certificate = os.str();
      return rep;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Finite covers

SheetedPath SheetedPath::trivial_lift(PiecewisePath p, std::shared_ptr<const FiniteGroup> group) {
  SheetedPath s;
  std::size_t e = group->identity();
  s.sheets.assign(p.segments().size(), e);
  s.end_sheet = e;
  s.path = std::move(p);
  s.group = std::move(group);
  return s;
}

SheetedPath SheetedPath::reversed() const {
  SheetedPath r;
  r.group = group;
  r.path = path.reversed();
  std::size_t back = group->inverse(end_sheet);
  for (auto it = sheets.rbegin(); it != sheets.rend(); ++it) r.sheets.push_back(group->multiply(back, *it));
  r.end_sheet = back;
  return r;
}

SheetedPath SheetedPath::concat(const SheetedPath& other) const {
  if (group.get() != other.group.get() && group->table() != other.group->table())
    throw std::invalid_argument("concat: different groups");
  SheetedPath r;
  r.group = group;
  r.path = path.concat(other.path);
  r.sheets = sheets;
  for (auto s : other.sheets) r.sheets.push_back(group->multiply(end_sheet, s));
  r.end_sheet = group->multiply(end_sheet, other.end_sheet);
  return r;
}

SheetedForm SheetedForm::translated(const FiniteGroup& G, std::size_t h) const {
  SheetedForm r;
  r.on_sheet.resize(on_sheet.size());
  for (std::size_t s = 0; s < on_sheet.size(); ++s) r.on_sheet[s] = on_sheet[G.multiply(h, s)];
  return r;
}

Complex lifted_iterated_integral(const SheetedPath& path, const std::vector<SheetedForm>& forms,
                                 const OdeOptions& opt) {
  if (path.sheets.size() != path.path.segments().size())
    throw std::invalid_argument("sheeted path: one sheet per segment required");
  for (const auto& w : forms)
    if (w.on_sheet.size() != path.group->order()) throw std::invalid_argument("sheeted form: one form per sheet");
  return chen_integral(
      path.path, forms.size(),
      [&](std::size_t seg, std::size_t j) -> const ScalarOneForm& { return forms[j].on_sheet[path.sheets[seg]]; },
      opt);
}

Complex iterated_integral_with_coeff(const SheetedPath& path, const std::vector<SheetedForm>& forms,
                                     const std::vector<Complex>& phi, const OdeOptions& opt) {
  if (phi.size() != path.group->order()) throw std::invalid_argument("coefficient must be a function on the group");
  Complex c = phi[path.end_sheet];
  if (c == Complex(0)) return 0.0;
  return c * lifted_iterated_integral(path, forms, opt);
}

Monodromy monodromy(const SheetedPath& path, const SheetedLieForm& omega, std::shared_ptr<const Envelope> env,
                    const OdeOptions& opt) {
  if (path.sheets.size() != path.path.segments().size())
    throw std::invalid_argument("sheeted path: one sheet per segment required");
  if (omega.on_sheet.size() != path.group->order())
    throw std::invalid_argument("sheeted Lie form: one form per sheet");
  Monodromy m{path.end_sheet,
              transport_impl(
                  path.path,
                  [&](std::size_t seg) -> const LieValuedOneForm& { return omega.on_sheet[path.sheets[seg]]; },
                  omega.on_sheet.size(), std::move(env), opt)};
  return m;
}

}  // namespace malcev
