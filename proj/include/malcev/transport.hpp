#pragma once

// Paths, scalar and Lie-valued 1-forms, Chen iterated integrals, parallel
// transport in a truncated envelope, the exact integrability check, and
// iterated integrals with coefficients on finite covers.

#include "malcev/envelope.hpp"
#include "malcev/finite_group.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace malcev {

using Point = std::vector<Complex>;

/// One coordinate moving on a circle: center + radius * exp(i theta).
struct ArcMover {
  std::size_t coordinate = 0;
  Complex center;
  double radius = 0;
  double theta0 = 0, theta1 = 0;
};

/// Segment over t in [0, 1]. Polynomial segments store per-coordinate
/// coefficients in t; arc segments move some coordinates on circles and keep the
/// rest at `fixed`. time_maps are real polynomials applied to t, innermost last.
struct Segment {
  enum class Kind { Polynomial, Arc };
  Kind kind = Kind::Polynomial;
  std::vector<std::vector<Complex>> coeffs;
  std::vector<ArcMover> movers;
  Point fixed;
  std::vector<std::vector<double>> time_maps;

  Point point(double t) const;
  Point velocity(double t) const;
};

class PiecewisePath {
 public:
  explicit PiecewisePath(std::size_t dimension = 1) : dimension_(dimension) {}

  static PiecewisePath constant(const Point& p);
  static PiecewisePath line(const Point& a, const Point& b);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  void add_polynomial(std::vector<std::vector<Complex>> coeffs);
  /// Coordinates not moved keep the values of `start`, or of the current end point when omitted.
  void add_arc(std::vector<ArcMover> movers, std::optional<Point> start = std::nullopt);
  void add_segment(Segment s);

  Point start() const;
  Point end() const;
  Point point(std::size_t segment, double t) const { return segments_.at(segment).point(t); }
  Point velocity(std::size_t segment, double t) const { return segments_.at(segment).velocity(t); }

  PiecewisePath reversed() const;
  PiecewisePath concat(const PiecewisePath& other) const;
  /// Precomposes every segment with the real polynomial phi (phi(0)=0, phi(1)=1, increasing).
  PiecewisePath reparametrized(const std::vector<double>& phi) const;

  /// Largest jump between consecutive segment end points.
  double continuity_defect() const;
  /// Largest distance between sampled points, at least 1e-300.
  double diameter() const;

 private:
  std::size_t dimension_;
  std::vector<Segment> segments_;
};

/// dlog of a complex affine functional, or f(x) dx_k with polynomial f.
struct ScalarOneForm {
  enum class Kind { DlogAffine, Polynomial };
  Kind kind = Kind::DlogAffine;
  std::size_t dimension = 1;
  Complex constant;               // dlog: l(x) = constant + gradient . x
  std::vector<Complex> gradient;
  std::size_t coordinate = 0;     // poly: f dx_coordinate
  std::vector<std::pair<std::vector<int>, Complex>> monomials;  // exponent vector -> coefficient

  static ScalarOneForm dlog(Complex constant, std::vector<Complex> gradient);
  /// f = sum_k coefficients[k] x_coordinate^k.
  static ScalarOneForm poly(std::size_t dimension, std::size_t coordinate, const std::vector<Complex>& coefficients);

  Complex affine(const Point& x) const;
  Complex poly_value(const Point& x) const;
  /// Pullback coefficient omega(x)(v).
  Complex evaluate(const Point& x, const Point& v) const;
};

struct LieValuedOneForm {
  std::shared_ptr<const GradedNilpotentLie> lie;
  std::size_t dimension = 1;
  std::vector<std::pair<ScalarOneForm, LieElement>> terms;
};

class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, std::size_t segment, double t)
      : std::runtime_error(what), segment(segment), t(t) {}
  std::size_t segment;
  double t;
};

class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double achieved) : std::runtime_error(what), achieved(achieved) {}
  double achieved;
};

struct OdeOptions {
  double tol = 1e-10;
  double min_step = 1e-13;
  std::size_t max_steps = 2000000;
  bool parallel = true;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double error = 0;  // sum of accepted local error estimates (max norm)
};

using OdeRhs = std::function<void(double t, const std::vector<Complex>& y, std::vector<Complex>& dy)>;

/// Dormand-Prince 5(4) from t = 0 to 1 with per-step control |err_i| <= tol (1 + |y_i|).
void integrate_dopri5(std::vector<Complex>& y, const OdeRhs& rhs, const OdeOptions& opt, OdeStats& stats);

/// Chen integral over the simplex 0 <= t_1 <= ... <= t_r <= 1 of f_1(t_1)...f_r(t_r).
Complex iterated_integral(const PiecewisePath& path, const std::vector<ScalarOneForm>& forms,
                          const OdeOptions& opt = {});

/// Right multiplication by sum_k f_k X_k on dense series, in CSR form by output index.
class TransportKernel {
 public:
  TransportKernel(const Envelope& env, const std::vector<LieElement>& coefficients);
  std::size_t size() const { return row_start_.size() - 1; }
  std::size_t nonzeros() const { return entries_.size(); }
  void apply_serial(const std::vector<Complex>& f, const std::vector<Complex>& y, std::vector<Complex>& out) const;
  void apply_parallel(const std::vector<Complex>& f, const std::vector<Complex>& y, std::vector<Complex>& out) const;

 private:
  struct Entry {
    std::size_t source;
    std::size_t letter;
    double value;
  };
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
};

struct TransportResult {
  ComplexSeries series;
  double error_estimate = 0;
  std::size_t steps = 0;
};

/// Solves T' = T omega(gamma') from T(0) = 1 in the given envelope.
TransportResult transport(const PiecewisePath& path, const LieValuedOneForm& omega,
                          std::shared_ptr<const Envelope> env, const OdeOptions& opt = {});

/// Exact check of d omega + omega ^ omega = 0. Coefficients must be real and are
/// read as exact binary rationals. certificate is empty on success.
struct IntegrabilityReport {
  bool integrable = true;
  std::string certificate;
};
IntegrabilityReport check_integrability(const LieValuedOneForm& omega);

// ---------------------------------------------------------------------------
// Finite covers

/// A path in the base together with its lift to a finite principal S-cover:
/// segment k of the lift lies on sheet sheets[k] and the lift ends on end_sheet,
/// which is the monodromy rho(gamma). The lift starts on the identity sheet.
struct SheetedPath {
  PiecewisePath path;
  std::shared_ptr<const FiniteGroup> group;
  std::vector<std::size_t> sheets;
  std::size_t end_sheet = 0;

  static SheetedPath trivial_lift(PiecewisePath p, std::shared_ptr<const FiniteGroup> group);
  SheetedPath reversed() const;
  SheetedPath concat(const SheetedPath& other) const;
};

/// A 1-form on the cover, given sheet by sheet as forms on the base.
struct SheetedForm {
  std::vector<ScalarOneForm> on_sheet;  // indexed by group element
  /// (L_h^* w) on sheet s is w on sheet h s.
  SheetedForm translated(const FiniteGroup& G, std::size_t h) const;
};

/// Lifted iterated integral of sheeted letters along the lift.
Complex lifted_iterated_integral(const SheetedPath& path, const std::vector<SheetedForm>& forms,
                                 const OdeOptions& opt = {});
/// phi(rho(gamma)) times the lifted iterated integral; phi is a function on S.
Complex iterated_integral_with_coeff(const SheetedPath& path, const std::vector<SheetedForm>& forms,
                                     const std::vector<Complex>& phi, const OdeOptions& opt = {});

/// Lie-valued form on the cover, sheet by sheet.
struct SheetedLieForm {
  std::vector<LieValuedOneForm> on_sheet;
};

struct Monodromy {
  std::size_t sheet;  // rho(gamma)
  TransportResult transport;
};
/// Transport along the lift, paired with rho(gamma).
Monodromy monodromy(const SheetedPath& path, const SheetedLieForm& omega, std::shared_ptr<const Envelope> env,
                    const OdeOptions& opt = {});

}  // namespace malcev
