#pragma once

// JSON interchange for models, presentations, paths, forms, groups, irreps and
// series. Rationals travel as "p/q" strings, complex numbers as [re, im].

#include "malcev/bar.hpp"
#include "malcev/relcomp.hpp"
#include "malcev/transport.hpp"

#include "json.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace malcev::io {

using json = nlohmann::ordered_json;

/// Malformed input; `where` is a file name and JSON pointer.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where(where) {}
  std::string where;
};

json read_file(const std::string& path);
/// Rounds to 12 significant digits so output is stable.
double round12(double x);
std::string format12(double x);
json complex_json(Complex z);

json group_to_json(const FiniteGroup& G);
FiniteGroup group_from_json(const json& j, const std::string& where = "");

/// Sides for the bar construction named by the "augmentations" field.
struct DGADocument {
  std::shared_ptr<DGAModel> model;
  SideKind left = SideKind::Ground;
  SideKind right = SideKind::Ground;
};
json dga_to_json(const DGAModel& model, SideKind left = SideKind::Ground, SideKind right = SideKind::Ground);
DGADocument dga_from_json(const json& j, const std::string& where = "");

json bracket_to_json(const BracketExpr& e);
BracketExpr bracket_from_json(const json& j, const std::string& where);
json lie_expression_to_json(const LieExpression& e);
LieExpression lie_expression_from_json(const json& j, const std::string& where);
json presentation_to_json(const LiePresentation& p);
LiePresentation presentation_from_json(const json& j, const std::string& where = "");

/// Quotient element written back as bracket terms through the Hall basis.
json lie_element_to_json(const NilpotentQuotient& q, const LieElement& x);
LieElement lie_element_from_json(const NilpotentQuotient& q, const json& j, const std::string& where);

json path_to_json(const PiecewisePath& p);
PiecewisePath path_from_json(const json& j, const std::string& where = "");

json form_to_json(const NilpotentQuotient& q, const LieValuedOneForm& w);
LieValuedOneForm form_from_json(const NilpotentQuotient& q, const json& j, const std::string& where = "");

json irreps_to_json(const std::vector<Irrep>& irreps);
std::vector<Irrep> irreps_from_json(const json& j, const FiniteGroup& G, const std::string& where = "");

/// Coefficients keyed by PBW monomial label; parts below 1e-14 are zeroed and zero terms omitted.
json series_to_json(const ComplexSeries& s);

}  // namespace malcev::io
