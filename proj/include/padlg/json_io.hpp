#ifndef PADLG_JSON_IO_HPP
#define PADLG_JSON_IO_HPP

#include <json.hpp>

#include <string>

#include "padlg/frobeq.hpp"
#include "padlg/nabla.hpp"
#include "padlg/newton.hpp"
#include "padlg/ore.hpp"
#include "padlg/sigma_module.hpp"

namespace padlg {

/// malformed or out-of-contract input; distinct from MathError so the CLI
/// can map it to its own exit code
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

namespace io {

// insertion-ordered so dumps are byte-stable
using Json = nlohmann::ordered_json;

std::string rat_str(const Rat& r);
Rat rat_from_str(const std::string& s);
/// 12 significant digits, the only place floating point reaches the output
std::string float_str(double x);

/// {"val": v | "inf", "digits": [...]}: exact zero has val "inf"; an empty
/// digit list with finite val is a zero-at-precision marker (v >= val only);
/// otherwise digits are base-p, little-endian, one per known relative digit
/// (each digit is an integer for h = 1, an h-vector of residue coordinates
/// for h > 1).
Json scalar_to_json(const PadicScalar& a);
PadicScalar scalar_from_json(const ContextPtr& ctx, const Json& j);

/// {"window":[n_min,n_max], "exact_below":b, "exact_above":b,
///  "coeffs":[[n, scalar],...], "floor": int|null}
Json series_to_json(const LaurentSeries& f);
LaurentSeries series_from_json(const ContextPtr& ctx, const Json& j);

/// {"components":[series,...]} by log-degree; a bare series object is
/// accepted on input as log-degree 0
Json log_series_to_json(const LogSeries& y);
LogSeries log_series_from_json(const ContextPtr& ctx, const Json& j);

/// array of series in degree order a_0 .. a_n
Json twisted_to_json(const TwistedPoly& f);
TwistedPoly twisted_from_json(const ContextPtr& ctx, const Json& j);

/// {"G": matrix of series, "den": series|null, "log": bool,
///  "F": matrix|null}
Json module_to_json(const DifferentialModule& M);
DifferentialModule module_from_json(const ContextPtr& ctx, const Json& j);

Json polygon_to_json(const NewtonPolygon& np);
Json star_to_json(const StarReport& r);
Json kedlaya_to_json(const KedlayaTrace& t);
Json ladder_to_json(const LadderProfile& prof);
Json growth_report_to_json(const LogGrowthReport& rep);
Json basis_to_json(const SolutionBasis& b);
Json filtration_to_json(const FiltrationReport& rep, bool with_comparison);

}  // namespace io
}  // namespace padlg

#endif
