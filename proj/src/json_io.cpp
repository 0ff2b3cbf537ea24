#include "padlg/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace padlg {
namespace io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw SchemaError(std::string("expected an object with key \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing key \"") + key + "\"");
    return *it;
}

long get_long(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
    return j.get<long>();
}

bool get_bool(const Json& j, const char* what) {
    if (!j.is_boolean()) throw SchemaError(std::string(what) + " must be a boolean");
    return j.get<bool>();
}

}  // namespace

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_from_str(const std::string& s) {
    Rat r;
    if (s.empty() || mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw SchemaError("malformed rational \"" + s + "\"");
    if (r.get_den() == 0) throw SchemaError("zero denominator in \"" + s + "\"");
    r.canonicalize();
    return r;
}

std::string float_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json scalar_to_json(const PadicScalar& a) {
    Json j = Json::object();
    if (a.is_exact_zero()) {
        j["val"] = "inf";
        j["digits"] = Json::array();
        return j;
    }
    if (a.is_prec_zero()) {
        j["val"] = a.valuation_lower_bound();
        j["digits"] = Json::array();
        return j;
    }
    const PadicContext& c = *a.context();
    j["val"] = a.valuation();
    Json digits = Json::array();
    std::vector<Int> u = a.unit();
    u.resize(c.h(), Int(0));
    for (int k = 0; k < a.rel_precision(); ++k) {
        if (c.h() == 1) {
            digits.push_back(Int(u[0] % c.p()).get_si());
            u[0] /= c.p();
        } else {
            Json d = Json::array();
            for (int t = 0; t < c.h(); ++t) {
                d.push_back(Int(u[t] % c.p()).get_si());
                u[t] /= c.p();
            }
            digits.push_back(std::move(d));
        }
    }
    j["digits"] = std::move(digits);
    return j;
}

PadicScalar scalar_from_json(const ContextPtr& ctx, const Json& j) {
    const Json& val = field(j, "val");
    const Json& digits = field(j, "digits");
    if (!digits.is_array()) throw SchemaError("\"digits\" must be an array");
    if (val.is_string()) {
        if (val.get<std::string>() != "inf") throw SchemaError("\"val\" must be an integer or \"inf\"");
        if (!digits.empty()) throw SchemaError("exact zero cannot carry digits");
        return PadicScalar::zero(ctx);
    }
    long v = get_long(val, "\"val\"");
    if (digits.empty()) return PadicScalar::prec_zero(ctx, v);
    int rel = static_cast<int>(digits.size());
    if (rel > ctx->precision()) throw SchemaError("more digits than the context precision allows");
    std::vector<Int> u(ctx->h(), Int(0));
    Int pk(1);
    bool any = false;
    for (int k = 0; k < rel; ++k) {
        const Json& d = digits[k];
        auto take = [&](const Json& e, int t) {
            long x = get_long(e, "digit");
            if (x < 0 || x >= ctx->p()) throw SchemaError("digit out of range [0, p)");
            if (x != 0) any = true;
            u[t] += pk * x;
        };
        if (ctx->h() == 1) {
            take(d, 0);
        } else {
            if (!d.is_array() || static_cast<int>(d.size()) != ctx->h())
                throw SchemaError("each digit must be an h-vector of residue coordinates");
            for (int t = 0; t < ctx->h(); ++t) take(d[t], t);
        }
        pk *= ctx->p();
    }
    if (!any) return PadicScalar::prec_zero(ctx, v + rel);
    return PadicScalar::from_unit(ctx, v, std::move(u), rel);
}

Json series_to_json(const LaurentSeries& f) {
    Json j = Json::object();
    j["window"] = Json::array({f.n_min(), f.n_max()});
    j["exact_below"] = f.exact_below();
    j["exact_above"] = f.exact_above();
    Json coeffs = Json::array();
    for (long n = f.n_min(); n <= f.n_max(); ++n) {
        const PadicScalar& c = f.coeff(n);
        if (c.is_exact_zero()) continue;
        coeffs.push_back(Json::array({n, scalar_to_json(c)}));
    }
    j["coeffs"] = std::move(coeffs);
    if (f.floor())
        j["floor"] = *f.floor();
    else
        j["floor"] = nullptr;
    return j;
}

LaurentSeries series_from_json(const ContextPtr& ctx, const Json& j) {
    const Json& w = field(j, "window");
    if (!w.is_array() || w.size() != 2) throw SchemaError("\"window\" must be [n_min, n_max]");
    long lo = get_long(w[0], "window bound");
    long hi = get_long(w[1], "window bound");
    if (hi < lo - 1) throw SchemaError("window upper bound below lower bound");
    bool eb = get_bool(field(j, "exact_below"), "\"exact_below\"");
    bool ea = j.contains("exact_above") ? get_bool(j["exact_above"], "\"exact_above\"") : true;
    std::vector<PadicScalar> coeffs(static_cast<size_t>(hi - lo + 1), PadicScalar::zero(ctx));
    const Json& cs = field(j, "coeffs");
    if (!cs.is_array()) throw SchemaError("\"coeffs\" must be an array of [n, scalar] pairs");
    for (const Json& e : cs) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("coefficient entries are [n, scalar] pairs");
        long n = get_long(e[0], "coefficient exponent");
        if (n < lo || n > hi) throw SchemaError("coefficient exponent outside the window");
        coeffs[static_cast<size_t>(n - lo)] = scalar_from_json(ctx, e[1]);
    }
    std::optional<long> floor;
    const Json& fl = field(j, "floor");
    if (!fl.is_null()) floor = get_long(fl, "\"floor\"");
    return raw_series(ctx, lo, std::move(coeffs), eb, ea, floor);
}

Json log_series_to_json(const LogSeries& y) {
    Json comps = Json::array();
    for (const LaurentSeries& f : y.components()) comps.push_back(series_to_json(f));
    return Json{{"components", std::move(comps)}};
}

LogSeries log_series_from_json(const ContextPtr& ctx, const Json& j) {
    if (j.is_object() && j.contains("window")) return LogSeries(series_from_json(ctx, j));
    const Json& comps = field(j, "components");
    if (!comps.is_array()) throw SchemaError("\"components\" must be an array of series");
    if (comps.empty()) return LogSeries(std::vector<LaurentSeries>{});
    std::vector<LaurentSeries> cs;
    for (const Json& e : comps) cs.push_back(series_from_json(ctx, e));
    return LogSeries(std::move(cs));
}

Json twisted_to_json(const TwistedPoly& f) {
    Json j = Json::array();
    for (const LaurentSeries& a : f.coeffs()) j.push_back(series_to_json(a));
    return j;
}

TwistedPoly twisted_from_json(const ContextPtr& ctx, const Json& j) {
    if (!j.is_array())
        throw SchemaError("a twisted polynomial is an array of series in degree order");
    if (j.empty()) return TwistedPoly::zero(ctx);
    std::vector<LaurentSeries> coeffs;
    for (const Json& e : j) coeffs.push_back(series_from_json(ctx, e));
    return TwistedPoly(ctx, std::move(coeffs));
}

namespace {

std::vector<std::vector<LaurentSeries>> matrix_from_json(const ContextPtr& ctx, const Json& j,
                                                         const char* what) {
    if (!j.is_array() || j.empty()) throw SchemaError(std::string(what) + " must be a nonempty matrix of series");
    std::vector<std::vector<LaurentSeries>> m;
    for (const Json& row : j) {
        if (!row.is_array() || row.size() != j.size())
            throw SchemaError(std::string(what) + " must be square");
        std::vector<LaurentSeries> r;
        for (const Json& e : row) r.push_back(series_from_json(ctx, e));
        m.push_back(std::move(r));
    }
    return m;
}

Json matrix_to_json(const std::vector<std::vector<LaurentSeries>>& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(series_to_json(e));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

Json module_to_json(const DifferentialModule& M) {
    Json j = Json::object();
    j["G"] = matrix_to_json(M.G_num);
    j["den"] = series_to_json(M.g_den);
    j["log"] = M.log_flag;
    if (M.has_frobenius())
        j["F"] = matrix_to_json(M.F);
    else
        j["F"] = nullptr;
    return j;
}

DifferentialModule module_from_json(const ContextPtr& ctx, const Json& j) {
    DifferentialModule M;
    M.ctx = ctx;
    M.G_num = matrix_from_json(ctx, field(j, "G"), "\"G\"");
    M.n = static_cast<int>(M.G_num.size());
    if (j.contains("den") && !j["den"].is_null())
        M.g_den = series_from_json(ctx, j["den"]);
    else
        M.g_den = LaurentSeries::one(ctx);
    M.log_flag = j.contains("log") ? get_bool(j["log"], "\"log\"") : false;
    if (j.contains("F") && !j["F"].is_null()) {
        M.F = matrix_from_json(ctx, j["F"], "\"F\"");
        if (static_cast<int>(M.F.size()) != M.n) throw SchemaError("\"F\" rank differs from \"G\"");
    }
    return M;
}

Json polygon_to_json(const NewtonPolygon& np) {
    Json verts = Json::array();
    for (const auto& [x, y] : np.vertices) verts.push_back(Json::array({rat_str(x), rat_str(y)}));
    Json slopes = Json::array();
    for (const auto& [s, m] : np.slopes) slopes.push_back(Json::array({rat_str(s), rat_str(m)}));
    return Json{{"vertices", std::move(verts)}, {"slopes", std::move(slopes)}};
}

Json star_to_json(const StarReport& r) {
    Json j = Json::object();
    j["polygon"] = polygon_to_json(r.polygon);
    j["on_polygon"] = r.on_polygon;
    j["satisfied"] = r.satisfied;
    return j;
}

Json kedlaya_to_json(const KedlayaTrace& t) {
    Json j = Json::object();
    j["n"] = t.n;
    Json stages = Json::array();
    for (const auto& st : t.stages) {
        Json row = Json::array();
        for (const auto& x : st) row.push_back(series_to_json(x));
        stages.push_back(std::move(row));
    }
    j["stages"] = std::move(stages);
    Json bs = Json::array();
    for (const auto& b : t.b) bs.push_back(series_to_json(b));
    j["b"] = std::move(bs);
    j["b_zeroed"] = t.b_zeroed;
    j["annihilator"] = twisted_to_json(t.annihilator);
    Json cs = Json::array();
    for (const auto& c : t.c) cs.push_back(series_to_json(c));
    j["c"] = std::move(cs);
    j["triangular_support"] = t.triangular_support;
    j["residual_zero"] = t.residual_zero;
    return j;
}

Json ladder_to_json(const LadderProfile& prof) {
    Json j = Json::object();
    j["r0"] = rat_str(prof.r0);
    j["depth"] = prof.depth;
    j["truncated"] = prof.truncated;
    j["diagnostic"] = prof.diagnostic;
    Json entries = Json::array();
    for (const LadderEntry& e : prof.entries) {
        Json row = Json::object();
        row["m"] = e.m;
        row["r"] = rat_str(e.r);
        row["exponent"] = float_str(e.exponent);
        // rounding bound of the printed double; the rational part is exact
        row["error_bound"] = float_str(5e-12 * std::max(1.0, std::abs(e.exponent)));
        row["certified"] = e.certified;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

Json growth_report_to_json(const LogGrowthReport& rep) {
    Json j = Json::object();
    Json slopes = Json::array();
    for (const Rat& s : rep.slopes) slopes.push_back(rat_str(s));
    j["slopes"] = std::move(slopes);
    j["lambda_hat"] = float_str(rep.lambda_hat);
    switch (rep.kind) {
        case GrowthKind::Bounded: j["kind"] = "Bounded"; break;
        case GrowthKind::ExactlyLogGrowth: j["kind"] = "ExactlyLogGrowth"; break;
        case GrowthKind::Unclassified: j["kind"] = "Unclassified"; break;
    }
    j["snapped"] = rat_str(rep.snapped);
    Json audit = Json::array();
    for (const ConditionAudit& a : rep.audit) {
        audit.push_back(Json{{"j", a.j}, {"holds", a.holds}, {"first_failing_m", a.first_failing_m}});
    }
    j["audit"] = std::move(audit);
    j["least_failing_j"] = rep.least_failing_j;
    j["audit_slope"] = rat_str(rep.audit_slope);
    j["B"] = float_str(rep.B);
    j["Bprime"] = float_str(rep.Bprime);
    j["evidence"] = ladder_to_json(rep.evidence);
    return j;
}

Json basis_to_json(const SolutionBasis& b) {
    Json j = Json::object();
    j["n"] = b.n;
    j["T"] = b.T;
    j["digits_lost"] = b.digits_lost;
    auto mat = [](const std::vector<std::vector<LogSeries>>& m) {
        Json rows = Json::array();
        for (const auto& row : m) {
            Json r = Json::array();
            for (const auto& e : row) r.push_back(log_series_to_json(e));
            rows.push_back(std::move(r));
        }
        return rows;
    };
    j["S"] = mat(b.S);
    j["W"] = mat(b.W);
    return j;
}

Json filtration_to_json(const FiltrationReport& rep, bool with_comparison) {
    Json j = Json::object();
    Json breaks = Json::array();
    for (const auto& [lam, mult] : rep.breaks) breaks.push_back(Json::array({rat_str(lam), mult}));
    j["breaks"] = std::move(breaks);
    Json raw = Json::array();
    for (double v : rep.raw) raw.push_back(float_str(v));
    j["raw"] = std::move(raw);
    j["ambiguous"] = rep.ambiguous;
    if (with_comparison) {
        j["lambda_max"] = rat_str(rep.lambda_max);
        Json rows = Json::array();
        for (const ComparisonRow& r : rep.comparison) {
            rows.push_back(Json{{"lambda", rat_str(r.lambda)},
                                {"dim_log_growth", r.dim_log_growth},
                                {"dim_orth", r.dim_orth},
                                {"equal", r.equal},
                                {"contained", r.contained}});
        }
        j["comparison"] = std::move(rows);
    }
    return j;
}

}  // namespace io
}  // namespace padlg
