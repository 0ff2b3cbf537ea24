#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "padlg/json_io.hpp"

using namespace padlg;
using io::Json;

namespace {

struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    long p = 5;
    int h = 1;
    int N = 30;
    long T = 64;
    std::string r0 = "1/2";
    int M = 8;
    double tau = 0.15;
    int D = 8;
    unsigned seed = 1;
    int budget = 32;

    Rat r0_rat() const { return io::rat_from_str(r0); }
    void validate() const {
        if (p < 2 || h < 1 || N < 1 || T < 1 || M < 1 || tau <= 0 || D < 1 || budget < 1 ||
            r0_rat() <= 0)
            throw Infeasible("config values must be positive (p >= 2)");
    }
    ContextPtr ctx() const { return make_context(p, h, N); }
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read \"" + path + "\"");
    return Json::parse(in);  // parse_error carries the byte position
}

void emit(const Json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw SchemaError("cannot write \"" + out_path + "\"");
        out << text;
    }
}

std::vector<Rat> parse_slope_list(const std::string& s) {
    std::vector<Rat> slopes;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        slopes.push_back(io::rat_from_str(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return slopes;
}

/// ladder feasibility T >= safety * q^M / r0 (safety 2); reports the largest
/// workable depth for this T before anything runs
int feasible_depth(const RunConfig& cfg) {
    Rat r0 = cfg.r0_rat();
    Int q(1);
    for (int i = 0; i < cfg.h; ++i) q *= cfg.p;
    Rat need = Rat(2) / r0;  // demand at M = 0
    int m = -1;
    while (need <= cfg.T && m < 64) {
        ++m;
        need *= Rat(q);
    }
    return m;
}

void check_ladder_feasible(const RunConfig& cfg) {
    int feasible = feasible_depth(cfg);
    std::fprintf(stderr, "feasible ladder depth at T=%ld, r0=%s: M <= %d\n", cfg.T,
                 cfg.r0.c_str(), feasible);
    if (cfg.M > feasible)
        throw Infeasible("ladder depth M=" + std::to_string(cfg.M) + " needs T >= 2 q^M / r0; at T=" +
                         std::to_string(cfg.T) + " only M <= " + std::to_string(feasible) +
                         " is certified");
}

double rat_double(const Rat& r) { return mpq_get_d(r.get_mpq_t()); }

void print_filtration_table(const FiltrationReport& rep, bool with_comparison) {
    std::fprintf(stderr, "%-10s %-5s %s\n", "break", "mult", "raw");
    for (size_t i = 0; i < rep.breaks.size(); ++i) {
        std::fprintf(stderr, "%-10s %-5d %s\n", io::rat_str(rep.breaks[i].first).c_str(),
                     rep.breaks[i].second,
                     i < rep.raw.size() ? io::float_str(rep.raw[i]).c_str() : "-");
    }
    if (rep.ambiguous) std::fprintf(stderr, "(ambiguous: raw estimates within tau snapped apart)\n");
    if (with_comparison) {
        std::fprintf(stderr, "lambda_max = %s\n", io::rat_str(rep.lambda_max).c_str());
        std::fprintf(stderr, "%-10s %-8s %-8s %-6s %s\n", "lambda", "dim_V", "dim_orth", "equal",
                     "contained");
        for (const ComparisonRow& r : rep.comparison)
            std::fprintf(stderr, "%-10s %-8d %-8d %-6s %s\n", io::rat_str(r.lambda).c_str(),
                         r.dim_log_growth, r.dim_orth, r.equal ? "yes" : "no",
                         r.contained ? "yes" : "no");
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    int rc = 0;

    CLI::App app{"exact p-adic log-growth toolkit"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print usage");  // frees -h/--h for the field degree

    // env var names a JSON file of RunConfig defaults; flags override it
    if (const char* path = std::getenv("PADLG_CONFIG")) {
        try {
            Json j = load_json(path);
            if (j.contains("p")) cfg.p = j["p"].get<long>();
            if (j.contains("h")) cfg.h = j["h"].get<int>();
            if (j.contains("N")) cfg.N = j["N"].get<int>();
            if (j.contains("T")) cfg.T = j["T"].get<long>();
            if (j.contains("r0")) cfg.r0 = j["r0"].is_string() ? j["r0"].get<std::string>()
                                                              : std::to_string(j["r0"].get<long>());
            if (j.contains("M")) cfg.M = j["M"].get<int>();
            if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
            if (j.contains("D")) cfg.D = j["D"].get<int>();
            if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
            if (j.contains("budget")) cfg.budget = j["budget"].get<int>();
        } catch (const Json::exception& e) {
            std::fprintf(stderr, "schema violation in config %s: %s\n", path, e.what());
            return 2;
        } catch (const SchemaError& e) {
            std::fprintf(stderr, "schema violation in config %s: %s\n", path, e.what());
            return 2;
        }
    }

    app.add_option("--p", cfg.p, "residue characteristic");
    app.add_option("--h", cfg.h, "unramified degree, q = p^h");
    app.add_option("--N", cfg.N, "relative precision cap");
    app.add_option("--T", cfg.T, "series truncation order");
    app.add_option("--r0", cfg.r0, "ladder base radius exponent (rho_0 = p^-r0)");
    app.add_option("--M", cfg.M, "ladder depth");
    app.add_option("--tau", cfg.tau, "snap tolerance");
    app.add_option("--D", cfg.D, "snap denominator bound");
    app.add_option("--seed", cfg.seed, "seed for randomized searches");
    app.add_option("--budget", cfg.budget, "retry budget for randomized searches");
    std::string out_path;
    app.add_option("-o,--out", out_path, "write the JSON report here instead of stdout");

    // np --series s.json -r 1 [--csv points.csv]
    auto* np = app.add_subcommand("np", "Newton polygon of a series at radius p^-r");
    std::string np_series, np_csv, np_r = "1";
    np->add_option("--series", np_series, "series JSON")->required();
    np->add_option("-r", np_r, "radius exponent r >= 0");
    np->add_option("--csv", np_csv, "also write polygon vertices as x,y CSV");
    np->callback([&] {
        cfg.validate();
        auto ctx = cfg.ctx();
        LaurentSeries f = io::series_from_json(ctx, load_json(np_series));
        NewtonPolygon poly = newton_polygon_ring(f, io::rat_from_str(np_r));
        if (!np_csv.empty()) {
            std::ofstream csv(np_csv, std::ios::binary);
            if (!csv) throw SchemaError("cannot write \"" + np_csv + "\"");
            csv << "x,y\n";
            for (const auto& [x, y] : poly.vertices)
                csv << io::float_str(rat_double(x)) << "," << io::float_str(rat_double(y)) << "\n";
        }
        emit(io::polygon_to_json(poly), out_path);
    });

    // ore mul|np|star|factors
    auto* ore = app.add_subcommand("ore", "twisted polynomial ring operations");
    ore->require_subcommand(1);
    std::string ore_a, ore_b, ore_f, ore_slopes;
    auto* ore_mul_cmd = ore->add_subcommand("mul", "twisted product a * b");
    ore_mul_cmd->add_option("--a", ore_a, "left factor JSON")->required();
    ore_mul_cmd->add_option("--b", ore_b, "right factor JSON")->required();
    ore_mul_cmd->callback([&] {
        cfg.validate();
        auto ctx = cfg.ctx();
        TwistedPoly a = io::twisted_from_json(ctx, load_json(ore_a));
        TwistedPoly b = io::twisted_from_json(ctx, load_json(ore_b));
        emit(io::twisted_to_json(ore_mul(a, b)), out_path);
    });
    auto* ore_np_cmd = ore->add_subcommand("np", "twisted Newton polygon");
    ore_np_cmd->add_option("--f", ore_f, "twisted polynomial JSON")->required();
    ore_np_cmd->callback([&] {
        cfg.validate();
        TwistedPoly f = io::twisted_from_json(cfg.ctx(), load_json(ore_f));
        NewtonPolygon poly = newton_polygon_twisted(f);
        Json j = io::polygon_to_json(poly);
        Json neg = Json::array();
        for (const auto& [s, m] : slopes_paper(poly)) neg.push_back(Json::array({io::rat_str(s), io::rat_str(m)}));
        j["slopes_paper"] = std::move(neg);
        emit(j, out_path);
    });
    auto* ore_star_cmd = ore->add_subcommand("star", "condition (*) report");
    ore_star_cmd->add_option("--f", ore_f, "twisted polynomial JSON")->required();
    ore_star_cmd->callback([&] {
        cfg.validate();
        TwistedPoly f = io::twisted_from_json(cfg.ctx(), load_json(ore_f));
        emit(io::star_to_json(check_condition_star(f)), out_path);
    });
    auto* ore_fac_cmd = ore->add_subcommand("factors", "(sigma - q^s1 x)...(sigma - q^sn x)");
    ore_fac_cmd->add_option("--slopes", ore_slopes, "comma-separated rational slopes")->required();
    ore_fac_cmd->callback([&] {
        cfg.validate();
        emit(io::twisted_to_json(from_slope_factors(cfg.ctx(), parse_slope_list(ore_slopes))),
             out_path);
    });

    // kedlaya --slopes s1,s2,... [--vector v.json]
    auto* ked = app.add_subcommand("kedlaya", "annihilator construction on a diagonal module");
    std::string ked_slopes, ked_vector;
    ked->add_option("--slopes", ked_slopes, "comma-separated rational slopes")->required();
    ked->add_option("--vector", ked_vector, "cyclic vector candidate (array of series JSON); "
                                            "omitted: run the deterministic generic search");
    ked->callback([&] {
        cfg.validate();
        auto ctx = cfg.ctx();
        DiagonalSigmaModule M{ctx, parse_slope_list(ked_slopes), BaseRing::Laurent};
        Json j;
        KedlayaTrace trace;
        if (!ked_vector.empty()) {
            Json vj = load_json(ked_vector);
            if (!vj.is_array() || static_cast<int>(vj.size()) != M.rank())
                throw SchemaError("--vector must hold one series per slope");
            std::vector<LaurentSeries> v;
            for (const Json& e : vj) v.push_back(io::series_from_json(ctx, e));
            trace = kedlaya_annihilator(M, v, cfg.T);
        } else {
            GenericSearchResult res = find_generic_cyclic(M, cfg.budget, cfg.seed, cfg.T);
            if (!res.found) {
                Json fail = Json::object();
                fail["found"] = false;
                fail["retries"] = res.retries;
                emit(fail, out_path);
                rc = 1;
                return;
            }
            j["retries"] = res.retries;
            trace = res.trace;
        }
        Json tj = io::kedlaya_to_json(trace);
        for (auto& [k, v] : tj.items()) j[k] = v;
        Cert cyc = is_cyclic(trace);
        j["cyclic"] = cyc == Cert::Yes ? "Yes" : cyc == Cert::No ? "No" : "Indeterminate";
        j["generic"] = is_generic_cyclic(trace, M);
        emit(j, out_path);
    });

    // frobsolve --f f.json [--forcing g.json] [--y0 c]
    auto* frob = app.add_subcommand("frobsolve", "power-series solution of f(sigma) y + g = 0");
    std::string frob_f, frob_g, frob_y0 = "1";
    frob->add_option("--f", frob_f, "twisted polynomial JSON")->required();
    frob->add_option("--forcing", frob_g, "forcing series JSON");
    frob->add_option("--y0", frob_y0, "rational seed for y(0)");
    frob->callback([&] {
        cfg.validate();
        auto ctx = cfg.ctx();
        TwistedPoly f = io::twisted_from_json(ctx, load_json(frob_f));
        PadicScalar seed = PadicScalar::from_rational(ctx, io::rat_from_str(frob_y0));
        LaurentSeries forcing;
        FixedPointResult res;
        if (!frob_g.empty()) {
            forcing = io::series_from_json(ctx, load_json(frob_g));
            res = solve_fixed_point(f, seed, cfg.T, &forcing);
        } else {
            res = solve_fixed_point(f, seed, cfg.T);
        }
        Json j = Json::object();
        j["ok"] = res.ok;
        j["error"] = res.error;
        j["constraint_ok"] = res.constraint_ok;
        if (res.ok) {
            j["verified"] = verify_solution(f, res.y, cfg.T);
            j["y"] = io::log_series_to_json(res.y);
        }
        emit(j, out_path);
        if (!res.ok) rc = 1;
    });

    // classify --f f.json --y y.json
    auto* cls = app.add_subcommand("classify", "bounded / exactly-log-growth dichotomy");
    std::string cls_f, cls_y;
    cls->add_option("--f", cls_f, "twisted polynomial JSON")->required();
    cls->add_option("--y", cls_y, "solution JSON (series or log-series)")->required();
    cls->callback([&] {
        cfg.validate();
        check_ladder_feasible(cfg);
        auto ctx = cfg.ctx();
        TwistedPoly f = io::twisted_from_json(ctx, load_json(cls_f));
        LogSeries y = io::log_series_from_json(ctx, load_json(cls_y));
        ClassifyConfig cc;
        cc.r0 = cfg.r0_rat();
        cc.M = cfg.M;
        cc.tau = cfg.tau;
        cc.D = cfg.D;
        cc.cap_hi = cfg.T;
        LogGrowthReport rep = classify_log_growth(f, y, cc);
        Json j = io::growth_report_to_json(rep);
        j["feasible_M"] = feasible_depth(cfg);
        emit(j, out_path);
        if (rep.kind == GrowthKind::Unclassified) rc = 1;
    });

    // ladder --y y.json [--csv out.csv]
    auto* lad = app.add_subcommand("ladder", "rho-ladder norm profile of a solution");
    std::string lad_y, lad_csv;
    lad->add_option("--y", lad_y, "solution JSON (series or log-series)")->required();
    lad->add_option("--csv", lad_csv, "write entries as m,r,exponent,certified CSV");
    lad->callback([&] {
        cfg.validate();
        check_ladder_feasible(cfg);
        auto ctx = cfg.ctx();
        LogSeries y = io::log_series_from_json(ctx, load_json(lad_y));
        LadderProfile prof = ladder_profile(y, cfg.r0_rat(), cfg.M);
        if (!lad_csv.empty()) {
            std::ofstream csv(lad_csv, std::ios::binary);
            if (!csv) throw SchemaError("cannot write \"" + lad_csv + "\"");
            csv << "m,r,exponent,certified\n";
            for (const LadderEntry& e : prof.entries)
                csv << e.m << "," << io::float_str(rat_double(e.r)) << ","
                    << io::float_str(e.exponent) << "," << (e.certified ? 1 : 0) << "\n";
        }
        emit(io::ladder_to_json(prof), out_path);
        if (prof.truncated) rc = 1;
    });

    // ode solve|filtration|compare|slopes --module m.json
    auto* ode = app.add_subcommand("ode", "(sigma,nabla)-module pipelines");
    ode->require_subcommand(1);
    std::string ode_module;
    auto add_ode = [&](const char* name, const char* desc) {
        auto* sub = ode->add_subcommand(name, desc);
        sub->add_option("--module", ode_module, "module JSON {G, den, log, F}")->required();
        return sub;
    };
    add_ode("solve", "fundamental solution matrices S and W to order T")->callback([&] {
        cfg.validate();
        DifferentialModule M = io::module_from_json(cfg.ctx(), load_json(ode_module));
        emit(io::basis_to_json(solve_fundamental(M, cfg.T)), out_path);
    });
    add_ode("filtration", "special log-growth filtration breaks")->callback([&] {
        cfg.validate();
        DifferentialModule M = io::module_from_json(cfg.ctx(), load_json(ode_module));
        FiltrationConfig fc;
        fc.D = cfg.D;
        fc.tau = cfg.tau;
        FiltrationReport rep = special_filtration(M, cfg.T, fc);
        print_filtration_table(rep, false);
        emit(io::filtration_to_json(rep, false), out_path);
    });
    add_ode("compare", "log-growth breaks against the Frobenius slope orthogonal")->callback([&] {
        cfg.validate();
        DifferentialModule M = io::module_from_json(cfg.ctx(), load_json(ode_module));
        FiltrationConfig fc;
        fc.D = cfg.D;
        fc.tau = cfg.tau;
        FiltrationReport rep = compare_main_theorem(M, cfg.T, fc);
        print_filtration_table(rep, true);
        emit(io::filtration_to_json(rep, true), out_path);
        for (const ComparisonRow& r : rep.comparison)
            if (!r.contained) rc = 1;
    });
    add_ode("slopes", "special Frobenius slopes of the solution space")->callback([&] {
        cfg.validate();
        DifferentialModule M = io::module_from_json(cfg.ctx(), load_json(ode_module));
        std::vector<Rat> slopes = special_frobenius_slopes(M, cfg.T);
        Json arr = Json::array();
        for (const Rat& s : slopes) arr.push_back(io::rat_str(s));
        emit(Json{{"slopes", std::move(arr)}}, out_path);
    });

    // config and output flags live on the root; let every subcommand hand
    // unmatched options up to it
    auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough();
            self(self, sub);
        }
    };
    enable_fallthrough(enable_fallthrough, &app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Json::parse_error& e) {
        std::fprintf(stderr, "schema violation: %s\n", e.what());
        return 2;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema violation: %s\n", e.what());
        return 2;
    } catch (const Infeasible& e) {
        std::fprintf(stderr, "infeasible config: %s\n", e.what());
        return 3;
    } catch (const MathError& e) {
        std::fprintf(stderr, "math error: %s\n", e.what());
        return 4;
    }
    return rc;
}
