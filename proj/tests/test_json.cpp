#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "padlg/json_io.hpp"

using namespace padlg;
using io::Json;

namespace {

PadicScalar rand_scalar(const ContextPtr& ctx, std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<long> val(-6, 6);
    std::uniform_int_distribution<int> rel(1, ctx->precision());
    std::uniform_int_distribution<long> digit(0, ctx->p() - 1);
    int k = kind(rng);
    if (k == 0) return PadicScalar::zero(ctx);
    if (k == 1) return PadicScalar::prec_zero(ctx, val(rng));
    int r = rel(rng);
    std::vector<Int> u(ctx->h(), Int(0));
    Int pk(1);
    for (int i = 0; i < r; ++i) {
        for (int t = 0; t < ctx->h(); ++t) u[t] += pk * digit(rng);
        pk *= ctx->p();
    }
    if (u[0] % ctx->p() == 0) u[0] += 1;  // keep it a unit
    return PadicScalar::from_unit(ctx, val(rng), std::move(u), r);
}

LaurentSeries rand_series(const ContextPtr& ctx, std::mt19937& rng) {
    std::uniform_int_distribution<long> lo(-4, 2);
    std::uniform_int_distribution<int> len(0, 6), flag(0, 1);
    long n0 = lo(rng);
    std::vector<PadicScalar> cs;
    int l = len(rng);
    for (int i = 0; i < l; ++i) cs.push_back(rand_scalar(ctx, rng));
    std::optional<long> floor;
    if (flag(rng)) floor = lo(rng);
    return raw_series(ctx, n0, std::move(cs), flag(rng) != 0, flag(rng) != 0, floor);
}

}  // namespace

TEST_CASE("scalar round trip") {
    for (auto [p, h] : {std::pair<long, int>{5, 1}, {3, 2}}) {
        auto ctx = make_context(p, h, 12);
        std::mt19937 rng(7);
        for (int i = 0; i < 200; ++i) {
            PadicScalar a = rand_scalar(ctx, rng);
            PadicScalar b = io::scalar_from_json(ctx, io::scalar_to_json(a));
            CHECK(a.same_value(b));
            if (a.is_unit_form()) {
                CHECK(b.valuation() == a.valuation());
                CHECK(b.rel_precision() == a.rel_precision());
            }
            // serialization is a fixed point
            CHECK(io::scalar_to_json(a) == io::scalar_to_json(b));
        }
    }
}

TEST_CASE("scalar schema errors") {
    auto ctx = make_context(5, 1, 8);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json::parse(R"({"digits":[1]})")), SchemaError);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json::parse(R"({"val":"x","digits":[]})")),
                    SchemaError);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json::parse(R"({"val":"inf","digits":[1]})")),
                    SchemaError);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json::parse(R"({"val":0,"digits":[5]})")),
                    SchemaError);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json::parse(R"({"val":0,"digits":[1,1,1,1,1,1,1,1,1]})")),
                    SchemaError);
    // all-zero digits degrade to a zero-at-precision marker
    PadicScalar z = io::scalar_from_json(ctx, Json::parse(R"({"val":2,"digits":[0,0,0]})"));
    CHECK(z.is_prec_zero());
    CHECK(z.valuation_lower_bound() == 5);
}

TEST_CASE("series round trip") {
    for (auto [p, h] : {std::pair<long, int>{5, 1}, {3, 2}}) {
        auto ctx = make_context(p, h, 10);
        std::mt19937 rng(11);
        for (int i = 0; i < 150; ++i) {
            LaurentSeries f = rand_series(ctx, rng);
            LaurentSeries g = io::series_from_json(ctx, io::series_to_json(f));
            CHECK(g.n_min() == f.n_min());
            CHECK(g.n_max() == f.n_max());
            CHECK(g.exact_below() == f.exact_below());
            CHECK(g.exact_above() == f.exact_above());
            CHECK(g.floor() == f.floor());
            for (long n = f.n_min(); n <= f.n_max(); ++n) CHECK(g.coeff(n).same_value(f.coeff(n)));
            CHECK(io::series_to_json(f) == io::series_to_json(g));
        }
    }
}

TEST_CASE("series schema errors") {
    auto ctx = make_context(5, 1, 8);
    CHECK_THROWS_AS(io::series_from_json(ctx, Json::parse(R"({"window":[0],"exact_below":true,"coeffs":[],"floor":null})")),
                    SchemaError);
    CHECK_THROWS_AS(io::series_from_json(ctx, Json::parse(R"({"window":[0,2],"exact_below":true,"coeffs":[[3,{"val":0,"digits":[1]}]],"floor":null})")),
                    SchemaError);
    CHECK_THROWS_AS(io::series_from_json(ctx, Json::parse(R"({"window":[2,0],"exact_below":true,"coeffs":[],"floor":null})")),
                    SchemaError);
}

TEST_CASE("log series and twisted polynomial round trips") {
    auto ctx = make_context(5, 1, 10);
    std::mt19937 rng(13);
    for (int i = 0; i < 60; ++i) {
        std::vector<LaurentSeries> comps;
        int d = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < d; ++j) comps.push_back(rand_series(ctx, rng));
        LogSeries y(comps);
        LogSeries z = io::log_series_from_json(ctx, io::log_series_to_json(y));
        CHECK(io::log_series_to_json(y) == io::log_series_to_json(z));

        TwistedPoly f(ctx, comps);
        TwistedPoly g = io::twisted_from_json(ctx, io::twisted_to_json(f));
        CHECK(io::twisted_to_json(f) == io::twisted_to_json(g));
    }
    // a bare series is accepted as log-degree 0
    LaurentSeries f = LaurentSeries::one(ctx);
    LogSeries y = io::log_series_from_json(ctx, io::series_to_json(f));
    CHECK(y.degree() == 0);
}

TEST_CASE("module round trip") {
    auto ctx = make_context(5, 1, 10);
    std::mt19937 rng(17);
    for (int i = 0; i < 40; ++i) {
        DifferentialModule M;
        M.ctx = ctx;
        M.n = 2;
        M.G_num = {{rand_series(ctx, rng), rand_series(ctx, rng)},
                   {rand_series(ctx, rng), rand_series(ctx, rng)}};
        M.g_den = LaurentSeries::one(ctx);
        M.log_flag = (i % 2) != 0;
        if (i % 3 == 0)
            M.F = {{rand_series(ctx, rng), rand_series(ctx, rng)},
                   {rand_series(ctx, rng), rand_series(ctx, rng)}};
        DifferentialModule M2 = io::module_from_json(ctx, io::module_to_json(M));
        CHECK(M2.n == M.n);
        CHECK(M2.log_flag == M.log_flag);
        CHECK(M2.has_frobenius() == M.has_frobenius());
        CHECK(io::module_to_json(M) == io::module_to_json(M2));
    }
    CHECK_THROWS_AS(io::module_from_json(ctx, Json::parse(R"({"G":[[ ]],"log":false})")),
                    SchemaError);
}

TEST_CASE("rational and float formatting") {
    CHECK(io::rat_str(Rat(1, 2)) == "1/2");
    CHECK(io::rat_str(Rat(-3)) == "-3");
    CHECK(io::rat_from_str("6/4") == Rat(3, 2));
    CHECK(io::rat_from_str("-7") == Rat(-7));
    CHECK_THROWS_AS(io::rat_from_str("1/0"), SchemaError);
    CHECK_THROWS_AS(io::rat_from_str("x"), SchemaError);
    CHECK(io::float_str(0.5) == "0.5");
    CHECK(io::float_str(1.0 / 3.0) == "0.333333333333");
}
