#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padlg/nabla.hpp"

using namespace padlg;

namespace {
LaurentSeries consti(const ContextPtr& ctx, long c) {
    return LaurentSeries::constant(ctx, PadicScalar::from_integer(ctx, Int(c)));
}

bool scalar_is(const PadicScalar& a, long num, long den = 1) {
    auto ctx = a.context();
    if (!ctx) return num == 0 && a.is_zeroish();
    return (a - PadicScalar::from_rational(ctx, Int(num), Int(den))).is_zeroish();
}

// the rank-2 nilpotent log module nabla(e_1,e_2) = (0, e_1 dx/x) with
// phi(e_1,e_2) = (e_1, q e_2)
DifferentialModule nilpotent_log_example(const ContextPtr& ctx, bool with_frobenius) {
    DifferentialModule M;
    M.ctx = ctx;
    M.n = 2;
    M.log_flag = true;
    M.g_den = LaurentSeries::one(ctx);
    auto zero = LaurentSeries::zero(ctx);
    M.G_num = {{zero, LaurentSeries::one(ctx)}, {zero, zero}};
    if (with_frobenius) {
        long q = mpz_get_si(ctx->q().get_mpz_t());
        M.F = {{LaurentSeries::one(ctx), zero}, {zero, consti(ctx, q)}};
    }
    return M;
}

// rank-2 module with nabla(e_1,e_2) = (0, a e_1 dx), held in log form with
// numerator x*a over den
DifferentialModule one_form_example(const ContextPtr& ctx, const LaurentSeries& xa_num,
                                    const LaurentSeries& den) {
    DifferentialModule M;
    M.ctx = ctx;
    M.n = 2;
    M.log_flag = true;
    M.g_den = den;
    auto zero = LaurentSeries::zero(ctx);
    M.G_num = {{zero, xa_num}, {zero, zero}};
    return M;
}
}  // namespace

TEST_CASE("zero connection: fundamental matrix is the identity") {
    auto ctx = make_context(5, 1, 10);
    DifferentialModule M;
    M.ctx = ctx;
    M.n = 2;
    M.g_den = LaurentSeries::one(ctx);
    auto zero = LaurentSeries::zero(ctx);
    M.G_num = {{zero, zero}, {zero, zero}};
    auto B = solve_fundamental(M, 30);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const LogSeries& y = B.S[i][j];
            CHECK(y.degree() == 0);
            for (long m = 0; m <= 30; ++m)
                CHECK(scalar_is(y.component(0).coeff_or_zero(m), i == j && m == 0 ? 1 : 0));
            CHECK(B.W[i][j].degree() == 0);
        }
}

TEST_CASE("companion of y'' = 0: basis {1, x}") {
    auto ctx = make_context(5, 1, 10);
    auto M = companion_from_ode(ctx, {LaurentSeries::zero(ctx), LaurentSeries::zero(ctx)});
    auto B = solve_fundamental(M, 20);
    // functional column 2 = (x, 1)
    CHECK(scalar_is(B.S[0][1].component(0).coeff_or_zero(1), 1));
    CHECK(scalar_is(B.S[1][1].component(0).coeff_or_zero(0), 1));
    CHECK(scalar_is(B.S[0][0].component(0).coeff_or_zero(0), 1));
    CHECK(scalar_is(B.S[0][0].component(0).coeff_or_zero(1), 0));
}

TEST_CASE("nilpotent log example: both fundamental matrices") {
    auto ctx = make_context(5, 1, 10);
    auto M = nilpotent_log_example(ctx, false);
    auto B = solve_fundamental(M, 20);
    // functionals: columns (1, log x) and (0, 1)
    CHECK(scalar_is(B.S[0][0].component(0).coeff_or_zero(0), 1));
    CHECK(B.S[1][0].degree() == 1);
    CHECK(scalar_is(B.S[1][0].component(1).coeff_or_zero(0), 1));
    CHECK(B.S[1][0].component(0).is_zeroish());
    CHECK(B.S[0][1].is_zeroish());
    CHECK(scalar_is(B.S[1][1].component(0).coeff_or_zero(0), 1));
    // horizontal sections: columns (1, 0) and (-log x, 1)
    CHECK(scalar_is(B.W[0][0].component(0).coeff_or_zero(0), 1));
    CHECK(B.W[1][0].is_zeroish());
    CHECK(scalar_is(B.W[0][1].component(1).coeff_or_zero(0), -1));
    CHECK(scalar_is(B.W[1][1].component(0).coeff_or_zero(0), 1));
}

TEST_CASE("log(1-x) companion: coefficient valuations -v_p(n)") {
    auto ctx = make_context(5, 1, 20);
    // (1-x) y'' - y' = 0, solutions {1, -log(1-x)}
    auto den = LaurentSeries::one(ctx) - LaurentSeries::monomial(ctx, PadicScalar::one(ctx), 1);
    auto M = companion_from_ode(ctx, {LaurentSeries::zero(ctx), -LaurentSeries::one(ctx)}, den);
    auto B = solve_fundamental(M, 130);
    const LaurentSeries& y = B.S[0][1].component(0);  // sum x^n / n
    for (long n = 1; n <= 125; n *= 5) {
        CHECK(y.coeff_or_zero(n).is_certified_nonzero());
        CHECK(y.coeff_or_zero(n).valuation() == -(n == 1 ? 0 : (n == 5 ? 1 : (n == 25 ? 2 : 3))));
    }
    CHECK(scalar_is(y.coeff_or_zero(3), 1, 3));
    // first column is the constant solution
    CHECK(scalar_is(B.S[0][0].component(0).coeff_or_zero(0), 1));
    for (long m = 1; m <= 130; ++m) CHECK(B.S[0][0].component(0).coeff_or_zero(m).is_zeroish());
}

TEST_CASE("growth estimates: bounded, log-growth 1, pure log") {
    auto ctx = make_context(5, 1, 20);
    long T = 625;
    std::vector<PadicScalar> ones(T + 1, PadicScalar::one(ctx));
    auto geom = LogSeries(LaurentSeries::from_coeffs(ctx, 0, ones));
    auto g0 = coefficient_growth_estimate(geom, 4);
    REQUIRE(g0.ok);
    CHECK(g0.lambda_hat == doctest::Approx(0.0));
    CHECK(g0.snapped == Rat(0));

    std::vector<PadicScalar> cs;
    for (long n = 0; n <= T; ++n) cs.push_back(PadicScalar::from_rational(ctx, Int(1), Int(n + 1)));
    auto logd = LogSeries(LaurentSeries::from_coeffs(ctx, 0, cs));
    auto g1 = coefficient_growth_estimate(logd, 4);
    REQUIRE(g1.ok);
    CHECK(g1.lambda_hat > 0.9);
    CHECK(g1.lambda_hat < 1.1);
    CHECK(g1.snapped == Rat(1));

    auto gl = coefficient_growth_estimate(LogSeries::log_x(ctx), 4);
    REQUIRE(gl.ok);
    CHECK(gl.snapped == Rat(1));

    // scaling by a power of p must not change the estimate
    auto g2 = coefficient_growth_estimate(geom.scaled(PadicScalar::from_integer(ctx, 125)), 4);
    CHECK(g2.snapped == Rat(0));
}

TEST_CASE("special filtration of the nilpotent log example") {
    auto ctx = make_context(5, 1, 10);
    auto M = nilpotent_log_example(ctx, false);
    auto rep = special_filtration(M, 60);
    REQUIRE(rep.breaks.size() == 2);
    CHECK(rep.breaks[0].first == Rat(0));
    CHECK(rep.breaks[0].second == 1);
    CHECK(rep.breaks[1].first == Rat(1));
    CHECK(rep.breaks[1].second == 1);
    CHECK_FALSE(rep.ambiguous);
}

TEST_CASE("special filtration of the one-form examples") {
    auto ctx = make_context(5, 1, 20);
    // a = c/x + 1: the x^{-1} coefficient forces a log term, breaks {0, 1}
    auto xa = consti(ctx, 2) + LaurentSeries::monomial(ctx, PadicScalar::one(ctx), 1);
    auto rep = special_filtration(one_form_example(ctx, xa, LaurentSeries::one(ctx)), 60);
    REQUIRE(rep.breaks.size() == 2);
    CHECK(rep.breaks[0].first == Rat(0));
    CHECK(rep.breaks[1].first == Rat(1));

    // a = 1/(1-x): f = -log(1-x) has log-growth 1, breaks {0, 1}
    auto den = LaurentSeries::one(ctx) - LaurentSeries::monomial(ctx, PadicScalar::one(ctx), 1);
    auto x = LaurentSeries::monomial(ctx, PadicScalar::one(ctx), 1);
    auto rep2 = special_filtration(one_form_example(ctx, x, den), 625);
    REQUIRE(rep2.breaks.size() == 2);
    CHECK(rep2.breaks[0].first == Rat(0));
    CHECK(rep2.breaks[1].first == Rat(1));

    // a = 1: f = x is bounded, a single break {0} of multiplicity 2
    auto rep3 = special_filtration(one_form_example(ctx, x, LaurentSeries::one(ctx)), 60);
    REQUIRE(rep3.breaks.size() == 1);
    CHECK(rep3.breaks[0].first == Rat(0));
    CHECK(rep3.breaks[0].second == 2);
}

TEST_CASE("Frobenius slopes and compatibility on the nilpotent log example") {
    auto ctx = make_context(3, 1, 15);
    auto M = nilpotent_log_example(ctx, true);
    CHECK(check_frobenius_compatibility(M, 40));
    auto slopes = special_frobenius_slopes(M, 40);
    REQUIRE(slopes.size() == 2);
    CHECK(slopes[0] == Rat(0));
    CHECK(slopes[1] == Rat(1));

    // F = identity is not horizontal for this connection
    auto bad = nilpotent_log_example(ctx, true);
    bad.F[1][1] = LaurentSeries::one(ctx);
    CHECK_FALSE(check_frobenius_compatibility(bad, 40));
}

TEST_CASE("Frobenius slopes: identity module") {
    auto ctx = make_context(5, 1, 10);
    DifferentialModule M;
    M.ctx = ctx;
    M.n = 2;
    M.g_den = LaurentSeries::one(ctx);
    auto zero = LaurentSeries::zero(ctx);
    M.G_num = {{zero, zero}, {zero, zero}};
    M.F = {{LaurentSeries::one(ctx), zero}, {zero, LaurentSeries::one(ctx)}};
    CHECK(check_frobenius_compatibility(M, 30));
    auto slopes = special_frobenius_slopes(M, 30);
    REQUIRE(slopes.size() == 2);
    CHECK(slopes[0] == Rat(0));
    CHECK(slopes[1] == Rat(0));
}

TEST_CASE("main-theorem comparison on the nilpotent log example") {
    auto ctx = make_context(3, 1, 15);
    auto M = nilpotent_log_example(ctx, true);
    auto rep = compare_main_theorem(M, 60);
    CHECK(rep.lambda_max == Rat(1));
    REQUIRE(rep.comparison.size() == 2);
    // lambda = 0: dim V^0 = 1 = dim orth (slopes >= 1: one of them)
    CHECK(rep.comparison[0].lambda == Rat(0));
    CHECK(rep.comparison[0].dim_log_growth == 1);
    CHECK(rep.comparison[0].equal);
    // lambda = 1: both sides 0
    CHECK(rep.comparison[1].lambda == Rat(1));
    CHECK(rep.comparison[1].dim_log_growth == 0);
    CHECK(rep.comparison[1].equal);
    for (const auto& row : rep.comparison) CHECK(row.contained);
}

TEST_CASE("Legendre curve: point count agrees with the Hasse polynomial") {
    CHECK(legendre_trace(5, 2) == -2);
    CHECK(legendre_is_ordinary(5, 2));
    CHECK(hasse_polynomial(5) == std::vector<long>{1, 4, 1});
    // lambda = 6 is a supersingular parameter mod 7
    CHECK(legendre_trace(7, 6) % 7 == 0);
    CHECK(!legendre_is_ordinary(7, 6));
    CHECK_THROWS_AS(legendre_trace(5, 1), MathError);
}

TEST_CASE("hypergeometric equation at an ordinary disc") {
    auto ctx = make_context(5, 1, 30);
    long tr = legendre_trace(5, 2);
    PadicScalar u = unit_root_of_trace(ctx, tr);
    CHECK(u.valuation() == 0);
    PadicScalar five = PadicScalar::from_integer(ctx, Int(5));
    CHECK((u * u - PadicScalar::from_integer(ctx, Int(tr)) * u + five).is_zeroish());

    DifferentialModule M = hypergeometric_companion(ctx, PadicScalar::from_integer(ctx, Int(2)));
    attach_diagonal_frobenius(M, {u, five.div(u)}, 300);
    CHECK(check_frobenius_compatibility(M, 250));
    auto slopes = special_frobenius_slopes(M, 200);
    REQUIRE(slopes.size() == 2);
    CHECK(slopes[0] == Rat(0));
    CHECK(slopes[1] == Rat(1));

    auto rep = special_filtration(M, 625);
    REQUIRE(rep.breaks.size() == 2);
    CHECK(rep.breaks[0].first == Rat(0));
    CHECK(rep.breaks[1].first == Rat(1));
    CHECK(!rep.ambiguous);
}

TEST_CASE("hypergeometric equation at a supersingular disc") {
    // no supersingular Legendre parameter exists in F_5 (the Hasse
    // polynomial 1 + 4x + x^2 has non-square discriminant), so work in F_25
    auto ctx = make_context(5, 2, 30);
    Int five(5);
    long r0 = -1, r1 = -1;
    for (long c0 = 0; c0 < 5 && r0 < 0; ++c0)
        for (long c1 = 1; c1 < 5; ++c1) {
            std::vector<Int> lam{Int(c0), Int(c1)};
            std::vector<Int> v = fq::mul(*ctx, lam, lam, five);
            v = fq::add(*ctx, v, fq::mul(*ctx, {Int(4)}, lam, five), five);
            v = fq::add(*ctx, v, {Int(1)}, five);
            if (fq::is_zero_mod(v, five)) {
                r0 = c0;
                r1 = c1;
                break;
            }
        }
    REQUIRE(r0 >= 0);

    PadicScalar a = PadicScalar::from_unit(ctx, 0, {Int(r0), Int(r1)}, 30);
    DifferentialModule M = hypergeometric_companion(ctx, a);
    FiltrationConfig cfg;
    cfg.D = 4;
    auto rep = special_filtration(M, 3125, cfg);
    REQUIRE(rep.breaks.size() == 1);
    CHECK(rep.breaks[0].first == Rat(1, 2));
    CHECK(rep.breaks[0].second == 2);
    CHECK(!rep.ambiguous);
}

TEST_CASE("preconditions: poles and non-nilpotent residues are rejected") {
    auto ctx = make_context(5, 1, 10);
    DifferentialModule M;
    M.ctx = ctx;
    M.n = 1;
    M.g_den = LaurentSeries::one(ctx);
    M.G_num = {{LaurentSeries::monomial(ctx, PadicScalar::one(ctx), -1)}};
    CHECK_THROWS_AS(solve_fundamental(M, 10), MathError);

    // log case with a non-nilpotent residue (scalar 1)
    DifferentialModule L;
    L.ctx = ctx;
    L.n = 1;
    L.log_flag = true;
    L.g_den = LaurentSeries::one(ctx);
    L.G_num = {{LaurentSeries::one(ctx)}};
    CHECK_THROWS_AS(solve_fundamental(L, 10), MathError);
}
