#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padlg/padic.hpp"

using namespace padlg;

TEST_CASE("context basics") {
    auto ctx = make_context(5, 1, 10);
    CHECK(ctx->q() == 5);
    CHECK(ctx->p_pow(3) == 125);
    CHECK_THROWS_AS(make_context(4, 1, 10), MathError);
    CHECK_THROWS_AS(make_context(5, 0, 10), MathError);

    auto ctx2 = make_context(5, 2, 8);
    CHECK(ctx2->q() == 25);
    CHECK(ctx2->field_poly().size() == 3);
    CHECK(ctx2->field_poly().back() == 1);
}

TEST_CASE("integer and rational embeddings") {
    auto ctx = make_context(5, 1, 10);
    auto a = PadicScalar::from_integer(ctx, 75);  // 3 * 5^2
    CHECK(a.is_certified_nonzero());
    CHECK(a.valuation() == 2);
    CHECK(a.unit()[0] % 5 == 3);

    auto z = PadicScalar::from_rational(ctx, 0, 7);
    CHECK(z.is_exact_zero());

    auto q = PadicScalar::from_rational(ctx, 1, 4);  // 1/4, residue 4 mod 5
    CHECK(q.valuation() == 0);
    CHECK(q.residue()[0] == 4);

    auto pp = PadicScalar::from_rational(ctx, 5, 1);
    CHECK(pp.valuation() == 1);

    auto neg = PadicScalar::from_rational(ctx, -1, 3);
    CHECK((neg * PadicScalar::from_integer(ctx, -3)).same_value(PadicScalar::one(ctx)));
}

TEST_CASE("addition carries and cancellation") {
    auto ctx = make_context(5, 1, 10);
    auto one = PadicScalar::one(ctx);
    auto four = PadicScalar::from_integer(ctx, 4);
    auto s = one + four;  // 5
    CHECK(s.valuation() == 1);

    // a + 0 = a
    CHECK((four + PadicScalar::zero(ctx)).same_value(four));

    // exact cancellation of equal representations -> zero at precision
    auto d = four - four;
    CHECK(d.is_prec_zero());
    CHECK(d.valuation_lower_bound() >= 10);

    // ultrametric: v(a+b) >= min(v(a), v(b)), equality when valuations differ
    auto p2 = PadicScalar::from_integer(ctx, 25);
    CHECK((four + p2).valuation() == 0);
}

TEST_CASE("multiplication and inversion") {
    auto ctx = make_context(5, 1, 10);
    auto p = PadicScalar::from_integer(ctx, 5);
    CHECK((p * p).valuation() == 2);

    auto x = PadicScalar::from_integer(ctx, 1) - p;  // 1 - 5
    auto ix = x.inv();
    CHECK((x * ix - PadicScalar::one(ctx)).is_zeroish());
    // 1/(1-p) = sum p^n: residue 1, and subtracting 1+p+p^2 leaves v >= 3
    auto partial = PadicScalar::from_integer(ctx, 31);  // 1 + 5 + 25
    auto diff = ix - partial;
    CHECK(diff.valuation_lower_bound() >= 3);

    CHECK((x * PadicScalar::zero(ctx)).is_exact_zero());
    CHECK_THROWS_AS(PadicScalar::zero(ctx).inv(), MathError);
}

TEST_CASE("valuation is additive under products") {
    auto ctx = make_context(7, 1, 12);
    long vals[] = {0, 1, 3, -2};
    for (long va : vals)
        for (long vb : vals) {
            auto a = PadicScalar::from_unit(ctx, va, {3}, 12);
            auto b = PadicScalar::from_unit(ctx, vb, {5}, 12);
            CHECK((a * b).valuation() == va + vb);
        }
}

TEST_CASE("precision-zero vs exact zero") {
    auto ctx = make_context(5, 1, 6);
    auto pz = PadicScalar::prec_zero(ctx, 4);
    CHECK(pz.is_prec_zero());
    CHECK_FALSE(pz.is_exact_zero());
    CHECK(pz.is_zeroish());
    CHECK_THROWS_AS(pz.valuation(), MathError);

    // unit + prec-zero of higher bound keeps the unit but caps precision
    auto u = PadicScalar::one(ctx);
    auto s = u + pz;
    CHECK(s.is_certified_nonzero());
    CHECK(s.valuation() == 0);
    CHECK(s.abs_precision() <= 4);

    // unit drowned by prec-zero of lower bound
    auto tiny = PadicScalar::from_unit(ctx, 5, {2}, 6);
    CHECK((tiny + pz).is_prec_zero());
}

TEST_CASE("truncation and indistinguishability") {
    auto ctx = make_context(3, 1, 9);
    auto a = PadicScalar::from_integer(ctx, 10);   // 1 + 3^2
    auto b = PadicScalar::from_integer(ctx, 1);
    CHECK_FALSE(a.indistinguishable(b));
    CHECK(a.truncated(2).indistinguishable(b.truncated(2)));
}

TEST_CASE("frobenius is the identity lift") {
    auto ctx = make_context(5, 2, 8);
    auto t = PadicScalar::from_unit(ctx, 0, {0, 1}, 8);
    CHECK(t.frobenius().same_value(t));
    // and it is a ring map compatible with the q-power on residues
    auto a = t + PadicScalar::from_integer(ctx, 2);
    CHECK((a.frobenius() * a.frobenius()).same_value((a * a).frobenius()));
}

TEST_CASE("degree-2 residue field arithmetic") {
    auto ctx = make_context(5, 2, 8);
    auto t = PadicScalar::from_unit(ctx, 0, {0, 1}, 8);
    auto t2 = t * t;
    CHECK(t2.is_certified_nonzero());
    CHECK(t2.valuation() == 0);
    CHECK(t2.unit().size() <= 2);  // reduced mod the field polynomial

    auto it = t.inv();
    CHECK((t * it - PadicScalar::one(ctx)).is_zeroish());

    // a nonzero residue has q - 1 = 24 as multiplicative order divisor
    auto pw = t.pow(24);
    CHECK((pw - PadicScalar::one(ctx)).valuation_lower_bound() >= 1);
}

TEST_CASE("p_power and shift") {
    auto ctx = make_context(5, 1, 10);
    auto e = PadicScalar::p_power(ctx, Rat(3));
    CHECK(e.valuation() == 3);
    CHECK_THROWS_AS(PadicScalar::p_power(ctx, Rat(1, 2)), MathError);
    CHECK(PadicScalar::one(ctx).shift(-2).valuation() == -2);
}
