#ifndef PADLG_PADIC_HPP
#define PADLG_PADIC_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace padlg {

using Int = mpz_class;
using Rat = mpq_class;

class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

/// Arithmetic context for K = Q_q, the unramified extension of Q_p of
/// degree h (q = p^h), at capped relative precision N.  For h > 1 the
/// residue field is F_p[t]/(modulus) and elements are polynomials in t
/// with coefficients mod p^N.
class PadicContext {
public:
    PadicContext(long p, int h, int precision);

    long p() const { return p_; }
    int h() const { return h_; }
    int precision() const { return prec_; }
    const Int& q() const { return q_; }
    /// p^precision
    const Int& modulus_int() const { return pN_; }
    Int p_pow(long k) const;
    /// monic irreducible lift defining the unramified extension (size h+1,
    /// little-endian); for h = 1 this is {0, 1}.
    const std::vector<Int>& field_poly() const { return field_poly_; }

    bool operator==(const PadicContext& o) const {
        return p_ == o.p_ && h_ == o.h_ && prec_ == o.prec_;
    }

private:
    long p_;
    int h_;
    int prec_;
    Int q_;
    Int pN_;
    std::vector<Int> field_poly_;
};

using ContextPtr = std::shared_ptr<const PadicContext>;

ContextPtr make_context(long p, int h, int precision);

/// Element of Q_q at capped relative precision.  Three states:
///   - exact zero;
///   - zero at precision: all digits cancelled, only v >= bound is known;
///   - unit form p^v * u with u a unit known to `rel` p-adic digits.
/// The unit part is a polynomial of degree < h in the residue generator,
/// reduced mod (p^rel, field_poly); for h = 1 it is a single integer.
class PadicScalar {
public:
    PadicScalar() : kind_(Kind::ExactZero) {}

    static PadicScalar zero(const ContextPtr& ctx);
    static PadicScalar one(const ContextPtr& ctx);
    static PadicScalar from_integer(const ContextPtr& ctx, const Int& n);
    static PadicScalar from_rational(const ContextPtr& ctx, const Int& num, const Int& den);
    static PadicScalar from_rational(const ContextPtr& ctx, const Rat& r);
    /// p^v * u with u given as poly coefficients (little-endian in t).
    static PadicScalar from_unit(const ContextPtr& ctx, long val, std::vector<Int> unit,
                                 int rel);
    /// p^(a/b) as an exact rational power of p; requires a/b integral.
    static PadicScalar p_power(const ContextPtr& ctx, const Rat& e);
    /// zero-at-precision marker: value known to satisfy v >= bound only.
    static PadicScalar prec_zero(const ContextPtr& ctx, long bound);

    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_prec_zero() const { return kind_ == Kind::PrecZero; }
    bool is_unit_form() const { return kind_ == Kind::Unit; }
    /// provably nonzero (has a unit part)
    bool is_certified_nonzero() const { return kind_ == Kind::Unit; }
    bool is_zeroish() const { return kind_ != Kind::Unit; }

    /// exact valuation; throws unless unit form.
    long valuation() const;
    /// lower bound on the valuation, valid in every state (ExactZero -> huge).
    long valuation_lower_bound() const;
    int rel_precision() const { return rel_; }
    /// value is known mod p^(absolute precision)
    long abs_precision() const;
    const std::vector<Int>& unit() const { return unit_; }
    const ContextPtr& context() const { return ctx_; }

    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator-() const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar inv() const;
    PadicScalar div(const PadicScalar& o) const { return *this * o.inv(); }
    /// coefficient q-Frobenius sigma_K; the q-power map fixes the residue
    /// field F_q pointwise, so this is the identity lift.
    PadicScalar frobenius() const { return *this; }
    PadicScalar pow(long e) const;
    /// multiply by p^k
    PadicScalar shift(long k) const;
    /// reduce relative precision to r digits
    PadicScalar truncated(int r) const;

    /// exact equality of representations at the shared precision
    bool same_value(const PadicScalar& o) const;
    /// true when (*this - o) has no certified nonzero digit
    bool indistinguishable(const PadicScalar& o) const;

    /// residue of a valuation-0 element in F_q (poly coeffs mod p)
    std::vector<Int> residue() const;

    std::string str() const;

private:
    enum class Kind { ExactZero, PrecZero, Unit };
    Kind kind_ = Kind::ExactZero;
    ContextPtr ctx_;
    long val_ = 0;    // Unit: exact valuation; PrecZero: lower bound
    int rel_ = 0;     // Unit: relative precision in digits
    std::vector<Int> unit_;

    void normalize();
    static void check_same_context(const PadicScalar& a, const PadicScalar& b);
};

/// polynomial helpers over Z/p^k modulo the context field polynomial
namespace fq {
std::vector<Int> add(const PadicContext& c, const std::vector<Int>& a,
                     const std::vector<Int>& b, const Int& mod);
std::vector<Int> mul(const PadicContext& c, const std::vector<Int>& a,
                     const std::vector<Int>& b, const Int& mod);
std::vector<Int> inv(const PadicContext& c, const std::vector<Int>& a, int digits);
bool is_zero_mod(const std::vector<Int>& a, const Int& mod);
}  // namespace fq

}  // namespace padlg

#endif
