#include "padlg/padic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace padlg {

namespace {

constexpr long kHugeVal = 1L << 60;

bool int_is_probab_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// --- F_p[t] helpers used only for building the field polynomial ---

using Poly = std::vector<Int>;  // little-endian

Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_mul_fp(const Poly& a, const Poly& b, const Int& p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return poly_trim(std::move(r));
}

Poly poly_mod_fp(Poly a, const Poly& m, const Int& p) {
    a = poly_trim(std::move(a));
    const size_t dm = m.size() - 1;
    Int lead_inv;
    mpz_invert(lead_inv.get_mpz_t(), m.back().get_mpz_t(), p.get_mpz_t());
    while (a.size() > dm) {
        Int c = a.back() * lead_inv % p;
        size_t shift = a.size() - 1 - dm;
        for (size_t i = 0; i < m.size(); ++i) {
            a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
        }
        a = poly_trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Poly poly_powmod_fp(Poly base, Int e, const Poly& m, const Int& p) {
    Poly r{Int(1)};
    base = poly_mod_fp(std::move(base), m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mod_fp(poly_mul_fp(r, base, p), m, p);
        base = poly_mod_fp(poly_mul_fp(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd_fp(Poly a, Poly b, const Int& p) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        Poly r = poly_mod_fp(a, b, p);
        // poly_mod_fp requires deg(a) >= deg(b); generic remainder:
        if (a.size() < b.size()) {
            std::swap(a, b);
            continue;
        }
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool is_irreducible_fp(const Poly& f, const Int& p) {
    const long h = static_cast<long>(f.size()) - 1;
    // x^(p^h) == x mod f, and gcd(x^(p^(h/l)) - x, f) = 1 for prime l | h
    Int ph;
    mpz_pow_ui(ph.get_mpz_t(), p.get_mpz_t(), h);
    Poly x{Int(0), Int(1)};
    Poly xq = poly_powmod_fp(x, ph, f, p);
    Poly diff = xq;
    if (diff.size() < 2) diff.resize(2, Int(0));
    diff[1] = ((diff[1] - 1) % p + p) % p;
    if (!poly_trim(diff).empty()) return false;
    for (long l = 2; l <= h; ++l) {
        if (h % l != 0) continue;
        bool prime = true;
        for (long d = 2; d * d <= l; ++d)
            if (l % d == 0) prime = false;
        if (!prime) continue;
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), h / l);
        Poly xe = poly_powmod_fp(x, pe, f, p);
        Poly d2 = xe;
        if (d2.size() < 2) d2.resize(2, Int(0));
        d2[1] = ((d2[1] - 1) % p + p) % p;
        d2 = poly_trim(std::move(d2));
        if (d2.empty()) return false;  // x^(p^(h/l)) == x: f splits over the subfield
        Poly g = poly_gcd_fp(f, d2, p);
        if (g.size() > 1) return false;
    }
    return true;
}

Poly find_field_poly(const Int& p, int h) {
    if (h == 1) return {Int(0), Int(1)};
    // deterministic scan over monic polynomials t^h + c_{h-1} t^{h-1} + ... + c_0
    std::vector<long> c(h, 0);
    const long pl = p.get_si();
    while (true) {
        Poly f(h + 1, Int(0));
        f[h] = 1;
        for (int i = 0; i < h; ++i) f[i] = c[i];
        if (f[0] != 0 && is_irreducible_fp(f, p)) return f;
        int i = 0;
        while (i < h && ++c[i] == pl) c[i++] = 0;
        if (i == h) throw MathError("no irreducible polynomial found");
    }
}

}  // namespace

PadicContext::PadicContext(long p, int h, int precision) : p_(p), h_(h), prec_(precision) {
    if (p < 2 || !int_is_probab_prime(Int(p))) throw MathError("p must be prime");
    if (h < 1) throw MathError("h must be >= 1");
    if (precision < 1) throw MathError("precision must be >= 1");
    mpz_pow_ui(q_.get_mpz_t(), Int(p).get_mpz_t(), h);
    mpz_pow_ui(pN_.get_mpz_t(), Int(p).get_mpz_t(), precision);
    field_poly_ = find_field_poly(Int(p), h);
}

Int PadicContext::p_pow(long k) const {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), Int(p_).get_mpz_t(), k);
    return r;
}

ContextPtr make_context(long p, int h, int precision) {
    return std::make_shared<const PadicContext>(p, h, precision);
}

// --- residue tower polynomial arithmetic (coefficients mod `mod`) ---

namespace fq {

bool is_zero_mod(const std::vector<Int>& a, const Int& mod) {
    for (const auto& c : a)
        if (c % mod != 0) return false;
    return true;
}

std::vector<Int> add(const PadicContext& c, const std::vector<Int>& a,
                     const std::vector<Int>& b, const Int& mod) {
    std::vector<Int> r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
        r[i] = ((r[i] % mod) + mod) % mod;
    }
    r.resize(c.h(), Int(0));
    return r;
}

std::vector<Int> mul(const PadicContext& c, const std::vector<Int>& a,
                     const std::vector<Int>& b, const Int& mod) {
    const int h = c.h();
    if (h == 1) {
        Int r = (a.empty() || b.empty()) ? Int(0) : a[0] * b[0] % mod;
        return {r};
    }
    std::vector<Int> prod(2 * h - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
    // reduce modulo the monic field polynomial
    const auto& f = c.field_poly();
    for (int d = 2 * h - 2; d >= h; --d) {
        Int coef = prod[d] % mod;
        if (coef != 0) {
            for (int i = 0; i < h; ++i) prod[d - h + i] -= coef * f[i];
        }
        prod[d] = 0;
    }
    prod.resize(h);
    for (auto& x : prod) x = ((x % mod) + mod) % mod;
    return prod;
}

std::vector<Int> inv(const PadicContext& c, const std::vector<Int>& a, int digits) {
    const Int p(c.p());
    const int h = c.h();
    std::vector<Int> z;
    if (h == 1) {
        Int r;
        if (mpz_invert(r.get_mpz_t(), a[0].get_mpz_t(), p.get_mpz_t()) == 0)
            throw MathError("inversion of non-unit");
        z = {r};
    } else {
        // inverse mod p via Fermat in F_q: a^(q-2)
        Int e = c.q() - 2;
        std::vector<Int> acc{Int(1)};
        std::vector<Int> base = a;
        for (auto& x : base) x = ((x % p) + p) % p;
        if (is_zero_mod(base, p)) throw MathError("inversion of non-unit");
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(c, acc, base, p);
            base = mul(c, base, base, p);
            e >>= 1;
        }
        z = acc;
    }
    // Hensel lifting: z <- z(2 - a z), doubling precision each round
    int k = 1;
    while (k < digits) {
        k = std::min(2 * k, digits);
        Int mod = c.p_pow(k);
        std::vector<Int> az = mul(c, a, z, mod);
        std::vector<Int> two_minus(az.size(), Int(0));
        for (size_t i = 0; i < az.size(); ++i) two_minus[i] = ((-az[i] % mod) + mod) % mod;
        two_minus[0] = (two_minus[0] + 2) % mod;
        z = mul(c, z, two_minus, mod);
    }
    return z;
}

}  // namespace fq

// --- PadicScalar ---

PadicScalar PadicScalar::zero(const ContextPtr& ctx) {
    PadicScalar s;
    s.ctx_ = ctx;
    s.kind_ = Kind::ExactZero;
    return s;
}

PadicScalar PadicScalar::prec_zero(const ContextPtr& ctx, long bound) {
    PadicScalar s;
    s.ctx_ = ctx;
    s.kind_ = Kind::PrecZero;
    s.val_ = bound;
    return s;
}

PadicScalar PadicScalar::one(const ContextPtr& ctx) { return from_integer(ctx, 1); }

PadicScalar PadicScalar::from_unit(const ContextPtr& ctx, long val, std::vector<Int> unit,
                                   int rel) {
    PadicScalar s;
    s.ctx_ = ctx;
    s.kind_ = Kind::Unit;
    s.val_ = val;
    s.rel_ = std::min(rel, ctx->precision());
    unit.resize(ctx->h(), Int(0));
    s.unit_ = std::move(unit);
    s.normalize();
    return s;
}

void PadicScalar::normalize() {
    if (kind_ != Kind::Unit) return;
    if (rel_ <= 0) {
        kind_ = Kind::PrecZero;
        // nothing is known beyond v >= val_
        return;
    }
    Int mod = ctx_->p_pow(rel_);
    for (auto& c : unit_) c = ((c % mod) + mod) % mod;
    // strip the content p-valuation
    const Int p(ctx_->p());
    long min_v = kHugeVal;
    for (const auto& c : unit_) {
        if (c == 0) continue;
        Int tmp;
        long v = static_cast<long>(mpz_remove(tmp.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t()));
        min_v = std::min(min_v, v);
        if (min_v == 0) break;
    }
    if (min_v == kHugeVal) {
        kind_ = Kind::PrecZero;
        val_ = val_ + rel_;
        return;
    }
    long k = min_v;
    if (k > 0) {
        Int pk = ctx_->p_pow(k);
        for (auto& c : unit_) c /= pk;
        val_ += k;
        rel_ -= static_cast<int>(k);
        if (rel_ <= 0) {
            kind_ = Kind::PrecZero;
            val_ = val_ + rel_;  // = original abs precision
            return;
        }
    }
}

PadicScalar PadicScalar::from_integer(const ContextPtr& ctx, const Int& n) {
    if (n == 0) return zero(ctx);
    return from_unit(ctx, 0, {n}, ctx->precision() + 64);
}

PadicScalar PadicScalar::from_rational(const ContextPtr& ctx, const Int& num, const Int& den) {
    if (den == 0) throw MathError("zero denominator");
    if (num == 0) return zero(ctx);
    const Int p(ctx->p());
    Int nu, de;
    long vn = static_cast<long>(mpz_remove(nu.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(de.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));
    Int mod = ctx->modulus_int();
    Int dinv;
    if (mpz_invert(dinv.get_mpz_t(), de.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw MathError("denominator not invertible");
    Int u = nu * dinv % mod;
    return from_unit(ctx, vn - vd, {u}, ctx->precision());
}

PadicScalar PadicScalar::from_rational(const ContextPtr& ctx, const Rat& r) {
    return from_rational(ctx, r.get_num(), r.get_den());
}

PadicScalar PadicScalar::p_power(const ContextPtr& ctx, const Rat& e) {
    Rat c = e;
    c.canonicalize();
    if (c.get_den() != 1) throw MathError("p_power: exponent not integral");
    return from_unit(ctx, static_cast<long>(c.get_num().get_si()), {Int(1)}, ctx->precision());
}

long PadicScalar::valuation() const {
    if (kind_ != Kind::Unit) throw MathError("valuation of zero-at-precision or exact zero");
    return val_;
}

long PadicScalar::valuation_lower_bound() const {
    switch (kind_) {
        case Kind::ExactZero: return kHugeVal;
        case Kind::PrecZero: return val_;
        default: return val_;
    }
}

long PadicScalar::abs_precision() const {
    switch (kind_) {
        case Kind::ExactZero: return kHugeVal;
        case Kind::PrecZero: return val_;
        default: return val_ + rel_;
    }
}

void PadicScalar::check_same_context(const PadicScalar& a, const PadicScalar& b) {
    if (!a.ctx_ || !b.ctx_) throw MathError("uninitialized scalar");
    if (!(*a.ctx_ == *b.ctx_)) throw MathError("context mismatch");
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    if (kind_ == Kind::ExactZero) return o;
    if (o.kind_ == Kind::ExactZero) return *this;
    check_same_context(*this, o);
    long abs = std::min(abs_precision(), o.abs_precision());
    if (kind_ != Kind::Unit && o.kind_ != Kind::Unit) return prec_zero(ctx_, abs);
    if (kind_ != Kind::Unit) {
        if (abs <= o.val_) return prec_zero(ctx_, abs);
        return o.truncated(static_cast<int>(abs - o.val_));
    }
    if (o.kind_ != Kind::Unit) {
        if (abs <= val_) return prec_zero(ctx_, abs);
        return truncated(static_cast<int>(abs - val_));
    }
    long vmin = std::min(val_, o.val_);
    int rel = static_cast<int>(abs - vmin);
    if (rel <= 0) return prec_zero(ctx_, abs);
    Int mod = ctx_->p_pow(rel);
    Int sa = ctx_->p_pow(val_ - vmin);
    Int sb = ctx_->p_pow(o.val_ - vmin);
    std::vector<Int> u(ctx_->h(), Int(0));
    for (int i = 0; i < ctx_->h(); ++i) {
        Int x = 0;
        if (i < static_cast<int>(unit_.size())) x += unit_[i] * sa;
        if (i < static_cast<int>(o.unit_.size())) x += o.unit_[i] * sb;
        u[i] = ((x % mod) + mod) % mod;
    }
    return from_unit(ctx_, vmin, std::move(u), rel);
}

PadicScalar PadicScalar::operator-() const {
    if (kind_ != Kind::Unit) return *this;
    std::vector<Int> u = unit_;
    Int mod = ctx_->p_pow(rel_);
    for (auto& c : u) c = ((-c % mod) + mod) % mod;
    return from_unit(ctx_, val_, std::move(u), rel_);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    if (kind_ == Kind::ExactZero || o.kind_ == Kind::ExactZero) return PadicScalar();
    check_same_context(*this, o);
    if (kind_ != Kind::Unit || o.kind_ != Kind::Unit) {
        return prec_zero(ctx_, valuation_lower_bound() + o.valuation_lower_bound());
    }
    int rel = std::min(rel_, o.rel_);
    Int mod = ctx_->p_pow(rel);
    auto u = fq::mul(*ctx_, unit_, o.unit_, mod);
    return from_unit(ctx_, val_ + o.val_, std::move(u), rel);
}

PadicScalar PadicScalar::inv() const {
    if (kind_ == Kind::ExactZero) throw MathError("inversion of exact zero");
    if (kind_ == Kind::PrecZero) throw MathError("inversion of zero-at-precision value");
    auto u = fq::inv(*ctx_, unit_, rel_);
    return from_unit(ctx_, -val_, std::move(u), rel_);
}

PadicScalar PadicScalar::pow(long e) const {
    if (e == 0) return one(ctx_);
    PadicScalar base = e > 0 ? *this : inv();
    long n = e > 0 ? e : -e;
    PadicScalar acc = one(ctx_);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

PadicScalar PadicScalar::shift(long k) const {
    if (kind_ == Kind::ExactZero) return *this;
    if (kind_ == Kind::PrecZero) return prec_zero(ctx_, val_ + k);
    return from_unit(ctx_, val_ + k, unit_, rel_);
}

PadicScalar PadicScalar::truncated(int r) const {
    if (kind_ != Kind::Unit) return *this;
    if (r >= rel_) return *this;
    if (r <= 0) return prec_zero(ctx_, val_ + std::max(0, r));
    return from_unit(ctx_, val_, unit_, r);
}

bool PadicScalar::same_value(const PadicScalar& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::ExactZero) return true;
    if (kind_ == Kind::PrecZero) return val_ == o.val_;
    return val_ == o.val_ && rel_ == o.rel_ && unit_ == o.unit_;
}

bool PadicScalar::indistinguishable(const PadicScalar& o) const {
    return (*this - o).is_zeroish();
}

std::vector<Int> PadicScalar::residue() const {
    if (kind_ != Kind::Unit) throw MathError("residue of zeroish value");
    if (val_ != 0) throw MathError("residue of non-integral unit");
    const Int p(ctx_->p());
    std::vector<Int> r = unit_;
    r.resize(ctx_->h(), Int(0));
    for (auto& c : r) c = ((c % p) + p) % p;
    return r;
}

std::string PadicScalar::str() const {
    std::ostringstream os;
    if (kind_ == Kind::ExactZero) return "0";
    if (kind_ == Kind::PrecZero) {
        os << "O(p^" << val_ << ")";
        return os.str();
    }
    if (ctx_->h() == 1) {
        os << unit_[0];
    } else {
        os << "(";
        for (size_t i = 0; i < unit_.size(); ++i) {
            if (i) os << "+";
            os << unit_[i];
            if (i) os << "*t^" << i;
        }
        os << ")";
    }
    if (val_ != 0) os << "*p^" << val_;
    os << " + O(p^" << abs_precision() << ")";
    return os.str();
}

}  // namespace padlg
