#include "padlg/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace padlg {

namespace {
constexpr long kBig = 1L << 58;
constexpr long kWindowCap = 1L << 40;

const PadicScalar& exact_zero_scalar() {
    static const PadicScalar z;
    return z;
}

long checked_mul_exp(long n, long q) {
    if (std::abs(n) > kWindowCap / q) throw MathError("window overflow beyond configured max order");
    return n * q;
}
}  // namespace

LaurentSeries raw_series(const ContextPtr& ctx, long n_min, std::vector<PadicScalar> coeffs,
                         bool exact_below, bool exact_above, std::optional<long> floor) {
    LaurentSeries f;
    f.ctx_ = ctx;
    f.n_min_ = n_min;
    f.coeffs_ = std::move(coeffs);
    f.exact_below_ = exact_below;
    f.exact_above_ = exact_above;
    f.floor_ = std::move(floor);
    return f;
}

LaurentSeries LaurentSeries::zero(const ContextPtr& ctx) {
    return raw_series(ctx, 0, {}, true, true, std::nullopt);
}

LaurentSeries LaurentSeries::one(const ContextPtr& ctx) {
    return monomial(ctx, PadicScalar::one(ctx), 0);
}

LaurentSeries LaurentSeries::monomial(const ContextPtr& ctx, const PadicScalar& c, long n) {
    if (c.is_exact_zero()) return zero(ctx);
    return raw_series(ctx, n, {c}, true, true, std::nullopt);
}

LaurentSeries LaurentSeries::constant(const ContextPtr& ctx, const PadicScalar& c) {
    return monomial(ctx, c, 0);
}

LaurentSeries LaurentSeries::from_coeffs(const ContextPtr& ctx, long n_min,
                                         std::vector<PadicScalar> coeffs) {
    return raw_series(ctx, n_min, std::move(coeffs), true, true, std::nullopt).trimmed();
}

LaurentSeries LaurentSeries::from_coeffs_truncated(const ContextPtr& ctx, long n_min,
                                                   std::vector<PadicScalar> coeffs) {
    return raw_series(ctx, n_min, std::move(coeffs), true, false, std::nullopt);
}

std::optional<long> LaurentSeries::global_floor() const {
    if (floor_) return floor_;
    if (!exact_below_ || !exact_above_) return std::nullopt;
    long m = kBig;
    for (const auto& c : coeffs_) m = std::min(m, c.valuation_lower_bound());
    return m;
}

void LaurentSeries::declare_floor_from_window() {
    long m = kBig;
    for (const auto& c : coeffs_) m = std::min(m, c.valuation_lower_bound());
    floor_ = (m == kBig) ? std::optional<long>() : std::optional<long>(m);
}

bool LaurentSeries::known(long n) const {
    if (n < n_min_) return exact_below_;
    if (n > n_max()) return exact_above_;
    return true;
}

const PadicScalar& LaurentSeries::coeff(long n) const {
    if (n >= n_min_ && n <= n_max()) return coeffs_[static_cast<size_t>(n - n_min_)];
    if (!known(n)) throw MathError("coefficient outside the known window");
    return exact_zero_scalar();
}

PadicScalar LaurentSeries::coeff_or_zero(long n) const {
    if (n >= n_min_ && n <= n_max()) return coeffs_[static_cast<size_t>(n - n_min_)];
    return PadicScalar();
}

void LaurentSeries::set_coeff(long n, const PadicScalar& c) {
    if (coeffs_.empty()) {
        n_min_ = n;
        coeffs_.push_back(c);
        return;
    }
    if (n < n_min_) {
        coeffs_.insert(coeffs_.begin(), static_cast<size_t>(n_min_ - n), PadicScalar());
        n_min_ = n;
    } else if (n > n_max()) {
        coeffs_.resize(static_cast<size_t>(n - n_min_ + 1));
    }
    coeffs_[static_cast<size_t>(n - n_min_)] = c;
}

bool LaurentSeries::is_exactly_zero() const {
    if (!exact_below_ || !exact_above_) return false;
    for (const auto& c : coeffs_)
        if (!c.is_exact_zero()) return false;
    return true;
}

bool LaurentSeries::is_zeroish() const {
    for (const auto& c : coeffs_)
        if (c.is_certified_nonzero()) return false;
    return true;
}

LaurentSeries LaurentSeries::trimmed() const {
    size_t lo = 0, hi = coeffs_.size();
    while (lo < hi && coeffs_[lo].is_exact_zero()) ++lo;
    while (hi > lo && coeffs_[hi - 1].is_exact_zero()) --hi;
    if (lo == 0 && hi == coeffs_.size()) return *this;
    std::vector<PadicScalar> kept(coeffs_.begin() + static_cast<long>(lo),
                                  coeffs_.begin() + static_cast<long>(hi));
    auto out = raw_series(ctx_, n_min_ + static_cast<long>(lo), std::move(kept), exact_below_,
                          exact_above_, floor_);
    out.left_tail_floor_ = left_tail_floor_;
    return out;
}

LaurentSeries LaurentSeries::clipped(long lo, long hi) const {
    long a = std::max(lo, n_min_);
    long b = std::min(hi, n_max());
    std::vector<PadicScalar> kept;
    if (a <= b)
        kept.assign(coeffs_.begin() + (a - n_min_), coeffs_.begin() + (b - n_min_ + 1));
    bool eb = exact_below_ && lo <= n_min_;
    bool ea = exact_above_ && hi >= n_max();
    // the clip narrows knowledge of the same ideal series, so any global
    // floor of the source stays valid
    auto out = raw_series(ctx_, a <= b ? a : lo, std::move(kept), eb, ea, global_floor());
    if (!eb) {
        // clipped-off known coefficients join the left tail bound
        long lt = kBig;
        bool ok = true;
        if (!exact_below_) {
            if (left_tail_floor_)
                lt = std::min(lt, *left_tail_floor_);
            else
                ok = false;
        }
        for (long n = n_min_; n < a && n <= n_max(); ++n)
            lt = std::min(lt, coeffs_[static_cast<size_t>(n - n_min_)].valuation_lower_bound());
        if (ok && lt < kBig) out.left_tail_floor_ = lt;
    }
    return out;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    if (is_exactly_zero()) return o;
    if (o.is_exactly_zero()) return *this;
    long lo_bound = std::max(exact_below_ ? -kBig : n_min_, o.exact_below_ ? -kBig : o.n_min_);
    long hi_bound = std::min(exact_above_ ? kBig : n_max(), o.exact_above_ ? kBig : o.n_max());
    long lo = std::max(std::min(n_min_, o.n_min_), lo_bound);
    long hi = std::min(std::max(n_max(), o.n_max()), hi_bound);
    std::vector<PadicScalar> out;
    for (long n = lo; n <= hi; ++n) out.push_back(coeff(n) + o.coeff(n));
    std::optional<long> fl;
    {
        auto fa = global_floor();
        auto fb = o.global_floor();
        if (fa && fb) fl = std::min(*fa, *fb);
    }
    auto res = raw_series(ctx_ ? ctx_ : o.ctx_, lo, std::move(out), lo_bound == -kBig,
                          hi_bound == kBig, fl);
    if (lo_bound != -kBig) {
        long lt = kBig;
        bool ok = true;
        for (const LaurentSeries* s : {this, &o}) {
            if (!s->exact_below_) {
                if (s->left_tail_floor_)
                    lt = std::min(lt, *s->left_tail_floor_);
                else
                    ok = false;
            }
            for (long n = s->n_min_; n < lo && n <= s->n_max(); ++n)
                lt = std::min(lt,
                              s->coeffs_[static_cast<size_t>(n - s->n_min_)]
                                  .valuation_lower_bound());
        }
        if (ok && lt < kBig) res.left_tail_floor_ = lt;
    }
    return res.trimmed();
}

LaurentSeries LaurentSeries::operator-() const {
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(-c);
    auto res = raw_series(ctx_, n_min_, std::move(out), exact_below_, exact_above_, floor_);
    res.left_tail_floor_ = left_tail_floor_;
    return res;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

LaurentSeries LaurentSeries::mul(const LaurentSeries& o, long cap_hi) const {
    if (is_exactly_zero() || o.is_exactly_zero()) return zero(ctx_ ? ctx_ : o.ctx_);
    // cross-terms with an unknown left tail are absorbed as p-adic slack of
    // valuation >= B = min(LT(f) + FL(g), FL(f) + LT(g))
    long slack = kBig;
    if (!exact_below_ || !o.exact_below_) {
        auto fl_a = global_floor();
        auto fl_b = o.global_floor();
        if (!exact_below_) {
            if (!left_tail_floor_ || !fl_b)
                throw MathError("product requires exact lower tails or declared floors");
            slack = std::min(slack, *left_tail_floor_ + *fl_b);
        }
        if (!o.exact_below_) {
            if (!o.left_tail_floor_ || !fl_a)
                throw MathError("product requires exact lower tails or declared floors");
            slack = std::min(slack, *o.left_tail_floor_ + *fl_a);
        }
    }
    long lo = n_min_ + o.n_min_;
    long hi_bound = kBig;
    if (!exact_above_) hi_bound = std::min(hi_bound, n_max() + o.n_min_);
    if (!o.exact_above_) hi_bound = std::min(hi_bound, o.n_max() + n_min_);
    bool ea = exact_above_ && o.exact_above_ && n_max() + o.n_max() <= cap_hi;
    long hi = std::min({hi_bound, cap_hi, n_max() + o.n_max()});
    std::optional<long> fl;
    {
        auto fa = global_floor();
        auto fb = o.global_floor();
        if (fa && fb) fl = *fa + *fb;
    }
    if (hi < lo) {
        auto res = raw_series(ctx_, lo, {}, slack == kBig, ea, fl);
        if (slack < kBig) res.left_tail_floor_ = slack;
        return res;
    }
    std::vector<PadicScalar> out(static_cast<size_t>(hi - lo + 1));
    for (long i = n_min_; i <= n_max(); ++i) {
        const PadicScalar& a = coeffs_[static_cast<size_t>(i - n_min_)];
        if (a.is_exact_zero()) continue;
        long jlo = std::max(o.n_min(), lo - i);
        long jhi = std::min(o.n_max(), hi - i);
        for (long j = jlo; j <= jhi; ++j) {
            const PadicScalar& b = o.coeffs_[static_cast<size_t>(j - o.n_min())];
            if (b.is_exact_zero()) continue;
            auto& slot = out[static_cast<size_t>(i + j - lo)];
            slot = slot + a * b;
        }
    }
    auto res = raw_series(ctx_, lo, std::move(out), slack == kBig, ea, fl);
    if (slack < kBig) {
        PadicScalar pz = PadicScalar::prec_zero(ctx_, slack);
        for (auto& c : res.coeffs_) c = c + pz;
        res.left_tail_floor_ = slack;
    }
    return res.trimmed();
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const { return mul(o, kBig); }

LaurentSeries LaurentSeries::scaled(const PadicScalar& c) const {
    if (c.is_exact_zero()) return zero(ctx_);
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const auto& a : coeffs_) out.push_back(a * c);
    std::optional<long> fl;
    if (floor_) fl = *floor_ + c.valuation_lower_bound();
    auto res = raw_series(ctx_, n_min_, std::move(out), exact_below_, exact_above_, fl);
    if (left_tail_floor_) res.left_tail_floor_ = *left_tail_floor_ + c.valuation_lower_bound();
    return res;
}

LaurentSeries LaurentSeries::shifted(long k) const {
    auto res = raw_series(ctx_, n_min_ + k, coeffs_, exact_below_, exact_above_, floor_);
    res.left_tail_floor_ = left_tail_floor_;
    return res;
}

LaurentSeries LaurentSeries::derivative() const {
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (long n = n_min_; n <= n_max(); ++n)
        out.push_back(coeff(n) * PadicScalar::from_integer(ctx_, Int(n)));
    auto res = raw_series(ctx_, n_min_ - 1, std::move(out), exact_below_, exact_above_, floor_);
    res.left_tail_floor_ = left_tail_floor_;
    return res.trimmed();
}

LaurentSeries LaurentSeries::theta() const {
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (long n = n_min_; n <= n_max(); ++n)
        out.push_back(coeff(n) * PadicScalar::from_integer(ctx_, Int(n)));
    auto res = raw_series(ctx_, n_min_, std::move(out), exact_below_, exact_above_, floor_);
    res.left_tail_floor_ = left_tail_floor_;
    return res.trimmed();
}

std::pair<LaurentSeries, PadicScalar> LaurentSeries::antiderivative() const {
    std::vector<PadicScalar> out;
    PadicScalar log_coeff = PadicScalar::zero(ctx_);
    out.reserve(coeffs_.size());
    for (long n = n_min_; n <= n_max(); ++n) {
        if (n == -1) {
            log_coeff = coeff(n);
            out.push_back(PadicScalar());
            continue;
        }
        out.push_back(coeff(n) * PadicScalar::from_rational(ctx_, Int(1), Int(n + 1)));
    }
    auto f = raw_series(ctx_, n_min_ + 1, std::move(out), exact_below_, exact_above_,
                        std::nullopt)
                 .trimmed();
    return {std::move(f), std::move(log_coeff)};
}

LaurentSeries LaurentSeries::frobenius_sub() const {
    long q = mpz_get_si(ctx_->q().get_mpz_t());
    if (!mpz_fits_slong_p(ctx_->q().get_mpz_t()) || q <= 1)
        throw MathError("q does not fit a machine word");
    if (coeffs_.empty()) return *this;
    long lo = checked_mul_exp(n_min_, q);
    long hi = checked_mul_exp(n_max(), q);
    std::vector<PadicScalar> out(static_cast<size_t>(hi - lo + 1));
    for (long n = n_min_; n <= n_max(); ++n)
        out[static_cast<size_t>(n * q - lo)] = coeff(n).frobenius();
    auto res = raw_series(ctx_, lo, std::move(out), exact_below_, exact_above_, floor_);
    res.left_tail_floor_ = left_tail_floor_;
    return res;
}

GaussExponent LaurentSeries::gauss_exponent(const Rat& r) const {
    if (r < 0) throw MathError("gauss exponent needs r >= 0");
    GaussExponent g;
    bool any_prec_zero = false;
    for (long n = n_min_; n <= n_max(); ++n) {
        const PadicScalar& c = coeff(n);
        if (c.is_prec_zero()) any_prec_zero = true;
        if (!c.is_certified_nonzero()) continue;
        Rat cand = Rat(c.valuation()) + r * n;
        if (!g.has_value || cand < g.e) {
            g.has_value = true;
            g.e = cand;
        }
    }
    if (!g.has_value) {
        g.certified = exact_below_ && exact_above_ && !any_prec_zero;
        return g;
    }
    bool ok = true;
    for (long n = n_min_; n <= n_max() && ok; ++n) {
        const PadicScalar& c = coeff(n);
        if (c.is_prec_zero() && Rat(c.valuation_lower_bound()) + r * n < g.e) ok = false;
    }
    if (!(exact_below_ || (r == 0 && ((floor_ && Rat(*floor_) >= g.e) ||
                                      (left_tail_floor_ && Rat(*left_tail_floor_) >= g.e)))))
        ok = false;
    if (!exact_above_) {
        if (!floor_ || Rat(*floor_) + r * (n_max() + 1) < g.e) ok = false;
    }
    g.certified = ok;
    return g;
}

LaurentSeries LaurentSeries::invert_regular(long cap_hi) const {
    LaurentSeries f = trimmed();
    if (f.coeffs_.empty() || !f.coeffs_.front().is_certified_nonzero())
        throw MathError("invert_regular needs a certified-invertible leading coefficient");
    if (!f.exact_below_) throw MathError("invert_regular needs an exact lower tail");
    long d = f.n_min_;
    long len = cap_hi + d + 1;  // inverse exponents -d .. cap_hi
    if (len <= 0) return raw_series(ctx_, -d, {}, true, false, std::nullopt);
    PadicScalar u_inv = f.coeffs_.front().inv();
    std::vector<PadicScalar> c(static_cast<size_t>(len));
    c[0] = u_inv;
    long v0 = f.coeffs_.front().valuation();
    for (long n = 1; n < len; ++n) {
        PadicScalar acc;
        long kmax = std::min<long>(n, f.n_max() - d);
        for (long k = 1; k <= kmax; ++k) {
            const PadicScalar& gk = f.coeffs_[static_cast<size_t>(k)];
            if (gk.is_exact_zero()) continue;
            const PadicScalar& ck = c[static_cast<size_t>(n - k)];
            if (ck.is_exact_zero()) continue;
            acc = acc + gk * ck;
        }
        c[static_cast<size_t>(n)] = acc.is_exact_zero() ? PadicScalar() : -(u_inv * acc);
    }
    // Gauss's lemma: |1/f|_1 = |f|_1^{-1} and |f|_1 >= |a_d| = p^{-v0}, so
    // every coefficient of the inverse (unseen tail included) has valuation
    // >= -v0 -- provided f is bounded at all
    std::optional<long> fl;
    if (f.exact_above_ || f.floor_) fl = -v0;
    bool ea = f.exact_above_ && f.n_max() == f.n_min_;  // monomial inverse is exact
    if (ea) {
        return raw_series(ctx_, -d, {u_inv}, true, true, fl);
    }
    return raw_series(ctx_, -d, std::move(c), true, false, fl).trimmed();
}

LaurentSeries LaurentSeries::invert_bounded(long cap_hi) const {
    LaurentSeries f = trimmed();
    if (f.coeffs_.empty()) throw MathError("inverse of zero");
    long w = kBig;
    for (const auto& c : f.coeffs_)
        if (c.is_certified_nonzero()) w = std::min(w, c.valuation());
    if (w == kBig) throw MathError("inverse of a series with no certified nonzero coefficient");
    for (const auto& c : f.coeffs_)
        if (c.is_prec_zero() && c.valuation_lower_bound() < w)
            throw MathError("cannot certify inverse at this precision");
    // normalize to min coefficient valuation 0
    LaurentSeries ft = f.scaled(PadicScalar::p_power(ctx_, Rat(-w)));
    long d = ft.n_min();
    while (d <= ft.n_max() &&
           !(ft.coeff(d).is_certified_nonzero() && ft.coeff(d).valuation() == 0))
        ++d;
    long span = std::max<long>(d - ft.n_min(), 1);
    int N = ctx_->precision();
    long lo_work = -d - (N + 2) * span;
    long hi_work = cap_hi + (N + 2) * span;
    if (d == ft.n_min() && ft.exact_below()) {
        // regular case: no mixed tail below the unit pivot
        return ft.invert_regular(cap_hi).scaled(PadicScalar::p_power(ctx_, Rat(-w)));
    }
    // initial guess: inverse of the unit-led part from exponent d upward,
    // taken as an exact series in its own right
    std::vector<PadicScalar> gc;
    for (long n = d; n <= ft.n_max(); ++n) gc.push_back(ft.coeff(n));
    LaurentSeries g = raw_series(ctx_, d, std::move(gc), true, ft.exact_above(), ft.global_floor());
    LaurentSeries z = g.invert_regular(hi_work);
    // Newton lifting z <- z(2 - ft z); the defect 1 - ft z gains a factor
    // p each step from the below-pivot part (valuation >= 1 there)
    LaurentSeries two = constant(ctx_, PadicScalar::from_integer(ctx_, 2));
    int steps = 0;
    long gain = 1;
    while (gain < N && steps < 2 * N + 4) {
        LaurentSeries prod = ft.mul(z, hi_work).clipped(lo_work, hi_work);
        z = z.mul(two - prod, hi_work).clipped(lo_work, hi_work);
        gain *= 2;
        ++steps;
    }
    z = z.clipped(lo_work, cap_hi);
    z.set_floor(0);
    // z inverts ft only mod p^N: the true inverse continues below the window
    // with coefficients of valuation >= N
    z.exact_below_ = false;
    z.set_left_tail_floor(static_cast<long>(N));
    LaurentSeries out = z.scaled(PadicScalar::p_power(ctx_, Rat(-w)));
    return out;
}

LaurentSeries LaurentSeries::div(const LaurentSeries& o, long cap_hi) const {
    LaurentSeries inv = o.invert_bounded(cap_hi - std::min<long>(n_min_, 0) + 1);
    return mul(inv, cap_hi);
}

std::string LaurentSeries::str(int max_terms) const {
    std::ostringstream os;
    int shown = 0;
    bool first = true;
    for (long n = n_min_; n <= n_max(); ++n) {
        const PadicScalar& c = coeff(n);
        if (c.is_exact_zero()) continue;
        if (shown >= max_terms) {
            os << " + ...";
            break;
        }
        if (!first) os << " + ";
        os << "(" << c.str() << ")";
        if (n != 0) os << "*x^" << n;
        first = false;
        ++shown;
    }
    if (first) os << "0";
    if (!exact_above_) os << " + O(x^" << (n_max() + 1) << ")";
    return os.str();
}

// ---------- LogSeries ----------

void LogSeries::normalize() {
    while (!comps_.empty() && comps_.back().is_exactly_zero()) comps_.pop_back();
}

LogSeries LogSeries::zero(const ContextPtr& ctx) { return LogSeries(LaurentSeries::zero(ctx)); }

LogSeries LogSeries::log_x(const ContextPtr& ctx) {
    return LogSeries(std::vector<LaurentSeries>{LaurentSeries::zero(ctx), LaurentSeries::one(ctx)});
}

const LaurentSeries& LogSeries::component(int i) const {
    static const LaurentSeries empty;
    if (i < 0 || i >= static_cast<int>(comps_.size())) return empty;
    return comps_[static_cast<size_t>(i)];
}

const ContextPtr& LogSeries::context() const {
    static const ContextPtr null_ctx;
    for (const auto& c : comps_)
        if (c.context()) return c.context();
    return null_ctx;
}

bool LogSeries::is_zeroish() const {
    for (const auto& c : comps_)
        if (!c.is_zeroish()) return false;
    return true;
}

LogSeries LogSeries::operator+(const LogSeries& o) const {
    std::vector<LaurentSeries> out;
    size_t n = std::max(comps_.size(), o.comps_.size());
    const ContextPtr& ctx = context() ? context() : o.context();
    for (size_t i = 0; i < n; ++i) {
        LaurentSeries a = i < comps_.size() ? comps_[i] : LaurentSeries::zero(ctx);
        LaurentSeries b = i < o.comps_.size() ? o.comps_[i] : LaurentSeries::zero(ctx);
        out.push_back(a + b);
    }
    return LogSeries(std::move(out));
}

LogSeries LogSeries::operator-() const {
    std::vector<LaurentSeries> out;
    for (const auto& c : comps_) out.push_back(-c);
    return LogSeries(std::move(out));
}

LogSeries LogSeries::operator-(const LogSeries& o) const { return *this + (-o); }

LogSeries LogSeries::mul(const LogSeries& o, long cap_hi) const {
    if (comps_.empty() || o.comps_.empty()) return LogSeries();
    std::vector<LaurentSeries> out(comps_.size() + o.comps_.size() - 1,
                                   LaurentSeries::zero(context()));
    for (size_t i = 0; i < comps_.size(); ++i)
        for (size_t j = 0; j < o.comps_.size(); ++j)
            out[i + j] = out[i + j] + comps_[i].mul(o.comps_[j], cap_hi);
    return LogSeries(std::move(out));
}

LogSeries LogSeries::scaled(const PadicScalar& c) const {
    std::vector<LaurentSeries> out;
    for (const auto& f : comps_) out.push_back(f.scaled(c));
    return LogSeries(std::move(out));
}

LogSeries LogSeries::mul_series(const LaurentSeries& f, long cap_hi) const {
    std::vector<LaurentSeries> out;
    for (const auto& g : comps_) out.push_back(g.mul(f, cap_hi));
    return LogSeries(std::move(out));
}

LogSeries LogSeries::frobenius_sub() const {
    if (comps_.empty()) return *this;
    const ContextPtr& ctx = context();
    std::vector<LaurentSeries> out;
    PadicScalar qpow = PadicScalar::one(ctx);
    PadicScalar q = PadicScalar::from_integer(ctx, ctx->q());
    for (size_t i = 0; i < comps_.size(); ++i) {
        out.push_back(comps_[i].frobenius_sub().scaled(qpow));
        qpow = qpow * q;
    }
    return LogSeries(std::move(out));
}

LogSeries LogSeries::derivative() const {
    if (comps_.empty()) return *this;
    const ContextPtr& ctx = context();
    std::vector<LaurentSeries> out;
    for (size_t i = 0; i < comps_.size(); ++i) {
        LaurentSeries t = comps_[i].derivative();
        if (i + 1 < comps_.size())
            t = t + comps_[i + 1]
                        .scaled(PadicScalar::from_integer(ctx, Int(static_cast<long>(i) + 1)))
                        .shifted(-1);
        out.push_back(std::move(t));
    }
    return LogSeries(std::move(out));
}

LogSeries LogSeries::theta() const {
    if (comps_.empty()) return *this;
    const ContextPtr& ctx = context();
    std::vector<LaurentSeries> out;
    for (size_t i = 0; i < comps_.size(); ++i) {
        LaurentSeries t = comps_[i].theta();
        if (i + 1 < comps_.size())
            t = t + comps_[i + 1].scaled(
                        PadicScalar::from_integer(ctx, Int(static_cast<long>(i) + 1)));
        out.push_back(std::move(t));
    }
    return LogSeries(std::move(out));
}

std::string LogSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i].is_exactly_zero()) continue;
        if (!first) os << " + ";
        os << "[" << comps_[i].str() << "]";
        if (i == 1) os << "*log(x)";
        if (i > 1) os << "*log(x)^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

LogNormExponent log_norm_exponent(const LogSeries& y, const Rat& r) {
    LogNormExponent out;
    const auto& comps = y.components();
    if (comps.empty()) {
        out.certified = true;
        return out;
    }
    const ContextPtr& ctx = y.context();
    if (!ctx) {
        out.certified = true;
        return out;
    }
    double rd = mpq_get_d(r.get_mpq_t());
    double lnp = std::log(static_cast<double>(ctx->p()));
    bool needs_log = comps.size() > 1;
    if (needs_log && rd <= 0.0)
        throw MathError("log-norm needs rho < 1 when log terms are present");
    double log_term = needs_log ? std::log(rd * lnp) / lnp : 0.0;
    bool all_cert = true;
    for (size_t i = 0; i < comps.size(); ++i) {
        GaussExponent g = comps[i].gauss_exponent(r);
        if (!g.has_value) {
            if (!g.certified) all_cert = false;
            continue;
        }
        if (!g.certified) all_cert = false;
        double v = mpq_get_d(g.e.get_mpq_t()) + static_cast<double>(i) * log_term;
        if (!out.has_value || v < out.value) {
            out.has_value = true;
            out.value = v;
        }
    }
    out.certified = all_cert;
    return out;
}

}  // namespace padlg
