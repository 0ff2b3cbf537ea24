#ifndef PADLG_SERIES_HPP
#define PADLG_SERIES_HPP

#include <optional>
#include <vector>

#include "padlg/padic.hpp"

namespace padlg {

/// Radius rho = p^{-r} given by its valuation exponent r >= 0 (r = 0 is the
/// unit circle).
struct Radius {
    Rat r;
    explicit Radius(Rat rr) : r(std::move(rr)) {
        if (r < 0) throw MathError("radius exponent must be >= 0");
    }
};

/// Result of a Gauss-norm evaluation in exponent form: |f|_rho = p^{-e}.
/// `has_value` is false when no provably nonzero coefficient exists in the
/// window (f is zero there, or indeterminate at precision).
struct GaussExponent {
    bool has_value = false;
    Rat e;
    bool certified = false;
};

/// Windowed x-expansion over Q_q: coefficients are stored on [n_min, n_max];
/// outside the window only the flags speak.  exact_below: all coefficients
/// below n_min are exactly 0.  exact_above: likewise above n_max (the series
/// is a Laurent polynomial).  floor: a lower bound on v_p of every
/// coefficient, in-window and tail alike; products add floors, which is what
/// lets Gauss norms at the right edge be certified on truncated data.
class LaurentSeries {
public:
    LaurentSeries() = default;

    static LaurentSeries zero(const ContextPtr& ctx);
    static LaurentSeries one(const ContextPtr& ctx);
    static LaurentSeries monomial(const ContextPtr& ctx, const PadicScalar& c, long n);
    static LaurentSeries constant(const ContextPtr& ctx, const PadicScalar& c);
    /// coefficients for exponents n_min..n_min+len-1; exact polynomial
    static LaurentSeries from_coeffs(const ContextPtr& ctx, long n_min,
                                     std::vector<PadicScalar> coeffs);
    /// truncated series: exponents above the window are unknown
    static LaurentSeries from_coeffs_truncated(const ContextPtr& ctx, long n_min,
                                               std::vector<PadicScalar> coeffs);

    const ContextPtr& context() const { return ctx_; }
    long n_min() const { return n_min_; }
    long n_max() const { return n_min_ + static_cast<long>(coeffs_.size()) - 1; }
    bool empty_window() const { return coeffs_.empty(); }
    bool exact_below() const { return exact_below_; }
    bool exact_above() const { return exact_above_; }
    const std::optional<long>& floor() const { return floor_; }
    void set_floor(std::optional<long> f) { floor_ = std::move(f); }
    /// valuation floor for the coefficients below n_min only (used when a
    /// division clips an infinite but p-adically small left tail); ignored
    /// when exact_below is set
    const std::optional<long>& left_tail_floor() const { return left_tail_floor_; }
    void set_left_tail_floor(std::optional<long> f) { left_tail_floor_ = std::move(f); }
    /// bound on v_p of every coefficient, tails included: the declared floor,
    /// or the in-window minimum when both tails are exact
    std::optional<long> global_floor() const;
    /// declare floor from the in-window minimum valuation bound
    void declare_floor_from_window();

    bool known(long n) const;
    /// throws on coefficients outside the known region
    const PadicScalar& coeff(long n) const;
    PadicScalar coeff_or_zero(long n) const;
    void set_coeff(long n, const PadicScalar& c);

    /// all known coefficients are exactly zero and both flags are set
    bool is_exactly_zero() const;
    /// no coefficient is certified nonzero
    bool is_zeroish() const;
    /// drop exactly-zero edges of the window (keeps flags sound)
    LaurentSeries trimmed() const;
    /// restrict the window to [lo, hi]; dropped parts flip the flags off
    LaurentSeries clipped(long lo, long hi) const;

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
    LaurentSeries mul(const LaurentSeries& o, long cap_hi) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries scaled(const PadicScalar& c) const;
    /// multiply by x^k
    LaurentSeries shifted(long k) const;

    LaurentSeries derivative() const;
    /// x * d/dx (the log-derivation against dx/x)
    LaurentSeries theta() const;
    /// antiderivative: x^n -> x^(n+1)/(n+1); the x^(-1) coefficient goes to
    /// the returned log coefficient.
    std::pair<LaurentSeries, PadicScalar> antiderivative() const;

    /// sigma with sigma(x) = x^q: sum a_n x^n -> sum sigma_K(a_n) x^(qn)
    LaurentSeries frobenius_sub() const;

    /// exponent form of the Gauss norm |f|_rho at rho = p^(-r):
    /// e = min_n (v_p(a_n) + r n)
    GaussExponent gauss_exponent(const Rat& r) const;

    /// multiplicative inverse for a series with an invertible constant term
    /// (window starting at a unit x^d coefficient after shifting), computed
    /// as a power-series recursion; exact below cap_hi.
    LaurentSeries invert_regular(long cap_hi) const;
    /// inverse of a general certified-nonzero bounded Laurent carrier, via
    /// reduction mod p and Hensel lifting; window capped to [lo_hint, cap_hi].
    LaurentSeries invert_bounded(long cap_hi) const;
    LaurentSeries div(const LaurentSeries& o, long cap_hi) const;

    std::string str(int max_terms = 12) const;

private:
    ContextPtr ctx_;
    long n_min_ = 0;
    std::vector<PadicScalar> coeffs_;
    bool exact_below_ = true;
    bool exact_above_ = true;
    std::optional<long> floor_;
    std::optional<long> left_tail_floor_;

    friend LaurentSeries raw_series(const ContextPtr&, long, std::vector<PadicScalar>, bool,
                                    bool, std::optional<long>);
};

LaurentSeries raw_series(const ContextPtr& ctx, long n_min, std::vector<PadicScalar> coeffs,
                         bool exact_below, bool exact_above, std::optional<long> floor);

/// Polynomial in log x with LaurentSeries coefficients: sum_i f_i (log x)^i.
class LogSeries {
public:
    LogSeries() = default;
    explicit LogSeries(LaurentSeries f) { comps_.push_back(std::move(f)); }
    explicit LogSeries(std::vector<LaurentSeries> comps) : comps_(std::move(comps)) {
        normalize();
    }

    static LogSeries zero(const ContextPtr& ctx);
    static LogSeries log_x(const ContextPtr& ctx);

    int degree() const { return comps_.empty() ? 0 : static_cast<int>(comps_.size()) - 1; }
    const std::vector<LaurentSeries>& components() const { return comps_; }
    const LaurentSeries& component(int i) const;
    const ContextPtr& context() const;
    bool is_zeroish() const;

    LogSeries operator+(const LogSeries& o) const;
    LogSeries operator-(const LogSeries& o) const;
    LogSeries operator-() const;
    LogSeries mul(const LogSeries& o, long cap_hi) const;
    LogSeries scaled(const PadicScalar& c) const;
    LogSeries mul_series(const LaurentSeries& f, long cap_hi) const;

    /// sigma on components plus log x -> q log x (the correction series
    /// vanishes for sigma(x) = x^q)
    LogSeries frobenius_sub() const;
    LogSeries derivative() const;
    LogSeries theta() const;

    std::string str() const;

private:
    std::vector<LaurentSeries> comps_;
    void normalize();
};

/// -log_p of the paper's norm on log-polynomials at rho = p^(-r):
///   |sum f_i (log x)^i|_rho = sup_i |f_i|_rho (log(1/rho))^(-i),
/// i.e. the returned value is min_i (e(f_i, r) + i log_p(r ln p)).
/// Requires 0 < rho < 1 (r > 0) when the log-degree is positive.
struct LogNormExponent {
    bool has_value = false;
    double value = 0.0;
    bool certified = false;
};
LogNormExponent log_norm_exponent(const LogSeries& y, const Rat& r);

}  // namespace padlg

#endif
