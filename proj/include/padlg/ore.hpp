#ifndef PADLG_ORE_HPP
#define PADLG_ORE_HPP

#include <vector>

#include "padlg/newton.hpp"
#include "padlg/series.hpp"

namespace padlg {

/// q^s for rational s = a/b: requires b | log_p q = h, giving the exact
/// power p^(a h / b).
PadicScalar q_power(const ContextPtr& ctx, const Rat& s);

/// Twisted polynomial sum_i a_i sigma^i over the Laurent carrier ring,
/// with the commutation rule sigma a = sigma(a) sigma.
class TwistedPoly {
public:
    TwistedPoly() = default;
    TwistedPoly(ContextPtr ctx, std::vector<LaurentSeries> coeffs);

    static TwistedPoly zero(const ContextPtr& ctx);
    static TwistedPoly one(const ContextPtr& ctx);
    /// sigma - a
    static TwistedPoly sigma_minus(const LaurentSeries& a);

    const ContextPtr& context() const { return ctx_; }
    /// -1 for the zero polynomial
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const LaurentSeries& coeff(int i) const;
    const std::vector<LaurentSeries>& coeffs() const { return coeffs_; }

    TwistedPoly operator+(const TwistedPoly& o) const;
    TwistedPoly operator-(const TwistedPoly& o) const;
    TwistedPoly operator-() const;
    /// twisted product: sigma^i a = sigma^i(a) sigma^i
    TwistedPoly operator*(const TwistedPoly& o) const;

    std::string str() const;

private:
    ContextPtr ctx_;
    std::vector<LaurentSeries> coeffs_;  // a_0 .. a_n
    void normalize();
};

TwistedPoly ore_mul(const TwistedPoly& f, const TwistedPoly& g);

/// f acting on y: sum_i a_i sigma^i(y)
LogSeries apply(const TwistedPoly& f, const LogSeries& y, long cap_hi = 1L << 40);

/// (sigma - q^{s_1} x) ... (sigma - q^{s_n} x) for s_1 <= ... <= s_n
TwistedPoly from_slope_factors(const ContextPtr& ctx, std::vector<Rat> slopes);

/// lower hull of {(i, -log_q |a_i|_1)} over indices with a_i != 0.
/// Slopes are the hull slopes as drawn, multiplicity = x-extent; the
/// reversed-sign convention is available via slopes_paper.
NewtonPolygon newton_polygon_twisted(const TwistedPoly& f);

/// negated slope list (the companion convention), ascending
std::vector<std::pair<Rat, Rat>> slopes_paper(const NewtonPolygon& np);

/// condition (*): every finite point (i, -log_q|a_i|_1) lies on the polygon
struct StarReport {
    NewtonPolygon polygon;
    std::vector<bool> on_polygon;  // indexed by i; true also for a_i = 0
    bool satisfied = false;
};
StarReport check_condition_star(const TwistedPoly& f);

}  // namespace padlg

#endif
