#include "padlg/ore.hpp"

#include <sstream>

namespace padlg {

PadicScalar q_power(const ContextPtr& ctx, const Rat& s) {
    Rat e = s * ctx->h();
    e.canonicalize();
    if (e.get_den() != 1)
        throw MathError("q^s is not rational: denominator of s must divide log_p q");
    return PadicScalar::p_power(ctx, e);
}

TwistedPoly::TwistedPoly(ContextPtr ctx, std::vector<LaurentSeries> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    normalize();
}

void TwistedPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_exactly_zero()) coeffs_.pop_back();
}

TwistedPoly TwistedPoly::zero(const ContextPtr& ctx) { return TwistedPoly(ctx, {}); }

TwistedPoly TwistedPoly::one(const ContextPtr& ctx) {
    return TwistedPoly(ctx, {LaurentSeries::one(ctx)});
}

TwistedPoly TwistedPoly::sigma_minus(const LaurentSeries& a) {
    return TwistedPoly(a.context(), {-a, LaurentSeries::one(a.context())});
}

const LaurentSeries& TwistedPoly::coeff(int i) const {
    static const LaurentSeries empty;  // default carrier acts as exact zero
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return empty;
    return coeffs_[static_cast<size_t>(i)];
}

TwistedPoly TwistedPoly::operator+(const TwistedPoly& o) const {
    const ContextPtr& ctx = ctx_ ? ctx_ : o.ctx_;
    std::vector<LaurentSeries> out;
    size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    for (size_t i = 0; i < n; ++i) {
        LaurentSeries a = i < coeffs_.size() ? coeffs_[i] : LaurentSeries::zero(ctx);
        LaurentSeries b = i < o.coeffs_.size() ? o.coeffs_[i] : LaurentSeries::zero(ctx);
        out.push_back(a + b);
    }
    return TwistedPoly(ctx, std::move(out));
}

TwistedPoly TwistedPoly::operator-() const {
    std::vector<LaurentSeries> out;
    for (const auto& c : coeffs_) out.push_back(-c);
    return TwistedPoly(ctx_, std::move(out));
}

TwistedPoly TwistedPoly::operator-(const TwistedPoly& o) const { return *this + (-o); }

TwistedPoly TwistedPoly::operator*(const TwistedPoly& o) const { return ore_mul(*this, o); }

TwistedPoly ore_mul(const TwistedPoly& f, const TwistedPoly& g) {
    const ContextPtr& ctx = f.context() ? f.context() : g.context();
    if (f.degree() < 0 || g.degree() < 0) return TwistedPoly::zero(ctx);
    std::vector<LaurentSeries> out(static_cast<size_t>(f.degree() + g.degree() + 1),
                                   LaurentSeries::zero(ctx));
    for (int i = 0; i <= f.degree(); ++i) {
        const LaurentSeries& a = f.coeff(i);
        if (a.is_exactly_zero()) continue;
        for (int j = 0; j <= g.degree(); ++j) {
            LaurentSeries b = g.coeff(j);
            if (b.is_exactly_zero()) continue;
            for (int k = 0; k < i; ++k) b = b.frobenius_sub();
            out[static_cast<size_t>(i + j)] = out[static_cast<size_t>(i + j)] + a * b;
        }
    }
    return TwistedPoly(ctx, std::move(out));
}

LogSeries apply(const TwistedPoly& f, const LogSeries& y, long cap_hi) {
    const ContextPtr& ctx = f.context();
    LogSeries acc = LogSeries::zero(ctx);
    LogSeries yi = y;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i > 0) yi = yi.frobenius_sub();
        if (!f.coeff(i).is_exactly_zero()) acc = acc + yi.mul_series(f.coeff(i), cap_hi);
    }
    return acc;
}

TwistedPoly from_slope_factors(const ContextPtr& ctx, std::vector<Rat> slopes) {
    for (size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i] < slopes[i - 1]) throw MathError("slopes must be nondecreasing");
    TwistedPoly f = TwistedPoly::one(ctx);
    for (const Rat& s : slopes) {
        auto factor = TwistedPoly::sigma_minus(
            LaurentSeries::monomial(ctx, q_power(ctx, s), 1));
        f = f * factor;
    }
    return f;
}

NewtonPolygon newton_polygon_twisted(const TwistedPoly& f) {
    std::vector<std::pair<Rat, Rat>> pts;
    for (int i = 0; i <= f.degree(); ++i) {
        const LaurentSeries& a = f.coeff(i);
        if (a.is_exactly_zero()) continue;
        GaussExponent g = a.gauss_exponent(Rat(0));
        if (!g.has_value) {
            if (!g.certified) throw MathError("twisted polygon: coefficient norm uncertified");
            continue;
        }
        if (!g.certified) throw MathError("twisted polygon: coefficient norm uncertified");
        pts.emplace_back(Rat(i), g.e / f.context()->h());
    }
    if (pts.empty()) throw MathError("twisted polygon of zero");
    NewtonPolygon np;
    np.vertices = lower_hull(std::move(pts));
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
        Rat dx = np.vertices[i + 1].first - np.vertices[i].first;
        Rat s = (np.vertices[i + 1].second - np.vertices[i].second) / dx;
        np.slopes.emplace_back(s, dx);
    }
    return np;
}

std::vector<std::pair<Rat, Rat>> slopes_paper(const NewtonPolygon& np) {
    std::vector<std::pair<Rat, Rat>> out;
    for (auto& [s, m] : np.slopes) out.emplace_back(-s, m);
    std::sort(out.begin(), out.end());
    return out;
}

StarReport check_condition_star(const TwistedPoly& f) {
    StarReport rep;
    rep.polygon = newton_polygon_twisted(f);
    const auto& V = rep.polygon.vertices;
    auto hull_value = [&](const Rat& x) -> Rat {
        for (size_t i = 0; i + 1 < V.size(); ++i) {
            if (x >= V[i].first && x <= V[i + 1].first) {
                Rat t = (x - V[i].first) / (V[i + 1].first - V[i].first);
                return V[i].second + t * (V[i + 1].second - V[i].second);
            }
        }
        return V.front().second;  // single-vertex hull
    };
    rep.satisfied = true;
    rep.on_polygon.assign(static_cast<size_t>(f.degree() + 1), true);
    for (int i = 0; i <= f.degree(); ++i) {
        const LaurentSeries& a = f.coeff(i);
        if (a.is_exactly_zero()) continue;  // infinite points belong vacuously
        GaussExponent g = a.gauss_exponent(Rat(0));
        if (!g.has_value) continue;
        Rat y = g.e / f.context()->h();
        bool on = (y == hull_value(Rat(i)));
        rep.on_polygon[static_cast<size_t>(i)] = on;
        if (!on) rep.satisfied = false;
    }
    return rep;
}

std::string TwistedPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if (coeffs_[static_cast<size_t>(i)].is_exactly_zero()) continue;
        if (!first) os << " + ";
        os << "(" << coeffs_[static_cast<size_t>(i)].str() << ")";
        if (i == 1) os << "*s";
        if (i > 1) os << "*s^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace padlg
