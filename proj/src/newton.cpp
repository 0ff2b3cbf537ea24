#include "padlg/newton.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace padlg {

std::vector<std::pair<Rat, Rat>> lower_hull(std::vector<std::pair<Rat, Rat>> pts) {
    std::map<Rat, Rat> best;  // x -> min y
    for (auto& [x, y] : pts) {
        auto it = best.find(x);
        if (it == best.end() || y < it->second) best[x] = y;
    }
    std::vector<std::pair<Rat, Rat>> hull;
    for (auto& [x, y] : best) {
        while (hull.size() >= 2) {
            auto& [x1, y1] = hull[hull.size() - 2];
            auto& [x2, y2] = hull[hull.size() - 1];
            // keep (x2,y2) only if it turns strictly upward: cross > 0
            Rat cross = (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1);
            if (cross > 0) break;
            hull.pop_back();
        }
        hull.emplace_back(x, y);
    }
    return hull;
}

std::optional<long> partial_valuation(const LaurentSeries& f, long n) {
    bool left_ok = f.exact_below() || (f.floor() && *f.floor() > n) ||
                   (f.left_tail_floor() && *f.left_tail_floor() > n);
    if (!left_ok)
        throw MathError("partial valuation: left tail not certified at this level");
    for (long m = f.n_min(); m <= f.n_max(); ++m) {
        const PadicScalar& c = f.coeff(m);
        if (c.is_certified_nonzero()) {
            if (c.valuation() <= n) return m;
            continue;
        }
        if (c.is_exact_zero()) continue;
        if (c.valuation_lower_bound() <= n)
            throw MathError("partial valuation: coefficient indeterminate at this level");
    }
    if (f.exact_above() || (f.floor() && *f.floor() > n)) return std::nullopt;
    throw MathError("partial valuation: right tail not certified at this level");
}

namespace {
// distinct certified coefficient valuations, ascending; throws if a
// zero-at-precision coefficient could hide a smaller valuation
std::vector<long> valuation_levels(const LaurentSeries& f) {
    std::set<long> levels;
    for (long m = f.n_min(); m <= f.n_max(); ++m) {
        const PadicScalar& c = f.coeff(m);
        if (c.is_certified_nonzero()) levels.insert(c.valuation());
    }
    return {levels.begin(), levels.end()};
}
}  // namespace

std::optional<Rat> weighted_valuation(const LaurentSeries& f, const Rat& r) {
    if (r < 0) throw MathError("weighted valuation needs r >= 0");
    auto levels = valuation_levels(f);
    if (levels.empty()) {
        for (long m = f.n_min(); m <= f.n_max(); ++m)
            if (f.coeff(m).is_prec_zero())
                throw MathError("weighted valuation indeterminate at this precision");
    }
    std::optional<Rat> w;
    for (long n : levels) {
        auto v = partial_valuation(f, n);
        if (!v) continue;
        Rat cand = r * Rat(*v) + Rat(n);
        if (!w || cand < *w) w = cand;
    }
    // the exchange identity min_n (r v_n + n) = min_m (v_p(a_m) + r m)
    GaussExponent g = f.gauss_exponent(r);
    if (w && g.has_value && *w != g.e)
        throw MathError("internal: weighted valuation disagrees with Gauss exponent");
    if (static_cast<bool>(w) != g.has_value)
        throw MathError("internal: weighted valuation disagrees with Gauss exponent");
    return w;
}

NewtonPolygon newton_polygon_ring(const LaurentSeries& f, const Rat& r) {
    if (r <= 0) throw MathError("ring Newton polygon needs r > 0");
    auto levels = valuation_levels(f);
    if (levels.empty()) throw MathError("Newton polygon of zero");
    std::vector<std::pair<Rat, Rat>> pts;
    for (long n : levels) {
        auto v = partial_valuation(f, n);
        if (v) pts.emplace_back(Rat(*v), Rat(n));
    }
    auto hull = lower_hull(std::move(pts));
    // segments, left to right; slopes are negative (y falls as x grows)
    size_t lo = 0, hi = hull.empty() ? 0 : hull.size() - 1;
    auto seg_slope = [&](size_t i) -> Rat {
        return (hull[i + 1].second - hull[i].second) / (hull[i + 1].first - hull[i].first);
    };
    while (lo < hi && seg_slope(lo) < -r) ++lo;           // left cut: slope < -r
    while (hi > lo && seg_slope(hi - 1) >= 0) --hi;       // right cut: slope >= 0
    NewtonPolygon np;
    for (size_t i = lo; i <= hi && i < hull.size(); ++i) np.vertices.push_back(hull[i]);
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
        Rat s = -(np.vertices[i + 1].second - np.vertices[i].second) /
                (np.vertices[i + 1].first - np.vertices[i].first);
        Rat mult = np.vertices[i].second - np.vertices[i + 1].second;
        np.slopes.emplace_back(s, mult);
    }
    std::sort(np.slopes.begin(), np.slopes.end());
    return np;
}

EventualExponent eventual_exponent(const LaurentSeries& f) {
    if (!f.exact_below()) throw MathError("eventual exponent: left tail not certified");
    long vmin = 0;
    bool found = false;
    for (long m = f.n_min(); m <= f.n_max(); ++m) {
        const PadicScalar& c = f.coeff(m);
        if (c.is_certified_nonzero() && (!found || c.valuation() < vmin)) {
            vmin = c.valuation();
            found = true;
        }
    }
    if (!found) throw MathError("eventual exponent of zero");
    for (long m = f.n_min(); m <= f.n_max(); ++m) {
        const PadicScalar& c = f.coeff(m);
        if (c.is_prec_zero() && c.valuation_lower_bound() <= vmin)
            throw MathError("eventual exponent: uncertified dominance");
    }
    if (!f.exact_above() && !(f.floor() && *f.floor() >= vmin))
        throw MathError("eventual exponent: right tail not certified");
    long a = 0;
    for (long m = f.n_min(); m <= f.n_max(); ++m) {
        const PadicScalar& c = f.coeff(m);
        if (c.is_certified_nonzero() && c.valuation() == vmin) {
            a = m;
            break;
        }
    }
    EventualExponent out;
    out.a = Rat(a);
    // dominance of the term (a, vmin) against each lower-degree term fails
    // first at r = (v' - vmin)/(a - m); higher-degree terms never tie on r > 0
    for (long m = f.n_min(); m < a; ++m) {
        const PadicScalar& c = f.coeff(m);
        if (!c.is_certified_nonzero()) continue;
        Rat tie = Rat(c.valuation() - vmin) / Rat(a - m);
        if (!out.r0_finite || tie < out.r0) {
            out.r0_finite = true;
            out.r0 = tie;
        }
    }
    return out;
}

}  // namespace padlg
