#ifndef PADLG_NEWTON_HPP
#define PADLG_NEWTON_HPP

#include <optional>
#include <utility>
#include <vector>

#include "padlg/series.hpp"

namespace padlg {

/// Lower convex hull data.  `vertices` runs left to right; `slopes` lists
/// (slope, multiplicity) pairs, strictly increasing in slope.  What the
/// multiplicity measures (x- or y-extent) is chosen by the producer.
struct NewtonPolygon {
    std::vector<std::pair<Rat, Rat>> vertices;
    std::vector<std::pair<Rat, Rat>> slopes;
    bool has_slopes() const { return !slopes.empty(); }
};

/// vertices of the lower convex hull (duplicate x keeps the lowest y)
std::vector<std::pair<Rat, Rat>> lower_hull(std::vector<std::pair<Rat, Rat>> pts);

/// v_n(f) = min{ m : v_p(a_m) <= n }, or nullopt for +infinity.
/// Throws when the answer cannot be certified at the carrier's precision.
std::optional<long> partial_valuation(const LaurentSeries& f, long n);

/// w_r(f) = min_n (r v_n(f) + n); checked against the Gauss exponent.
std::optional<Rat> weighted_valuation(const LaurentSeries& f, const Rat& r);

/// Newton polygon of a ring element at radius p^(-r): lower hull of
/// {(v_n(f), n)}, minus segments of slope < -r at the left end and of
/// non-negative slope at the right end.  `slopes` holds the slopes *of f*
/// (negated hull slopes, each in (0, r]); multiplicity is the y-extent.
NewtonPolygon newton_polygon_ring(const LaurentSeries& f, const Rat& r);

/// |f|_rho = rho^a |f|_1 for rho in (rho_0, 1]; rho_0 = p^(-r0), with
/// rho_0 = 0 (dominance on the whole open disc) when r0_finite is false.
struct EventualExponent {
    Rat a;
    bool r0_finite = false;
    Rat r0;
};
EventualExponent eventual_exponent(const LaurentSeries& f);

}  // namespace padlg

#endif
