#include "padlg/frobeq.hpp"

#include <cmath>
#include <limits>

namespace padlg {

namespace {
PadicScalar const_term(const LaurentSeries& f) { return f.coeff_or_zero(0); }

bool floors_nonnegative(const TwistedPoly& f, const LaurentSeries* forcing) {
    for (int i = 1; i <= f.degree(); ++i) {
        auto fl = f.coeff(i).global_floor();
        if (!fl || *fl < 0) return false;
    }
    if (forcing) {
        auto fl = forcing->global_floor();
        if (!fl || *fl < 0) return false;
    }
    return true;
}
}  // namespace

FixedPointResult solve_fixed_point(const TwistedPoly& f, const PadicScalar& seed, long T,
                                   const LaurentSeries* forcing) {
    FixedPointResult res;
    const ContextPtr& ctx = f.context();
    int n = f.degree();
    if (n < 1 || T < 1) {
        res.error = "degenerate equation";
        return res;
    }
    const LaurentSeries& a0 = f.coeff(0);
    auto g0 = a0.gauss_exponent(Rat(0));
    // |a_0|_1 must be attained at the constant term so that inversion is a
    // regular power-series recursion with controlled norm (unit a_0 is the
    // clean case; a q-power times a unit still contracts x-adically)
    if (a0.n_min() < 0 || !g0.has_value || !g0.certified ||
        !a0.coeff_or_zero(0).is_certified_nonzero() ||
        Rat(a0.coeff_or_zero(0).valuation()) != g0.e) {
        res.error = "a_0 is not invertible as a power series at its own norm";
        return res;
    }
    for (int i = 1; i <= n; ++i)
        if (!f.coeff(i).empty_window() && f.coeff(i).n_min() < 0) {
            res.error = "coefficient with negative exponents: not contracting";
            return res;
        }
    if (forcing && forcing->n_min() < 0) {
        res.error = "forcing with negative exponents";
        return res;
    }

    // x^0 constraint: (sum_i a_i(0)) seed + g(0) = 0
    PadicScalar c = forcing ? const_term(*forcing) : PadicScalar();
    for (int i = 0; i <= n; ++i) c = c + const_term(f.coeff(i)) * seed;
    res.constraint_ok = c.is_zeroish();
    if (!res.constraint_ok) {
        res.error = "seed violates the x^0 constraint";
        return res;
    }

    LaurentSeries a0inv = a0.invert_regular(T);
    long q = mpz_get_si(ctx->q().get_mpz_t());
    int iters = 2;
    for (long reach = 1; reach < T; reach *= q) ++iters;

    LaurentSeries y = LaurentSeries::constant(ctx, seed);
    for (int it = 0; it < iters + 4; ++it) {
        LaurentSeries z = forcing ? *forcing : LaurentSeries::zero(ctx);
        LaurentSeries sig = y;
        for (int i = 1; i <= n; ++i) {
            sig = sig.frobenius_sub().clipped(0, T);
            if (!f.coeff(i).is_exactly_zero()) z = z + f.coeff(i).mul(sig, T);
        }
        LaurentSeries next = -a0inv.mul(z, T);
        bool stable = (next - y).is_zeroish();
        y = std::move(next);
        if (stable && it >= iters) break;
    }
    y = y.clipped(0, T);
    if (a0inv.floor() && *a0inv.floor() >= 0 && floors_nonnegative(f, forcing))
        y.declare_floor_from_window();
    res.y = LogSeries(std::move(y));
    res.ok = true;
    return res;
}

bool verify_solution(const TwistedPoly& f, const LogSeries& y, long T) {
    LogSeries r = apply(f, y, T);
    for (const auto& comp : r.components())
        for (long m = comp.n_min(); m <= comp.n_max() && m < T; ++m)
            if (!comp.coeff(m).is_zeroish()) return false;
    return true;
}

LadderProfile ladder_profile(const LogSeries& y, const Rat& r0, int M) {
    LadderProfile prof;
    prof.r0 = r0;
    prof.depth = M;
    const ContextPtr& ctx = y.context();
    if (!ctx) {
        prof.truncated = true;
        prof.diagnostic = "zero input";
        return prof;
    }
    int h = ctx->h();
    Int qm(1);
    for (int m = 0; m <= M; ++m) {
        Rat r = r0 / Rat(qm);
        LogNormExponent e = log_norm_exponent(y, r);
        if (!e.has_value) {
            prof.truncated = true;
            prof.diagnostic = "no certified nonzero coefficient at depth " + std::to_string(m);
            return prof;
        }
        if (!e.certified) {
            prof.truncated = true;
            prof.diagnostic = "norm not certified at depth " + std::to_string(m) +
                              " (window too small for this radius)";
            return prof;
        }
        prof.entries.push_back({m, r, -e.value / h, true});
        qm *= ctx->q();
    }
    return prof;
}

namespace {
double lsq_slope(const std::vector<std::pair<double, double>>& pts) {
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

LogGrowthReport classify_log_growth(const TwistedPoly& f, const LogSeries& y,
                                    const ClassifyConfig& cfg) {
    StarReport star = check_condition_star(f);
    if (!star.satisfied) throw MathError("classification requires condition (*)");
    if (y.is_zeroish()) throw MathError("classification of the zero solution");
    const ContextPtr& ctx = f.context();
    int h = ctx->h();
    int n = f.degree();

    LogGrowthReport rep;
    const auto& vx = star.polygon.vertices;
    std::vector<long> lambda;  // vertex x-coordinates, ascending
    for (const auto& [x, yy] : vx) {
        if (x.get_den() != 1) throw MathError("non-integral polygon vertex");
        lambda.push_back(mpz_get_si(x.get_num().get_mpz_t()));
    }
    int k = static_cast<int>(vx.size()) - 1;
    if (k < 1) throw MathError("empty Newton polygon");
    for (int j = 0; j < k; ++j) {
        Rat s = -(vx[static_cast<size_t>(j + 1)].second - vx[static_cast<size_t>(j)].second) /
                (vx[static_cast<size_t>(j + 1)].first - vx[static_cast<size_t>(j)].first);
        rep.slopes.push_back(s);  // s_1 > s_2 > ... > s_k
    }

    rep.evidence = ladder_profile(y, cfg.r0, cfg.M);
    const auto& entries = rep.evidence.entries;
    if (entries.size() < 2) throw MathError("ladder too short to estimate");

    size_t W = static_cast<size_t>(std::max(4, cfg.M / 3));
    if (W > entries.size()) W = entries.size();
    std::vector<std::pair<double, double>> pts;
    for (size_t i = entries.size() - W; i < entries.size(); ++i)
        pts.emplace_back(static_cast<double>(entries[i].m), entries[i].exponent);
    rep.lambda_hat = lsq_slope(pts);

    // snap into {0} u {s_j > 0} within tau, denominators capped at D
    std::vector<Rat> candidates{Rat(0)};
    for (const Rat& s : rep.slopes)
        if (s > 0 && s.get_den() <= cfg.D) candidates.push_back(s);
    double best = cfg.tau;
    bool snapped = false;
    for (const Rat& cand : candidates) {
        double d = std::abs(rep.lambda_hat - mpq_get_d(cand.get_mpq_t()));
        if (d <= best) {
            best = d;
            rep.snapped = cand;
            snapped = true;
        }
    }
    rep.kind = !snapped ? GrowthKind::Unclassified
                        : (rep.snapped == 0 ? GrowthKind::Bounded : GrowthKind::ExactlyLogGrowth);

    // conditions C_j on the ladder grid: on exponents, sup-norm comparisons
    // become min comparisons of w_i = e(a_i, r) + lognorm(sigma^i y, r)
    std::vector<LogSeries> sig{y};
    for (int i = 1; i <= n; ++i) sig.push_back(sig.back().frobenius_sub());
    std::vector<std::vector<double>> w(entries.size(),
                                       std::vector<double>(static_cast<size_t>(n + 1), kInf));
    for (size_t t = 0; t < entries.size(); ++t) {
        const Rat& r = entries[t].r;
        for (int i = 0; i <= n; ++i) {
            const LaurentSeries& ai = f.coeff(i);
            if (ai.is_exactly_zero()) continue;
            GaussExponent ga = ai.gauss_exponent(r);
            LogNormExponent gy = log_norm_exponent(sig[static_cast<size_t>(i)], r);
            if (!ga.has_value || !gy.has_value) continue;
            w[t][static_cast<size_t>(i)] = mpq_get_d(ga.e.get_mpq_t()) + gy.value;
        }
    }
    auto seg_min = [&](size_t t, long lo, long hi) {
        double m = kInf;
        for (long i = std::max(lo, 0L); i <= std::min<long>(hi, n); ++i)
            m = std::min(m, w[t][static_cast<size_t>(i)]);
        return m;
    };
    rep.least_failing_j = k - 1;
    for (int j = 0; j + 1 < k; ++j) {
        ConditionAudit a;
        a.j = j;
        a.holds = true;
        for (size_t t = 0; t < entries.size(); ++t) {
            // sup_S <= sup_T on norms <=> min_S >= min_T on exponents
            if (seg_min(t, lambda[static_cast<size_t>(j)], lambda[static_cast<size_t>(j + 1)]) <
                seg_min(t, lambda[static_cast<size_t>(j + 1)] + 1, n)) {
                a.holds = false;
                a.first_failing_m = entries[t].m;
                break;
            }
        }
        rep.audit.push_back(a);
        if (!a.holds && rep.least_failing_j == k - 1) rep.least_failing_j = j;
    }
    rep.audit_slope = rep.slopes[static_cast<size_t>(rep.least_failing_j)];

    double s = mpq_get_d(rep.audit_slope.get_mpq_t());
    if (s < 0) s = 0;
    rep.B = -kInf;
    rep.Bprime = -kInf;
    for (const auto& e : entries) {
        double drift = e.exponent - entries.front().exponent -
                       static_cast<double>(e.m - entries.front().m) * s;
        rep.B = std::max(rep.B, drift);
        rep.Bprime = std::max(rep.Bprime, -drift);
    }
    return rep;
}

}  // namespace padlg
