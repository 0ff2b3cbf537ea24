#include "padlg/nabla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace padlg {

namespace {

void validate(const DifferentialModule& M) {
    if (!M.ctx || M.n < 1 || static_cast<int>(M.G_num.size()) != M.n)
        throw MathError("malformed differential module");
    for (const auto& row : M.G_num) {
        if (static_cast<int>(row.size()) != M.n) throw MathError("malformed differential module");
        for (const auto& e : row)
            if (!e.empty_window() && e.n_min() < 0)
                throw MathError("connection entry with a pole beyond the log order");
    }
    if (M.g_den.n_min() != 0 || !M.g_den.coeff_or_zero(0).is_certified_nonzero())
        throw MathError("connection denominator not invertible at 0");
    if (M.has_frobenius()) {
        if (static_cast<int>(M.F.size()) != M.n) throw MathError("malformed Frobenius matrix");
        for (const auto& row : M.F)
            if (static_cast<int>(row.size()) != M.n) throw MathError("malformed Frobenius matrix");
    }
}

// Exact-mode scalar p^e * u for the recursion: no interval decay, additions
// keep every modular digit and cancellation to the full working depth counts
// as zero.  The interval model would charge v_p(k!) for the 1/k divisions;
// the honest loss is the homogeneous-solution growth, budgeted at the end.
struct XS {
    bool zero = true;
    long e = 0;
    std::vector<Int> u;
};

struct XCtx {
    const PadicContext* c = nullptr;
    Int mod;
    int digits = 0;
};

void xs_norm(const XCtx& X, XS& a) {
    if (a.zero) return;
    for (auto& cc : a.u) {
        cc %= X.mod;
        if (cc < 0) cc += X.mod;
    }
    long m = X.digits;
    bool allzero = true;
    for (const auto& cc : a.u) {
        if (cc == 0) continue;
        allzero = false;
        long v = 0;
        Int t = cc;
        while (v < m && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(X.c->p()))) {
            t /= X.c->p();
            ++v;
        }
        m = std::min(m, v);
    }
    if (allzero) {
        a = XS{};
        return;
    }
    if (m > 0) {
        Int pm = X.c->p_pow(m);
        for (auto& cc : a.u) cc /= pm;
        a.e += m;
    }
}

XS xs_from(const XCtx& X, const PadicScalar& s) {
    XS r;
    if (s.is_zeroish()) return r;  // inputs are exact constructions
    r.zero = false;
    r.e = s.valuation();
    r.u = s.unit();
    xs_norm(X, r);
    return r;
}

XS xs_add(const XCtx& X, const XS& a, const XS& b) {
    if (a.zero) return b;
    if (b.zero) return a;
    long e = std::min(a.e, b.e);
    auto lift = [&](const XS& s) {
        std::vector<Int> u = s.u;
        if (s.e > e) {
            Int pm = X.c->p_pow(s.e - e);
            for (auto& cc : u) cc = cc * pm % X.mod;
        }
        return u;
    };
    XS r;
    r.zero = false;
    r.e = e;
    r.u = fq::add(*X.c, lift(a), lift(b), X.mod);
    xs_norm(X, r);
    return r;
}

XS xs_neg(const XCtx& X, const XS& a) {
    if (a.zero) return a;
    XS r = a;
    for (auto& cc : r.u)
        if (cc != 0) cc = X.mod - cc;
    return r;
}

XS xs_sub(const XCtx& X, const XS& a, const XS& b) { return xs_add(X, a, xs_neg(X, b)); }

XS xs_mul(const XCtx& X, const XS& a, const XS& b) {
    if (a.zero || b.zero) return XS{};
    XS r;
    r.zero = false;
    r.e = a.e + b.e;
    r.u = fq::mul(*X.c, a.u, b.u, X.mod);
    xs_norm(X, r);
    return r;
}

XS xs_inv(const XCtx& X, const XS& a) {
    if (a.zero) throw MathError("exact-mode division by zero");
    XS r;
    r.zero = false;
    r.e = -a.e;
    r.u = fq::inv(*X.c, a.u, X.digits);
    return r;
}

XS xs_div_int(const XCtx& X, const XS& a, long k) {
    if (a.zero) return a;
    long m = 0;
    long kk = k;
    while (kk % X.c->p() == 0) {
        kk /= X.c->p();
        ++m;
    }
    XS r;
    r.zero = false;
    r.e = a.e - m;
    r.u = fq::mul(*X.c, a.u, fq::inv(*X.c, {Int(kk)}, X.digits), X.mod);
    return r;
}

PadicScalar xs_out(const XCtx& X, const ContextPtr& ctx, const XS& a, int rel) {
    if (a.zero) return PadicScalar();
    Int pr = ctx->p_pow(rel);
    bool unit_survives = false;
    for (const auto& cc : a.u)
        if (cc % pr != 0) unit_survives = true;
    if (!unit_survives) return PadicScalar::prec_zero(ctx, a.e + rel);
    return PadicScalar::from_unit(ctx, a.e, a.u, rel);
}

// row-major n x n matrices
using XMat = std::vector<XS>;
using Mat = std::vector<PadicScalar>;

XMat xm_ident(const XCtx& X, int n) {
    XMat m(static_cast<size_t>(n) * n);
    XS one;
    one.zero = false;
    one.u = {Int(1)};
    (void)X;
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i) * n + i] = one;
    return m;
}

XMat xm_mul(const XCtx& X, int n, const XMat& a, const XMat& b) {
    XMat out(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            XS s;
            for (int l = 0; l < n; ++l)
                s = xs_add(X, s,
                           xs_mul(X, a[static_cast<size_t>(i) * n + l],
                                  b[static_cast<size_t>(l) * n + j]));
            out[static_cast<size_t>(i) * n + j] = s;
        }
    return out;
}

XMat xm_add(const XCtx& X, const XMat& a, const XMat& b) {
    XMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = xs_add(X, a[i], b[i]);
    return out;
}

XMat xm_sub(const XCtx& X, const XMat& a, const XMat& b) {
    XMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = xs_sub(X, a[i], b[i]);
    return out;
}

XMat xm_scale(const XCtx& X, const XMat& a, const XS& c) {
    XMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = xs_mul(X, a[i], c);
    return out;
}

XMat xm_div_int(const XCtx& X, const XMat& a, long k) {
    XMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = xs_div_int(X, a[i], k);
    return out;
}

bool xm_zero(const XMat& a) {
    for (const auto& x : a)
        if (!x.zero) return false;
    return true;
}

// theta-form banded system d(x) x Y' = N(x) Y; non-log equations pick up an
// extra x on the numerator so the residue A = N(0)/d(0) vanishes there
struct BandSystem {
    int n = 0;
    std::vector<XMat> N;
    std::vector<XS> d;
    XMat A;
    int nil = 1;  // A^nil is zero
};

BandSystem make_system(const XCtx& X, const DifferentialModule& M, bool functional_side) {
    int n = M.n;
    long shift = M.log_flag ? 0 : 1;
    long bandN = shift;
    for (const auto& row : M.G_num)
        for (const auto& e : row)
            if (!e.empty_window()) bandN = std::max(bandN, e.n_max() + shift);
    long bandD = M.g_den.empty_window() ? 0 : std::max(0L, M.g_den.n_max());

    BandSystem sys;
    sys.n = n;
    sys.N.assign(static_cast<size_t>(bandN) + 1, XMat(static_cast<size_t>(n) * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // functionals solve against G^T, horizontal sections against -G
            const LaurentSeries& src =
                functional_side
                    ? M.G_num[static_cast<size_t>(j)][static_cast<size_t>(i)]
                    : M.G_num[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (long m = std::max(0L, src.n_min()); m <= src.n_max() && !src.empty_window();
                 ++m) {
                XS c = xs_from(X, src.coeff_or_zero(m));
                if (!functional_side) c = xs_neg(X, c);
                sys.N[static_cast<size_t>(m + shift)][static_cast<size_t>(i) * n + j] = c;
            }
        }
    sys.d.assign(static_cast<size_t>(bandD) + 1, XS{});
    for (long m = 0; m <= bandD && !M.g_den.empty_window(); ++m)
        sys.d[static_cast<size_t>(m)] = xs_from(X, M.g_den.coeff_or_zero(m));

    sys.A = xm_scale(X, sys.N[0], xs_inv(X, sys.d[0]));
    XMat P = sys.A;
    sys.nil = 1;
    while (!xm_zero(P)) {
        if (sys.nil > n) throw MathError("log residue matrix is not nilpotent");
        P = xm_mul(X, n, P, sys.A);
        ++sys.nil;
    }
    return sys;
}

// solve d x H' = N H - d H A for H = I + O(x), then Y = H exp(A log x)
std::vector<std::vector<LogSeries>> solve_side(const DifferentialModule& M, bool functional_side,
                                               long T, int rel) {
    const ContextPtr& ctx = M.ctx;
    int n = M.n;
    XCtx X{ctx.get(), ctx->modulus_int(), ctx->precision()};
    BandSystem sys = make_system(X, M, functional_side);
    XS d0inv = xs_inv(X, sys.d[0]);

    std::vector<XMat> H(static_cast<size_t>(T) + 1, XMat(static_cast<size_t>(n) * n));
    H[0] = xm_ident(X, n);
    long band = std::max(static_cast<long>(sys.N.size()), static_cast<long>(sys.d.size())) - 1;
    for (long k = 1; k <= T; ++k) {
        XMat R(static_cast<size_t>(n) * n);
        for (long m = 1; m <= std::min(band, k); ++m) {
            const XMat& Hm = H[static_cast<size_t>(k - m)];
            if (m < static_cast<long>(sys.N.size()))
                R = xm_add(X, R, xm_mul(X, n, sys.N[static_cast<size_t>(m)], Hm));
            if (m < static_cast<long>(sys.d.size()) && !sys.d[static_cast<size_t>(m)].zero) {
                XS km;
                if (k != m) {
                    km.zero = false;
                    km.e = 0;
                    km.u = {Int(k - m)};
                    xs_norm(X, km);
                }
                XMat t = xm_add(X, xm_scale(X, Hm, km), xm_mul(X, n, Hm, sys.A));
                R = xm_sub(X, R, xm_scale(X, t, sys.d[static_cast<size_t>(m)]));
            }
        }
        // (k - ad_A)^{-1} = sum_j ad_A^j / k^{j+1}, finite by nilpotence
        XMat cur = xm_scale(X, R, d0inv);
        XMat acc = xm_div_int(X, cur, k);
        for (int j = 1; j < sys.nil; ++j) {
            // cur holds ad_A^{j-1}(X) / k^{j-1}
            cur = xm_div_int(
                X, xm_sub(X, xm_mul(X, n, sys.A, cur), xm_mul(X, n, cur, sys.A)), k);
            acc = xm_add(X, acc, xm_div_int(X, cur, k));
        }
        H[static_cast<size_t>(k)] = std::move(acc);
    }

    // exp(A log x) = sum_i A^i/i! (log x)^i, a finite nilpotent sum
    std::vector<XMat> C{xm_ident(X, n)};
    for (int i = 1; i < sys.nil; ++i)
        C.push_back(xm_div_int(X, xm_mul(X, n, C.back(), sys.A), i));

    std::vector<std::vector<LaurentSeries>> Hs(static_cast<size_t>(n),
                                               std::vector<LaurentSeries>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) {
            std::vector<PadicScalar> cs(static_cast<size_t>(T) + 1);
            for (long k = 0; k <= T; ++k)
                cs[static_cast<size_t>(k)] =
                    xs_out(X, ctx, H[static_cast<size_t>(k)][static_cast<size_t>(r) * n + l], rel);
            Hs[static_cast<size_t>(r)][static_cast<size_t>(l)] =
                LaurentSeries::from_coeffs_truncated(ctx, 0, std::move(cs));
        }

    std::vector<std::vector<LogSeries>> Y(static_cast<size_t>(n),
                                          std::vector<LogSeries>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j) {
            std::vector<LaurentSeries> comps;
            for (int i = 0; i < sys.nil; ++i) {
                LaurentSeries comp = LaurentSeries::zero(ctx);
                for (int l = 0; l < n; ++l) {
                    PadicScalar c = xs_out(
                        X, ctx, C[static_cast<size_t>(i)][static_cast<size_t>(l) * n + j], rel);
                    if (c.is_exact_zero()) continue;
                    comp = comp + Hs[static_cast<size_t>(r)][static_cast<size_t>(l)].scaled(c);
                }
                comps.push_back(std::move(comp));
            }
            Y[static_cast<size_t>(r)][static_cast<size_t>(j)] = LogSeries(std::move(comps));
        }
    return Y;
}

}  // namespace

DifferentialModule companion_from_ode(const ContextPtr& ctx, std::vector<LaurentSeries> a_num,
                                      const LaurentSeries& den) {
    int n = static_cast<int>(a_num.size());
    if (n < 1) throw MathError("empty coefficient list");
    DifferentialModule M;
    M.ctx = ctx;
    M.n = n;
    M.g_den = den;
    M.G_num.assign(static_cast<size_t>(n),
                   std::vector<LaurentSeries>(static_cast<size_t>(n), LaurentSeries::zero(ctx)));
    for (int i = 0; i + 1 < n; ++i)
        M.G_num[static_cast<size_t>(i) + 1][static_cast<size_t>(i)] = den;
    for (int i = 0; i < n; ++i)
        M.G_num[static_cast<size_t>(i)][static_cast<size_t>(n) - 1] = -a_num[static_cast<size_t>(i)];
    validate(M);
    return M;
}

DifferentialModule companion_from_ode(const ContextPtr& ctx, std::vector<LaurentSeries> a) {
    return companion_from_ode(ctx, std::move(a), LaurentSeries::one(ctx));
}

SolutionBasis solve_fundamental(const DifferentialModule& M, long T) {
    validate(M);
    if (T < 1) throw MathError("order must be positive");
    // trust radius: errors propagate like the homogeneous solutions, whose
    // growth is budgeted at n log_p T plus slack
    long p = M.ctx->p();
    long clog = 0;
    for (Int pw(1); pw < T + 1; pw *= p) ++clog;
    long budget = M.n * clog + 2;
    int rel = static_cast<int>(M.ctx->precision() - budget);
    if (rel < 1)
        throw MathError("insufficient precision for this truncation order: raise N or lower T");
    SolutionBasis out;
    out.n = M.n;
    out.T = T;
    out.S = solve_side(M, true, T, rel);
    out.W = solve_side(M, false, T, rel);
    out.digits_lost = budget;
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EstDetail {
    bool ok = false;
    std::string error;
    double lam = 0.0;
    long certified = 0;
    // location of the dominant contribution, for cancellation attempts
    int entry = -1;
    int comp = -1;
    long m = -1;
};

EstDetail estimate_column(const std::vector<LogSeries>& col, long p) {
    EstDetail out;
    double lnp = std::log(static_cast<double>(p));
    double best = -kInf;
    for (int e = 0; e < static_cast<int>(col.size()); ++e) {
        const LogSeries& y = col[static_cast<size_t>(e)];
        for (int i = 0; i <= y.degree(); ++i) {
            const LaurentSeries& f = y.component(i);
            if (f.empty_window()) continue;
            std::vector<std::pair<long, long>> pts;  // (m, v_p)
            for (long m = std::max(0L, f.n_min()); m <= f.n_max(); ++m) {
                const PadicScalar& c = f.coeff_or_zero(m);
                if (c.is_certified_nonzero()) pts.emplace_back(m, c.valuation());
            }
            if (pts.empty()) continue;
            out.certified += static_cast<long>(pts.size());
            // per-octave (base p) maxima of -v_p, then a median-of-slopes
            // fit through them in (log_p(m+1), -v_p) coordinates.  The
            // median shrugs off isolated excursions and vertical shifts
            // cancel, so the estimate is offset- and scale-invariant.
            std::vector<std::pair<double, double>> oct;  // (log_p(m+1), -v)
            {
                long k = 0;
                Int hi(p);
                bool have = false;
                double by = 0;
                // a trailing octave only partly inside the window is noise,
                // and the position within an octave is noise too
                auto complete = [&](const Int& top) { return top <= f.n_max() + 2; };
                for (auto& [m, v] : pts) {
                    while (m + 1 >= hi) {
                        if (have && complete(hi)) oct.emplace_back(static_cast<double>(k), by);
                        have = false;
                        ++k;
                        hi *= p;
                    }
                    double y = static_cast<double>(-v);
                    if (!have || y > by) {
                        have = true;
                        by = y;
                    }
                }
                if (have && complete(hi)) oct.emplace_back(static_cast<double>(k), by);
            }
            double lamc = 0.0;
            if (oct.size() >= 2) {
                std::vector<double> slopes;
                for (size_t s = 0; s < oct.size(); ++s)
                    for (size_t t = s + 1; t < oct.size(); ++t)
                        slopes.push_back((oct[t].second - oct[s].second) /
                                         (oct[t].first - oct[s].first));
                std::sort(slopes.begin(), slopes.end());
                size_t h = slopes.size() / 2;
                double med = (slopes.size() % 2) ? slopes[h] : (slopes[h - 1] + slopes[h]) / 2;
                lamc = std::max(med, 0.0);
            }
            // deepest certified dip, the target for cancellation sweeps
            long spike = pts.front().first;
            long deep = pts.front().second;
            for (auto& [m, v] : pts)
                if (v < deep || (v == deep && m > spike)) {
                    deep = v;
                    spike = m;
                }
            double contrib = lamc + i;
            if (contrib > best) {
                best = contrib;
                out.entry = e;
                out.comp = i;
                out.m = spike;
            }
        }
    }
    if (out.certified == 0) {
        out.error = "no certified coefficients in the column";
        return out;
    }
    out.lam = std::max(best, 0.0);
    out.ok = true;
    return out;
}

Rat snap_rational(double lam, int D) {
    Rat best(0);
    double bd = kInf;
    for (int den = 1; den <= D; ++den) {
        long num = std::llround(lam * den);
        if (num < 0) num = 0;
        Rat cand(num, den);
        cand.canonicalize();
        double d = std::abs(lam - mpq_get_d(cand.get_mpq_t()));
        if (d < bd - 1e-12) {
            bd = d;
            best = cand;
        }
    }
    return best;
}

}  // namespace

GrowthEstimate coefficient_growth_estimate(const LogSeries& y, int D) {
    GrowthEstimate g;
    EstDetail d = estimate_column({y}, y.context() ? y.context()->p() : 2);
    g.ok = d.ok;
    g.error = d.error;
    g.lambda_hat = d.lam;
    g.certified = d.certified;
    if (d.ok) g.snapped = snap_rational(d.lam, D);
    return g;
}

FiltrationReport special_filtration(const DifferentialModule& M, long T,
                                    const FiltrationConfig& cfg) {
    SolutionBasis basis = solve_fundamental(M, T);
    int n = M.n;
    long p = M.ctx->p();

    std::vector<std::vector<LogSeries>> cols(static_cast<size_t>(n));
    std::vector<EstDetail> ests(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            cols[static_cast<size_t>(j)].push_back(
                basis.S[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        ests[static_cast<size_t>(j)] = estimate_column(cols[static_cast<size_t>(j)], p);
        if (!ests[static_cast<size_t>(j)].ok)
            throw MathError("growth estimate failed: " + ests[static_cast<size_t>(j)].error);
    }

    std::vector<int> order(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) order[static_cast<size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return ests[static_cast<size_t>(a)].lam < ests[static_cast<size_t>(b)].lam;
    });

    // greedy echelon sweep: peel off matches against already-kept columns at
    // the dominant spike; accept only when the estimate actually drops
    std::vector<int> kept;
    for (int j : order) {
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            bool improved = false;
            for (int k : kept) {
                const EstDetail& d = ests[static_cast<size_t>(j)];
                if (d.entry < 0) continue;
                PadicScalar a = cols[static_cast<size_t>(k)][static_cast<size_t>(d.entry)]
                                    .component(d.comp)
                                    .coeff_or_zero(d.m);
                PadicScalar b = cols[static_cast<size_t>(j)][static_cast<size_t>(d.entry)]
                                    .component(d.comp)
                                    .coeff_or_zero(d.m);
                if (!a.is_certified_nonzero() || !b.is_certified_nonzero()) continue;
                PadicScalar c = b.div(a);
                std::vector<LogSeries> trial;
                for (int i = 0; i < n; ++i)
                    trial.push_back(cols[static_cast<size_t>(j)][static_cast<size_t>(i)] -
                                    cols[static_cast<size_t>(k)][static_cast<size_t>(i)].scaled(c));
                EstDetail te = estimate_column(trial, p);
                if (te.ok && te.lam < d.lam - 0.05) {
                    cols[static_cast<size_t>(j)] = std::move(trial);
                    ests[static_cast<size_t>(j)] = te;
                    improved = true;
                }
            }
            if (!improved) break;
        }
        kept.push_back(j);
    }

    std::vector<std::pair<double, Rat>> found;
    for (int j = 0; j < n; ++j)
        found.emplace_back(ests[static_cast<size_t>(j)].lam,
                           snap_rational(ests[static_cast<size_t>(j)].lam, cfg.D));
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    FiltrationReport rep;
    for (auto& [raw, snapped] : found) {
        rep.raw.push_back(raw);
        if (!rep.breaks.empty() && rep.breaks.back().first == snapped)
            ++rep.breaks.back().second;
        else
            rep.breaks.emplace_back(snapped, 1);
    }
    for (size_t i = 0; i < found.size(); ++i)
        for (size_t j = i + 1; j < found.size(); ++j)
            if (std::abs(found[i].first - found[j].first) <= cfg.tau &&
                found[i].second != found[j].second)
                rep.ambiguous = true;
    return rep;
}

namespace {

PadicScalar principal_minor_det(const Mat& A, int n, const std::vector<int>& idx) {
    int k = static_cast<int>(idx.size());
    if (k == 0) throw MathError("empty minor");
    if (k == 1) return A[static_cast<size_t>(idx[0]) * n + idx[0]];
    PadicScalar det;
    std::vector<int> sub(idx.begin() + 1, idx.end());
    for (int c = 0; c < k; ++c) {
        std::vector<int> colsub;
        for (int cc = 0; cc < k; ++cc)
            if (cc != c) colsub.push_back(idx[static_cast<size_t>(cc)]);
        // expand along the first row of the minor
        PadicScalar piv = A[static_cast<size_t>(idx[0]) * n + idx[static_cast<size_t>(c)]];
        if (piv.is_exact_zero()) continue;
        std::vector<PadicScalar> block;
        for (int r : sub)
            for (int cc : colsub) block.push_back(A[static_cast<size_t>(r) * n + cc]);
        std::vector<int> full(static_cast<size_t>(k) - 1);
        for (int t = 0; t < k - 1; ++t) full[static_cast<size_t>(t)] = t;
        PadicScalar d = principal_minor_det(block, k - 1, full);
        PadicScalar term = piv * d;
        det = (c % 2 == 0) ? det + term : det - term;
    }
    return det;
}

}  // namespace

std::vector<Rat> special_frobenius_slopes(const DifferentialModule& M, long T) {
    validate(M);
    if (!M.has_frobenius()) throw MathError("no Frobenius matrix on this module");
    SolutionBasis basis = solve_fundamental(M, T);
    const ContextPtr& ctx = M.ctx;
    int n = M.n;
    long cap = T;

    std::vector<std::vector<LogSeries>> FsW(static_cast<size_t>(n),
                                            std::vector<LogSeries>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            LogSeries acc = LogSeries::zero(ctx);
            for (int l = 0; l < n; ++l)
                acc = acc +
                      basis.W[static_cast<size_t>(l)][static_cast<size_t>(j)]
                          .frobenius_sub()
                          .mul_series(M.F[static_cast<size_t>(i)][static_cast<size_t>(l)], cap);
            FsW[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(acc);
        }

    // Phi = W^{-1} F sigma(W) is constant; W starts at the identity, so Phi
    // is the (x^0, log^0) part of F sigma(W)
    Mat Phi(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Phi[static_cast<size_t>(i) * n + j] =
                FsW[static_cast<size_t>(i)][static_cast<size_t>(j)].component(0).coeff_or_zero(0);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            LogSeries r = FsW[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (int l = 0; l < n; ++l)
                r = r - basis.W[static_cast<size_t>(i)][static_cast<size_t>(l)].scaled(
                            Phi[static_cast<size_t>(l) * n + j]);
            for (const auto& comp : r.components())
                for (long m = comp.n_min(); m <= comp.n_max() && !comp.empty_window(); ++m)
                    if (!comp.coeff_or_zero(m).is_zeroish())
                        throw MathError("Frobenius matrix is not constant on the horizontal basis");
        }

    // char poly via sums of principal minors; no divisions
    std::vector<PadicScalar> b(static_cast<size_t>(n) + 1);
    b[static_cast<size_t>(n)] = PadicScalar::one(ctx);
    for (int k = 1; k <= n; ++k) {
        PadicScalar ek;
        std::vector<int> idx(static_cast<size_t>(k));
        for (int t = 0; t < k; ++t) idx[static_cast<size_t>(t)] = t;
        while (true) {
            ek = ek + principal_minor_det(Phi, n, idx);
            int t = k - 1;
            while (t >= 0 && idx[static_cast<size_t>(t)] == n - k + t) --t;
            if (t < 0) break;
            ++idx[static_cast<size_t>(t)];
            for (int u = t + 1; u < k; ++u)
                idx[static_cast<size_t>(u)] = idx[static_cast<size_t>(u - 1)] + 1;
        }
        b[static_cast<size_t>(n - k)] = (k % 2 == 0) ? ek : -ek;
    }
    if (!b[0].is_certified_nonzero()) throw MathError("Frobenius action is singular at precision");

    std::vector<std::pair<Rat, Rat>> pts;
    for (int i = 0; i <= n; ++i)
        if (b[static_cast<size_t>(i)].is_certified_nonzero())
            pts.emplace_back(Rat(i), Rat(b[static_cast<size_t>(i)].valuation()));
    auto hull = lower_hull(std::move(pts));
    std::vector<Rat> slopes;
    for (size_t v = 0; v + 1 < hull.size(); ++v) {
        Rat dx = hull[v + 1].first - hull[v].first;
        Rat sl = -(hull[v + 1].second - hull[v].second) / dx;  // root valuations
        sl /= ctx->h();                                        // q-units
        long mult = mpz_get_si(Rat(dx).get_num().get_mpz_t());
        for (long t = 0; t < mult; ++t) slopes.push_back(sl);
    }
    if (static_cast<int>(slopes.size()) != n) throw MathError("slope count mismatch");
    std::sort(slopes.begin(), slopes.end());
    return slopes;
}

bool check_frobenius_compatibility(const DifferentialModule& M, long T) {
    validate(M);
    if (!M.has_frobenius()) throw MathError("no Frobenius matrix on this module");
    const ContextPtr& ctx = M.ctx;
    int n = M.n;
    long q = mpz_get_si(ctx->q().get_mpz_t());
    PadicScalar qs = PadicScalar::from_integer(ctx, ctx->q());
    LaurentSeries sden = M.g_den.frobenius_sub();
    LaurentSeries dd = M.g_den.mul(sden, T);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // d sigma(d) DF + sigma(d) (G_num F) - q x^{q-1}|1 d (F sigma(G_num)) = 0
            const LaurentSeries& Fij = M.F[static_cast<size_t>(i)][static_cast<size_t>(j)];
            LaurentSeries lhs = dd.mul(M.log_flag ? Fij.theta() : Fij.derivative(), T);
            LaurentSeries gf = LaurentSeries::zero(ctx);
            LaurentSeries fg = LaurentSeries::zero(ctx);
            for (int l = 0; l < n; ++l) {
                gf = gf + M.G_num[static_cast<size_t>(i)][static_cast<size_t>(l)].mul(
                              M.F[static_cast<size_t>(l)][static_cast<size_t>(j)], T);
                fg = fg +
                     M.F[static_cast<size_t>(i)][static_cast<size_t>(l)].mul(
                         M.G_num[static_cast<size_t>(l)][static_cast<size_t>(j)].frobenius_sub(),
                         T);
            }
            LaurentSeries rhs = fg.scaled(qs).mul(M.g_den, T);
            if (!M.log_flag) rhs = rhs.shifted(q - 1).clipped(0, T);
            LaurentSeries res = lhs + gf.mul(sden, T) - rhs;
            res = res.clipped(0, T);
            for (long m = res.n_min(); m <= res.n_max() && !res.empty_window(); ++m)
                if (!res.coeff_or_zero(m).is_zeroish()) return false;
        }
    return true;
}

FiltrationReport compare_main_theorem(const DifferentialModule& M, long T,
                                      const FiltrationConfig& cfg) {
    FiltrationReport rep = special_filtration(M, T, cfg);
    long Tf = std::min<long>(T, 512);
    std::vector<Rat> special = special_frobenius_slopes(M, Tf);

    MatrixSigmaModule S{M.ctx, M.F};
    NewtonPolygon np = generic_np_from_matrix(S);
    if (np.slopes.empty()) throw MathError("empty generic polygon");
    Rat lmax = np.slopes.front().first;
    for (const auto& [s, mult] : np.slopes) lmax = std::max(lmax, s);
    rep.lambda_max = lmax;

    int n = M.n;
    int used = 0;
    for (const auto& [lam, mult] : rep.breaks) {
        used += mult;
        ComparisonRow row;
        row.lambda = lam;
        row.dim_log_growth = n - used;
        int ge = 0;
        for (const Rat& s : special)
            if (s >= lmax - lam) ++ge;
        row.dim_orth = n - ge;
        row.equal = row.dim_log_growth == row.dim_orth;
        row.contained = row.dim_log_growth <= row.dim_orth;
        rep.comparison.push_back(row);
    }
    return rep;
}

std::vector<long> hasse_polynomial(long p) {
    if (p < 3 || p % 2 == 0) throw MathError("odd prime required");
    long g = (p - 1) / 2;
    std::vector<long> out(static_cast<size_t>(g) + 1);
    Int b;
    for (long i = 0; i <= g; ++i) {
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(g), static_cast<unsigned long>(i));
        Int r = b * b % p;
        out[static_cast<size_t>(i)] = mpz_get_si(r.get_mpz_t());
    }
    return out;
}

long legendre_trace(long p, long lambda) {
    long lam = ((lambda % p) + p) % p;
    if (lam == 0 || lam == 1) throw MathError("degenerate Legendre parameter");
    long sum = 0;
    for (long x = 0; x < p; ++x) {
        long f = x * ((x - 1 + p) % p) % p * ((x - lam + p) % p) % p;
        if (f == 0) continue;
        long acc = 1, base = f, e = (p - 1) / 2;  // Euler criterion
        while (e) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        sum += (acc == 1) ? 1 : -1;
    }
    return -sum;
}

bool legendre_is_ordinary(long p, long lambda) {
    std::vector<long> H = hasse_polynomial(p);
    long lam = ((lambda % p) + p) % p;
    long hv = 0;
    for (size_t i = H.size(); i-- > 0;) hv = (hv * lam + H[i]) % p;
    bool ord = hv != 0;
    long a = legendre_trace(p, lambda);
    if (ord != (((a % p) + p) % p != 0))
        throw MathError("Hasse polynomial disagrees with the point count");
    return ord;
}

PadicScalar unit_root_of_trace(const ContextPtr& ctx, long a) {
    long p = ctx->p();
    if (((a % p) + p) % p == 0) throw MathError("trace is not a unit, no unit root");
    Int mod = ctx->modulus_int();
    Int u(((a % p) + p) % p);
    for (int it = 0; it < ctx->precision() + 2; ++it) {
        Int f = (u * u - a * u + p) % mod;
        if (f == 0) break;
        Int fp = (2 * u - a) % mod;
        Int inv;
        if (!mpz_invert(inv.get_mpz_t(), fp.get_mpz_t(), mod.get_mpz_t()))
            throw MathError("Newton step not invertible");
        u = (u - f * inv) % mod;
        if (u < 0) u += mod;
    }
    return PadicScalar::from_integer(ctx, u);
}

DifferentialModule hypergeometric_companion(const ContextPtr& ctx, const PadicScalar& a) {
    PadicScalar one = PadicScalar::one(ctx);
    PadicScalar c0 = a * (one - a);  // a(1-a), the denominator at the centre
    if (!c0.is_certified_nonzero() || c0.valuation() != 0)
        throw MathError("centre reduces to 0 or 1");
    PadicScalar c1 = one - a - a;  // 1 - 2a
    LaurentSeries den = LaurentSeries::from_coeffs(ctx, 0, {c0, c1, -one});
    LaurentSeries a1 = LaurentSeries::from_coeffs(ctx, 0, {c1, -(one + one)});
    LaurentSeries a0 =
        LaurentSeries::constant(ctx, PadicScalar::from_rational(ctx, Int(-1), Int(4)));
    return companion_from_ode(ctx, {a0, a1}, den);
}

void attach_diagonal_frobenius(DifferentialModule& M, const std::vector<PadicScalar>& phi0,
                               long cap) {
    validate(M);
    if (static_cast<int>(phi0.size()) != M.n) throw MathError("diagonal size mismatch");
    SolutionBasis b = solve_fundamental(M, cap);
    int n = M.n;
    M.F.assign(static_cast<size_t>(n),
               std::vector<LaurentSeries>(static_cast<size_t>(n), LaurentSeries::zero(M.ctx)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            LogSeries acc = LogSeries::zero(M.ctx);
            for (int l = 0; l < n; ++l)
                acc = acc + b.W[static_cast<size_t>(i)][static_cast<size_t>(l)]
                                .scaled(phi0[static_cast<size_t>(l)])
                                .mul(b.S[static_cast<size_t>(j)][static_cast<size_t>(l)]
                                         .frobenius_sub(),
                                     cap);
            for (int d = 1; d <= acc.degree(); ++d) {
                const LaurentSeries& comp = acc.component(d);
                for (long m = comp.n_min(); m <= comp.n_max() && !comp.empty_window(); ++m)
                    if (!comp.coeff_or_zero(m).is_zeroish())
                        throw MathError("Frobenius structure keeps a log term");
            }
            M.F[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                acc.component(0).clipped(0, cap);
        }
}

}  // namespace padlg
