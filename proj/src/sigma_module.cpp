#include "padlg/sigma_module.hpp"

#include <random>

namespace padlg {

namespace {
LaurentSeries sigma_of(const DiagonalSigmaModule& M, const LaurentSeries& f) {
    return M.ring == BaseRing::Constants ? f : f.frobenius_sub();
}

bool certified_nonzero(const LaurentSeries& f) {
    for (long n = f.n_min(); n <= f.n_max(); ++n)
        if (f.coeff(n).is_certified_nonzero()) return true;
    return false;
}
}  // namespace

std::vector<LaurentSeries> phi_apply(const DiagonalSigmaModule& M,
                                     const std::vector<LaurentSeries>& w, long cap_hi) {
    std::vector<LaurentSeries> out;
    out.reserve(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        LaurentSeries t = sigma_of(M, w[i]).scaled(q_power(M.ctx, M.slopes[i]));
        // clip only the top: losing the exact lower tail would poison every
        // later product, and the bottom grows additively, not geometrically
        if (t.n_max() > cap_hi) t = t.clipped(t.n_min(), cap_hi);
        out.push_back(std::move(t));
    }
    return out;
}

KedlayaTrace kedlaya_annihilator(const DiagonalSigmaModule& M,
                                 const std::vector<LaurentSeries>& v, long cap_hi) {
    int n = M.rank();
    if (static_cast<int>(v.size()) != n) throw MathError("vector length != rank");
    for (int i = 1; i < n; ++i)
        if (M.slopes[static_cast<size_t>(i - 1)] > M.slopes[static_cast<size_t>(i)])
            throw MathError("slopes must be sorted");
    KedlayaTrace t;
    t.n = n;
    t.stages.push_back(v);
    TwistedPoly ann = TwistedPoly::one(M.ctx);
    for (int l = 0; l < n; ++l) {
        const auto& cur = t.stages.back();
        const LaurentSeries& diag = cur[static_cast<size_t>(l)];
        LaurentSeries bl;
        bool zeroed = false;
        if (certified_nonzero(diag)) {
            bl = sigma_of(M, diag).div(diag, cap_hi).scaled(q_power(M.ctx, M.slopes[static_cast<size_t>(l)]));
        } else {
            // vanished diagonal: the Construction sets b_l := 0 and carries on
            bl = LaurentSeries::zero(M.ctx);
            zeroed = true;
        }
        t.b.push_back(bl);
        t.b_zeroed.push_back(zeroed);
        // v_{l+1} = (phi - b_l) v_l, coordinatewise
        std::vector<LaurentSeries> nxt = phi_apply(M, cur, cap_hi);
        for (int i = 0; i < n; ++i)
            nxt[static_cast<size_t>(i)] =
                nxt[static_cast<size_t>(i)] - bl.mul(cur[static_cast<size_t>(i)], cap_hi);
        t.stages.push_back(std::move(nxt));
        ann = TwistedPoly::sigma_minus(bl) * ann;
    }
    t.annihilator = ann;
    for (int i = 0; i < n; ++i) t.c.push_back(ann.coeff(i));

    t.triangular_support = true;
    for (size_t l = 0; l < t.stages.size(); ++l)
        for (size_t i = 0; i < l && i < t.stages[l].size(); ++i)
            if (!t.stages[l][i].is_zeroish()) t.triangular_support = false;

    // residual audit: sum_k c_k phi^k(v) with c_n = 1 must vanish
    std::vector<std::vector<LaurentSeries>> pw{v};
    for (int k = 1; k <= n; ++k) pw.push_back(phi_apply(M, pw.back(), cap_hi));
    t.residual_zero = true;
    for (int i = 0; i < n; ++i) {
        LaurentSeries r = LaurentSeries::zero(M.ctx);
        for (int k = 0; k <= n; ++k)
            r = r + ann.coeff(k).mul(pw[static_cast<size_t>(k)][static_cast<size_t>(i)], cap_hi);
        if (!r.is_zeroish()) t.residual_zero = false;
    }
    return t;
}

Cert is_cyclic(const KedlayaTrace& t) {
    bool indeterminate = false;
    for (int l = 0; l < t.n; ++l) {
        const LaurentSeries& d = t.stages[static_cast<size_t>(l)][static_cast<size_t>(l)];
        if (certified_nonzero(d)) continue;
        if (d.is_exactly_zero()) return Cert::No;
        indeterminate = true;
    }
    return indeterminate ? Cert::Indeterminate : Cert::Yes;
}

bool is_generic_cyclic(const KedlayaTrace& t, const DiagonalSigmaModule& M) {
    if (is_cyclic(t) != Cert::Yes) return false;
    int n = t.n;
    Rat tail(0);  // s_1 + ... + s_n, then peel from the top
    for (const Rat& s : M.slopes) tail += s;
    for (int i = 0; i < n; ++i) {
        // target for c_i: s_1 + ... + s_{n-i}
        GaussExponent g = t.c[static_cast<size_t>(i)].gauss_exponent(Rat(0));
        if (!g.has_value || !g.certified)
            throw MathError("genericity test: uncertified coefficient norm");
        if (g.e != tail * M.ctx->h()) return false;
        tail -= M.slopes[static_cast<size_t>(n - 1 - i)];
    }
    return true;
}

GenericSearchResult find_generic_cyclic(const DiagonalSigmaModule& M, int budget, unsigned seed,
                                        long cap_hi) {
    GenericSearchResult out;
    int n = M.rank();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> digit(1, M.ctx->p() - 1), coin(0, 1);
    for (int attempt = 0; attempt < budget; ++attempt) {
        std::vector<LaurentSeries> v;
        if (attempt == 0 || M.ring == BaseRing::Constants) {
            for (int i = 0; i < n; ++i) {
                LaurentSeries vi = LaurentSeries::one(M.ctx);
                if (attempt > 0 && coin(rng))
                    vi = vi + LaurentSeries::constant(
                                  M.ctx, PadicScalar::from_integer(M.ctx, Int(digit(rng))));
                v.push_back(std::move(vi));
            }
        } else {
            // monomial staircase with strictly increasing exponents: distinct
            // powers keep the construction's diagonals collision-free, and a
            // positive window keeps every lower tail exact
            long e = 0;
            for (int i = 0; i < n; ++i) {
                v.push_back(LaurentSeries::monomial(
                    M.ctx, PadicScalar::from_integer(M.ctx, Int(digit(rng))), e));
                e += 1 + coin(rng);
            }
        }
        try {
            KedlayaTrace t = kedlaya_annihilator(M, v, cap_hi);
            if (is_cyclic(t) == Cert::Yes && is_generic_cyclic(t, M)) {
                out.found = true;
                out.retries = attempt;
                out.v = std::move(v);
                out.trace = std::move(t);
                return out;
            }
            out.failures.push_back(std::move(t));
        } catch (const MathError&) {
            out.failures.emplace_back();
        }
    }
    out.retries = budget;
    return out;
}

// ---------- matrix route ----------

namespace {
using Mat = std::vector<std::vector<LaurentSeries>>;

LaurentSeries det_rec(const Mat& m, std::vector<size_t> cols, size_t row, long cap,
                      const ContextPtr& ctx) {
    if (cols.size() == 1) return m[row][cols[0]];
    LaurentSeries acc = LaurentSeries::zero(ctx);
    for (size_t j = 0; j < cols.size(); ++j) {
        std::vector<size_t> rest;
        for (size_t k = 0; k < cols.size(); ++k)
            if (k != j) rest.push_back(cols[k]);
        LaurentSeries minor = det_rec(m, rest, row + 1, cap, ctx);
        LaurentSeries term = m[row][cols[j]].mul(minor, cap);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

LaurentSeries det(const Mat& m, long cap, const ContextPtr& ctx) {
    std::vector<size_t> cols(m.size());
    for (size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    return det_rec(m, cols, 0, cap, ctx);
}

std::vector<LaurentSeries> phi_matrix(const MatrixSigmaModule& M,
                                      const std::vector<LaurentSeries>& w, long cap) {
    int n = M.rank();
    std::vector<LaurentSeries> out(static_cast<size_t>(n), LaurentSeries::zero(M.ctx));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<size_t>(i)] =
                out[static_cast<size_t>(i)] +
                M.A[static_cast<size_t>(i)][static_cast<size_t>(j)].mul(
                    w[static_cast<size_t>(j)].frobenius_sub(), cap);
    return out;
}
}  // namespace

NewtonPolygon generic_np_from_matrix(const MatrixSigmaModule& M, int budget, long cap_hi,
                                     unsigned seed) {
    int n = M.rank();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> digit(1, M.ctx->p() - 1), ex(-2, 2), coin(0, 1);
    for (int attempt = 0; attempt < budget; ++attempt) {
        std::vector<LaurentSeries> e;
        for (int i = 0; i < n; ++i) {
            if (attempt == 0)
                e.push_back(LaurentSeries::one(M.ctx));
            else
                e.push_back(LaurentSeries::monomial(
                    M.ctx, PadicScalar::from_integer(M.ctx, Int(digit(rng))),
                    coin(rng) ? ex(rng) : 0));
        }
        std::vector<std::vector<LaurentSeries>> pw{e};
        for (int k = 1; k <= n; ++k) pw.push_back(phi_matrix(M, pw.back(), cap_hi));
        // solve sum_{k<n} a_k phi^k(e) = -phi^n(e) by Cramer
        Mat V(static_cast<size_t>(n), std::vector<LaurentSeries>(static_cast<size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                V[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                    pw[static_cast<size_t>(k)][static_cast<size_t>(i)];
        try {
            LaurentSeries d = det(V, cap_hi, M.ctx);
            std::vector<LaurentSeries> coeffs;
            for (int k = 0; k < n; ++k) {
                Mat Vk = V;
                for (int i = 0; i < n; ++i)
                    Vk[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                        -pw[static_cast<size_t>(n)][static_cast<size_t>(i)];
                coeffs.push_back(det(Vk, cap_hi, M.ctx).div(d, cap_hi));
            }
            coeffs.push_back(LaurentSeries::one(M.ctx));
            TwistedPoly f(M.ctx, std::move(coeffs));
            NewtonPolygon np = newton_polygon_twisted(f);
            np.slopes = slopes_paper(np);  // dualize to the module's slopes
            return np;
        } catch (const MathError&) {
            continue;  // degenerate vector or uncertified norms: resample
        }
    }
    throw MathError("no cyclic vector found within budget");
}

}  // namespace padlg
