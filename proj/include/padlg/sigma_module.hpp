#ifndef PADLG_SIGMA_MODULE_HPP
#define PADLG_SIGMA_MODULE_HPP

#include <optional>
#include <vector>

#include "padlg/ore.hpp"

namespace padlg {

enum class BaseRing { Constants, Laurent };

/// sigma-module in eigenvector normal form: phi(e_i) = q^{s_i} e_i with
/// s_1 <= ... <= s_n and q^{s_i} an exact power of p.
struct DiagonalSigmaModule {
    ContextPtr ctx;
    std::vector<Rat> slopes;
    BaseRing ring = BaseRing::Laurent;

    int rank() const { return static_cast<int>(slopes.size()); }
};

/// sigma-module presented by an invertible Frobenius matrix over the
/// Laurent carrier: phi(w) = A sigma(w) on coordinates.
struct MatrixSigmaModule {
    ContextPtr ctx;
    std::vector<std::vector<LaurentSeries>> A;

    int rank() const { return static_cast<int>(A.size()); }
};

/// Full record of one annihilator construction run on v = sum x_i e_i:
/// stage l holds v_l (v_1 = v, v_{l+1} = (phi - b_l) v_l), the eliminators
/// b_l, and the expanded relation sigma^n + c_{n-1} sigma^{n-1} + ... + c_0.
struct KedlayaTrace {
    int n = 0;
    std::vector<std::vector<LaurentSeries>> stages;  // stages[l][i] = x_{l+1,i}
    std::vector<LaurentSeries> b;                    // b_1 .. b_n
    std::vector<bool> b_zeroed;                      // diagonal vanished, b_l := 0
    TwistedPoly annihilator;
    std::vector<LaurentSeries> c;  // c_0 .. c_{n-1}
    bool triangular_support = false;
    bool residual_zero = false;
};

/// three-valued certification verdict
enum class Cert { No, Yes, Indeterminate };

/// phi on coordinates of the diagonal module: (phi w)_i = q^{s_i} sigma(x_i)
std::vector<LaurentSeries> phi_apply(const DiagonalSigmaModule& M,
                                     const std::vector<LaurentSeries>& w, long cap_hi);

KedlayaTrace kedlaya_annihilator(const DiagonalSigmaModule& M,
                                 const std::vector<LaurentSeries>& v, long cap_hi = 64);

/// cyclicity witness: all diagonals x_{l,l} certified nonzero
Cert is_cyclic(const KedlayaTrace& t);

/// exact norm test -log_q |c_i|_1 = s_1 + ... + s_{n-i} for all i
bool is_generic_cyclic(const KedlayaTrace& t, const DiagonalSigmaModule& M);

struct GenericSearchResult {
    bool found = false;
    int retries = 0;  // index of the winning attempt
    std::vector<LaurentSeries> v;
    KedlayaTrace trace;
    std::vector<KedlayaTrace> failures;  // kept on exhaustion
};

/// seed e_1 + ... + e_n, then sparse seeded perturbations; deterministic
GenericSearchResult find_generic_cyclic(const DiagonalSigmaModule& M, int budget = 32,
                                        unsigned seed = 1, long cap_hi = 64);

/// generic Frobenius Newton polygon of M via a cyclic vector for the
/// sigma-structure: slopes of the twisted annihilator of e, dualized.
/// Multiplicity is the x-extent (slope count).
NewtonPolygon generic_np_from_matrix(const MatrixSigmaModule& M, int budget = 32,
                                     long cap_hi = 48, unsigned seed = 1);

}  // namespace padlg

#endif
