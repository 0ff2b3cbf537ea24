#ifndef PADLG_NABLA_HPP
#define PADLG_NABLA_HPP

#include <string>
#include <vector>

#include "padlg/sigma_module.hpp"

namespace padlg {

/// (sigma,nabla)-module presented by its connection matrix in rational form
/// G = G_num / g_den: nabla(e_j) = sum_i (G_num[i][j]/g_den) e_i dx, taken
/// against dx/x instead when log_flag is set (then G(0) must be nilpotent).
/// F, when present, is the Frobenius matrix phi(e_j) = sum_i F[i][j] e_i
/// for the lift sigma(x) = x^q.
struct DifferentialModule {
    ContextPtr ctx;
    int n = 0;
    std::vector<std::vector<LaurentSeries>> G_num;
    LaurentSeries g_den;  // shared scalar denominator, unit constant term
    bool log_flag = false;
    std::vector<std::vector<LaurentSeries>> F;  // empty when absent

    bool has_frobenius() const { return !F.empty(); }
};

/// companion module of y^(n) + (a_{n-1}/d) y^(n-1) + ... + (a_0/d) y = 0:
/// nabla(e_i) = e_{i+1} dx for i < n-1 and
/// nabla(e_{n-1}) = -(a_{n-1}/d e_{n-1} + ... + a_0/d e_0) dx.
/// Solution functionals restrict to scalar solutions via f -> f(e_0).
DifferentialModule companion_from_ode(const ContextPtr& ctx, std::vector<LaurentSeries> a_num,
                                      const LaurentSeries& den);
DifferentialModule companion_from_ode(const ContextPtr& ctx, std::vector<LaurentSeries> a);

/// Fundamental solution data to order T, both sides of the perfect pairing:
///   S: solution functionals, columns solve (x) d/dx s = G^T s, S = I + ...
///   W: horizontal sections,  columns solve (x) d/dx w = -G w,  W = I + ...
/// so S^T W = I.  In the log case both are H(x) exp(A log x) with nilpotent
/// A and the log-terms live in the LogSeries components.
struct SolutionBasis {
    int n = 0;
    long T = 0;
    std::vector<std::vector<LogSeries>> S;
    std::vector<std::vector<LogSeries>> W;
    long digits_lost = 0;  // precision eroded by the 1/k divisions, ~log_p T
};

SolutionBasis solve_fundamental(const DifferentialModule& M, long T);

/// sup-style log-growth exponent of the coefficients: take the per-octave
/// (base p) maxima of -v_p(a_m) against log_p(m+1) and fit them by the
/// median of pairwise slopes, clamped at 0 (robust to isolated excursions,
/// invariant under scaling); log-degree-i components contribute their
/// estimate + i.  snapped = nearest rational with denominator <= D (only
/// meaningful when |lambda_hat - snapped| is small).
struct GrowthEstimate {
    bool ok = false;
    std::string error;
    double lambda_hat = 0.0;
    Rat snapped;
    long certified = 0;  // certified-nonzero coefficients inspected
};
GrowthEstimate coefficient_growth_estimate(const LogSeries& y, int D);

struct FiltrationConfig {
    int D = 8;
    double tau = 0.15;
    int refine_rounds = 3;
};

struct ComparisonRow {
    Rat lambda;
    int dim_log_growth = 0;  // dim V(M)^lambda
    int dim_orth = 0;        // n - #{special slopes s : s >= lambda_max - lambda}
    bool equal = false;
    bool contained = false;  // dim_log_growth <= dim_orth, the theorem's direction
};

struct FiltrationReport {
    std::vector<std::pair<Rat, int>> breaks;  // (break, multiplicity), ascending
    std::vector<double> raw;                  // reduced-basis estimates, same order
    bool ambiguous = false;  // two raw estimates within tau snapped differently
    Rat lambda_max;          // only set by compare_main_theorem
    std::vector<ComparisonRow> comparison;
};

/// breaks of the special log-growth filtration, estimated on a
/// growth-minimizing solution basis (greedy echelon sweep over columns of S)
FiltrationReport special_filtration(const DifferentialModule& M, long T,
                                    const FiltrationConfig& cfg = {});

/// Frobenius slopes of the solution space, in q-units, ascending: Newton
/// slopes of the characteristic polynomial of the constant matrix
/// Phi = W^{-1} F sigma(W) (constancy is asserted to order T/q)
std::vector<Rat> special_frobenius_slopes(const DifferentialModule& M, long T);

/// residual of d/dx F + G F - q x^{q-1} F sigma(G) = 0 (log form against
/// dx/x: theta F + G F - q F sigma(G) = 0) up to order T
bool check_frobenius_compatibility(const DifferentialModule& M, long T);

/// per-break comparison of the log-growth filtration against the orthogonal
/// of the generic slope filtration: lambda_max from generic_np_from_matrix
/// on F, dim orth = n - #{special slopes >= lambda_max - lambda}
FiltrationReport compare_main_theorem(const DifferentialModule& M, long T,
                                      const FiltrationConfig& cfg = {});

/// Legendre family y^2 = x(x-1)(x-lambda).
/// Hasse polynomial sum_i binom(g,i)^2 lambda^i mod p, g = (p-1)/2,
/// little-endian coefficients in [0,p)
std::vector<long> hasse_polynomial(long p);
/// trace of Frobenius a = p + 1 - #E(F_p) by direct point count
long legendre_trace(long p, long lambda);
/// ordinariness of the fibre; the Hasse-polynomial value and the point
/// count must agree or this throws
bool legendre_is_ordinary(long p, long lambda);
/// Hensel unit root of T^2 - a T + p (requires a a unit)
PadicScalar unit_root_of_trace(const ContextPtr& ctx, long a);
/// companion of x(1-x) y'' + (1-2x) y' - y/4 = 0 recentered at x = a + t;
/// a must not reduce to 0 or 1
DifferentialModule hypergeometric_companion(const ContextPtr& ctx, const PadicScalar& a);
/// attach F = W Phi0 sigma(W)^{-1} for a constant diagonal Phi0, computed
/// to order cap through the pairing W^{-1} = S^T; throws if the product
/// keeps a log term
void attach_diagonal_frobenius(DifferentialModule& M, const std::vector<PadicScalar>& phi0,
                               long cap);

}  // namespace padlg

#endif
