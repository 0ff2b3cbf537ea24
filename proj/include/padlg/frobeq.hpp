#ifndef PADLG_FROBEQ_HPP
#define PADLG_FROBEQ_HPP

#include <string>
#include <vector>

#include "padlg/ore.hpp"

namespace padlg {

struct FixedPointResult {
    bool ok = false;
    std::string error;
    bool constraint_ok = false;  // (sum_i a_i(0)) y(0) + g(0) = 0 at precision
    LogSeries y;                 // log-degree 0
};

/// power-series solution of f(sigma) y + g = 0 (g optional forcing) by the
/// contraction y <- -a_0^{-1} (sum_{i>=1} a_i sigma^i(y) + g), to order T.
/// Needs a_0 a unit at |.|_1 with invertible constant term and power-series
/// coefficients throughout.
FixedPointResult solve_fixed_point(const TwistedPoly& f, const PadicScalar& seed, long T,
                                   const LaurentSeries* forcing = nullptr);

/// apply(f, y) vanishes at every known coefficient below x^T, all log-degrees
bool verify_solution(const TwistedPoly& f, const LogSeries& y, long T);

/// ladder entry at rho_m = p^{-r0 q^{-m}}: exponent = log_q |y|_{rho_m},
/// so bounded y stays <= 0 and log-growth lambda shows as slope lambda in m.
struct LadderEntry {
    int m = 0;
    Rat r;
    double exponent = 0.0;
    bool certified = false;
};

struct LadderProfile {
    Rat r0;
    int depth = 0;
    std::vector<LadderEntry> entries;
    bool truncated = false;
    std::string diagnostic;
};

LadderProfile ladder_profile(const LogSeries& y, const Rat& r0, int M);

struct ClassifyConfig {
    Rat r0 = Rat(1, 2);
    int M = 12;
    double tau = 0.15;
    int D = 8;
    long cap_hi = 1L << 40;
};

struct ConditionAudit {
    int j = 0;
    bool holds = false;
    int first_failing_m = -1;
};

enum class GrowthKind { Bounded, ExactlyLogGrowth, Unclassified };

struct LogGrowthReport {
    std::vector<Rat> slopes;  // s_1 > s_2 > ... > s_k, one per polygon segment
    double lambda_hat = 0.0;
    GrowthKind kind = GrowthKind::Unclassified;
    Rat snapped;
    LadderProfile evidence;
    std::vector<ConditionAudit> audit;  // conditions C_0 .. C_{k-2} on the grid
    int least_failing_j = -1;           // k-1 when every C_j holds
    Rat audit_slope;                    // s_{j*+1}
    double B = 0.0;       // upper audit: entry(m) <= entry(0) + m s + B
    double Bprime = 0.0;  // lower audit: entry(m) >= entry(0) + m s - B'
};

/// the dichotomy test: estimate the ladder slope, snap into {0} u {s_j > 0},
/// and audit the conditions C_j that drive the upper/lower bound argument
LogGrowthReport classify_log_growth(const TwistedPoly& f, const LogSeries& y,
                                    const ClassifyConfig& cfg = {});

}  // namespace padlg

#endif
