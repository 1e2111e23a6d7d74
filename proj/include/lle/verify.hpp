#pragma once

#include "lle/profiles.hpp"

#include <string>
#include <vector>

namespace lle {

struct Residual {
    double value = 0;           // sup-norm of the stationary defect
    double error_estimate = 0;  // |r(n) - r(2n)| from resampling the formula
    int n = 0;                  // grid size the value was taken on
    bool refined = false;
};

// beta psi'' - (i - alpha) psi - psi |psi|^2 + i F on the profile's own grid,
// 6th-order central differences, periodic wrap or 8-point trim per end.
// Throws GridTooCoarse if the error estimate stays above 10% of the value
// after one refinement.
Residual stationary_residual(const SolutionProfile& prof);

// Same operator on raw samples (uniform grid).
double residual_norm(const Params& p, const std::vector<double>& x, const std::vector<std::complex<double>>& psi,
                     bool periodic);

// A family at a sequence of mu values: mu = mu_sign * m and K = K_per_mu * m
// for each m in the list.
struct FamilySpec {
    std::string tag;
    ProfileRequest base;
    double mu_sign = 1;
    double K_per_mu = 0;
};

struct ResidualReport {
    std::string family;
    std::vector<double> mu_list;
    std::vector<double> residual_norms;
    std::vector<double> error_estimates;
    double fitted_slope = 0;
    bool pass = false;  // fitted_slope >= 1
};

ResidualReport residual_scaling(const FamilySpec& spec, const std::vector<double>& mu_list);

// Reference matrix: every constructed family at its standard point
// (IOmega2 at beta=+1, alpha*=3 and beta=-1, alpha*=1.2; O2IOmega at beta=+1,
// alpha*=3 on F^2_+; O2 at beta=+1, alpha*=1.8 on F^2_+).
std::vector<FamilySpec> standard_families();
std::vector<FamilySpec> standard_periodic_families();
std::vector<double> standard_mu_list();  // 1e-2, 3e-3, 1e-3, 3e-4, 1e-4

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// dU/dx = L U + R(U, mu) about psi* at the critical parameters.
struct SpatialSystem {
    Params star;
    Equilibrium eq;
    double mu = 0;

    Vec4 rhs(const Vec4& U) const;
    std::complex<double> psi(const Vec4& U) const { return eq.psi() + std::complex<double>(U(0), U(2)); }
};

SpatialSystem spatial_system(const SolutionProfile& prof);

struct Trajectory {
    std::vector<double> x;
    std::vector<Vec4> U;
    int steps = 0;
    double max_step_error = 0;  // step-halving estimate of the end-point error
    bool blow_up = false;       // |U| exceeded 1e6; samples stop there
};

// Fixed-step RK4 from x0 towards x1 (either direction).
Trajectory integrate(const SpatialSystem& sys, const Vec4& U0, double x0, double x1, double step);

// End point only, n equal steps over a signed length.
Vec4 flow(const SpatialSystem& sys, const Vec4& U0, double length, int n);

struct RefinedOrbit {
    Vec4 initial;  // in Fix(S)
    double half_period = 0;
    int newton_iterations = 0;
    double defect = 0;  // max of |U2|, |U4| at the half period and node mismatches
    int steps = 0;      // RK4 steps per half period
    int segments = 1;   // shooting segments per half period
    std::vector<Vec4> nodes;  // segment start states; nodes[0] = initial
    Vec4 guess_initial;
    double guess_half_period = 0;
};

// Newton on (u1, u3, T): U2(T) = U4(T) = 0 and u1(0) - u1(T) = anchor. The
// anchor defaults to the guess's own peak-to-trough swing in Re psi. Where L has real eigenvalues the
// half period is split into segments whose growth factor stays near e^2; the
// interior nodes join the unknowns with continuity conditions.
RefinedOrbit refine_periodic(const SolutionProfile& guess, std::optional<double> anchor = {},
                             double step = 1e-3);

// sup over the refined half period of |psi_refined(x) - psi_guess(x)|; both
// are even in x, so this covers the full period.
double orbit_distance(const SolutionProfile& guess, const RefinedOrbit& orbit);

struct OracleResult {
    double max_defect = 0;
    double first_integral_defect = 0;  // |d|C|^2/dx|, O2IOmega only
};

// Substitutes a closed-form truncated solution into the truncated normal-form
// ODE with the given coefficients.
OracleResult truncated_oracle(const NormalFormCoefficients& ode, const TruncatedSolution& sol,
                              const std::vector<double>& xs);

enum class Stability { Stable, Unstable };
std::string_view to_string(Stability s);

struct TemporalSpectrum {
    std::vector<double> k;
    std::vector<std::complex<double>> lambda_plus, lambda_minus;
    double max_growth = 0;  // max Re lambda_plus
    Stability verdict = Stability::Stable;
};

std::vector<double> default_k_grid();
TemporalSpectrum temporal_spectrum_constant(const Params& p, const Equilibrium& eq,
                                            const std::vector<double>& k_grid = default_k_grid());

} // namespace lle
