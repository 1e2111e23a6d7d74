#pragma once

#include "lle/normalform.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lle {

enum class Family {
    IOmega2Periodic,
    IOmega2Homoclinic,
    IOmega2DarkFront,
    O2IOmegaEquilibriumPlus,
    O2IOmegaEquilibriumMinus,
    O2IOmegaPeriodicFirstKind,
    O2IOmegaPeriodicSecondKind,
    O2IOmegaHomoclinicToPeriodic,
    O2EquilibriumPlus,
    O2EquilibriumMinus,
    O2Periodic,
    O2Homoclinic,
};

std::string_view to_string(Family f);
BifurcationKind family_class(Family f);
bool is_periodic(Family f);   // sampled on whole periods with periodic wrap
bool is_localized(Family f);  // decays to a background as |x| grows

enum class IOmega2Kind { Periodic, Homoclinic, DarkFront };
enum class O2IOmegaKind { EquilibriumPlus, EquilibriumMinus, PeriodicFirstKind, PeriodicSecondKind, HomoclinicToPeriodic };
enum class O2Kind { EquilibriumPlus, EquilibriumMinus, Periodic, Homoclinic };

// Denominator of the O(mu) term of the IOmega2 homoclinic profile: Printed
// uses 1 + pr pi, Derived uses 1 + 2 pr pi, which is what lifting the
// truncated solution through the basis gives.
enum class HomoclinicDenominator { Printed, Derived };

struct GridSpec {
    int n = 4096;                   // minimum sample count
    int periods = 16;               // periodic families
    double decay_widths = 24;       // localized half-width in units of 1/decay rate
    int points_per_wavelength = 32; // resolution of any carrier oscillation
};

struct ProfileRequest {
    Family family = Family::IOmega2Periodic;
    int beta = 1;
    FoldCase fold = FoldCase::None;
    double alpha_star = 3;
    double mu = 1e-3;
    double K = 0;       // IOmega2 Periodic wavenumber shift; O2IOmega |C|^2
    double eps = 0;     // second-kind amplitude
    int branch = 1;     // O2IOmega first kind / homoclinic-to-periodic: sign of A_K, 0 = saddle
    int phase = 0;      // 0 or 1 (= pi) for the +-2 sqrt(K) cos term
    GridSpec grid;
    HomoclinicDenominator denominator = HomoclinicDenominator::Printed;
    double K_min_factor = 1;  // persistence floor K_min = factor * |mu|
    // Coefficients used in the formulas; closed forms when empty.
    std::optional<NormalFormCoefficients> coeffs;
};

struct SolutionProfile {
    Family family;
    Params params;  // alpha = alpha* + mu, F = F*
    double alpha_star = 0;
    FoldCase fold = FoldCase::None;
    double mu = 0;
    double K = 0, eps = 0;
    int branch = 1, phase = 0;
    double k = 0;                 // wavenumber of the oscillatory factor
    double decay_rate = 0;        // localized families
    double amplitude = 0;         // leading-order amplitude of the family
    double span = 0;              // domain length; the grid is centred on x = 0
    Equilibrium eq_star;          // psi* at (alpha*, F*)
    std::vector<double> x;
    std::vector<std::complex<double>> psi;
    std::string truncation_order;
    bool periodic = false;
    bool localized = false;
    std::vector<std::string> warnings;
    std::function<std::complex<double>(double)> eval;        // the formula itself
    std::function<std::complex<double>(double)> background;  // limit state of localized families
};

SolutionProfile construct_iomega2(IOmega2Kind kind, int beta, double alpha_star, double mu, double K,
                                  const GridSpec& grid = {},
                                  HomoclinicDenominator denom = HomoclinicDenominator::Printed);
SolutionProfile construct_o2iomega(O2IOmegaKind kind, int beta, FoldCase fc, double alpha_star, double mu,
                                   double K_or_eps, int branch, int phase, const GridSpec& grid = {});
SolutionProfile construct_o2(O2Kind kind, int beta, FoldCase fc, double alpha_star, double mu, double eps,
                             const GridSpec& grid = {});

SolutionProfile construct(const ProfileRequest& req);

// Resample a profile's formula on a uniform grid of n points over the same domain.
void sample(SolutionProfile& prof, int n);

// Closed-form solution of the truncated normal-form system underlying a
// profile, with analytic x-derivatives. A and B are real for the fold classes.
struct TruncatedState {
    std::complex<double> A, B, C;
};

struct TruncatedSolution {
    BifurcationKind cls = BifurcationKind::IOmega2;
    double omega = 0;
    double mu = 0;
    bool exact = true;  // false for the second-kind family (first order in eps)
    std::function<TruncatedState(double)> value;
    std::function<TruncatedState(double)> derivative;
};

TruncatedSolution truncated_solution(const ProfileRequest& req);

// psi~ = U1 + i U3 for U = lift of the truncated state through the basis.
std::complex<double> lift(const BifurcationBasis& basis, const TruncatedState& s);

void write_csv(std::ostream& os, const SolutionProfile& prof);
std::string sidecar_json(const SolutionProfile& prof);

} // namespace lle
