#pragma once

#include "lle/linearization.hpp"
#include "lle/model.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lle {

// Which fold curve a fold-based point sits on: FoldPlus is F^2_+ (rho_+),
// FoldMinus is F^2_- (rho_-). The 0^2 "case 1" and "case 2" of the normal
// dispersion are FoldPlus and FoldMinus respectively.
enum class FoldCase { None, FoldPlus, FoldMinus };

std::string_view to_string(FoldCase c);

// <u, v> = sum u_j conj(v_j)
std::complex<double> inner(const CVec4& u, const CVec4& v);

// Taylor pieces of R(U, mu) about (psi*, alpha*). R20 and R30 are the
// symmetric multilinear forms obtained by polarizing the homogeneous parts, so
// R20(U, U) = Q(U) and R30(U, U, U) = Cu(U).
struct TaylorForms {
    int beta = 1;
    Equilibrium eq;

    CVec4 r01() const;
    CVec4 r11(const CVec4& U) const;
    CVec4 q(const CVec4& U) const;
    CVec4 cu(const CVec4& U) const;
    CVec4 r20(const CVec4& U, const CVec4& V) const;
    CVec4 r30(const CVec4& U, const CVec4& V, const CVec4& W) const;
};

TaylorForms taylor_forms(const Params& p, const Equilibrium& eq);

struct IOmega2Basis {
    CVec4 zeta0, zeta1, zeta1_adj;
    double C = 0, omega = 0;
};

struct O2IOmegaBasis {
    CVec4 zeta0, zeta1, zeta, zeta1_adj;
    double D = 0, omega = 0;
};

struct O2Basis {
    CVec4 zeta0, zeta1, zeta0_adj, zeta1_adj;
    double D = 0;
};

struct BifurcationBasis {
    std::variant<IOmega2Basis, O2IOmegaBasis, O2Basis> v;
    // Max distance between the explicit adjoint vectors and the ones obtained
    // by solving their defining linear conditions.
    double adjoint_mismatch = 0;
};

// Explicit basis vectors at a point of the given class. Throws WrongClass if
// the spectrum at (p, eq) has a different variant.
BifurcationBasis build_basis(const BifurcationClass& cls, const Params& p, const Equilibrium& eq);

struct PhiVectors {
    CVec4 phi00001, phi20000, phi10100;
    double max_residual = 0;
    double max_condition = 0;
};

// Solves L Phi00001 = -R01, (L - 2 i w) Phi20000 = -R20(z0, z0),
// L Phi10100 = -2 R20(z0, conj z0). Throws NearSingular if cond > 1e12.
PhiVectors solve_phi_iomega2(const Params& p, const Equilibrium& eq, const IOmega2Basis& basis,
                             const TaylorForms& forms);

// Closed form Phi00001 = ((1-a) pr + pi, 0, -pr + (1-a) pi, 0) / (a-2)^2.
CVec4 phi00001_closed(const Params& p, const Equilibrium& eq);

enum class CoeffMethod { ClosedForm, NumericProjection };

struct IOmega2Coeffs {
    double a2 = 0, b2 = 0;
};
struct O2IOmegaCoeffs {
    double a1 = 0, b1 = 0, c1 = 0;
};
struct O2Coeffs {
    double a = 0, b = 0;
};

struct NormalFormCoefficients {
    std::variant<IOmega2Coeffs, O2IOmegaCoeffs, O2Coeffs> v;
    CoeffMethod method = CoeffMethod::ClosedForm;
    double max_imag_residue = 0;  // largest |Im| relative to 1 + |Re| before truncation

    std::vector<std::pair<std::string, double>> named() const;
};

// Point on a bifurcation curve. IOmega2 uses rho = 1 and F^2 = 1 + (1 - alpha)^2;
// the fold classes use rho_+- and F^2_+-. Throws DomainError outside the
// validity range of the (kind, beta, case) combination.
struct CurveSite {
    Params params;
    Equilibrium eq;
};

void check_validity(BifurcationKind kind, int beta, FoldCase fc, double alpha_star);
CurveSite curve_site(BifurcationKind kind, int beta, FoldCase fc, double alpha_star);

NormalFormCoefficients coeffs_closed(BifurcationKind kind, int beta, FoldCase fc, double alpha_star);

// Coefficients by projection: only taylor_forms, build_basis and the Phi solves.
NormalFormCoefficients coeffs_numeric(BifurcationKind kind, const Params& p, const Equilibrium& eq);

// Same pipeline with a caller-supplied basis (normalization mutation tests).
NormalFormCoefficients coeffs_numeric(const BifurcationBasis& basis, const Params& p, const Equilibrium& eq);

} // namespace lle
