#include "lle/normalform.hpp"

#include "lle/errors.hpp"

#include <cmath>

namespace lle {

namespace {

using cd = std::complex<double>;
constexpr cd I{0, 1};

CVec4 cvec(cd a, cd b, cd c, cd d) {
    CVec4 v;
    v << a, b, c, d;
    return v;
}

double max_abs(const CVec4& v) { return v.cwiseAbs().maxCoeff(); }

// Least-squares solve of an overdetermined but consistent system; the
// residual is folded into the returned mismatch by the caller.
CVec4 solve_conditions(const Eigen::Matrix<cd, Eigen::Dynamic, 4>& A, const Eigen::VectorXcd& rhs) {
    return A.colPivHouseholderQr().solve(rhs);
}

Eigen::Matrix<cd, 6, 4> adjoint_rows(const Mat4& L, cd shift, const CVec4& n1, const CVec4& n2) {
    Eigen::Matrix<cd, 6, 4> A;
    A.topRows<4>() = L.transpose().cast<cd>() + shift * CMat4::Identity();
    A.row(4) = n1.conjugate().transpose();
    A.row(5) = n2.conjugate().transpose();
    return A;
}

double fold_D(const Params& p, const Equilibrium& eq) {
    const double pr = eq.psi_r, pi = eq.psi_i;
    return (3 * pr * pr + pi * pi - p.alpha) / (1 - 2 * pr * pi);
}

} // namespace

std::string_view to_string(FoldCase c) {
    switch (c) {
    case FoldCase::None: return "none";
    case FoldCase::FoldPlus: return "fold-plus";
    case FoldCase::FoldMinus: return "fold-minus";
    }
    return "?";
}

cd inner(const CVec4& u, const CVec4& v) {
    cd s = 0;
    for (int j = 0; j < 4; ++j)
        s += u(j) * std::conj(v(j));
    return s;
}

CVec4 TaylorForms::r01() const { return R01(beta, eq).cast<cd>(); }

CVec4 TaylorForms::r11(const CVec4& U) const { return R11<cd>(beta, U); }

CVec4 TaylorForms::q(const CVec4& U) const { return quadratic_part<cd>(beta, eq, U); }

CVec4 TaylorForms::cu(const CVec4& U) const { return cubic_part<cd>(beta, U); }

CVec4 TaylorForms::r20(const CVec4& U, const CVec4& V) const {
    return 0.25 * (q(U + V) - q(U - V));
}

CVec4 TaylorForms::r30(const CVec4& U, const CVec4& V, const CVec4& W) const {
    return (cu(U + V + W) - cu(U + V) - cu(V + W) - cu(U + W) + cu(U) + cu(V) + cu(W)) / 6.0;
}

TaylorForms taylor_forms(const Params& p, const Equilibrium& eq) {
    p.validate();
    return {p.beta, eq};
}

BifurcationBasis build_basis(const BifurcationClass& cls, const Params& p, const Equilibrium& eq) {
    const BifurcationClass actual = classify(p, eq);
    if (actual.kind != cls.kind)
        throw WrongClass("requested " + std::string(to_string(cls.kind)) + " but spectrum is " +
                         std::string(to_string(actual.kind)));
    const Mat4 L = build_L(p, eq).entries;
    const double pr = eq.psi_r, pi = eq.psi_i, a = p.alpha, b = p.beta;
    BifurcationBasis out;

    switch (cls.kind) {
    case BifurcationKind::IOmega2: {
        IOmega2Basis B;
        B.omega = actual.omega;
        const double w = B.omega;
        const double s = 1 + 2 * pr * pi;
        B.C = (1 - 2 * pr * pi) / (3 * pr * pr + pi * pi - 2);
        B.zeta0 = cvec(B.C, I * w * B.C, 1.0, I * w);
        B.zeta1 = cvec(2.0 * I * w * b / s, B.C - 2 * b * w * w / s, 0.0, 1.0);
        const double F2 = p.F * p.F;
        B.zeta1_adj = ((2 - a) / (4 * F2)) * cvec(-I * w, 1.0, I * w * B.C, -B.C);

        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(6);
        rhs(4) = 1;
        const CVec4 num = solve_conditions(adjoint_rows(L, I * w, B.zeta1, B.zeta0), rhs);
        out.adjoint_mismatch = max_abs(num - B.zeta1_adj) / (1 + max_abs(B.zeta1_adj));
        out.v = B;
        break;
    }
    case BifurcationKind::O2IOmega: {
        O2IOmegaBasis B;
        B.omega = actual.omega;
        B.D = fold_D(p, eq);
        B.zeta0 = cvec(1.0, 0.0, B.D, 0.0);
        B.zeta1 = cvec(0.0, 1.0, 0.0, B.D);
        B.zeta = cvec(1.0, I * B.omega, 0.0, 0.0);
        B.zeta1_adj = cvec(0.0, 0.0, 0.0, 1.0 / B.D);

        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(6);
        rhs(4) = 1;
        const CVec4 num = solve_conditions(adjoint_rows(L, 0.0, B.zeta1, B.zeta0), rhs);
        out.adjoint_mismatch = max_abs(num - B.zeta1_adj) / (1 + max_abs(B.zeta1_adj));
        out.v = B;
        break;
    }
    case BifurcationKind::O2: {
        O2Basis B;
        B.D = fold_D(p, eq);
        B.zeta0 = cvec(1.0, 0.0, B.D, 0.0);
        B.zeta1 = cvec(0.0, 1.0, 0.0, B.D);
        B.zeta1_adj = cvec(0.0, 0.0, 0.0, 1.0 / B.D);
        B.zeta0_adj = cvec(0.0, 0.0, 1.0 / B.D, 0.0);

        Eigen::VectorXcd rhs1 = Eigen::VectorXcd::Zero(6);
        rhs1(4) = 1;
        const CVec4 n1 = solve_conditions(adjoint_rows(L, 0.0, B.zeta1, B.zeta0), rhs1);
        // L^T z0* = z1*, <z0, z0*> = 1, <z1, z0*> = 0
        Eigen::Matrix<cd, 6, 4> A = adjoint_rows(L, 0.0, B.zeta0, B.zeta1);
        Eigen::VectorXcd rhs0(6);
        rhs0 << n1, 1.0, 0.0;
        const CVec4 n0 = solve_conditions(A, rhs0);
        out.adjoint_mismatch = std::max(max_abs(n1 - B.zeta1_adj) / (1 + max_abs(B.zeta1_adj)),
                                        max_abs(n0 - B.zeta0_adj) / (1 + max_abs(B.zeta0_adj)));
        out.v = B;
        break;
    }
    default:
        throw WrongClass("no basis for class " + std::string(to_string(cls.kind)));
    }
    return out;
}

namespace {

CVec4 guarded_solve(const CMat4& A, const CVec4& rhs, double& max_cond, double& max_res) {
    Eigen::PartialPivLU<CMat4> lu(A);
    const CMat4 inv = lu.inverse();
    const double cond = A.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > 1e12)
        throw NearSingular("Phi system is near singular", cond);
    const CVec4 x = lu.solve(rhs);
    max_cond = std::max(max_cond, cond);
    max_res = std::max(max_res, max_abs(A * x - rhs));
    return x;
}

} // namespace

PhiVectors solve_phi_iomega2(const Params& p, const Equilibrium& eq, const IOmega2Basis& B,
                             const TaylorForms& forms) {
    const CMat4 L = build_L(p, eq).entries.cast<cd>();
    const CMat4 Id = CMat4::Identity();
    PhiVectors out;
    out.phi00001 = guarded_solve(L, -forms.r01(), out.max_condition, out.max_residual);
    out.phi20000 = guarded_solve(L - 2.0 * I * B.omega * Id, -forms.r20(B.zeta0, B.zeta0), out.max_condition,
                                 out.max_residual);
    out.phi10100 = guarded_solve(L, -2.0 * forms.r20(B.zeta0, B.zeta0.conjugate()), out.max_condition,
                                 out.max_residual);
    return out;
}

CVec4 phi00001_closed(const Params& p, const Equilibrium& eq) {
    const double a = p.alpha, pr = eq.psi_r, pi = eq.psi_i;
    const double den = (a - 2) * (a - 2);
    return cvec(((1 - a) * pr + pi) / den, 0.0, (-pr + (1 - a) * pi) / den, 0.0);
}

std::vector<std::pair<std::string, double>> NormalFormCoefficients::named() const {
    if (auto c = std::get_if<IOmega2Coeffs>(&v))
        return {{"a2", c->a2}, {"b2", c->b2}};
    if (auto c = std::get_if<O2IOmegaCoeffs>(&v))
        return {{"a1", c->a1}, {"b1", c->b1}, {"c1", c->c1}};
    const auto& c = std::get<O2Coeffs>(v);
    return {{"a", c.a}, {"b", c.b}};
}

void check_validity(BifurcationKind kind, int beta, FoldCase fc, double a) {
    if (beta != 1 && beta != -1)
        throw DomainError("beta must be +1 or -1");
    if (!std::isfinite(a))
        throw DomainError("alpha* must be finite");
    const double r3 = std::sqrt(3.0);
    auto need = [](bool ok, const char* what) {
        if (!ok)
            throw DomainError(what);
    };
    switch (kind) {
    case BifurcationKind::IOmega2:
        need(fc == FoldCase::None, "IOmega2 takes no fold case");
        if (beta == 1)
            need(a > 2, "IOmega2 with beta=+1 requires alpha* > 2");
        else
            need(a < 2, "IOmega2 with beta=-1 requires alpha* < 2");
        return;
    case BifurcationKind::O2IOmega:
        if (beta == 1) {
            need(fc == FoldCase::FoldPlus, "O2IOmega with beta=+1 lies on the upper fold only");
            need(a > 2, "O2IOmega with beta=+1 requires alpha* > 2");
        } else if (fc == FoldCase::FoldPlus) {
            need(a > r3 && a < 2, "O2IOmega with beta=-1 on the upper fold requires sqrt(3) < alpha* < 2");
        } else {
            need(fc == FoldCase::FoldMinus, "O2IOmega requires a fold case");
            need(a > r3, "O2IOmega with beta=-1 on the lower fold requires alpha* > sqrt(3)");
        }
        return;
    case BifurcationKind::O2:
        if (beta == 1) {
            if (fc == FoldCase::FoldPlus)
                need(a > r3 && a < 2, "O2 case 1 requires sqrt(3) < alpha* < 2");
            else {
                need(fc == FoldCase::FoldMinus, "O2 requires a fold case");
                need(a > r3, "O2 case 2 requires alpha* > sqrt(3)");
            }
        } else {
            need(fc == FoldCase::FoldPlus, "O2 with beta=-1 lies on the upper fold only");
            need(a > 2, "O2 with beta=-1 requires alpha* > 2");
        }
        return;
    default:
        throw DomainError("no normal form for class " + std::string(to_string(kind)));
    }
}

CurveSite curve_site(BifurcationKind kind, int beta, FoldCase fc, double a) {
    check_validity(kind, beta, fc, a);
    double rho, F2;
    if (kind == BifurcationKind::IOmega2) {
        rho = 1;
        F2 = 1 + (1 - a) * (1 - a);
    } else {
        const CriticalPoints c = critical_points(a);
        rho = fc == FoldCase::FoldPlus ? c.rho_plus : c.rho_minus;
        F2 = fc == FoldCase::FoldPlus ? c.F2_plus : c.F2_minus;
    }
    CurveSite s;
    s.params = {beta, a, std::sqrt(F2)};
    s.eq = equilibrium_from_rho(a, s.params.F, rho);
    s.eq.multiplicity = kind == BifurcationKind::IOmega2 ? 1 : 2;
    return s;
}

NormalFormCoefficients coeffs_closed(BifurcationKind kind, int beta, FoldCase fc, double a) {
    check_validity(kind, beta, fc, a);
    NormalFormCoefficients out;
    out.method = CoeffMethod::ClosedForm;
    constexpr double eps = 1e-12;
    auto sign_check = [](bool ok, const char* what) {
        if (!ok)
            throw SignViolation(what);
    };

    if (kind == BifurcationKind::IOmega2) {
        const double F2 = 1 + (1 - a) * (1 - a);
        IOmega2Coeffs c;
        if (beta == 1) {
            c.a2 = (a - 1) / std::pow(a - 2, 3);
            c.b2 = 2 * F2 * (41 - 30 * a) / (9 * std::pow(a - 2, 5));
            sign_check(c.a2 > -eps, "a2 > 0 violated");
            sign_check(c.b2 < eps, "b2 < 0 violated");
        } else {
            c.a2 = (a - 1) / std::pow(2 - a, 3);
            c.b2 = 2 * F2 * (41 - 30 * a) / (9 * std::pow(2 - a, 5));
            sign_check(c.a2 * (a - 1) > -eps, "sign(a2) = sign(alpha*-1) violated");
            sign_check(c.b2 * (41 - 30 * a) > -eps, "sign(b2) = sign(41-30 alpha*) violated");
        }
        out.v = c;
        return out;
    }

    const double g = std::sqrt(a * a - 3);
    const double s = fc == FoldCase::FoldPlus ? 1.0 : -1.0;
    const CriticalPoints cp = critical_points(a);
    const double F = std::sqrt(fc == FoldCase::FoldPlus ? cp.F2_plus : cp.F2_minus);
    const double den1 = a * a * a - 9 * a + s * (a * a + 6) * g;
    // With beta = +1 on the upper fold these are -a1, b1 and c1/2.
    const double Ap = 9 * F * (a + s * g) / (2 * den1);
    const double Bp = 3 * F * (2 * std::pow(a, 5) - 18 * a + s * (2 * std::pow(a, 4) + 3 * a * a + 9) * g) /
                      (2 * (a * a + 3 + s * a * g) * den1);

    if (kind == BifurcationKind::O2IOmega) {
        O2IOmegaCoeffs c;
        c.a1 = -beta * Ap;
        c.b1 = beta * Bp;
        c.c1 = 2 * beta * Ap;
        sign_check(c.a1 < eps, "a1 < 0 violated");
        sign_check(c.c1 > -eps, "c1 > 0 violated");
        if (beta == -1 && fc == FoldCase::FoldMinus)
            sign_check(c.b1 < eps, "b1 < 0 violated");
        else
            sign_check(c.b1 > -eps, "b1 > 0 violated");
        out.v = c;
        return out;
    }

    O2Coeffs c;
    c.a = -beta * Ap;
    c.b = beta * Bp;
    sign_check(c.a > -eps, "a > 0 violated");
    if (beta == 1 && fc == FoldCase::FoldMinus)
        sign_check(c.b > -eps, "b > 0 violated");
    else
        sign_check(c.b < eps, "b < 0 violated");
    out.v = c;
    return out;
}

namespace {

double real_part(cd z, double& worst) {
    worst = std::max(worst, std::abs(z.imag()) / (1 + std::abs(z.real())));
    return z.real();
}

} // namespace

NormalFormCoefficients coeffs_numeric(const BifurcationBasis& basis, const Params& p, const Equilibrium& eq) {
    const TaylorForms f = taylor_forms(p, eq);
    NormalFormCoefficients out;
    out.method = CoeffMethod::NumericProjection;
    double& im = out.max_imag_residue;

    if (auto B = std::get_if<IOmega2Basis>(&basis.v)) {
        const PhiVectors phi = solve_phi_iomega2(p, eq, *B, f);
        const CVec4 z0 = B->zeta0, z0b = B->zeta0.conjugate();
        IOmega2Coeffs c;
        c.a2 = real_part(inner(f.r11(z0) + 2.0 * f.r20(z0, phi.phi00001), B->zeta1_adj), im);
        c.b2 = real_part(inner(2.0 * f.r20(z0, phi.phi10100) + 2.0 * f.r20(z0b, phi.phi20000) +
                                   3.0 * f.r30(z0, z0, z0b),
                               B->zeta1_adj),
                         im);
        out.v = c;
    } else if (auto B = std::get_if<O2IOmegaBasis>(&basis.v)) {
        O2IOmegaCoeffs c;
        c.a1 = real_part(inner(f.r01(), B->zeta1_adj), im);
        c.b1 = real_part(inner(f.r20(B->zeta0, B->zeta0), B->zeta1_adj), im);
        c.c1 = real_part(inner(2.0 * f.r20(B->zeta, B->zeta.conjugate()), B->zeta1_adj), im);
        out.v = c;
    } else {
        const auto& Bo = std::get<O2Basis>(basis.v);
        O2Coeffs c;
        c.a = real_part(inner(f.r01(), Bo.zeta1_adj), im);
        c.b = real_part(inner(f.r20(Bo.zeta0, Bo.zeta0), Bo.zeta1_adj), im);
        out.v = c;
    }
    return out;
}

NormalFormCoefficients coeffs_numeric(BifurcationKind kind, const Params& p, const Equilibrium& eq) {
    const BifurcationClass cls = classify(p, eq);
    if (cls.kind != kind)
        throw WrongClass("requested " + std::string(to_string(kind)) + " but spectrum is " +
                         std::string(to_string(cls.kind)));
    return coeffs_numeric(build_basis(cls, p, eq), p, eq);
}

} // namespace lle
