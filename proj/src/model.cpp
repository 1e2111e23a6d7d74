#include "lle/model.hpp"

#include "lle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lle {

void Params::validate() const {
    if (beta != 1 && beta != -1)
        throw DomainError("beta must be +1 or -1");
    if (!std::isfinite(alpha))
        throw DomainError("alpha must be finite");
    if (!(F > 0) || !std::isfinite(F))
        throw DomainError("F must be finite and positive");
}

std::string_view to_string(RegionTag tag) {
    switch (tag) {
    case RegionTag::OneEquilibrium: return "OneEquilibrium";
    case RegionTag::ThreeEquilibria: return "ThreeEquilibria";
    case RegionTag::FoldUpper: return "FoldUpper";
    case RegionTag::FoldLower: return "FoldLower";
    case RegionTag::Cusp: return "Cusp";
    }
    return "?";
}

int expected_root_count(RegionTag tag) {
    switch (tag) {
    case RegionTag::OneEquilibrium: return 1;
    case RegionTag::ThreeEquilibria: return 3;
    default: return 2;
    }
}

double equilibrium_cubic(double alpha, double F2, double rho) {
    return ((rho - 2 * alpha) * rho + (alpha * alpha + 1)) * rho - F2;
}

double equilibrium_cubic_derivative(double alpha, double rho) {
    return 3 * rho * rho - 4 * alpha * rho + alpha * alpha + 1;
}

Equilibrium equilibrium_from_rho(double alpha, double F, double rho) {
    const double d = rho - alpha;
    const double den = 1 + d * d;
    return {F / den, F * d / den, rho, 1};
}

namespace {

double polish(double alpha, double F2, double rho) {
    for (int it = 0; it < 2; ++it) {
        const double dp = equilibrium_cubic_derivative(alpha, rho);
        if (dp == 0)
            break;
        const double step = equilibrium_cubic(alpha, F2, rho) / dp;
        rho -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(rho)))
            break;
    }
    return rho;
}

// Real roots of t^3 + p t + q with the trigonometric / hyperbolic forms.
std::vector<double> depressed_roots(double p, double q) {
    const double disc = -(4 * p * p * p + 27 * q * q);
    if (disc > 0) {
        const double m = 2 * std::sqrt(-p / 3);
        const double arg = std::clamp(3 * q / (2 * p) * std::sqrt(-3 / p), -1.0, 1.0);
        const double theta = std::acos(arg) / 3;
        std::vector<double> t(3);
        for (int k = 0; k < 3; ++k)
            t[k] = m * std::cos(theta - 2 * std::numbers::pi * k / 3);
        return t;
    }
    if (p < 0) {
        const double arg = -3 * std::abs(q) / (2 * p) * std::sqrt(-3 / p);
        const double sgn = q > 0 ? 1.0 : -1.0;
        return {-2 * sgn * std::sqrt(-p / 3) * std::cosh(std::acosh(std::max(arg, 1.0)) / 3)};
    }
    if (p > 0)
        return {-2 * std::sqrt(p / 3) * std::sinh(std::asinh(3 * q / (2 * p) * std::sqrt(3 / p)) / 3)};
    return {std::cbrt(-q)};
}

} // namespace

std::vector<Equilibrium> solve_equilibria(const Params& prm, const EquilibriumOptions& opt) {
    prm.validate();
    const double a = prm.alpha;
    const double F2 = prm.F * prm.F;

    // rho = t + 2a/3
    const double shift = 2 * a / 3;
    const double p = 1 - a * a / 3;
    const double q = (2 * a * a * a + 18 * a) / 27 - F2;
    const double disc = -(4 * p * p * p + 27 * q * q);

    std::vector<Equilibrium> out;
    if (std::abs(disc) <= opt.double_root_tol && a * a >= 3) {
        // Snap the double root onto the exact critical point of F^2(rho).
        const double g = std::sqrt(a * a - 3);
        const double rp = (2 * a - g) / 3;
        const double rm = (2 * a + g) / 3;
        const double rc = std::abs(equilibrium_cubic(a, F2, rp)) <= std::abs(equilibrium_cubic(a, F2, rm)) ? rp : rm;
        if (std::abs(equilibrium_cubic(a, F2, rc)) <= 1e-10) {
            const double rs = 2 * a - 2 * rc;
            if (std::abs(rs - rc) <= 1e-6) {
                Equilibrium e = equilibrium_from_rho(a, prm.F, rc);
                e.multiplicity = 3;
                return {e};
            }
            Equilibrium ec = equilibrium_from_rho(a, prm.F, rc);
            ec.multiplicity = 2;
            out.push_back(ec);
            out.push_back(equilibrium_from_rho(a, prm.F, polish(a, F2, rs)));
            std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.rho < y.rho; });
            return out;
        }
    }

    for (double t : depressed_roots(p, q)) {
        const double rho = polish(a, F2, t + shift);
        if (rho > 0)
            out.push_back(equilibrium_from_rho(a, prm.F, rho));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.rho < y.rho; });
    return out;
}

CriticalPoints critical_points(double alpha) {
    if (!(alpha * alpha > 3) || alpha < 0)
        throw DomainError("critical points require alpha > sqrt(3)");
    const double g = std::sqrt(alpha * alpha - 3);
    CriticalPoints c{};
    c.rho_plus = (2 * alpha - g) / 3;
    c.rho_minus = (2 * alpha + g) / 3;
    auto f2 = [alpha](double r) { return r * (1 + (r - alpha) * (r - alpha)); };
    c.F2_plus = f2(c.rho_plus);
    c.F2_minus = f2(c.rho_minus);
    return c;
}

RegionTag classify_region(double alpha, double F2, double tol) {
    if (!(F2 > 0))
        throw DomainError("F2 must be positive");
    if (std::abs(alpha - 2) <= tol && std::abs(F2 - 2) <= tol)
        return RegionTag::Cusp;
    if (alpha <= std::sqrt(3.0))
        return RegionTag::OneEquilibrium;
    const CriticalPoints c = critical_points(alpha);
    if (std::abs(F2 - c.F2_plus) <= tol)
        return RegionTag::FoldUpper;
    if (std::abs(F2 - c.F2_minus) <= tol)
        return RegionTag::FoldLower;
    if (F2 > c.F2_minus && F2 < c.F2_plus)
        return RegionTag::ThreeEquilibria;
    return RegionTag::OneEquilibrium;
}

double algebraic_residual(const Params& p, const Equilibrium& eq) {
    const std::complex<double> psi = eq.psi();
    const std::complex<double> i(0, 1);
    return std::abs(i * psi * std::norm(psi) - (1.0 + i * p.alpha) * psi + p.F);
}

} // namespace lle
