#include "lle/linearization.hpp"

#include "lle/errors.hpp"

#include <cmath>
#include <random>

namespace lle {

std::string_view to_string(BifurcationKind k) {
    switch (k) {
    case BifurcationKind::Hyperbolic: return "Hyperbolic";
    case BifurcationKind::EllipticNoBif: return "EllipticNoBif";
    case BifurcationKind::IOmega2: return "IOmega2";
    case BifurcationKind::O2IOmega: return "O2IOmega";
    case BifurcationKind::O2: return "O2";
    case BifurcationKind::O4: return "O4";
    }
    return "?";
}

SpatialMatrix build_L(const Params& p, const Equilibrium& eq) {
    const double b = p.beta;
    const double pr = eq.psi_r, pi = eq.psi_i, a = p.alpha;
    SpatialMatrix L;
    L.entries(0, 1) = 1;
    L.entries(2, 3) = 1;
    L.entries(1, 0) = b * (3 * pr * pr + pi * pi - a);
    L.entries(1, 2) = b * (2 * pr * pi - 1);
    L.entries(3, 0) = b * (2 * pr * pi + 1);
    L.entries(3, 2) = b * (pr * pr + 3 * pi * pi - a);
    return L;
}

double spectrum_T(const Params& p, const Equilibrium& eq) {
    return p.beta * (4 * eq.rho - 2 * p.alpha);
}

double spectrum_Delta(const Params& p, const Equilibrium& eq) {
    const double r = eq.rho, a = p.alpha;
    return 3 * r * r - 4 * a * r + a * a + 1;
}

namespace {

struct Snapped {
    double T, Delta, disc;
    bool delta_zero, trace_zero, disc_zero;
};

Snapped snap(double T, double Delta, double tol) {
    Snapped s{T, Delta, T * T - 4 * Delta, false, false, false};
    s.delta_zero = std::abs(Delta) <= tol;
    s.trace_zero = std::abs(T) <= tol;
    // A double pair splits like sqrt(disc), so the test is made on disc itself.
    s.disc_zero = std::abs(s.disc) <= tol * std::max(1.0, T * T);
    return s;
}

BifurcationClass classify_snapped(const Snapped& s) {
    using K = BifurcationKind;
    if (!std::isfinite(s.T) || !std::isfinite(s.Delta))
        throw AmbiguousClassification("non-finite spectrum coefficients");
    if (s.delta_zero && s.trace_zero)
        return {K::O4, 0};
    if (s.delta_zero && s.disc_zero)
        throw AmbiguousClassification("zero eigenvalue and double pair without a quadruple zero");
    if (s.delta_zero)
        return s.T < 0 ? BifurcationClass{K::O2IOmega, std::sqrt(-s.T)} : BifurcationClass{K::O2, 0};
    if (s.disc_zero)
        return s.T < 0 ? BifurcationClass{K::IOmega2, std::sqrt(-s.T / 2)} : BifurcationClass{K::Hyperbolic, 0};
    if (s.disc < 0)
        return {K::Hyperbolic, 0};
    const double r = std::sqrt(s.disc);
    const double y1 = (s.T + r) / 2, y2 = (s.T - r) / 2;
    if (y1 < 0 || y2 < 0)
        return {K::EllipticNoBif, 0};
    return {K::Hyperbolic, 0};
}

void check_against_matrix(const Params& p, const Equilibrium& eq, double T, double Delta) {
    const Mat4 L = build_L(p, eq).entries;
    const double Tm = L(1, 0) + L(3, 2);
    const double Dm = L(1, 0) * L(3, 2) - L(1, 2) * L(3, 0);
    const double scale = 1 + 4 * std::abs(eq.rho) + 2 * std::abs(p.alpha);
    if (std::abs(Tm - T) > 1e-12 * scale || std::abs(Dm - Delta) > 1e-12 * scale * scale)
        throw DomainError("equilibrium inconsistent with its spatial matrix");
}

} // namespace

SpectrumReport spatial_spectrum(const Params& p, const Equilibrium& eq, const ClassifyOptions& opt) {
    const double T = spectrum_T(p, eq);
    const double Delta = spectrum_Delta(p, eq);
    check_against_matrix(p, eq, T, Delta);

    const Snapped s = snap(T, Delta, opt.tol);
    using C = std::complex<double>;
    C y1, y2;
    if (s.delta_zero) {
        y1 = s.trace_zero ? 0.0 : T;
        y2 = 0.0;
    } else if (s.disc_zero) {
        y1 = y2 = T / 2;
    } else if (s.disc > 0) {
        const double q = (T + std::copysign(std::sqrt(s.disc), T)) / 2;
        y1 = q;
        y2 = Delta / q;
    } else {
        y1 = C(T / 2, std::sqrt(-s.disc) / 2);
        y2 = std::conj(y1);
    }
    const C x1 = std::sqrt(y1), x2 = std::sqrt(y2);

    SpectrumReport rep;
    rep.eigenvalues = {x1, -x1, x2, -x2};
    rep.trace_coeff = T;
    rep.det_coeff = Delta;
    try {
        rep.cls = classify_snapped(s);
    } catch (const AmbiguousClassification&) {
        rep.cls.reset();
    }
    return rep;
}

BifurcationClass classify(const Params& p, const Equilibrium& eq, const ClassifyOptions& opt) {
    if (!(opt.tol > 0))
        throw DomainError("classification tolerance must be positive");
    const double T = spectrum_T(p, eq);
    const double Delta = spectrum_Delta(p, eq);
    check_against_matrix(p, eq, T, Delta);
    return classify_snapped(snap(T, Delta, opt.tol));
}

std::vector<CurvePoint> bifurcation_curves(int beta, double alpha) {
    using K = BifurcationKind;
    std::vector<CurvePoint> out;
    const bool cusp = std::abs(alpha - 2) <= 1e-12;
    if (!cusp && beta * (alpha - 2) > 0)
        out.push_back({{K::IOmega2, std::sqrt(beta * (alpha - 2))}, 1 + (1 - alpha) * (1 - alpha), 1.0});
    if (cusp)
        out.push_back({{K::O4, 0}, 2.0, 1.0});
    if (alpha > 0 && alpha * alpha > 3) {
        const CriticalPoints c = critical_points(alpha);
        auto fold = [&](double rho, double F2) {
            const double T = beta * (4 * rho - 2 * alpha);
            if (T < 0)
                out.push_back({{K::O2IOmega, std::sqrt(-T)}, F2, rho});
            else
                out.push_back({{K::O2, 0}, F2, rho});
        };
        if (!cusp)
            fold(c.rho_plus, c.F2_plus);
        fold(c.rho_minus, c.F2_minus);
    }
    return out;
}

Vec4 R01(int beta, const Equilibrium& eq) {
    return Vec4(0, -beta * eq.psi_r, 0, -beta * eq.psi_i);
}

Vec4 nonlinear_part(int beta, const Equilibrium& eq, const Vec4& U, double mu) {
    return mu * R01(beta, eq) + mu * R11<double>(beta, U) + quadratic_part<double>(beta, eq, U) +
           cubic_part<double>(beta, U);
}

std::complex<double> stationary_rhs(const Params& p, std::complex<double> psi) {
    const std::complex<double> i(0, 1);
    return double(p.beta) * ((i - p.alpha) * psi + psi * std::norm(psi) - i * p.F);
}

double check_reversibility(const Params& p, const Equilibrium& eq, int n_samples, std::uint64_t seed) {
    return check_reversibility(build_L(p, eq), p, eq, n_samples, seed);
}

double check_reversibility(const SpatialMatrix& L, const Params& p, const Equilibrium& eq, int n_samples,
                           std::uint64_t seed) {
    if (n_samples < 1)
        throw DomainError("n_samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int s = 0; s < n_samples; ++s) {
        Vec4 U;
        do {
            U = Vec4(u(rng), u(rng), u(rng), u(rng));
        } while (U.norm() > 1);
        const double mu = 1e-2 * u(rng);
        const Vec4 lin = L.entries * reverse<double>(U) + reverse<double>(Vec4(L.entries * U));
        const Vec4 nl = nonlinear_part(p.beta, eq, reverse<double>(U), mu) +
                        reverse<double>(nonlinear_part(p.beta, eq, U, mu));
        worst = std::max({worst, lin.cwiseAbs().maxCoeff(), nl.cwiseAbs().maxCoeff()});
    }
    return worst;
}

} // namespace lle
