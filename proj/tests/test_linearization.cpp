#include "lle/errors.hpp"
#include "lle/linearization.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lle;
using cd = std::complex<double>;

namespace {

Equilibrium on_rho(double alpha, double rho) {
    const double F = std::sqrt(rho * (1 + (rho - alpha) * (rho - alpha)));
    return equilibrium_from_rho(alpha, F, rho);
}

Params params_on_rho(int beta, double alpha, double rho) {
    return {beta, alpha, std::sqrt(rho * (1 + (rho - alpha) * (rho - alpha)))};
}

// Greedy nearest matching; returns the worst distance.
double match(std::array<cd, 4> a, std::vector<cd> b) {
    double worst = 0;
    for (const cd& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cd u, cd v) { return std::abs(u - x) < std::abs(v - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

} // namespace

TEST_CASE("double imaginary pair on the rho = 1 line") {
    const Params p{1, 3, std::sqrt(5.0)};
    const Equilibrium e = on_rho(3, 1);
    CHECK(spectrum_T(p, e) == doctest::Approx(-2));
    CHECK(spectrum_Delta(p, e) == doctest::Approx(1));
    const SpectrumReport r = spatial_spectrum(p, e);
    for (const cd& x : r.eigenvalues) {
        CHECK(std::abs(x.real()) <= 1e-12);
        CHECK(std::abs(std::abs(x.imag()) - 1) <= 1e-12);
    }
    REQUIRE(r.cls.has_value());
    CHECK(r.cls->kind == BifurcationKind::IOmega2);
    CHECK(std::abs(r.cls->omega - 1) <= 1e-10);
}

TEST_CASE("quadruple zero at the cusp") {
    const Params p{1, 2, std::sqrt(2.0)};
    const Equilibrium e = on_rho(2, 1);
    const SpectrumReport r = spatial_spectrum(p, e);
    for (const cd& x : r.eigenvalues)
        CHECK(std::abs(x) <= 1e-8);
    CHECK(classify(p, e).kind == BifurcationKind::O4);
}

TEST_CASE("fold classes") {
    const CriticalPoints c3 = critical_points(3);
    const BifurcationClass k = classify(params_on_rho(1, 3, c3.rho_plus), on_rho(3, c3.rho_plus));
    CHECK(k.kind == BifurcationKind::O2IOmega);
    CHECK(k.omega * k.omega == doctest::Approx(2.0 / 3 * (2 * std::sqrt(6.0) - 3)).epsilon(1e-12));
    CHECK(k.omega * k.omega == doctest::Approx(1.265986).epsilon(1e-6));

    const CriticalPoints c18 = critical_points(1.8);
    CHECK(classify(params_on_rho(1, 1.8, c18.rho_plus), on_rho(1.8, c18.rho_plus)).kind == BifurcationKind::O2);
    CHECK(classify(params_on_rho(-1, 1.8, c18.rho_plus), on_rho(1.8, c18.rho_plus)).kind ==
          BifurcationKind::O2IOmega);
    CHECK(classify(params_on_rho(-1, 3, c3.rho_plus), on_rho(3, c3.rho_plus)).kind == BifurcationKind::O2);
}

TEST_CASE("ambiguous point between the cusp and a fold") {
    // Delta = 0 on the fold, T ~ 1e-5: the double pair and the zero pair are
    // indistinguishable at tol = 1e-8 without T being zero.
    const double a = 2 + 5e-6;
    const CriticalPoints c = critical_points(a);
    const Params p = params_on_rho(1, a, c.rho_plus);
    const Equilibrium e = on_rho(a, c.rho_plus);
    CHECK_THROWS_AS(classify(p, e), AmbiguousClassification);
    CHECK_FALSE(spatial_spectrum(p, e).cls.has_value());
}

TEST_CASE("inconsistent equilibrium is rejected") {
    Equilibrium e = on_rho(3, 1);
    e.rho += 1e-3;
    CHECK_THROWS_AS(spatial_spectrum({1, 3, std::sqrt(5.0)}, e), DomainError);
    CHECK_THROWS_AS(classify({1, 3, std::sqrt(5.0)}, on_rho(3, 1), {0.0}), DomainError);
}

TEST_CASE("closed-form spectrum against a dense eigen-solver") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(-2, 6), ur(0.05, 4);
    for (int s = 0; s < 500; ++s) {
        const int beta = s % 2 ? 1 : -1;
        const double a = ua(rng), rho = ur(rng);
        const Params p = params_on_rho(beta, a, rho);
        const Equilibrium e = on_rho(a, rho);
        const Mat4 L = build_L(p, e).entries;
        CHECK(std::abs(L(1, 0) + L(3, 2) - spectrum_T(p, e)) <= 1e-12 * (1 + std::abs(spectrum_T(p, e))));
        Eigen::EigenSolver<Mat4> es(L);
        std::vector<cd> ref(es.eigenvalues().data(), es.eigenvalues().data() + 4);
        const SpectrumReport r = spatial_spectrum(p, e);
        const double scale = 1 + std::abs(spectrum_T(p, e)) + std::sqrt(std::abs(spectrum_Delta(p, e)));
        const double disc = std::abs(spectrum_T(p, e) * spectrum_T(p, e) - 4 * spectrum_Delta(p, e));
        if (disc < 1e-4 || std::abs(spectrum_Delta(p, e)) < 1e-4)
            continue;  // defective eigenvalues are only sqrt(eps) accurate in the dense solver
        CHECK(match(r.eigenvalues, ref) <= 1e-9 * scale);
        for (const cd& x : r.eigenvalues) {
            const cd x2 = x * x;
            const cd q = x2 * x2 - spectrum_T(p, e) * x2 + spectrum_Delta(p, e);
            CHECK(std::abs(q) <= 1e-10 * scale * scale * scale * scale);
        }
        // Hyperbolic means no eigenvalue on the imaginary axis.
        if (r.cls) {
            bool imaginary = false;
            for (const cd& x : r.eigenvalues)
                imaginary |= std::abs(x.real()) <= 1e-9 * scale;
            if (r.cls->kind == BifurcationKind::Hyperbolic)
                CHECK_FALSE(imaginary);
            if (r.cls->kind == BifurcationKind::EllipticNoBif)
                CHECK(imaginary);
        }
    }
}

TEST_CASE("bifurcation curves") {
    for (int i = 0; i <= 500; ++i) {
        const double a = 1.75 + 3.25 * i / 500;
        for (const CurvePoint& c : bifurcation_curves(1, a)) {
            if (c.cls.kind == BifurcationKind::IOmega2) {
                CHECK(a > 2);
                CHECK(c.F2 == doctest::Approx(1 + (1 - a) * (1 - a)));
            }
        }
        for (const CurvePoint& c : bifurcation_curves(-1, a))
            if (c.cls.kind == BifurcationKind::O2)
                CHECK(a > 2);
    }
    const auto cusp = bifurcation_curves(1, 2.0);
    CHECK(std::count_if(cusp.begin(), cusp.end(), [](const CurvePoint& c) { return c.cls.kind == BifurcationKind::O4; }) == 1);
    CHECK(bifurcation_curves(1, 1.0).empty());
    CHECK(bifurcation_curves(-1, 1.0).size() == 1);

    // Each tagged curve point classifies to its own tag.
    for (double a : {1.8, 2.5, 3.0, 4.5})
        for (int beta : {1, -1})
            for (const CurvePoint& c : bifurcation_curves(beta, a)) {
                const Params p{beta, a, std::sqrt(c.F2)};
                CHECK(classify(p, on_rho(a, c.rho)).kind == c.cls.kind);
            }
}

TEST_CASE("reversibility identities") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ua(-2, 6), ur(0.05, 4);
    for (int s = 0; s < 50; ++s) {
        const double a = ua(rng), rho = ur(rng);
        const Params p = params_on_rho(s % 2 ? 1 : -1, a, rho);
        CHECK(check_reversibility(p, on_rho(a, rho), 40, s) <= 1e-12);
    }
}

TEST_CASE("reversibility mutation") {
    const Params p{1, 3, std::sqrt(5.0)};
    const Equilibrium e = on_rho(3, 1);
    SpatialMatrix odd = build_L(p, e);
    odd.entries(1, 1) += 1e-3;  // couples psi_r' to itself: breaks L S = -S L
    const double d = check_reversibility(odd, p, e, 200, 1);
    CHECK(d >= 1e-3);
    CHECK(d <= 2e-3 + 1e-12);

    SpatialMatrix cross = build_L(p, e);
    cross.entries(1, 0) += 1e-3;  // maps an S-even slot to an S-odd one: still anticommutes
    CHECK(check_reversibility(cross, p, e, 200, 1) <= 1e-12);
}

TEST_CASE("stationary right-hand side vanishes at equilibria") {
    for (const Equilibrium& e : solve_equilibria({1, 3, 2}))
        CHECK(std::abs(stationary_rhs({1, 3, 2}, e.psi())) <= 1e-12);
}
