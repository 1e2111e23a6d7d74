// Acceptance run: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit code is 0 iff every criterion run passed.

#include "lle/errors.hpp"
#include "lle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace lle;

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Range {
    BifurcationKind kind;
    int beta;
    FoldCase fc;
    double lo, hi;
};

const Range kRanges[] = {
    {BifurcationKind::IOmega2, 1, FoldCase::None, 2.05, 6},
    {BifurcationKind::IOmega2, -1, FoldCase::None, 0.2, 1.95},
    {BifurcationKind::O2IOmega, 1, FoldCase::FoldPlus, 2.02, 6},
    {BifurcationKind::O2IOmega, -1, FoldCase::FoldPlus, 1.76, 1.98},
    {BifurcationKind::O2IOmega, -1, FoldCase::FoldMinus, 1.76, 6},
    {BifurcationKind::O2, 1, FoldCase::FoldPlus, 1.76, 1.98},
    {BifurcationKind::O2, 1, FoldCase::FoldMinus, 1.76, 6},
    {BifurcationKind::O2, -1, FoldCase::FoldPlus, 2.02, 6},
};

bool excluded(const Range& r, double a) {
    if (r.kind == BifurcationKind::IOmega2)
        return std::abs(a - 1) < 1e-3 || std::abs(a - 2) < 0.02;
    return std::abs(a - kSqrt3) < 0.02 || std::abs(a - 2) < 0.02;
}

std::vector<double> grid(const Range& r, int n = 200) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double a = r.lo + (r.hi - r.lo) * i / (n - 1);
        if (!excluded(r, a))
            out.push_back(a);
    }
    return out;
}

// Fold-class constant and quadratic terms from the projection identities.
std::pair<double, double> fold_oracle(int beta, FoldCase fc, double a) {
    const CriticalPoints c = critical_points(a);
    const double rho = fc == FoldCase::FoldPlus ? c.rho_plus : c.rho_minus;
    const Equilibrium e = equilibrium_from_rho(a, std::sqrt(rho * (1 + (rho - a) * (rho - a))), rho);
    const double D = (3 * e.psi_r * e.psi_r + e.psi_i * e.psi_i - a) / (1 - 2 * e.psi_r * e.psi_i);
    return {beta * (-e.psi_i / D), beta * (2 * D * e.psi_r + (3 * D * D + 1) * e.psi_i) / D};
}

Outcome criterion1() {
    Outcome o;
    double worst = 0, worst_c1 = 0;
    int points = 0;
    for (const Range& r : kRanges) {
        for (double a : grid(r)) {
            const auto closed = coeffs_closed(r.kind, r.beta, r.fc, a).named();
            const CurveSite s = curve_site(r.kind, r.beta, r.fc, a);
            const NormalFormCoefficients num = coeffs_numeric(r.kind, s.params, s.eq);
            const auto numeric = num.named();
            for (std::size_t j = 0; j < closed.size(); ++j)
                worst = std::max(worst, std::abs(numeric[j].second - closed[j].second) / (1 + std::abs(closed[j].second)));
            if (r.kind == BifurcationKind::O2IOmega)
                worst_c1 = std::max(worst_c1, std::abs(closed[2].second + 2 * closed[0].second) /
                                                  (1 + std::abs(closed[0].second)));
            ++points;
        }
    }
    const auto spot = std::get<IOmega2Coeffs>(coeffs_closed(BifurcationKind::IOmega2, 1, FoldCase::None, 3).v);
    const CurveSite s = curve_site(BifurcationKind::IOmega2, 1, FoldCase::None, 3);
    const auto sn = std::get<IOmega2Coeffs>(coeffs_numeric(BifurcationKind::IOmega2, s.params, s.eq).v);
    const double spot_err = std::max({std::abs(spot.a2 - 2) / 2, std::abs(spot.b2 + 490.0 / 9) / (490.0 / 9),
                                      std::abs(sn.a2 - 2) / 2, std::abs(sn.b2 + 490.0 / 9) / (490.0 / 9)});
    o.pass = worst <= 1e-8 && worst_c1 <= 1e-12 && spot_err <= 1e-8;
    o.detail = std::to_string(points) + " grid points, max rel diff " + fmt("%.2e", worst) + ", max |c1+2a1| " +
               fmt("%.2e", worst_c1) + ", spot (2, -490/9) rel err " + fmt("%.2e", spot_err);
    return o;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double m = 0.5 * (lo + hi), fm = f(m);
        if ((fm > 0) == (flo > 0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

Outcome criterion2() {
    Outcome o;
    int checked = 0, bad = 0;
    auto expect = [&](bool ok) {
        ++checked;
        bad += !ok;
    };
    for (const Range& r : kRanges) {
        for (double a : grid(r)) {
            NormalFormCoefficients c;
            try {
                c = coeffs_closed(r.kind, r.beta, r.fc, a);
            } catch (const SignViolation&) {
                expect(false);
                continue;
            }
            if (r.kind == BifurcationKind::IOmega2) {
                const auto k = std::get<IOmega2Coeffs>(c.v);
                if (r.beta == 1) {
                    expect(k.a2 > 0);
                    expect(k.b2 < 0);
                } else {
                    expect(k.a2 * (a - 1) > 0);
                    expect(k.b2 * (41 - 30 * a) > 0);
                }
                continue;
            }
            const auto [c0, c2] = fold_oracle(r.beta, r.fc, a);
            if (r.kind == BifurcationKind::O2IOmega) {
                const auto k = std::get<O2IOmegaCoeffs>(c.v);
                const bool b1_neg = r.beta == -1 && r.fc == FoldCase::FoldMinus;
                for (double a1 : {k.a1, c0})
                    expect(a1 < 0);
                for (double b1 : {k.b1, c2})
                    expect(b1_neg ? b1 < 0 : b1 > 0);
                expect(k.c1 > 0);
            } else {
                const auto k = std::get<O2Coeffs>(c.v);
                const bool b_pos = r.beta == 1 && r.fc == FoldCase::FoldMinus;
                for (double aa : {k.a, c0})
                    expect(aa > 0);
                for (double bb : {k.b, c2})
                    expect(b_pos ? bb > 0 : bb < 0);
            }
        }
    }
    auto a2 = [](double a) {
        return std::get<IOmega2Coeffs>(coeffs_closed(BifurcationKind::IOmega2, -1, FoldCase::None, a).v).a2;
    };
    auto b2 = [](double a) {
        return std::get<IOmega2Coeffs>(coeffs_closed(BifurcationKind::IOmega2, -1, FoldCase::None, a).v).b2;
    };
    const double z1 = bisect(a2, 0.5, 1.5), z2 = bisect(b2, 1.2, 1.5);
    const double e1 = std::abs(z1 - 1), e2 = std::abs(z2 - 41.0 / 30);
    o.pass = bad == 0 && e1 <= 1e-10 && e2 <= 1e-10;
    o.detail = std::to_string(checked) + " sign checks, " + std::to_string(bad) + " violated; a2 zero at " +
               fmt("%.12f", z1) + ", b2 zero at " + fmt("%.12f", z2) + " (41/30 = 1.366666666667)";
    return o;
}

// Classification along a curve parametrization; nullopt when ambiguous.
std::optional<BifurcationKind> class_on(int beta, double a, bool fold) {
    const double rho = fold ? critical_points(a).rho_plus : 1.0;
    const double F = std::sqrt(rho * (1 + (rho - a) * (rho - a)));
    try {
        return classify({beta, a, F}, equilibrium_from_rho(a, F, rho)).kind;
    } catch (const AmbiguousClassification&) {
        return std::nullopt;
    }
}

Outcome criterion3() {
    Outcome o;
    const Params p0{1, 2, std::sqrt(2.0)};
    const SpectrumReport r0 = spatial_spectrum(p0, equilibrium_from_rho(2, p0.F, 1));
    double zmax = 0;
    for (const auto& x : r0.eigenvalues)
        zmax = std::max(zmax, std::abs(x));
    const bool o4 = zmax <= 1e-8 && r0.cls && r0.cls->kind == BifurcationKind::O4;

    const Params p1{1, 3, std::sqrt(5.0)};
    const SpectrumReport r1 = spatial_spectrum(p1, equilibrium_from_rho(3, p1.F, 1));
    const bool iw = r1.cls && r1.cls->kind == BifurcationKind::IOmega2 && std::abs(r1.cls->omega - 1) <= 1e-10;

    // Class changes along each curve at alpha = 2, to within the grid step.
    const double h = 0.01;
    double worst = 0;
    struct Curve {
        int beta;
        bool fold;
        BifurcationKind below, above;
    };
    const Curve curves[] = {
        {1, false, BifurcationKind::Hyperbolic, BifurcationKind::IOmega2},
        {-1, false, BifurcationKind::IOmega2, BifurcationKind::Hyperbolic},
        {1, true, BifurcationKind::O2, BifurcationKind::O2IOmega},
        {-1, true, BifurcationKind::O2IOmega, BifurcationKind::O2},
    };
    bool pattern = true;
    for (const Curve& c : curves) {
        double last_below = -1, first_above = -1;
        for (double a = 1.76; a <= 3.0 + 1e-12; a += h) {
            const auto k = class_on(c.beta, a, c.fold);
            if (!k)
                continue;
            if (*k == c.below && first_above < 0)
                last_below = a;
            else if (*k == c.above && first_above < 0)
                first_above = a;
            else if (*k != c.above && *k != c.below && *k != BifurcationKind::O4)
                pattern = false;
            if (first_above > 0 && *k == c.below)
                pattern = false;
        }
        if (last_below < 0 || first_above < 0)
            pattern = false;
        worst = std::max({worst, std::abs(last_below - 2), std::abs(first_above - 2)});
    }
    o.pass = o4 && iw && pattern && worst <= h;
    o.detail = "cusp max|X| " + fmt("%.1e", zmax) + (o4 ? " O4" : " not O4") + "; (3,5) omega " +
               fmt("%.12f", r1.cls ? r1.cls->omega : NAN) + "; transitions within " + fmt("%.3f", worst) +
               " of alpha = 2" + (pattern ? "" : " (class pattern broken)");
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(0, 6), uf(1e-3, 40);
    int bad = 0, used = 0;
    for (int s = 0; s < 10000; ++s) {
        const double a = ua(rng), F2 = uf(rng);
        const RegionTag t = classify_region(a, F2);
        const int n = int(solve_equilibria({1, a, std::sqrt(F2)}).size());
        ++used;
        if (t == RegionTag::OneEquilibrium || t == RegionTag::ThreeEquilibria)
            bad += n != expected_root_count(t);
        else
            bad += n < 1 || n > 3;
    }
    double worst = 0;
    for (int i = 0; i < 400; ++i) {
        const double a = 1.74 + 4.26 * i / 399;
        const CriticalPoints c = critical_points(a);
        for (double r : {c.rho_plus, c.rho_minus})
            worst = std::max(worst, std::abs(3 * r * r - 4 * a * r + a * a + 1));
    }
    o.pass = bad == 0 && worst <= 1e-10;
    o.detail = std::to_string(used) + " samples, " + std::to_string(bad) + " count mismatches; max |dF2/drho| at folds " +
               fmt("%.1e", worst);
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::vector<double> xs;
    for (int i = 0; i <= 100; ++i)
        xs.push_back(-60 + 1.2 * i);
    double worst = 0, worst_fi = 0;
    int solutions = 0;
    const Family by_class[3][5] = {
        {Family::IOmega2Periodic, Family::IOmega2Homoclinic, Family::IOmega2DarkFront},
        {Family::O2IOmegaEquilibriumPlus, Family::O2IOmegaEquilibriumMinus, Family::O2IOmegaPeriodicFirstKind,
         Family::O2IOmegaPeriodicSecondKind, Family::O2IOmegaHomoclinicToPeriodic},
        {Family::O2EquilibriumPlus, Family::O2EquilibriumMinus, Family::O2Periodic, Family::O2Homoclinic},
    };
    const int counts[3] = {3, 5, 4};
    for (const Range& r : kRanges) {
        const int ci = r.kind == BifurcationKind::IOmega2 ? 0 : r.kind == BifurcationKind::O2IOmega ? 1 : 2;
        for (double a : {r.lo + 0.1 * (r.hi - r.lo), 0.5 * (r.lo + r.hi), r.hi}) {
            if (excluded(r, a))
                continue;
            const NormalFormCoefficients co = coeffs_closed(r.kind, r.beta, r.fc, a);
            for (int fi = 0; fi < counts[ci]; ++fi)
                for (double mu : {1e-3, -1e-3})
                    for (double K : {0.0, 0.2e-3})
                        for (int branch : {1, -1, 0})
                            for (int phase : {0, 1}) {
                                ProfileRequest q;
                                q.family = by_class[ci][fi];
                                q.beta = r.beta;
                                q.fold = r.fc;
                                q.alpha_star = a;
                                q.mu = mu;
                                q.K = K;
                                q.eps = 0.1;
                                q.branch = branch;
                                q.phase = phase;
                                TruncatedSolution ts;
                                try {
                                    ts = truncated_solution(q);
                                } catch (const RegimeError&) {
                                    continue;
                                }
                                if (!ts.exact)
                                    continue;
                                const OracleResult res = truncated_oracle(co, ts, xs);
                                worst = std::max(worst, res.max_defect);
                                worst_fi = std::max(worst_fi, res.first_integral_defect);
                                ++solutions;
                            }
        }
    }
    o.pass = solutions > 0 && worst <= 1e-10 && worst_fi <= 1e-15;
    o.detail = std::to_string(solutions) + " closed-form solutions, max defect " + fmt("%.2e", worst) +
               ", max |d|C|^2/dx| " + fmt("%.2e", worst_fi);
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::string fails;
    for (const FamilySpec& f : standard_families()) {
        const ResidualReport r = residual_scaling(f, standard_mu_list());
        o.detail += f.tag + " " + fmt("%.4f", r.fitted_slope) + "; ";
        if (!r.pass) {
            o.pass = false;
            fails += " " + f.tag;
        }
    }
    o.detail = "slopes: " + o.detail + (fails.empty() ? "all >= 1.0" : "below 1.0:" + fails);
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::string notes;
    for (const FamilySpec& f : standard_periodic_families()) {
        std::vector<double> mus, dist;
        std::string line = f.tag + ":";
        for (double m : standard_mu_list()) {
            ProfileRequest q = f.base;
            q.mu = f.mu_sign * m;
            q.K = f.K_per_mu * m;
            const SolutionProfile g = construct(q);
            try {
                const RefinedOrbit r = refine_periodic(g);
                const bool ok = r.newton_iterations <= 10 && r.defect <= 1e-10;
                if (m == 1e-3 && !ok) {
                    o.pass = false;
                    line += " mu=1e-3 defect " + fmt("%.1e", r.defect);
                }
                mus.push_back(m);
                dist.push_back(orbit_distance(g, r));
            } catch (const Error&) {
                if (m == 1e-3) {
                    o.pass = false;
                    line += " no convergence at mu=1e-3,";
                }
            }
        }
        line += " converged at " + std::to_string(mus.size()) + "/" + std::to_string(standard_mu_list().size()) + " mu,";
        if (mus.size() >= 3 && mus.front() / mus.back() >= 99) {
            const double s = loglog_slope(mus, dist);
            line += " distance slope " + fmt("%.3f", s);
            if (s < 1.0)
                o.pass = false;
        } else {
            line += " too few converged mu for a slope";
            o.pass = false;
        }
        notes += (notes.empty() ? "" : "; ") + line;
    }
    o.detail = notes;
    return o;
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(-2, 6), ur(0.05, 4);
    double alg = 0;
    for (int s = 0; s < 200; ++s) {
        const double a = ua(rng), rho = ur(rng);
        const double F = std::sqrt(rho * (1 + (rho - a) * (rho - a)));
        alg = std::max(alg, check_reversibility({s % 2 ? 1 : -1, a, F}, equilibrium_from_rho(a, F, rho), 50, s));
    }
    double flow_defect = 0;
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    for (const FamilySpec& f : standard_periodic_families()) {
        ProfileRequest q = f.base;
        q.mu = f.mu_sign * 1e-3;
        q.K = f.K_per_mu * 1e-3;
        const SpatialSystem sys = spatial_system(construct(q));
        for (int s = 0; s < 10; ++s) {
            const Vec4 U0(u(rng), 0, u(rng), 0);
            const Trajectory fw = integrate(sys, U0, 0, 20, 1e-3);
            const Trajectory bw = integrate(sys, U0, 0, -20, 1e-3);
            for (std::size_t j = 0; j < std::min(fw.U.size(), bw.U.size()); ++j) {
                const Vec4 su(fw.U[j](0), -fw.U[j](1), fw.U[j](2), -fw.U[j](3));
                flow_defect = std::max(flow_defect, (bw.U[j] - su).norm());
            }
        }
    }
    o.pass = alg <= 1e-12 && flow_defect <= 1e-8;
    o.detail = "anticommutation defect " + fmt("%.1e", alg) + " over 200 points; flow reversibility defect " +
               fmt("%.1e", flow_defect) + " over |x| <= 20";
    return o;
}

Outcome criterion9() {
    Outcome o;
    const Params p{1, 3, 2};
    const auto eqs = solve_equilibria(p);
    if (eqs.size() != 3) {
        o.pass = false;
        o.detail = "expected three equilibria at (3, 4)";
        return o;
    }
    const TemporalSpectrum s1 = temporal_spectrum_constant(p, eqs[0]);
    const TemporalSpectrum s2 = temporal_spectrum_constant(p, eqs[1]);
    const TemporalSpectrum s3 = temporal_spectrum_constant(p, eqs[2]);
    const Params q{1, 0, std::sqrt(2.0)};
    const TemporalSpectrum s0 = temporal_spectrum_constant(q, solve_equilibria(q)[0]);
    o.pass = s1.verdict == Stability::Stable && s2.verdict == Stability::Unstable &&
             s3.verdict == Stability::Stable && s0.verdict == Stability::Stable;
    o.detail = "(3,4) growth rates " + fmt("%.4f", s1.max_growth) + " / " + fmt("%.4f", s2.max_growth) + " / " +
               fmt("%.4f", s3.max_growth) + "; (0,2) growth " + fmt("%.4f", s0.max_growth);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    Outcome (*const table[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                  criterion6, criterion7, criterion8, criterion9};
    int lo = 1, hi = 9;
    if (argc > 1) {
        lo = hi = std::atoi(argv[1]);
        if (lo < 1 || lo > 9) {
            std::fprintf(stderr, "usage: %s [1-9]\n", argv[0]);
            return 2;
        }
    }
    bool all = true;
    for (int i = lo; i <= hi; ++i) {
        Outcome o;
        try {
            o = table[i - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s %s\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
