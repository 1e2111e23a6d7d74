#include "lle/verify.hpp"

#include "lle/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <numbers>

namespace lle {

namespace {

using cd = std::complex<double>;
constexpr cd I{0, 1};

constexpr double kStencil[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
constexpr int kTrim = 8;

double resample_residual(const SolutionProfile& prof, int n) {
    SolutionProfile q;
    q.params = prof.params;
    q.periodic = prof.periodic;
    q.span = prof.span;
    q.eval = prof.eval;
    sample(q, n);
    return residual_norm(q.params, q.x, q.psi, q.periodic);
}

double roundoff_floor(const SolutionProfile& prof, int n) {
    double m = 0;
    for (const cd& v : prof.psi)
        m = std::max(m, std::abs(v));
    const double h = prof.periodic ? prof.span / n : prof.span / (n - 1);
    return 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, m) / (h * h);
}

Vec4 rk4_step(const SpatialSystem& sys, const Vec4& U, double h) {
    const Vec4 k1 = sys.rhs(U);
    const Vec4 k2 = sys.rhs(U + 0.5 * h * k1);
    const Vec4 k3 = sys.rhs(U + 0.5 * h * k2);
    const Vec4 k4 = sys.rhs(U + h * k3);
    return U + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

} // namespace

double residual_norm(const Params& p, const std::vector<double>& x, const std::vector<cd>& psi, bool periodic) {
    const int n = int(psi.size());
    if (n < 2 * kTrim + 7 || x.size() != psi.size())
        throw DomainError("residual needs a uniform grid of at least 23 points");
    const double h = x[1] - x[0];
    const double ih2 = 1 / (h * h);
    const int lo = periodic ? 0 : kTrim, hi = periodic ? n : n - kTrim;
    double worst = 0;
    for (int j = lo; j < hi; ++j) {
        cd d2 = 0;
        for (int m = -3; m <= 3; ++m) {
            int idx = j + m;
            if (periodic)
                idx = (idx % n + n) % n;
            d2 += kStencil[m + 3] * psi[idx];
        }
        d2 *= ih2;
        const cd r = double(p.beta) * d2 - ((I - p.alpha) * psi[j] + psi[j] * std::norm(psi[j]) - I * p.F);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

Residual stationary_residual(const SolutionProfile& prof) {
    const int n = int(prof.x.size());
    // Below four points per carrier wavelength the n / 2n comparison can agree
    // on an aliased value, so the estimate means nothing.
    const double h = n > 1 ? prof.x[1] - prof.x[0] : 0;
    if (prof.k * 2 * h > std::numbers::pi)
        throw GridTooCoarse("grid step " + std::to_string(h) + " under-resolves the carrier k = " +
                            std::to_string(prof.k));
    const double r0 = residual_norm(prof.params, prof.x, prof.psi, prof.periodic);
    const double r1 = resample_residual(prof, 2 * n);
    const double e0 = std::abs(r0 - r1);
    if (e0 <= 0.1 * r0 || e0 <= roundoff_floor(prof, n))
        return {r0, e0, n, false};
    const double r2 = resample_residual(prof, 4 * n);
    const double e1 = std::abs(r1 - r2);
    if (e1 <= 0.1 * r1 || e1 <= roundoff_floor(prof, 2 * n))
        return {r1, e1, 2 * n, true};
    throw GridTooCoarse("differentiation error " + std::to_string(e1) + " exceeds 10% of residual " +
                        std::to_string(r1) + " after refinement");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw DomainError("slope fit needs at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            throw DomainError("log-log fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (!(den > 0))
        throw DomainError("slope fit needs distinct abscissae");
    return (n * sxy - sx * sy) / den;
}

ResidualReport residual_scaling(const FamilySpec& spec, const std::vector<double>& mu_list) {
    if (mu_list.size() < 3)
        throw DomainError("residual scaling needs at least 3 values of mu");
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double m : mu_list) {
        if (!(m > 0))
            throw DomainError("mu_list entries must be positive magnitudes");
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (std::log10(hi / lo) < 2 - 1e-9)
        throw DomainError("mu_list must span at least two decades");
    if (spec.mu_sign != 1 && spec.mu_sign != -1)
        throw DomainError("mu_sign must be +1 or -1");

    ResidualReport rep;
    rep.family = spec.tag.empty() ? std::string(to_string(spec.base.family)) : spec.tag;
    rep.mu_list = mu_list;
    for (double m : mu_list) {
        ProfileRequest r = spec.base;
        r.mu = spec.mu_sign * m;
        if (spec.K_per_mu != 0)
            r.K = spec.K_per_mu * m;
        const Residual res = stationary_residual(construct(r));
        rep.residual_norms.push_back(res.value);
        rep.error_estimates.push_back(res.error_estimate);
    }
    rep.fitted_slope = loglog_slope(rep.mu_list, rep.residual_norms);
    rep.pass = std::isfinite(rep.fitted_slope) && rep.fitted_slope >= 1.0;
    return rep;
}

std::vector<double> standard_mu_list() { return {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}; }

std::vector<FamilySpec> standard_families() {
    auto make = [](std::string tag, Family f, int beta, FoldCase fc, double a, double sign, double kpm, double eps) {
        FamilySpec s;
        s.tag = std::move(tag);
        s.base.family = f;
        s.base.beta = beta;
        s.base.fold = fc;
        s.base.alpha_star = a;
        s.base.eps = eps;
        s.base.branch = f == Family::O2IOmegaHomoclinicToPeriodic ? 0 : 1;
        s.mu_sign = sign;
        s.K_per_mu = kpm;
        return s;
    };
    const auto N = FoldCase::None, P = FoldCase::FoldPlus;
    return {
        make("iomega2/periodic", Family::IOmega2Periodic, 1, N, 3, 1, 0, 0),
        make("iomega2/homoclinic", Family::IOmega2Homoclinic, 1, N, 3, 1, 0, 0),
        make("iomega2/dark-front", Family::IOmega2DarkFront, -1, N, 1.2, -1, 0, 0),
        make("o2iomega/equilibrium-plus", Family::O2IOmegaEquilibriumPlus, 1, P, 3, 1, 0, 0),
        make("o2iomega/equilibrium-minus", Family::O2IOmegaEquilibriumMinus, 1, P, 3, 1, 0, 0),
        make("o2iomega/first-kind", Family::O2IOmegaPeriodicFirstKind, 1, P, 3, 1, 0.25, 0),
        make("o2iomega/second-kind", Family::O2IOmegaPeriodicSecondKind, 1, P, 3, 1, 0, 0.1),
        make("o2iomega/homoclinic-to-periodic", Family::O2IOmegaHomoclinicToPeriodic, 1, P, 3, 1, 0, 0),
        make("o2/equilibrium-plus", Family::O2EquilibriumPlus, 1, P, 1.8, 1, 0, 0),
        make("o2/equilibrium-minus", Family::O2EquilibriumMinus, 1, P, 1.8, 1, 0, 0),
        make("o2/periodic", Family::O2Periodic, 1, P, 1.8, 1, 0, 0.05),
        make("o2/homoclinic", Family::O2Homoclinic, 1, P, 1.8, 1, 0, 0),
    };
}

std::vector<FamilySpec> standard_periodic_families() {
    std::vector<FamilySpec> out;
    for (auto& s : standard_families())
        if (is_periodic(s.base.family) && s.base.family != Family::O2IOmegaEquilibriumPlus &&
            s.base.family != Family::O2IOmegaEquilibriumMinus && s.base.family != Family::O2EquilibriumPlus &&
            s.base.family != Family::O2EquilibriumMinus)
            out.push_back(s);
    return out;
}

Vec4 SpatialSystem::rhs(const Vec4& U) const {
    return build_L(star, eq).entries * U + nonlinear_part(star.beta, eq, U, mu);
}

SpatialSystem spatial_system(const SolutionProfile& prof) {
    SpatialSystem s;
    s.star = prof.params;
    s.star.alpha = prof.alpha_star;
    s.eq = prof.eq_star;
    s.mu = prof.mu;
    return s;
}

Vec4 flow(const SpatialSystem& sys, const Vec4& U0, double length, int n) {
    if (n < 1)
        throw DomainError("flow needs at least one step");
    const double h = length / n;
    Vec4 U = U0;
    for (int i = 0; i < n; ++i)
        U = rk4_step(sys, U, h);
    return U;
}

Trajectory integrate(const SpatialSystem& sys, const Vec4& U0, double x0, double x1, double step) {
    if (!(step > 0))
        throw DomainError("step must be positive");
    if (!std::isfinite(x0) || !std::isfinite(x1))
        throw DomainError("x_span must be finite");
    const int n = std::max(1, int(std::ceil(std::abs(x1 - x0) / step - 1e-9)));
    const double h = (x1 - x0) / n;
    Trajectory t;
    t.x.reserve(n + 1);
    t.U.reserve(n + 1);
    t.x.push_back(x0);
    t.U.push_back(U0);
    Vec4 U = U0, Uh = U0;
    for (int i = 0; i < n; ++i) {
        U = rk4_step(sys, U, h);
        Uh = rk4_step(sys, rk4_step(sys, Uh, h / 2), h / 2);
        if (!U.allFinite() || U.norm() > 1e6) {
            t.blow_up = true;
            break;
        }
        t.x.push_back(x0 + (i + 1) * h);
        t.U.push_back(U);
        t.steps = i + 1;
        t.max_step_error = std::max(t.max_step_error, (U - Uh).cwiseAbs().maxCoeff());
    }
    return t;
}

RefinedOrbit refine_periodic(const SolutionProfile& guess, std::optional<double> anchor, double step) {
    if (!guess.periodic || !(guess.k > 0))
        throw DomainError("refine_periodic needs a non-constant periodic profile");
    if (!(step > 0))
        throw DomainError("step must be positive");
    const SpatialSystem sys = spatial_system(guess);
    const cd p0 = guess.eval(0.0) - sys.eq.psi();
    RefinedOrbit out;
    out.guess_initial = Vec4(p0.real(), 0, p0.imag(), 0);
    out.guess_half_period = std::numbers::pi / guess.k;

    double growth = 0;
    for (const cd& e : spatial_spectrum(sys.star, sys.eq).eigenvalues)
        growth = std::max(growth, e.real());
    const int M = std::max(1, int(std::ceil(growth * out.guess_half_period / 2)));
    const int per = int(std::ceil(out.guess_half_period / step / M));
    out.segments = M;
    out.steps = M * per;
    const double a = anchor.value_or((guess.eval(0.0) - guess.eval(out.guess_half_period)).real());

    // v = (u1, u3, T, nodes 1..M-1)
    const int n = 3 + 4 * (M - 1);
    auto node = [&](const Eigen::VectorXd& v, int j) {
        return j == 0 ? Vec4(v(0), 0, v(1), 0) : Vec4(v.segment<4>(3 + 4 * (j - 1)));
    };
    auto G = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd g(n);
        for (int j = 0; j < M; ++j) {
            const Vec4 E = flow(sys, node(v, j), v(2) / M, per);
            if (j + 1 < M) {
                g.segment<4>(4 * j) = E - node(v, j + 1);
            } else {
                g(4 * j) = E(1);
                g(4 * j + 1) = E(3);
                g(n - 1) = v(0) - E(0) - a;
            }
        }
        return g;
    };

    Eigen::VectorXd v(n);
    v(0) = p0.real();
    v(1) = p0.imag();
    v(2) = out.guess_half_period;
    for (int j = 1; j < M; ++j) {
        const double x = j * out.guess_half_period / M, d = 1e-5;
        const cd u = guess.eval(x) - sys.eq.psi();
        const cd du = (guess.eval(x + d) - guess.eval(x - d)) / (2 * d);
        v.segment<4>(3 + 4 * (j - 1)) = Vec4(u.real(), du.real(), u.imag(), du.imag());
    }
    for (int it = 0;; ++it) {
        const Eigen::VectorXd g = G(v);
        if (!g.allFinite())
            throw NoConvergence("shooting trajectory left the finite range");
        out.defect = g.head(n - 1).cwiseAbs().maxCoeff();
        if (out.defect <= 1e-10 && std::abs(g(n - 1)) <= 1e-12) {
            out.newton_iterations = it;
            break;
        }
        if (it == 10)
            throw NoConvergence("boundary defect " + std::to_string(out.defect) + " after 10 Newton steps");
        Eigen::MatrixXd J(n, n);
        for (int c = 0; c < n; ++c) {
            const double d = 1e-7 * (1 + std::abs(v(c)));
            Eigen::VectorXd vp = v, vm = v;
            vp(c) += d;
            vm(c) -= d;
            J.col(c) = (G(vp) - G(vm)) / (2 * d);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (lu.rank() < n || lu.rcond() < 1e-14)
            throw SingularJacobian("shooting Jacobian is singular");
        // Backtracking on |g| keeps the step inside the basin of the guess.
        const Eigen::VectorXd dv = lu.solve(g);
        double t = 1;
        Eigen::VectorXd trial = v - dv;
        for (int k = 0; k < 12; ++k) {
            if (trial(2) > 0) {
                const Eigen::VectorXd gt = G(trial);
                if (gt.allFinite() && gt.norm() < g.norm())
                    break;
            }
            t /= 2;
            trial = v - t * dv;
        }
        v = trial;
        if (!(v(2) > 0))
            throw NoConvergence("half period became non-positive");
    }
    out.half_period = v(2);
    for (int j = 0; j < M; ++j)
        out.nodes.push_back(node(v, j));
    out.initial = out.nodes[0];
    return out;
}

double orbit_distance(const SolutionProfile& guess, const RefinedOrbit& orbit) {
    const SpatialSystem sys = spatial_system(guess);
    const int per = orbit.steps / orbit.segments;
    const double h = orbit.half_period / orbit.steps;
    double worst = 0;
    for (int j = 0; j < orbit.segments; ++j) {
        Vec4 U = orbit.nodes[j];
        for (int i = 0; i <= per; ++i) {
            if (i > 0)
                U = rk4_step(sys, U, h);
            const double x = (j * per + i) * h;
            worst = std::max(worst, std::abs(sys.psi(U) - guess.eval(x)));
        }
    }
    return worst;
}

OracleResult truncated_oracle(const NormalFormCoefficients& ode, const TruncatedSolution& sol,
                              const std::vector<double>& xs) {
    OracleResult r;
    const double mu = sol.mu, w = sol.omega;
    for (double x : xs) {
        const TruncatedState s = sol.value(x), d = sol.derivative(x);
        double e = 0;
        if (auto c = std::get_if<IOmega2Coeffs>(&ode.v)) {
            if (sol.cls != BifurcationKind::IOmega2)
                throw DomainError("oracle coefficients do not match the solution's class");
            e = std::max(std::abs(d.A - (I * w * s.A + s.B)),
                         std::abs(d.B - (I * w * s.B + c->a2 * mu * s.A + c->b2 * std::norm(s.A) * s.A)));
        } else if (auto c = std::get_if<O2IOmegaCoeffs>(&ode.v)) {
            if (sol.cls != BifurcationKind::O2IOmega)
                throw DomainError("oracle coefficients do not match the solution's class");
            e = std::max({std::abs(d.A - s.B), std::abs(d.B - (c->a1 * mu + c->b1 * s.A * s.A + c->c1 * std::norm(s.C))),
                          std::abs(d.C - I * w * s.C)});
            r.first_integral_defect = std::max(r.first_integral_defect, std::abs(2 * std::real(std::conj(s.C) * d.C)));
        } else {
            const auto& o = std::get<O2Coeffs>(ode.v);
            if (sol.cls != BifurcationKind::O2)
                throw DomainError("oracle coefficients do not match the solution's class");
            e = std::max(std::abs(d.A - s.B), std::abs(d.B - (o.a * mu + o.b * s.A * s.A)));
        }
        r.max_defect = std::max(r.max_defect, e);
    }
    return r;
}

std::string_view to_string(Stability s) { return s == Stability::Stable ? "Stable" : "Unstable"; }

std::vector<double> default_k_grid() {
    std::vector<double> k(512);
    for (int i = 0; i < 512; ++i)
        k[i] = 8.0 * i / 511;
    return k;
}

TemporalSpectrum temporal_spectrum_constant(const Params& p, const Equilibrium& eq, const std::vector<double>& k_grid) {
    TemporalSpectrum t;
    t.k = k_grid;
    t.max_growth = -std::numeric_limits<double>::infinity();
    const double rho = eq.rho;
    for (double k : k_grid) {
        const double m = p.beta * k * k + 2 * rho - p.alpha;
        const cd root = std::sqrt(cd(rho * rho - m * m, 0));
        t.lambda_plus.push_back(-1.0 + root);
        t.lambda_minus.push_back(-1.0 - root);
        t.max_growth = std::max(t.max_growth, t.lambda_plus.back().real());
    }
    t.verdict = t.max_growth > 1e-10 ? Stability::Unstable : Stability::Stable;
    return t;
}

} // namespace lle
