#include "lle/profiles.hpp"

#include "lle/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace lle {

namespace {

using cd = std::complex<double>;
constexpr cd I{0, 1};

double sech(double x) { return 1 / std::cosh(x); }

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

void require(bool ok, const char* clause) {
    if (!ok)
        throw RegimeError(clause);
}

struct Site {
    CurveSite cs;
    double omega = 0;
    double C = 0;  // IOmega2
    double s = 0;  // 1 + 2 pr pi
    double D = 0;  // fold classes
    cd psi_star;
};

Site make_site(BifurcationKind kind, int beta, FoldCase fc, double a) {
    Site st;
    st.cs = curve_site(kind, beta, fc, a);
    const double pr = st.cs.eq.psi_r, pi = st.cs.eq.psi_i;
    st.psi_star = st.cs.eq.psi();
    st.s = 1 + 2 * pr * pi;
    if (kind == BifurcationKind::IOmega2) {
        st.omega = std::sqrt(beta * (a - 2));
        st.C = (1 - 2 * pr * pi) / (3 * pr * pr + pi * pi - 2);
    } else {
        st.D = (3 * pr * pr + pi * pi - a) / (1 - 2 * pr * pi);
        const double T = beta * (4 * st.cs.eq.rho - 2 * a);
        st.omega = T < 0 ? std::sqrt(-T) : 0.0;
    }
    return st;
}

template <class T>
const T& as(const NormalFormCoefficients& c) {
    const T* p = std::get_if<T>(&c.v);
    if (!p)
        throw DomainError("coefficients do not match the family's class");
    return *p;
}

NormalFormCoefficients coeffs_for(const ProfileRequest& r) {
    const BifurcationKind kind = family_class(r.family);
    const FoldCase fc = kind == BifurcationKind::IOmega2 ? FoldCase::None : r.fold;
    return r.coeffs ? *r.coeffs : coeffs_closed(kind, r.beta, fc, r.alpha_star);
}

int saddle_branch(int branch, double b) {
    return branch == 0 ? (b > 0 ? 1 : -1) : branch;
}

void setup_grid(SolutionProfile& p, const GridSpec& g) {
    const double two_pi = 2 * std::numbers::pi;
    if (p.periodic) {
        const double period = p.k > 0 ? two_pi / p.k : two_pi;
        p.span = g.periods * period;
        sample(p, g.n);
        return;
    }
    p.span = 2 * g.decay_widths / p.decay_rate;
    const double hmax = p.k > 0 ? two_pi / p.k / g.points_per_wavelength : std::numeric_limits<double>::infinity();
    const double need = std::ceil(p.span / hmax) + 1;
    sample(p, std::max<int>(g.n, std::isfinite(need) ? int(need) : 0));
}

} // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::IOmega2Periodic: return "iomega2-periodic";
    case Family::IOmega2Homoclinic: return "iomega2-homoclinic";
    case Family::IOmega2DarkFront: return "iomega2-dark-front";
    case Family::O2IOmegaEquilibriumPlus: return "o2iomega-equilibrium-plus";
    case Family::O2IOmegaEquilibriumMinus: return "o2iomega-equilibrium-minus";
    case Family::O2IOmegaPeriodicFirstKind: return "o2iomega-periodic-first-kind";
    case Family::O2IOmegaPeriodicSecondKind: return "o2iomega-periodic-second-kind";
    case Family::O2IOmegaHomoclinicToPeriodic: return "o2iomega-homoclinic-to-periodic";
    case Family::O2EquilibriumPlus: return "o2-equilibrium-plus";
    case Family::O2EquilibriumMinus: return "o2-equilibrium-minus";
    case Family::O2Periodic: return "o2-periodic";
    case Family::O2Homoclinic: return "o2-homoclinic";
    }
    return "?";
}

BifurcationKind family_class(Family f) {
    switch (f) {
    case Family::IOmega2Periodic:
    case Family::IOmega2Homoclinic:
    case Family::IOmega2DarkFront: return BifurcationKind::IOmega2;
    case Family::O2IOmegaEquilibriumPlus:
    case Family::O2IOmegaEquilibriumMinus:
    case Family::O2IOmegaPeriodicFirstKind:
    case Family::O2IOmegaPeriodicSecondKind:
    case Family::O2IOmegaHomoclinicToPeriodic: return BifurcationKind::O2IOmega;
    default: return BifurcationKind::O2;
    }
}

bool is_localized(Family f) {
    return f == Family::IOmega2Homoclinic || f == Family::IOmega2DarkFront ||
           f == Family::O2IOmegaHomoclinicToPeriodic || f == Family::O2Homoclinic;
}

bool is_periodic(Family f) { return !is_localized(f); }

void sample(SolutionProfile& p, int n) {
    if (n < 2)
        throw DomainError("grid needs at least two points");
    p.x.resize(n);
    p.psi.resize(n);
    const double h = p.periodic ? p.span / n : p.span / (n - 1);
    const double c = p.periodic ? n / 2.0 : (n - 1) / 2.0;
    for (int j = 0; j < n; ++j) {
        p.x[j] = (j - c) * h;
        p.psi[j] = p.eval(p.x[j]);
    }
}

SolutionProfile construct(const ProfileRequest& r) {
    if (r.phase != 0 && r.phase != 1)
        throw DomainError("phase must be 0 or pi");
    if (!std::isfinite(r.mu) || r.mu == 0)
        throw DomainError("mu must be finite and nonzero");
    const BifurcationKind kind = family_class(r.family);
    const FoldCase fc = kind == BifurcationKind::IOmega2 ? FoldCase::None : r.fold;
    const Site st = make_site(kind, r.beta, fc, r.alpha_star);
    const NormalFormCoefficients co = coeffs_for(r);
    const double mu = r.mu;
    const cd ps = st.psi_star;

    SolutionProfile p;
    p.family = r.family;
    p.alpha_star = r.alpha_star;
    p.fold = fc;
    p.mu = mu;
    p.K = r.K;
    p.eps = r.eps;
    p.branch = r.branch;
    p.phase = r.phase;
    p.eq_star = st.cs.eq;
    p.params = {r.beta, r.alpha_star + mu, st.cs.params.F};
    p.periodic = is_periodic(r.family);
    p.localized = is_localized(r.family);
    p.truncation_order = "O(mu)";
    const double sphi = r.phase == 0 ? 1.0 : -1.0;

    switch (r.family) {
    case Family::IOmega2Periodic: {
        const auto& c = as<IOmega2Coeffs>(co);
        const double r2 = -(c.a2 * mu + r.K * r.K) / c.b2;
        require(r2 > 0, "(-a2*mu - K^2)/b2 > 0");
        const double amp = std::sqrt(r2);
        p.k = st.omega + r.K;
        // First harmonic of B = iK A through zeta1.
        const cd coef = 2 * amp * cd(st.C - 2 * r.beta * st.omega * r.K / st.s, 1.0);
        const double k = p.k;
        p.eval = [=](double x) { return ps + coef * std::cos(k * x); };
        p.amplitude = 2 * amp;
        break;
    }
    case Family::IOmega2Homoclinic: {
        const auto& c = as<IOmega2Coeffs>(co);
        require(c.a2 * mu > 0, "a2*mu > 0");
        require(c.b2 < 0, "b2 < 0");
        const double e = std::sqrt(c.a2 * mu);
        const double amp = std::sqrt(-2 * c.a2 * mu / c.b2);
        const double pr = st.cs.eq.psi_r, pi = st.cs.eq.psi_i;
        const double den = r.denominator == HomoclinicDenominator::Printed ? 1 + pr * pi : 1 + 2 * pr * pi;
        const double second = r.beta * 4 * st.omega / den * std::sqrt(-2 / c.b2) * c.a2 * mu;
        const cd lead = 2.0 * cd(st.C, 1.0) * amp;
        const double w = st.omega;
        p.k = w;
        p.decay_rate = e;
        p.eval = [=](double x) {
            const double s = sech(e * x);
            return ps + lead * s * std::cos(w * x) + second * std::tanh(e * x) * s * std::sin(w * x);
        };
        p.background = [=](double) { return ps; };
        p.amplitude = 2 * amp;
        p.truncation_order = "O(mu^{3/2})";
        break;
    }
    case Family::IOmega2DarkFront: {
        const auto& c = as<IOmega2Coeffs>(co);
        require(r.beta == -1, "beta = -1");
        require(r.alpha_star < 41.0 / 30.0, "alpha* < 41/30");
        require(r.alpha_star != 1, "alpha* != 1");
        require(c.b2 > 0, "b2 > 0");
        require(c.a2 * mu < 0, "a2*mu < 0");
        const double amp = std::sqrt(-c.a2 * mu / c.b2);
        const double e = std::sqrt(-c.a2 * mu / 2);
        const cd lead = -2.0 * cd(st.C, 1.0) * amp;
        const double second = -r.beta * 4 * st.omega / st.s * amp * e;
        const double w = st.omega;
        p.k = w;
        p.decay_rate = 2 * e;
        p.eval = [=](double x) {
            const double s = sech(e * x);
            return ps + lead * std::tanh(e * x) * std::sin(w * x) + second * s * s * std::cos(w * x);
        };
        p.background = [=](double x) { return ps + lead * sgn(x) * std::sin(w * x); };
        p.amplitude = 2 * amp;
        p.truncation_order = "O(|mu|^{3/2})";
        break;
    }
    case Family::O2IOmegaEquilibriumPlus:
    case Family::O2IOmegaEquilibriumMinus:
    case Family::O2IOmegaPeriodicSecondKind: {
        const auto& c = as<O2IOmegaCoeffs>(co);
        const double R = -c.a1 * mu / c.b1;
        require(R > 0, "-a1*mu/b1 > 0");
        const double A0 = std::sqrt(R);
        const cd dir(1.0, st.D);
        if (r.family == Family::O2IOmegaPeriodicSecondKind) {
            const double Ac = -sgn(c.b1) * A0;
            const double k = std::sqrt(2.0) * std::pow(-c.a1 * c.b1 * mu, 0.25);
            const double osc = r.eps * std::sqrt(std::abs(mu));
            p.k = k;
            p.eval = [=](double x) { return ps + dir * (Ac + osc * std::cos(k * x)); };
            p.amplitude = osc;
            p.truncation_order = "O(mu + eps(eps + mu))";
        } else {
            const double A = r.family == Family::O2IOmegaEquilibriumPlus ? A0 : -A0;
            p.eval = [=](double) { return ps + dir * A; };
            p.amplitude = A0;
        }
        break;
    }
    case Family::O2IOmegaPeriodicFirstKind:
    case Family::O2IOmegaHomoclinicToPeriodic: {
        const auto& c = as<O2IOmegaCoeffs>(co);
        require(r.K >= 0, "K >= 0");
        const double R = (-c.a1 * mu - c.c1 * r.K) / c.b1;
        require(R > 0, "(-a1*mu - c1*K)/b1 > 0");
        const double AK = std::sqrt(R);
        const cd dir(1.0, st.D);
        const double w = st.omega;
        const double osc = sphi * 2 * std::sqrt(r.K);
        p.k = w;
        p.amplitude = AK;
        if (r.family == Family::O2IOmegaPeriodicFirstKind) {
            const int br = r.branch == 0 ? 1 : r.branch;
            require(br == 1 || br == -1, "branch = +1 or -1");
            p.branch = br;
            const double A = br * AK;
            p.eval = [=](double x) { return ps + dir * A + osc * std::cos(w * x); };
        } else {
            const int br = saddle_branch(r.branch, c.b1);
            require(br == 1 || br == -1, "branch = +1 or -1");
            require(br * c.b1 > 0, "branch*b1 > 0 (saddle branch)");
            p.branch = br;
            const double As = br * AK;
            const double d = std::sqrt(c.b1 * As / 2);
            p.decay_rate = 2 * d;
            p.eval = [=](double x) {
                const double s = sech(d * x);
                return ps + dir * As * (1 - 3 * s * s) + osc * std::cos(w * x);
            };
            p.background = [=](double x) { return ps + dir * As + osc * std::cos(w * x); };
            if (r.K < r.K_min_factor * std::abs(mu))
                p.warnings.push_back("PersistenceWarning: K below the persistence floor K_min = " +
                                     std::to_string(r.K_min_factor * std::abs(mu)) +
                                     "; the orbit need not persist in the full system");
        }
        break;
    }
    case Family::O2EquilibriumPlus:
    case Family::O2EquilibriumMinus:
    case Family::O2Periodic:
    case Family::O2Homoclinic: {
        const auto& c = as<O2Coeffs>(co);
        const double R = -c.a * mu / c.b;
        require(R > 0, "-a*mu/b > 0 (no bounded solution otherwise)");
        const double A0 = std::sqrt(R);
        const cd dir(1.0, st.D);
        p.amplitude = A0;
        if (r.family == Family::O2Periodic) {
            const double Ac = -sgn(c.b) * A0;
            const double k = std::sqrt(2.0) * std::pow(-c.a * c.b * mu, 0.25);
            const double osc = r.eps * std::sqrt(std::abs(mu));
            p.k = k;
            p.eval = [=](double x) { return ps + dir * (Ac + osc * std::cos(k * x)); };
            p.truncation_order = "O(mu + eps(eps + mu))";
        } else if (r.family == Family::O2Homoclinic) {
            const double As = sgn(c.b) * A0;
            const double d = std::sqrt(c.b * As / 2);
            p.decay_rate = 2 * d;
            p.eval = [=](double x) {
                const double s = sech(d * x);
                return ps + dir * As * (1 - 3 * s * s);
            };
            p.background = [=](double) { return ps + dir * As; };
        } else {
            const double A = r.family == Family::O2EquilibriumPlus ? A0 : -A0;
            p.eval = [=](double) { return ps + dir * A; };
        }
        break;
    }
    }
    setup_grid(p, r.grid);
    return p;
}

SolutionProfile construct_iomega2(IOmega2Kind kind, int beta, double alpha_star, double mu, double K,
                                  const GridSpec& grid, HomoclinicDenominator denom) {
    ProfileRequest r;
    r.family = kind == IOmega2Kind::Periodic     ? Family::IOmega2Periodic
               : kind == IOmega2Kind::Homoclinic ? Family::IOmega2Homoclinic
                                                 : Family::IOmega2DarkFront;
    r.beta = beta;
    r.alpha_star = alpha_star;
    r.mu = mu;
    r.K = K;
    r.grid = grid;
    r.denominator = denom;
    return construct(r);
}

SolutionProfile construct_o2iomega(O2IOmegaKind kind, int beta, FoldCase fc, double alpha_star, double mu,
                                   double K_or_eps, int branch, int phase, const GridSpec& grid) {
    static constexpr Family map[] = {Family::O2IOmegaEquilibriumPlus, Family::O2IOmegaEquilibriumMinus,
                                     Family::O2IOmegaPeriodicFirstKind, Family::O2IOmegaPeriodicSecondKind,
                                     Family::O2IOmegaHomoclinicToPeriodic};
    ProfileRequest r;
    r.family = map[int(kind)];
    r.beta = beta;
    r.fold = fc;
    r.alpha_star = alpha_star;
    r.mu = mu;
    if (kind == O2IOmegaKind::PeriodicSecondKind)
        r.eps = K_or_eps;
    else
        r.K = K_or_eps;
    r.branch = branch;
    r.phase = phase;
    r.grid = grid;
    return construct(r);
}

SolutionProfile construct_o2(O2Kind kind, int beta, FoldCase fc, double alpha_star, double mu, double eps,
                             const GridSpec& grid) {
    static constexpr Family map[] = {Family::O2EquilibriumPlus, Family::O2EquilibriumMinus, Family::O2Periodic,
                                     Family::O2Homoclinic};
    ProfileRequest r;
    r.family = map[int(kind)];
    r.beta = beta;
    r.fold = fc;
    r.alpha_star = alpha_star;
    r.mu = mu;
    r.eps = eps;
    r.grid = grid;
    return construct(r);
}

TruncatedSolution truncated_solution(const ProfileRequest& r) {
    const BifurcationKind kind = family_class(r.family);
    const FoldCase fc = kind == BifurcationKind::IOmega2 ? FoldCase::None : r.fold;
    const Site st = make_site(kind, r.beta, fc, r.alpha_star);
    const NormalFormCoefficients co = coeffs_for(r);
    const double mu = r.mu;
    const double w = st.omega;

    TruncatedSolution t;
    t.cls = kind;
    t.omega = w;
    t.mu = mu;
    auto constant = [](cd A) {
        return std::pair{std::function<TruncatedState(double)>([=](double) { return TruncatedState{A, 0.0, 0.0}; }),
                         std::function<TruncatedState(double)>([](double) { return TruncatedState{0.0, 0.0, 0.0}; })};
    };

    switch (r.family) {
    case Family::IOmega2Periodic: {
        const auto& c = as<IOmega2Coeffs>(co);
        const double r2 = -(c.a2 * mu + r.K * r.K) / c.b2;
        require(r2 >= 0, "(-a2*mu - K^2)/b2 >= 0");
        const double amp = std::sqrt(r2), kap = w + r.K, K = r.K;
        t.value = [=](double x) {
            const cd A = amp * std::exp(I * kap * x);
            return TruncatedState{A, I * K * A, 0.0};
        };
        t.derivative = [=](double x) {
            const cd A = amp * std::exp(I * kap * x);
            return TruncatedState{I * kap * A, I * kap * I * K * A, 0.0};
        };
        break;
    }
    case Family::IOmega2Homoclinic: {
        const auto& c = as<IOmega2Coeffs>(co);
        require(c.a2 * mu > 0, "a2*mu > 0");
        require(c.b2 < 0, "b2 < 0");
        const double e = std::sqrt(c.a2 * mu), amp = std::sqrt(-2 * c.a2 * mu / c.b2);
        t.value = [=](double x) {
            const double s = sech(e * x), th = std::tanh(e * x);
            const cd ph = std::exp(I * w * x);
            return TruncatedState{amp * s * ph, -amp * e * th * s * ph, 0.0};
        };
        t.derivative = [=](double x) {
            const double s = sech(e * x), th = std::tanh(e * x);
            const cd ph = std::exp(I * w * x);
            const cd A = amp * s * ph, B = -amp * e * th * s * ph;
            return TruncatedState{-amp * e * th * s * ph + I * w * A,
                                  -amp * e * e * s * (s * s - th * th) * ph + I * w * B, 0.0};
        };
        break;
    }
    case Family::IOmega2DarkFront: {
        const auto& c = as<IOmega2Coeffs>(co);
        require(c.b2 > 0, "b2 > 0");
        require(c.a2 * mu < 0, "a2*mu < 0");
        const double amp = std::sqrt(-c.a2 * mu / c.b2), e = std::sqrt(-c.a2 * mu / 2);
        t.value = [=](double x) {
            const double s = sech(e * x), th = std::tanh(e * x);
            const cd ph = std::exp(I * w * x);
            return TruncatedState{I * amp * th * ph, I * amp * e * s * s * ph, 0.0};
        };
        t.derivative = [=](double x) {
            const double s = sech(e * x), th = std::tanh(e * x);
            const cd ph = std::exp(I * w * x);
            const cd A = I * amp * th * ph, B = I * amp * e * s * s * ph;
            return TruncatedState{I * amp * e * s * s * ph + I * w * A,
                                  I * amp * e * (-2 * e * s * s * th) * ph + I * w * B, 0.0};
        };
        break;
    }
    case Family::O2IOmegaEquilibriumPlus:
    case Family::O2IOmegaEquilibriumMinus: {
        const auto& c = as<O2IOmegaCoeffs>(co);
        const double R = -c.a1 * mu / c.b1;
        require(R > 0, "-a1*mu/b1 > 0");
        const double A = (r.family == Family::O2IOmegaEquilibriumPlus ? 1 : -1) * std::sqrt(R);
        std::tie(t.value, t.derivative) = constant(A);
        break;
    }
    case Family::O2EquilibriumPlus:
    case Family::O2EquilibriumMinus: {
        const auto& c = as<O2Coeffs>(co);
        const double R = -c.a * mu / c.b;
        require(R > 0, "-a*mu/b > 0 (no bounded solution otherwise)");
        const double A = (r.family == Family::O2EquilibriumPlus ? 1 : -1) * std::sqrt(R);
        std::tie(t.value, t.derivative) = constant(A);
        break;
    }
    case Family::O2IOmegaPeriodicFirstKind:
    case Family::O2IOmegaHomoclinicToPeriodic: {
        const auto& c = as<O2IOmegaCoeffs>(co);
        require(r.K >= 0, "K >= 0");
        const double R = (-c.a1 * mu - c.c1 * r.K) / c.b1;
        require(R > 0, "(-a1*mu - c1*K)/b1 > 0");
        const double AK = std::sqrt(R), rk = std::sqrt(r.K);
        const double phi = r.phase == 0 ? 0.0 : std::numbers::pi;
        if (r.family == Family::O2IOmegaPeriodicFirstKind) {
            const double A = (r.branch == 0 ? 1 : r.branch) * AK;
            t.value = [=](double x) { return TruncatedState{A, 0.0, rk * std::exp(I * (w * x + phi))}; };
            t.derivative = [=](double x) {
                return TruncatedState{0.0, 0.0, I * w * rk * std::exp(I * (w * x + phi))};
            };
        } else {
            const int br = saddle_branch(r.branch, c.b1);
            require(br * c.b1 > 0, "branch*b1 > 0 (saddle branch)");
            const double As = br * AK, d = std::sqrt(c.b1 * As / 2);
            t.value = [=](double x) {
                const double s = sech(d * x), th = std::tanh(d * x);
                return TruncatedState{As * (1 - 3 * s * s), 6 * As * d * s * s * th, rk * std::exp(I * (w * x + phi))};
            };
            t.derivative = [=](double x) {
                const double s = sech(d * x), th = std::tanh(d * x);
                return TruncatedState{6 * As * d * s * s * th, 6 * As * d * d * (s * s * s * s - 2 * s * s * th * th),
                                      I * w * rk * std::exp(I * (w * x + phi))};
            };
        }
        break;
    }
    case Family::O2Homoclinic: {
        const auto& c = as<O2Coeffs>(co);
        const double R = -c.a * mu / c.b;
        require(R > 0, "-a*mu/b > 0 (no bounded solution otherwise)");
        const double As = sgn(c.b) * std::sqrt(R), d = std::sqrt(c.b * As / 2);
        t.value = [=](double x) {
            const double s = sech(d * x), th = std::tanh(d * x);
            return TruncatedState{As * (1 - 3 * s * s), 6 * As * d * s * s * th, 0.0};
        };
        t.derivative = [=](double x) {
            const double s = sech(d * x), th = std::tanh(d * x);
            return TruncatedState{6 * As * d * s * s * th, 6 * As * d * d * (s * s * s * s - 2 * s * s * th * th), 0.0};
        };
        break;
    }
    case Family::O2IOmegaPeriodicSecondKind:
    case Family::O2Periodic: {
        double a, b;
        if (r.family == Family::O2Periodic) {
            a = as<O2Coeffs>(co).a;
            b = as<O2Coeffs>(co).b;
        } else {
            a = as<O2IOmegaCoeffs>(co).a1;
            b = as<O2IOmegaCoeffs>(co).b1;
        }
        const double R = -a * mu / b;
        require(R > 0, "-a*mu/b > 0");
        const double Ac = -sgn(b) * std::sqrt(R);
        const double k = std::sqrt(2.0) * std::pow(-a * b * mu, 0.25);
        const double osc = r.eps * std::sqrt(std::abs(mu));
        t.exact = false;
        t.value = [=](double x) {
            return TruncatedState{Ac + osc * std::cos(k * x), -osc * k * std::sin(k * x), 0.0};
        };
        t.derivative = [=](double x) {
            return TruncatedState{-osc * k * std::sin(k * x), -osc * k * k * std::cos(k * x), 0.0};
        };
        break;
    }
    }
    return t;
}

cd lift(const BifurcationBasis& basis, const TruncatedState& s) {
    CVec4 U;
    if (auto B = std::get_if<IOmega2Basis>(&basis.v)) {
        const CVec4 h = s.A * B->zeta0 + s.B * B->zeta1;
        U = h + h.conjugate();
    } else if (auto B = std::get_if<O2IOmegaBasis>(&basis.v)) {
        const CVec4 h = s.C * B->zeta;
        U = s.A.real() * B->zeta0 + s.B.real() * B->zeta1 + h + h.conjugate();
    } else {
        const auto& Bo = std::get<O2Basis>(basis.v);
        U = s.A.real() * Bo.zeta0 + s.B.real() * Bo.zeta1;
    }
    return {U(0).real(), U(2).real()};
}

void write_csv(std::ostream& os, const SolutionProfile& p) {
    os << "x,psi_re,psi_im\n";
    char buf[96];
    for (std::size_t j = 0; j < p.x.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", p.x[j], p.psi[j].real(), p.psi[j].imag());
        os << buf;
    }
}

std::string sidecar_json(const SolutionProfile& p) {
    nlohmann::ordered_json j;
    j["family"] = to_string(p.family);
    j["class"] = to_string(family_class(p.family));
    j["beta"] = p.params.beta;
    j["case"] = to_string(p.fold);
    j["alpha_star"] = p.alpha_star;
    j["mu"] = p.mu;
    j["K"] = p.K;
    j["eps"] = p.eps;
    j["branch"] = p.branch;
    j["phase"] = p.phase == 0 ? "0" : "pi";
    j["k"] = p.k;
    j["amplitude"] = p.amplitude;
    j["decay_rate"] = p.decay_rate;
    j["truncation_order"] = p.truncation_order;
    j["n"] = p.x.size();
    j["warnings"] = p.warnings;
    return j.dump(2);
}

} // namespace lle
