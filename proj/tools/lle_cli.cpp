#include "lle/errors.hpp"
#include "lle/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lle;

namespace {

enum Exit { Ok = 0, Config = 2, CrossCheck = 3, Regime = 4, VerifyFail = 5 };

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field, const std::string& why)
        : std::runtime_error("invalid --" + field + ": " + why) {}
};

struct Range {
    double lo = 0, hi = 0;
    int n = 1;
    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

Range parse_range(const std::string& field, const std::string& s) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    try {
        if (parts.size() == 1) {
            r.lo = r.hi = std::stod(parts[0]);
        } else if (parts.size() == 3) {
            r.lo = std::stod(parts[0]);
            r.hi = std::stod(parts[1]);
            r.n = std::stoi(parts[2]);
        } else {
            throw ConfigError(field, "expected a value or a:b:n");
        }
    } catch (const std::logic_error&) {
        throw ConfigError(field, "not a number: " + s);
    }
    if (r.n < 1)
        throw ConfigError(field, "steps must be >= 1");
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo)
        throw ConfigError(field, "empty or non-finite range");
    return r;
}

std::vector<double> parse_list(const std::string& field, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) {
        try {
            out.push_back(std::stod(p));
        } catch (const std::logic_error&) {
            throw ConfigError(field, "not a number: " + p);
        }
    }
    if (out.empty())
        throw ConfigError(field, "empty list");
    return out;
}

int parse_beta(const std::string& s) {
    if (s == "1" || s == "+1")
        return 1;
    if (s == "-1")
        return -1;
    throw ConfigError("beta", "must be +1 or -1");
}

BifurcationKind parse_class(const std::string& s) {
    if (s == "iomega2")
        return BifurcationKind::IOmega2;
    if (s == "o2iomega")
        return BifurcationKind::O2IOmega;
    if (s == "o2")
        return BifurcationKind::O2;
    throw ConfigError("class", "must be iomega2, o2iomega or o2");
}

FoldCase parse_case(const std::string& s, BifurcationKind k) {
    if (k == BifurcationKind::IOmega2)
        return FoldCase::None;
    if (s == "fold-plus" || s == "1")
        return FoldCase::FoldPlus;
    if (s == "fold-minus" || s == "2")
        return FoldCase::FoldMinus;
    throw ConfigError("case", "must be fold-plus, fold-minus, 1 or 2");
}

Family parse_family(const std::string& s, BifurcationKind k) {
    using F = Family;
    switch (k) {
    case BifurcationKind::IOmega2:
        if (s == "periodic") return F::IOmega2Periodic;
        if (s == "homoclinic") return F::IOmega2Homoclinic;
        if (s == "dark-front") return F::IOmega2DarkFront;
        break;
    case BifurcationKind::O2IOmega:
        if (s == "equilibrium-plus") return F::O2IOmegaEquilibriumPlus;
        if (s == "equilibrium-minus") return F::O2IOmegaEquilibriumMinus;
        if (s == "first-kind") return F::O2IOmegaPeriodicFirstKind;
        if (s == "second-kind") return F::O2IOmegaPeriodicSecondKind;
        if (s == "homoclinic-to-periodic") return F::O2IOmegaHomoclinicToPeriodic;
        break;
    default:
        if (s == "equilibrium-plus") return F::O2EquilibriumPlus;
        if (s == "equilibrium-minus") return F::O2EquilibriumMinus;
        if (s == "periodic") return F::O2Periodic;
        if (s == "homoclinic") return F::O2Homoclinic;
        break;
    }
    throw ConfigError("family", "unknown family '" + s + "' for this class");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Rows of scalar cells written as CSV or a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;

    void write(const fs::path& stem, const std::string& format) const {
        const fs::path path = stem.string() + "." + format;
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw ConfigError("out", "cannot write " + path.string());
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json o;
                for (std::size_t i = 0; i < header.size(); ++i)
                    o[header[i]] = r[i];
                arr.push_back(o);
            }
            os << arr.dump(2) << '\n';
            return;
        }
        for (std::size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << header[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << (i ? "," : "");
                if (r[i].is_number_float())
                    os << fmt(r[i].get<double>());
                else if (r[i].is_string())
                    os << r[i].get<std::string>();
                else
                    os << r[i].dump();
            }
            os << '\n';
        }
    }
};

struct Common {
    std::string out;
    std::string format = "csv";
    double tol = 1e-8;

    fs::path dir() const {
        std::string d = out;
        if (d.empty())
            if (const char* e = std::getenv("LLE_OUT_DIR"))
                d = e;
        if (d.empty())
            d = ".";
        fs::create_directories(d);
        return d;
    }
    void check() const {
        if (format != "csv" && format != "json")
            throw ConfigError("format", "must be csv or json");
        if (!(tol > 0))
            throw ConfigError("tol", "must be positive");
    }
};

int cmd_equilibria(const Common& c, const std::string& alpha, const std::string& f2, const std::string& beta_s) {
    c.check();
    const Range ar = parse_range("alpha-range", alpha), fr = parse_range("f2", f2);
    const int beta = parse_beta(beta_s);
    if (fr.lo < 0)
        throw ConfigError("f2", "F^2 must be non-negative");
    Table t{{"alpha", "F2", "n_equilibria", "region_tag"}, {}};
    for (int i = 0; i < ar.n; ++i)
        for (int j = 0; j < fr.n; ++j) {
            const double a = ar.at(i), F2 = fr.at(j);
            // F = 0 leaves only psi = 0.
            const int n = F2 == 0 ? 1 : int(solve_equilibria({beta, a, std::sqrt(F2)}).size());
            const RegionTag tag = F2 == 0 ? RegionTag::OneEquilibrium : classify_region(a, F2);
            t.rows.push_back({a, F2, n, std::string(to_string(tag))});
        }
    t.write(c.dir() / "regions", c.format);
    std::cout << "wrote " << t.rows.size() << " rows\n";
    return Ok;
}

int cmd_curves(const Common& c, const std::string& alpha, const std::string& beta_s) {
    c.check();
    const Range ar = parse_range("alpha-range", alpha);
    const int beta = parse_beta(beta_s);
    Table t{{"alpha", "F2", "class", "omega"}, {}};
    bool o4 = false;
    auto emit = [&](double a) {
        for (const CurvePoint& p : bifurcation_curves(beta, a)) {
            if (p.cls.kind == BifurcationKind::O4) {
                if (o4)
                    continue;
                o4 = true;
            }
            t.rows.push_back({a, p.F2, std::string(to_string(p.cls.kind)), p.cls.omega});
        }
    };
    for (int i = 0; i < ar.n; ++i) {
        const double a = ar.at(i);
        if (!o4 && a > 2 && ar.lo <= 2)
            emit(2.0);
        emit(a);
    }
    t.write(c.dir() / ("curves_" + std::to_string(beta)), c.format);
    std::cout << "wrote " << t.rows.size() << " rows\n";
    return Ok;
}

int cmd_coeffs(const Common& c, const std::string& cls, const std::string& beta_s, const std::string& case_s,
               const std::string& alpha) {
    c.check();
    const BifurcationKind k = parse_class(cls);
    const int beta = parse_beta(beta_s);
    const FoldCase fc = parse_case(case_s, k);
    const Range ar = parse_range("alpha-star", alpha);
    Table t{{"alpha_star", "coefficient", "closed", "numeric", "abs_diff", "rel_diff"}, {}};
    double worst = 0;
    for (int i = 0; i < ar.n; ++i) {
        const double a = ar.at(i);
        const NormalFormCoefficients cc = coeffs_closed(k, beta, fc, a);
        const CurveSite s = curve_site(k, beta, fc, a);
        const NormalFormCoefficients nc = coeffs_numeric(k, s.params, s.eq);
        const auto cn = cc.named(), nn = nc.named();
        for (std::size_t j = 0; j < cn.size(); ++j) {
            const double d = std::abs(cn[j].second - nn[j].second);
            const double rel = d / std::max(std::abs(cn[j].second), 1e-300);
            worst = std::max(worst, rel);
            t.rows.push_back({a, cn[j].first, cn[j].second, nn[j].second, d, rel});
            std::printf("alpha*=%-10.6g %-3s closed=% .15g numeric=% .15g rel=%.3g\n", a, cn[j].first.c_str(),
                        cn[j].second, nn[j].second, rel);
        }
    }
    t.write(c.dir() / "coeffs", c.format);
    if (worst > c.tol) {
        std::fprintf(stderr, "cross-check failed: relative discrepancy %.3g > %.3g\n", worst, c.tol);
        return CrossCheck;
    }
    return Ok;
}

struct ConstructArgs {
    std::string cls, family, beta = "+1", fold = "fold-plus", branch = "+", phase = "0",
                denominator = "printed";
    double alpha_star = NAN, mu = 1e-3, K = 0, eps = 0;
    int n = 4096;
};

int cmd_construct(const Common& c, const ConstructArgs& a) {
    c.check();
    ProfileRequest r;
    const BifurcationKind k = parse_class(a.cls);
    r.family = parse_family(a.family, k);
    r.beta = parse_beta(a.beta);
    r.fold = parse_case(a.fold, k);
    if (!std::isfinite(a.alpha_star))
        throw ConfigError("alpha-star", "required");
    r.alpha_star = a.alpha_star;
    r.mu = a.mu;
    r.K = a.K;
    r.eps = a.eps;
    if (a.branch == "+")
        r.branch = 1;
    else if (a.branch == "-")
        r.branch = -1;
    else if (a.branch == "auto")
        r.branch = 0;
    else
        throw ConfigError("branch", "must be +, - or auto");
    if (a.phase == "0")
        r.phase = 0;
    else if (a.phase == "pi")
        r.phase = 1;
    else
        throw ConfigError("phase", "must be 0 or pi");
    if (a.denominator == "printed")
        r.denominator = HomoclinicDenominator::Printed;
    else if (a.denominator == "derived")
        r.denominator = HomoclinicDenominator::Derived;
    else
        throw ConfigError("denominator", "must be printed or derived");
    if (a.n < 32)
        throw ConfigError("n", "must be >= 32");
    r.grid.n = a.n;
    if (r.family == Family::O2IOmegaHomoclinicToPeriodic && a.branch == "+")
        r.branch = 0;

    const SolutionProfile p = construct(r);
    const fs::path stem = c.dir() / std::string(to_string(p.family));
    {
        std::ofstream os(stem.string() + ".csv", std::ios::binary);
        write_csv(os, p);
    }
    {
        std::ofstream os(stem.string() + ".json", std::ios::binary);
        os << sidecar_json(p) << '\n';
    }
    std::printf("k = %.15g\namplitude = %.15g\ntruncation = %s\n", p.k, p.amplitude, p.truncation_order.c_str());
    for (const auto& w : p.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    return Ok;
}

struct VerifyArgs {
    std::string families = "all";
    std::string mu = "1e-2,3e-3,1e-3,3e-4,1e-4";
    bool refine = false, oracle = false, temporal = false;
    std::optional<double> override_b2;
};

bool selected(const std::string& sel, const std::string& tag) {
    if (sel == "all")
        return true;
    std::stringstream ss(sel);
    for (std::string p; std::getline(ss, p, ',');)
        if (tag == p || tag.rfind(p + "/", 0) == 0)
            return true;
    return false;
}

std::vector<double> oracle_xs(const SolutionProfile& p) {
    const double L = p.localized ? 12 / p.decay_rate : (p.k > 0 ? 4 * std::numbers::pi / p.k : 10.0);
    std::vector<double> xs(101);
    for (int i = 0; i < 101; ++i)
        xs[i] = -L + 2 * L * i / 100;
    return xs;
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
    c.check();
    std::vector<double> mus = parse_list("mu", a.mu);
    std::vector<std::string> failures;
    json report;
    report["mu_list"] = mus;
    json scaling = json::array();
    std::vector<FamilySpec> chosen;
    for (const auto& s : standard_families())
        if (selected(a.families, s.tag))
            chosen.push_back(s);
    if (chosen.empty())
        throw ConfigError("families", "no family matches '" + a.families + "'");

    for (const auto& s : chosen) {
        const ResidualReport r = residual_scaling(s, mus);
        scaling.push_back({{"family", r.family},
                           {"residual_norms", r.residual_norms},
                           {"error_estimates", r.error_estimates},
                           {"fitted_slope", r.fitted_slope},
                           {"pass", r.pass}});
        std::printf("residual %-34s slope %.4f %s\n", r.family.c_str(), r.fitted_slope, r.pass ? "PASS" : "FAIL");
        if (!r.pass)
            failures.push_back("residual scaling " + r.family);
    }
    report["residual_scaling"] = scaling;

    if (a.oracle || a.override_b2) {
        json arr = json::array();
        for (const auto& s : chosen) {
            ProfileRequest r = s.base;
            r.mu = s.mu_sign * 1e-3;
            r.K = s.K_per_mu * 1e-3;
            const TruncatedSolution sol = truncated_solution(r);
            NormalFormCoefficients ode = coeffs_closed(family_class(r.family), r.beta,
                                                       family_class(r.family) == BifurcationKind::IOmega2
                                                           ? FoldCase::None
                                                           : r.fold,
                                                       r.alpha_star);
            if (a.override_b2)
                if (auto* i2 = std::get_if<IOmega2Coeffs>(&ode.v))
                    i2->b2 = *a.override_b2;
            const OracleResult o = truncated_oracle(ode, sol, oracle_xs(construct(r)));
            const bool pass = !sol.exact || (o.max_defect <= 1e-10 && o.first_integral_defect <= 1e-15);
            arr.push_back({{"family", s.tag},
                           {"exact", sol.exact},
                           {"max_defect", o.max_defect},
                           {"first_integral_defect", o.first_integral_defect},
                           {"pass", pass}});
            std::printf("oracle   %-34s defect %.3g %s\n", s.tag.c_str(), o.max_defect,
                        !sol.exact ? "(first order in eps, not checked)" : pass ? "PASS" : "FAIL");
            if (!pass)
                failures.push_back("truncated oracle " + s.tag);
        }
        report["truncated_oracle"] = arr;
    }

    if (a.refine) {
        json arr = json::array();
        for (const auto& s : standard_periodic_families()) {
            if (!selected(a.families, s.tag))
                continue;
            json rows = json::array();
            std::vector<double> ms, ds;
            bool ok = true;
            for (double m : mus) {
                ProfileRequest r = s.base;
                r.mu = s.mu_sign * m;
                r.K = s.K_per_mu * m;
                const SolutionProfile g = construct(r);
                try {
                    const RefinedOrbit o = refine_periodic(g);
                    const double d = orbit_distance(g, o);
                    rows.push_back({{"mu", m},
                                    {"iterations", o.newton_iterations},
                                    {"defect", o.defect},
                                    {"half_period_ratio", o.half_period / o.guess_half_period},
                                    {"distance", d}});
                    ms.push_back(m);
                    ds.push_back(d);
                } catch (const Error& e) {
                    rows.push_back({{"mu", m}, {"error", e.what()}});
                    ok = false;
                }
            }
            double slope = NAN;
            if (ok && ms.size() >= 2)
                slope = loglog_slope(ms, ds);
            const bool pass = ok && slope >= 1.0;
            arr.push_back({{"family", s.tag}, {"runs", rows}, {"distance_slope", slope}, {"pass", pass}});
            std::printf("refine   %-34s slope %.4f %s\n", s.tag.c_str(), slope, pass ? "PASS" : "FAIL");
            if (!pass)
                failures.push_back("periodic refinement " + s.tag);
        }
        report["refine_periodic"] = arr;
    }

    if (a.temporal) {
        json arr = json::array();
        auto check = [&](const std::string& name, const Params& p, const Equilibrium& e, Stability want) {
            const TemporalSpectrum t = temporal_spectrum_constant(p, e);
            const bool pass = t.verdict == want;
            arr.push_back({{"point", name},
                           {"rho", e.rho},
                           {"max_growth", t.max_growth},
                           {"verdict", std::string(to_string(t.verdict))},
                           {"pass", pass}});
            std::printf("temporal %-34s %s %s\n", name.c_str(), std::string(to_string(t.verdict)).c_str(),
                        pass ? "PASS" : "FAIL");
            if (!pass)
                failures.push_back("temporal stability " + name);
        };
        const Params p3{1, 3, 2};
        const auto eqs = solve_equilibria(p3);
        const char* names[] = {"alpha=3,F2=4 lower", "alpha=3,F2=4 middle", "alpha=3,F2=4 upper"};
        for (std::size_t i = 0; i < eqs.size() && i < 3; ++i)
            check(names[i], p3, eqs[i], i == 1 ? Stability::Unstable : Stability::Stable);
        const Params p0{1, 0, std::sqrt(2.0)};
        check("alpha=0,F=sqrt2", p0, solve_equilibria(p0).front(), Stability::Stable);
        report["temporal"] = arr;
    }

    report["failures"] = failures;
    report["pass"] = failures.empty();
    std::ofstream(c.dir() / "verify.json", std::ios::binary) << report.dump(2) << '\n';
    for (const auto& f : failures)
        std::fprintf(stderr, "FAIL: %s\n", f.c_str());
    return failures.empty() ? Ok : VerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary-wave bifurcation analysis of the Lugiato-Lefever equation"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", common.out, "output directory (default $LLE_OUT_DIR or .)");
        s->add_option("--format", common.format, "csv or json");
        s->add_option("--tol", common.tol, "tolerance");
    };

    std::string alpha = "0:4:200", f2 = "0:6:200", beta = "+1";
    auto* eq = app.add_subcommand("equilibria", "equilibrium count and region over an (alpha, F^2) grid");
    eq->add_option("--alpha-range", alpha, "a:b:n or a single value");
    eq->add_option("--f2", f2, "a:b:n or a single value");
    eq->add_option("--beta", beta);
    add_common(eq);

    std::string c_alpha = "1.75:5:500", c_beta;
    auto* cv = app.add_subcommand("curves", "bifurcation curves in the (alpha, F^2) plane");
    cv->add_option("--alpha-range", c_alpha, "a:b:n");
    cv->add_option("--beta", c_beta)->required();
    add_common(cv);

    std::string k_cls, k_beta = "+1", k_case = "fold-plus", k_alpha;
    auto* co = app.add_subcommand("coeffs", "closed-form versus projected normal-form coefficients");
    co->add_option("--class", k_cls)->required();
    co->add_option("--beta", k_beta);
    co->add_option("--case", k_case);
    auto* ka = co->add_option("--alpha-star", k_alpha, "value");
    co->add_option("--alpha-range", k_alpha, "a:b:n")->excludes(ka);
    add_common(co);

    ConstructArgs ca;
    auto* cs = app.add_subcommand("construct", "leading-order solution profile");
    cs->add_option("--class", ca.cls)->required();
    cs->add_option("--family", ca.family)->required();
    cs->add_option("--beta", ca.beta);
    cs->add_option("--case", ca.fold);
    cs->add_option("--alpha-star", ca.alpha_star)->required();
    cs->add_option("--mu", ca.mu);
    cs->add_option("--K", ca.K);
    cs->add_option("--eps", ca.eps);
    cs->add_option("--branch", ca.branch, "+, - or auto");
    cs->add_option("--phase", ca.phase, "0 or pi");
    cs->add_option("--denominator", ca.denominator, "printed or derived");
    cs->add_option("--n", ca.n, "minimum sample count");
    add_common(cs);

    VerifyArgs va;
    double b2 = 0;
    auto* vf = app.add_subcommand("verify", "residual scaling and optional checks");
    vf->add_option("--families", va.families, "all, a class name or family tags, comma separated");
    vf->add_option("--mu", va.mu, "comma list");
    vf->add_flag("--refine", va.refine, "periodic-orbit shooting");
    vf->add_flag("--oracle", va.oracle, "truncated-system oracles");
    vf->add_flag("--temporal", va.temporal, "temporal stability of constants");
    auto* ob = vf->add_option("--override-b2", b2, "replace b2 in the IOmega2 oracle ODE");
    add_common(vf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Config;
    }
    if (*ob)
        va.override_b2 = b2;

    try {
        if (*eq)
            return cmd_equilibria(common, alpha, f2, beta);
        if (*cv)
            return cmd_curves(common, c_alpha, c_beta);
        if (*co) {
            if (k_alpha.empty())
                throw ConfigError("alpha-star", "required");
            return cmd_coeffs(common, k_cls, k_beta, k_case, k_alpha);
        }
        if (*cs)
            return cmd_construct(common, ca);
        if (*vf)
            return cmd_verify(common, va);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return Config;
    } catch (const RegimeError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return Regime;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return Config;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "invalid --out: %s\n", e.what());
        return Config;
    }
    return Config;
}
