#pragma once

#include "lle/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace lle {

using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;

// Spatial dynamics state U = (Re psi~, Re psi~', Im psi~, Im psi~') about an
// equilibrium psi*, so psi = psi* + U1 + i U3.
struct SpatialMatrix {
    Mat4 entries = Mat4::Zero();
};

enum class BifurcationKind { Hyperbolic, EllipticNoBif, IOmega2, O2IOmega, O2, O4 };

std::string_view to_string(BifurcationKind k);

struct BifurcationClass {
    BifurcationKind kind = BifurcationKind::Hyperbolic;
    double omega = 0;  // set for IOmega2 and O2IOmega
};

struct SpectrumReport {
    std::array<std::complex<double>, 4> eigenvalues;  // X1, -X1, X2, -X2
    double trace_coeff = 0;                           // T
    double det_coeff = 0;                             // Delta
    std::optional<BifurcationClass> cls;              // empty if ambiguous
};

struct ClassifyOptions {
    double tol = 1e-8;
};

SpatialMatrix build_L(const Params& p, const Equilibrium& eq);

// T = beta (4 rho - 2 alpha), Delta = 3 rho^2 - 4 alpha rho + alpha^2 + 1.
double spectrum_T(const Params& p, const Equilibrium& eq);
double spectrum_Delta(const Params& p, const Equilibrium& eq);

// Roots of X^4 - T X^2 + Delta from the biquadratic. Also checks T and Delta
// against the block trace and determinant of build_L.
SpectrumReport spatial_spectrum(const Params& p, const Equilibrium& eq, const ClassifyOptions& opt = {});

// Throws AmbiguousClassification when the pattern fits no variant.
BifurcationClass classify(const Params& p, const Equilibrium& eq, const ClassifyOptions& opt = {});

struct CurvePoint {
    BifurcationClass cls;
    double F2;
    double rho;
};

// Codimension-one curves crossing the vertical line at this alpha. At alpha = 2
// the upper fold and the rho = 1 line meet in the O4 point.
std::vector<CurvePoint> bifurcation_curves(int beta, double alpha);

// Nonlinear remainder R(U, mu) of dU/dx = L U + R(U, mu) with alpha = alpha* + mu.
// Q and Cu are the homogeneous quadratic and cubic parts (no factorials).
template <class S>
Eigen::Matrix<S, 4, 1> quadratic_part(int beta, const Equilibrium& eq, const Eigen::Matrix<S, 4, 1>& U) {
    const S& r = U(0);
    const S& i = U(2);
    const double pr = eq.psi_r, pi = eq.psi_i;
    Eigen::Matrix<S, 4, 1> out;
    out << S(0), double(beta) * (3.0 * pr * r * r + 2.0 * pi * r * i + pr * i * i), S(0),
        double(beta) * (pi * r * r + 2.0 * pr * r * i + 3.0 * pi * i * i);
    return out;
}

template <class S>
Eigen::Matrix<S, 4, 1> cubic_part(int beta, const Eigen::Matrix<S, 4, 1>& U) {
    const S& r = U(0);
    const S& i = U(2);
    const S m = r * r + i * i;
    Eigen::Matrix<S, 4, 1> out;
    out << S(0), double(beta) * r * m, S(0), double(beta) * i * m;
    return out;
}

Vec4 R01(int beta, const Equilibrium& eq);

template <class S>
Eigen::Matrix<S, 4, 1> R11(int beta, const Eigen::Matrix<S, 4, 1>& U) {
    Eigen::Matrix<S, 4, 1> out;
    out << S(0), -double(beta) * U(0), S(0), -double(beta) * U(2);
    return out;
}

Vec4 nonlinear_part(int beta, const Equilibrium& eq, const Vec4& U, double mu);

// Right-hand side beta[(i - alpha) psi + psi |psi|^2 - i F] of psi'' = ...
std::complex<double> stationary_rhs(const Params& p, std::complex<double> psi);

// Reversor S = diag(1, -1, 1, -1).
template <class S>
Eigen::Matrix<S, 4, 1> reverse(const Eigen::Matrix<S, 4, 1>& U) {
    Eigen::Matrix<S, 4, 1> out = U;
    out(1) = -out(1);
    out(3) = -out(3);
    return out;
}

// Max defect of L S U + S L U and R(S U) + S R(U) over random U in the unit
// ball and random |mu| <= 1e-2.
double check_reversibility(const Params& p, const Equilibrium& eq, int n_samples, std::uint64_t seed = 1);
double check_reversibility(const SpatialMatrix& L, const Params& p, const Equilibrium& eq, int n_samples,
                           std::uint64_t seed = 1);

} // namespace lle
