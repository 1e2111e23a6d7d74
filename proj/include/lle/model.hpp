#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace lle {

struct Params {
    int beta = 1;      // dispersion sign, +1 normal, -1 anomalous
    double alpha = 0;  // detuning
    double F = 1;      // pump amplitude, > 0

    // Throws DomainError unless beta is +-1 and F is finite and positive.
    void validate() const;
};

struct Equilibrium {
    double psi_r = 0;
    double psi_i = 0;
    double rho = 0;
    int multiplicity = 1;

    std::complex<double> psi() const { return {psi_r, psi_i}; }
};

enum class RegionTag { OneEquilibrium, ThreeEquilibria, FoldUpper, FoldLower, Cusp };

std::string_view to_string(RegionTag tag);

// Number of distinct equilibria implied by a region tag.
int expected_root_count(RegionTag tag);

struct CriticalPoints {
    double rho_plus;
    double rho_minus;
    double F2_plus;
    double F2_minus;
};

struct EquilibriumOptions {
    // |discriminant| below which the cubic is treated as having a double root.
    double double_root_tol = 1e-9;
};

// Cubic rho^3 - 2 alpha rho^2 + (alpha^2+1) rho - F^2 and its derivative.
double equilibrium_cubic(double alpha, double F2, double rho);
double equilibrium_cubic_derivative(double alpha, double rho);

// Equilibrium with the given rho, psi from the explicit formulas.
Equilibrium equilibrium_from_rho(double alpha, double F, double rho);

// Distinct positive roots sorted by rho; a double root carries multiplicity 2.
std::vector<Equilibrium> solve_equilibria(const Params& p, const EquilibriumOptions& opt = {});

// Fold points rho_+ < rho_- of F^2(rho); requires alpha > sqrt(3).
CriticalPoints critical_points(double alpha);

RegionTag classify_region(double alpha, double F2, double tol = 1e-8);

// |i psi |psi|^2 - (1 + i alpha) psi + F|
double algebraic_residual(const Params& p, const Equilibrium& eq);

} // namespace lle
