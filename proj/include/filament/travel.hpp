#pragma once

/*
 * travel.hpp — traveling-wave profiles w1 = a + V(nu t + s).
 *
 * Substituting the ansatz into the distance equation and integrating twice in
 * the phase (periodicity kills the linear term; the second constant is the
 * mean equation and is absorbed by working zero-mean) leaves the profile ODE
 *
 *     -V'' - nu^2 V - a^{-2} Vbar + r(Vbar) = const ,   r(z) = a^{-2} z^2/(a+z),
 *
 * whose Galerkin rows in the cosine basis have linear diagonal
 * m^2 - nu^2 -/+ a^{-2} on the x/y component. The branch with frequency label
 * l, nu0(a,l) = sqrt(1 + (-1)^l a^{-2}), is therefore polarized in component
 * 1 - l: real (x) profiles pair with sqrt(1 - a^{-2}) and imaginary (y)
 * profiles with sqrt(1 + a^{-2}); the time-domain translation test pins this
 * pairing. The diagonal entry at mode j of the branch component equals
 * lambda_j = j^2 - nu^2 + (-1)^l a^{-2} for the branch's own label l.
 *
 * Only k0 = 1 profiles are built; higher wavenumbers rescale onto this case.
 */

#include <complex>
#include <vector>

namespace filament::travel {

using cd = std::complex<double>;

struct TravelConfig {
    int modes = 32;          // cosine modes m = 0..modes
    int oversample = 4;
    double newton_tol = 1e-13;
    int newton_max_iter = 40;
    double guard = 0.9;      // |V|/a analyticity guard
    double fd_step = 1e-7;   // finite-difference Jacobian step
};

struct TravelProfile {
    int modes = 0;
    std::vector<double> xc, yc;  // cosine coefficients of V = x + i y, index m
    double nu = 0.0;
    double a = 0.0;
    double b = 0.0;
    int l = 0;                   // frequency label
    double residual = 0.0;       // sup-norm Galerkin residual at acceptance

    // complex coefficient of e^{i m xi}, m != 0 (cosine pairs split evenly)
    cd coeff(long m) const {
        const long am = std::abs(m);
        if (am > modes) return {0.0, 0.0};
        if (m == 0) return {xc[0], yc[0]};
        return 0.5 * cd(xc[am], yc[am]);
    }
};

// nu0 = sqrt(1 + (-1)^l a^{-2}); throws DegenerateFrequency when the radicand
// is <= 0 (l = 1 with a <= 1).
double nu0(double a, int l);

// lambda_j = j^2 - nu^2 + (-1)^l a^{-2}
double lambda_j(long j, double nu, double a, int l);

// Galerkin residual rows of the zero-mean profile ODE at (U, nu); row order is
// the active-coefficient order used by the Newton solve, amplitude lock last.
// Exposed for the Jacobian spectrum tests.
std::vector<double> galerkin_residual(const TravelProfile& p, double b_lock,
                                      const TravelConfig& cfg);

// Newton continuation in (U, nu) at fixed a over b_grid (starting at 0),
// amplitude lock <U, cos xi e_{1-l}>/<cos,cos> = b.
std::vector<TravelProfile> solve_travel_branch(double a, int l,
                                               const std::vector<double>& b_grid,
                                               const TravelConfig& cfg);

// Sup-norm of the zero-mean ODE residual on a fine grid.
double travel_residual(const TravelProfile& p, int fine_n);

}  // namespace filament::travel
