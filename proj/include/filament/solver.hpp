#pragma once

/*
 * solver.hpp — Lyapunov-Schmidt machinery for standing waves.
 *
 * The perturbation u = (x,y) enters additively: w1(t,s) = a + (x+iy)(nu t, s),
 * 2 pi-biperiodic in (nu t, s). Substituting into the distance equation
 * d_t^2 w1 = -d_s^4 w1 + d_s^2(|w1|^{-2} w1) and integrating the expansion of
 * 1/(a + ubar) gives the operator equation
 *
 *     L u + d_s^2 M(u) = 0 ,
 *
 * where L is diagonal with the lattice eigenvalues lambda_{j,k,l}(a) and
 * M(u) = a * g(-u/a) rescales the pointwise nonlinearity g of field.hpp
 * (so M(u) = a^{-3} realify(ubar^2) + higher order). The sign and scale of
 * this bookkeeping are pinned independently by the time-domain validator:
 * the full PDE residual of assembled solutions and the linearized mode
 * frequency both come out right only for this convention.
 *
 * The range equation PLPw + P d_s^2 M(v+w) = 0 is solved by plain Picard
 * iteration on K(w) = -(PLP)^{-1} d_s^2 M(v+w); the scalar bifurcation
 * equation B(b,a) = 0 is solved by a secant sweep in the distance a.
 */

#include <optional>
#include <string>
#include <vector>

#include "filament/field.hpp"
#include "filament/lattice.hpp"

namespace filament::solver {

using field::cd;
using field::FourierField;

struct SolverConfig {
    double sobolev_s = 6.0;   // H^s index; s >= 6 keeps the C^4 embedding
    double tol = 1e-12;       // contraction increment tolerance in H^s
    double residual_tol = 1e-10;  // acceptance threshold for the range residual
    int max_iter = 200;
    int oversample = 2;
    double guard = 0.9;        // sup|u/a| analyticity guard
    double secant_tol = 1e-12;  // |B| tolerance for the root find in a
    int secant_max_iter = 60;
    double secant_bracket = 0.1;  // admissible relative excursion |a/a0 - 1|
    int max_halvings = 6;         // continuation step halvings on failure
    int jmax = 64;
    int kmax = 64;
    double collision_guard_rel = 0.1;  // min|w1| >= rel * a0

    void validate() const;  // throws std::invalid_argument on bad settings
};

// Diagonal application of L(a2inv): exact rational eigenvalues.
FourierField apply_L(const FourierField& u, const lattice::RationalFrequency& freq,
                     const Rational& a2inv);

// (PLP)^{-1} d_s^2: multiplies non-kernel sites by -k^2/lambda, zeroes kernel
// sites and the mean. Throws SingularSite if a non-kernel lambda inside the
// truncation is exactly zero (kernel/cutoff mismatch).
FourierField apply_inverse_PLP_ds2(const FourierField& u,
                                   const lattice::RationalFrequency& freq,
                                   const Rational& a2inv,
                                   const std::vector<lattice::LatticeSite>& kernel);

struct RangeSolution {
    FourierField w;
    int iterations = 0;
    double range_residual = 0.0;  // ||PLPw + P d_s^2 M(v+w)||_{H^s}
};

// Fixed point of K from w = warm (or 0) at kernel amplitude b and distance a.
RangeSolution solve_range(double b, double a, const lattice::BifurcationSite& site,
                          const SolverConfig& cfg,
                          const FourierField* warm = nullptr);

// Scalar bifurcation value B(b,a) = lambda_{j0,k0,l0}(a) b
// + <d_s^2 M(v+w), phi>/<phi,phi>, phi = e_{l0} cos j0 t cos k0 s. Odd in b;
// B(b, a0) = O(b^3). If range_out is non-null the inner range solution is
// returned (and *range_out.w is used as warm start when nonempty).
double bifurcation_value(double b, double a, const lattice::BifurcationSite& site,
                         const SolverConfig& cfg, RangeSolution* range_out = nullptr);

struct BranchPoint {
    double b = 0.0;
    double a = 0.0;
    lattice::BifurcationSite site;
    FourierField v;  // kernel part, b e_{l0} cos j0 t cos k0 s
    FourierField w;  // range part, Q w = 0, mean w = 0
    double range_residual = 0.0;
    double full_residual = 0.0;  // ||L u + d_s^2 M(u)||_{H^s} over the truncation
    int iterations = 0;

    FourierField u() const { return v + w; }
};

// Secant iteration on a -> B(b,a) from a_init. b < 0 is mapped through the
// oddness symmetry of the branch (solve at |b|, shift t by pi).
BranchPoint solve_branch_point(double b, double a_init,
                               const lattice::BifurcationSite& site,
                               const SolverConfig& cfg,
                               const FourierField* warm = nullptr);

struct Branch {
    lattice::BifurcationSite site;
    std::vector<BranchPoint> points;  // ordered by increasing b, points[0].b == 0
    double w_scaling_exponent = 0.0;  // log-log slope of ||w||_{H^s} vs b
    double a_scaling_exponent = 0.0;  // log-log slope of |a - a0| vs b
    bool truncated = false;
    std::string message;
};

// Warm-started sweep over b_grid (must start at 0, strictly increasing).
// Halves the step on failure up to cfg.max_halvings; a failure after retries
// marks the branch truncated at the last good point instead of throwing.
Branch continue_branch(const lattice::BifurcationSite& site,
                       const std::vector<double>& b_grid, const SolverConfig& cfg);

// General complex 2D spectral data (no reality constraint), used for w2 and
// for the assembled w1 perturbation.
struct SpectralGrid2D {
    int jmax = 0;
    int kmax = 0;
    std::vector<cd> coef;  // index (j+jmax)*(2 kmax+1) + (k+kmax)

    SpectralGrid2D() = default;
    SpectralGrid2D(int jm, int km)
        : jmax(jm), kmax(km),
          coef(static_cast<size_t>(2 * jm + 1) * (2 * km + 1), cd(0, 0)) {}
    cd at(long j, long k) const {
        return coef[static_cast<size_t>(j + jmax) * (2 * kmax + 1) + (k + kmax)];
    }
    void set(long j, long k, cd v) {
        coef[static_cast<size_t>(j + jmax) * (2 * kmax + 1) + (k + kmax)] = v;
    }
};

struct SymmetryReport {
    double even_t = 0.0;      // sup |w1(t,s) - w1(-t,s)|
    double even_s = 0.0;      // sup |w1(t,s) - w1(t,-s)|
    double periodic_s = 0.0;  // sup |w1(t,s) - w1(t, s + 2 pi/k0)|
    double conj_shift = 0.0;  // sup |w1(t,s) - conj w1(t + l0 q pi/p, s)|

    double max() const;
};

struct AssembledSolution {
    lattice::BifurcationSite site;
    double a = 0.0;
    double b = 0.0;
    double period = 0.0;        // 2 pi q / p
    FourierField u;             // additive perturbation of w1
    cd drift;                   // w2 = drift * t + periodic part
    SpectralGrid2D w2_periodic; // zero t-mean part of w2
    double min_abs_w1 = 0.0;
    double t_mean_consistency = 0.0;  // size of the s-dependent t-mean of d_t w2
    SymmetryReport symmetry;          // verified on a 128 x 128 grid
};

// Physical reconstruction: w1 = a + (x+iy)(nu t, s), w2 from inverting d_t in
// Fourier space on i(d_s^2 w1 - |w1|^{-2} w1); drift = the (0,0) mode of the
// integrand. Throws CollisionDetected below the guard.
AssembledSolution assemble_solution(const BranchPoint& pt, const SolverConfig& cfg);

struct ResidualNorms {
    double sup = 0.0;
    double l2 = 0.0;
};

// Ground truth: residual of d_t^2 w1 + d_s^4 w1 - d_s^2(|w1|^{-2} w1) on an
// oversampled grid, independent of any perturbation bookkeeping. The division
// term is expanded by the chain rule so that all differentiation acts on the
// stored coefficients.
ResidualNorms full_residual(const AssembledSolution& sol, int fine_nt, int fine_ns);

// The four standing-wave identities evaluated pointwise on an nt x ns grid.
SymmetryReport symmetry_check(const AssembledSolution& sol, int nt, int ns);

// Kernel mode phi scaled by amplitude: b e_{l0} cos(j0 t) cos(k0 s).
FourierField kernel_mode(const lattice::BifurcationSite& site, double b, int jmax,
                         int kmax);

}  // namespace filament::solver
