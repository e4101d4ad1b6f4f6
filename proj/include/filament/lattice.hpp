#pragma once

/*
 * lattice.hpp — exact rational arithmetic over the eigenvalue lattice.
 *
 * The linearization about the straight filament pair is diagonal in the
 * space-time Fourier basis e_l e^{i(jt+ks)} with eigenvalues
 *
 *     lambda_{j,k,l}(a) = (nu j)^2 - k^4 + (-1)^l a^{-2} k^2 ,
 *
 * nu = p/q rational, l in {0,1} the polarization index (0 = x, 1 = y).
 * Choosing a^{-2} = (-1)^{l0} (k0^2 - (p j0 / (q k0))^2) > 0 places an exact
 * zero at (+-j0, +-k0, l0). Everything here is exact: eigenvalues, kernel
 * sets, resonance certificates, spectral-gap minima. The only caveat is the
 * finite cutoff box, which every certificate carries with it.
 */

#include <optional>
#include <utility>
#include <vector>

#include "filament/rational.hpp"

namespace filament::lattice {

// Temporal frequency nu = p/q in lowest terms.
struct RationalFrequency {
    long p = 1;
    long q = 1;

    RationalFrequency() = default;
    RationalFrequency(long p_, long q_);
    Rational value() const { return make_rational(p, q); }
};

// One Fourier lattice site (j,k,l). (j,k) = (0,0) is excluded (zero-mean
// space); l picks the vector component.
struct LatticeSite {
    long j = 0;
    long k = 0;
    int l = 0;

    friend bool operator==(const LatticeSite&, const LatticeSite&) = default;
    friend auto operator<=>(const LatticeSite&, const LatticeSite&) = default;
};

struct Cutoff {
    long jmax = 64;
    long kmax = 32;
};

// lambda_{j,k,l}(a) as an exact rational. a2inv = a^{-2} > 0.
Rational eigenvalue(const LatticeSite& site, const RationalFrequency& freq,
                    const Rational& a2inv);

// a^{-2} = (-1)^{l0} (k0^2 - (p j0 / (q k0))^2); throws NonPositiveAmplitude
// when the expression is <= 0 (the seed admits no distance a0).
Rational amplitude_from_site(const RationalFrequency& freq, long j0, long k0,
                             int l0);

// All sites with |j| <= jmax, |k| <= kmax and lambda exactly zero. Closed
// under (j,k) -> (-j,-k), (j,-k), (-j,k). Solved per k by an exact integer
// square-root test on (p j)^2 = q^2 k^2 (k^2 - (-1)^l a2inv); the unit tests
// cross-check against a brute-force scan.
std::vector<LatticeSite> kernel_set(const RationalFrequency& freq,
                                    const Rational& a2inv, const Cutoff& cutoff);

// Exact description of one bifurcation seed within a cutoff box.
struct BifurcationSite {
    RationalFrequency freq;
    long j0 = 1;
    long k0 = 1;
    int l0 = 0;
    Rational a2inv;
    std::vector<LatticeSite> kernel;
    bool nonresonant = false;
    std::optional<LatticeSite> resonance_witness;
    Cutoff cutoff;
    // Status of the printed interval condition (q^2 k0^2 - q) k0^2 < p^2 j0^2
    // < (q^2 k0^2 + q) k0^2, recorded for transparency; it holds for no
    // candidate with p j0 != q k0^2 (see |q^2 k0^4 - p^2 j0^2| >= q k0^2 + p j0).
    bool interval_condition = false;

    double a0() const;          // a0 = a2inv^{-1/2}
    Rational period_over_pi() const { return make_rational(2 * freq.q, freq.p); }
};

BifurcationSite make_bifurcation_site(const RationalFrequency& freq, long j0,
                                      long k0, int l0, const Cutoff& cutoff);

// Non-resonance within the cutoff: no kernel site other than (+-j0,+-k0,l0)
// lies in j0 Z x k0 Z x {0,1}. On failure the second member carries one
// offending site.
std::pair<bool, std::optional<LatticeSite>> is_nonresonant(
    const RationalFrequency& freq, long j0, long k0, int l0,
    const Cutoff& cutoff);

// Spectral-gap diagnostics over the non-kernel sites of the cutoff box.
// min_ratio is the computed lower bound for |lambda| / (k^2 + |j|), the
// quantity that controls the projected inverse gaining two s-derivatives.
struct GapReport {
    Rational min_abs_lambda;
    LatticeSite argmin_site;
    Rational min_ratio;
    LatticeSite argmin_ratio_site;
    Integer denominator_bound;  // lcm of all lambda denominators in the box
};

// kernel must be kernel_set(freq, a2inv, cutoff) for the same arguments.
// Scans the quadrant j,k >= 0 (|lambda| is even in j and k); reported argmin
// sites are the quadrant representatives, ties resolved by scan order
// (j ascending, then k, then l).
GapReport gap_report(const RationalFrequency& freq, const Rational& a2inv,
                     const std::vector<LatticeSite>& kernel,
                     const Cutoff& cutoff);

// Candidate atlas for fixed q: scans k0 <= kmax, p <= pmax coprime with q,
// both l0, with j0 normalized to 1 (a maximal j0 is equivalent to absorbing
// j0 into p). Keeps every seed with positive amplitude, annotated with its
// kernel and resonance certificate, sorted by a2inv (ties by k0, p, l0).
std::vector<BifurcationSite> enumerate_candidates(long q, long kmax, long pmax,
                                                  const Cutoff& cutoff);

}  // namespace filament::lattice
