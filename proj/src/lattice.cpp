#include "filament/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "filament/errors.hpp"

namespace filament::lattice {

RationalFrequency::RationalFrequency(long p_, long q_) : p(p_), q(q_) {
    if (p < 1 || q < 1)
        throw std::invalid_argument("RationalFrequency: p and q must be >= 1");
    if (std::gcd(p, q) != 1)
        throw std::invalid_argument("RationalFrequency: p/q must be in lowest terms");
}

Rational eigenvalue(const LatticeSite& site, const RationalFrequency& freq,
                    const Rational& a2inv) {
    if (a2inv <= 0) throw std::invalid_argument("eigenvalue: a2inv must be > 0");
    const Rational nj = make_rational(freq.p * site.j, freq.q);
    const Integer k2 = Integer(site.k) * site.k;
    Rational lam = nj * nj;
    lam -= Rational(k2 * k2);
    Rational term = a2inv * Rational(k2);
    if (site.l % 2 != 0) term = -term;
    lam += term;
    return lam;
}

Rational amplitude_from_site(const RationalFrequency& freq, long j0, long k0,
                             int l0) {
    if (j0 < 1 || k0 < 1) throw std::invalid_argument("amplitude_from_site: j0,k0 >= 1");
    const Rational ratio = make_rational(freq.p * j0, freq.q * k0);
    Rational a2inv = Rational(Integer(k0) * k0) - ratio * ratio;
    if (l0 % 2 != 0) a2inv = -a2inv;
    if (a2inv <= 0)
        throw NonPositiveAmplitude("amplitude_from_site: (-1)^l0 (k0^2 - (p j0/(q k0))^2) <= 0 for p=" +
                                   std::to_string(freq.p) + " q=" + std::to_string(freq.q) +
                                   " j0=" + std::to_string(j0) + " k0=" + std::to_string(k0) +
                                   " l0=" + std::to_string(l0));
    return a2inv;
}

namespace {

// Non-negative j solving lambda_{j,k,l} = 0 for fixed k >= 1, l, if any:
// (p j)^2 = q^2 k^2 (k^2 - (-1)^l a2inv) must be a perfect integer square.
std::optional<long> zero_j_for(long k, int l, const RationalFrequency& freq,
                               const Rational& a2inv, long jmax) {
    Rational target = Rational(Integer(k) * k);
    target -= (l % 2 == 0) ? a2inv : Rational(-a2inv);
    if (target < 0) return std::nullopt;
    // j^2 = q^2 k^2 target / p^2, exact
    Rational j2 = target * Rational(Integer(freq.q) * freq.q * k * k,
                                    Integer(freq.p) * freq.p);
    j2.canonicalize();
    if (j2.get_den() != 1) return std::nullopt;
    const Integer num = j2.get_num();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
    if (root > jmax) return std::nullopt;
    return root.get_si();
}

void push_orbit(std::vector<LatticeSite>& out, long j, long k, int l) {
    // close under the four reflections; j or k may be zero
    out.push_back({j, k, l});
    if (k != 0) out.push_back({j, -k, l});
    if (j != 0) {
        out.push_back({-j, k, l});
        if (k != 0) out.push_back({-j, -k, l});
    }
}

}  // namespace

std::vector<LatticeSite> kernel_set(const RationalFrequency& freq,
                                    const Rational& a2inv, const Cutoff& cutoff) {
    if (a2inv <= 0) throw std::invalid_argument("kernel_set: a2inv must be > 0");
    if (cutoff.jmax < 1 || cutoff.kmax < 1)
        throw std::invalid_argument("kernel_set: cutoff components must be >= 1");
    std::vector<LatticeSite> kernel;
    // k = 0 sites have lambda = (nu j)^2 != 0 for j != 0; skip them.
    for (long k = 1; k <= cutoff.kmax; ++k) {
        for (int l = 0; l < 2; ++l) {
            if (auto j = zero_j_for(k, l, freq, a2inv, cutoff.jmax))
                push_orbit(kernel, *j, k, l);
        }
    }
    std::sort(kernel.begin(), kernel.end());
    return kernel;
}

double BifurcationSite::a0() const { return 1.0 / std::sqrt(to_double(a2inv)); }

BifurcationSite make_bifurcation_site(const RationalFrequency& freq, long j0,
                                      long k0, int l0, const Cutoff& cutoff) {
    BifurcationSite site{freq, j0, k0, l0, amplitude_from_site(freq, j0, k0, l0),
                         {}, false, std::nullopt, cutoff, false};
    site.kernel = kernel_set(freq, site.a2inv, cutoff);
    auto [ok, witness] = is_nonresonant(freq, j0, k0, l0, cutoff);
    site.nonresonant = ok;
    site.resonance_witness = witness;
    // (q^2 k0^2 - q) k0^2 < (p j0)^2 < (q^2 k0^2 + q) k0^2 over the integers
    const Integer p0 = Integer(freq.p) * j0;
    const Integer lhs = (Integer(freq.q) * freq.q * k0 * k0 - freq.q) * k0 * k0;
    const Integer rhs = (Integer(freq.q) * freq.q * k0 * k0 + freq.q) * k0 * k0;
    site.interval_condition = (lhs < p0 * p0) && (p0 * p0 < rhs);
    return site;
}

std::pair<bool, std::optional<LatticeSite>> is_nonresonant(
    const RationalFrequency& freq, long j0, long k0, int l0,
    const Cutoff& cutoff) {
    const Rational a2inv = amplitude_from_site(freq, j0, k0, l0);
    // Only sites in j0 Z x k0 Z can offend; scan k multiples of k0 and check
    // that any exact zero is divisible by j0 and equals the seeded orbit.
    for (long k = k0; k <= cutoff.kmax; k += k0) {
        for (int l = 0; l < 2; ++l) {
            auto j = zero_j_for(k, l, freq, a2inv, cutoff.jmax);
            if (!j) continue;
            if (*j % j0 != 0) continue;  // zero exists but outside the sub-lattice
            if (k == k0 && *j == j0 && l == l0) continue;  // the seeded orbit
            return {false, LatticeSite{*j, k, l}};
        }
    }
    return {true, std::nullopt};
}

GapReport gap_report(const RationalFrequency& freq, const Rational& a2inv,
                     const std::vector<LatticeSite>& kernel,
                     const Cutoff& cutoff) {
    GapReport report;
    report.denominator_bound = 1;
    bool first = true;
    for (long j = 0; j <= cutoff.jmax; ++j) {
        for (long k = 0; k <= cutoff.kmax; ++k) {
            if (j == 0 && k == 0) continue;
            for (int l = 0; l < 2; ++l) {
                const LatticeSite site{j, k, l};
                const Rational lam = eigenvalue(site, freq, a2inv);
                mpz_lcm(report.denominator_bound.get_mpz_t(),
                        report.denominator_bound.get_mpz_t(),
                        lam.get_den().get_mpz_t());
                if (std::binary_search(kernel.begin(), kernel.end(), site)) continue;
                const Rational alam = abs(lam);
                const Rational ratio = alam / Rational(Integer(k) * k + j);
                if (first || alam < report.min_abs_lambda) {
                    report.min_abs_lambda = alam;
                    report.argmin_site = site;
                }
                if (first || ratio < report.min_ratio) {
                    report.min_ratio = ratio;
                    report.argmin_ratio_site = site;
                }
                first = false;
            }
        }
    }
    return report;
}

std::vector<BifurcationSite> enumerate_candidates(long q, long kmax, long pmax,
                                                  const Cutoff& cutoff) {
    if (q < 1 || kmax < 1 || pmax < 1)
        throw std::invalid_argument("enumerate_candidates: arguments must be >= 1");
    std::vector<BifurcationSite> out;
    for (long k0 = 1; k0 <= kmax; ++k0) {
        for (long p = 1; p <= pmax; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (int l0 = 0; l0 < 2; ++l0) {
                try {
                    out.push_back(make_bifurcation_site(RationalFrequency(p, q), 1,
                                                        k0, l0, cutoff));
                } catch (const NonPositiveAmplitude&) {
                    // seed admits no distance; skip
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const BifurcationSite& a, const BifurcationSite& b) {
        if (a.a2inv != b.a2inv) return a.a2inv < b.a2inv;
        if (a.k0 != b.k0) return a.k0 < b.k0;
        if (a.freq.p != b.freq.p) return a.freq.p < b.freq.p;
        return a.l0 < b.l0;
    });
    return out;
}

}  // namespace filament::lattice
