#pragma once

/*
 * field.hpp — truncated space-time Fourier representation of fields
 * u : T^2 -> R^2, u(t,s) = (x,y).
 *
 * Storage is dense over the truncation box |j| <= jmax, |k| <= kmax, one
 * complex coefficient plane per component. Reality (c(-j,-k) = conj c(j,k))
 * makes the represented function real-valued; it is an invariant of every
 * constructor and operation here. The identification z = x + i y is used for
 * pointwise work: products and the nonlinearity are evaluated on an
 * oversampled collocation grid and truncated back.
 *
 * The nonlinearity g(u) = a^{-2} ubar^2 / (1 - ubar), ubar = x - i y, is the
 * exact pointwise expansion term of 1/(1-ubar) beyond its linear part; it is
 * analytic for |u| < 1, so evaluation is guarded by sup|u| < guard.
 */

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace filament::field {

using cd = std::complex<double>;

enum class SymmetryKind { none, standing, traveling };

// Fixed-point space labels. standing: even in t and s, 2 pi / k0 periodic in
// s, with the half-period conjugation shift selected by l0 (l0 = 0 forces
// y = 0; l0 = 1 puts x on even and y on odd t-harmonics). traveling: profiles
// U(t + k0 s), with polarization component 1 - l0 (see travel.hpp).
struct SymmetryClass {
    SymmetryKind kind = SymmetryKind::none;
    long k0 = 1;
    int l0 = 0;
    long j0 = 1;
};

class FourierField {
  public:
    FourierField() = default;
    FourierField(int jmax, int kmax);

    int jmax() const { return jmax_; }
    int kmax() const { return kmax_; }

    cd at(int l, long j, long k) const { return comp_[l][index(j, k)]; }
    void set(int l, long j, long k, cd v) { comp_[l][index(j, k)] = v; }

    // Sets c(l,j,k) = v and c(l,-j,-k) = conj(v) in one call.
    void set_pair(int l, long j, long k, cd v);

    std::vector<cd>& plane(int l) { return comp_[l]; }
    const std::vector<cd>& plane(int l) const { return comp_[l]; }

    size_t index(long j, long k) const {
        return static_cast<size_t>(j + jmax_) * (2 * kmax_ + 1) + (k + kmax_);
    }

    bool same_shape(const FourierField& other) const {
        return jmax_ == other.jmax_ && kmax_ == other.kmax_;
    }

    FourierField& operator+=(const FourierField& other);
    FourierField& operator-=(const FourierField& other);
    FourierField& operator*=(double scale);

    std::optional<SymmetryClass> tag;

  private:
    int jmax_ = 0;
    int kmax_ = 0;
    std::array<std::vector<cd>, 2> comp_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(double scale, FourierField a);

// || u ||_{H^s}^2 = sum |u_{j,k}|^2 (j^2 + k^2 + 1)^s over both components.
double sobolev_norm(const FourierField& u, double s);

// Projects c(-j,-k) <- conj(c(j,k)) symmetrically (averaging); a no-op on
// fields that already represent real-valued functions.
void enforce_reality(FourierField& u);

// Collocation grid sizes for a given oversampling factor.
std::pair<int, int> grid_sizes(int jmax, int kmax, int oversample);

// Dense evaluation of z = x + i y on an nt x ns grid (t index major).
std::vector<cd> to_complex_grid(const FourierField& u, int nt, int ns);

// Inverse of to_complex_grid followed by truncation to (jmax, kmax):
// splits the general complex result back into the two real components.
FourierField from_complex_grid(const std::vector<cd>& grid, int nt, int ns,
                               int jmax, int kmax);

// sup over the oversampled grid of |x + i y|.
double max_abs(const FourierField& u, int oversample = 2);

// Pointwise product of the complexified fields z_u z_v, truncated back to the
// common box. Requires equal truncations. The (0,0) mode of the product is
// kept: products of zero-mean fields need not have zero mean.
FourierField multiply(const FourierField& u, const FourierField& v,
                      int oversample = 2);

// g(u) = a2inv ubar^2 / (1 - ubar) evaluated pointwise with ubar = x - i y,
// components (Re g, Im g). Throws AmplitudeTooLarge when sup|u| >= guard.
FourierField eval_nonlinearity(const FourierField& u, double a2inv,
                               int oversample = 2, double guard = 0.9);

enum class DiffOp { ds2, ds4, dt2 };

// Exact diagonal Fourier multipliers -k^2, k^4, -j^2.
FourierField diff_op(const FourierField& u, DiffOp op);

// Orthogonal projection onto the fixed-point space of cls (group averaging in
// coefficient space). Idempotent and norm non-increasing. kind == none is the
// identity.
FourierField project_symmetry(const FourierField& u, const SymmetryClass& cls);

}  // namespace filament::field
