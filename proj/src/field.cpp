#include "filament/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "filament/errors.hpp"
#include "filament/transform.hpp"

namespace filament::field {

FourierField::FourierField(int jmax, int kmax) : jmax_(jmax), kmax_(kmax) {
    if (jmax < 0 || kmax < 0) throw std::invalid_argument("FourierField: negative truncation");
    const size_t n = static_cast<size_t>(2 * jmax + 1) * (2 * kmax + 1);
    comp_[0].assign(n, cd(0.0, 0.0));
    comp_[1].assign(n, cd(0.0, 0.0));
}

void FourierField::set_pair(int l, long j, long k, cd v) {
    set(l, j, k, v);
    if (j != 0 || k != 0) set(l, -j, -k, std::conj(v));
}

FourierField& FourierField::operator+=(const FourierField& other) {
    if (!same_shape(other)) throw std::invalid_argument("field +=: truncation mismatch");
    for (int l = 0; l < 2; ++l)
        for (size_t i = 0; i < comp_[l].size(); ++i) comp_[l][i] += other.comp_[l][i];
    return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
    if (!same_shape(other)) throw std::invalid_argument("field -=: truncation mismatch");
    for (int l = 0; l < 2; ++l)
        for (size_t i = 0; i < comp_[l].size(); ++i) comp_[l][i] -= other.comp_[l][i];
    return *this;
}

FourierField& FourierField::operator*=(double scale) {
    for (int l = 0; l < 2; ++l)
        for (auto& v : comp_[l]) v *= scale;
    return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(double scale, FourierField a) { return a *= scale; }

double sobolev_norm(const FourierField& u, double s) {
    double sum = 0.0;
    for (long j = -u.jmax(); j <= u.jmax(); ++j) {
        for (long k = -u.kmax(); k <= u.kmax(); ++k) {
            const double w = std::pow(static_cast<double>(j) * j + static_cast<double>(k) * k + 1.0, s);
            const double m2 = std::norm(u.at(0, j, k)) + std::norm(u.at(1, j, k));
            sum += m2 * w;
        }
    }
    return std::sqrt(sum);
}

void enforce_reality(FourierField& u) {
    for (int l = 0; l < 2; ++l) {
        for (long j = 0; j <= u.jmax(); ++j) {
            for (long k = -u.kmax(); k <= u.kmax(); ++k) {
                if (j == 0 && k < 0) continue;
                const cd a = u.at(l, j, k);
                const cd b = u.at(l, -j, -k);
                const cd avg = 0.5 * (a + std::conj(b));
                u.set(l, j, k, avg);
                u.set(l, -j, -k, std::conj(avg));
            }
        }
    }
}

namespace {

// even sizes keep aliasing parity-preserving, so pseudo-spectral products
// respect the symmetry masks to round-off
int next_even_fast(int n) {
    int m = transform::next_fast_size(n);
    while (m % 2 != 0) m = transform::next_fast_size(m + 1);
    return m;
}

}  // namespace

std::pair<int, int> grid_sizes(int jmax, int kmax, int oversample) {
    if (oversample < 2) throw std::invalid_argument("grid_sizes: oversample must be >= 2");
    const int nt = next_even_fast(oversample * (2 * jmax + 1));
    const int ns = next_even_fast(oversample * (2 * kmax + 1));
    return {nt, ns};
}

std::vector<cd> to_complex_grid(const FourierField& u, int nt, int ns) {
    if (nt < 2 * u.jmax() + 1 || ns < 2 * u.kmax() + 1)
        throw std::invalid_argument("to_complex_grid: grid too small for truncation");
    std::vector<cd> data(static_cast<size_t>(nt) * ns, cd(0.0, 0.0));
    for (long j = -u.jmax(); j <= u.jmax(); ++j) {
        const long jj = (j % nt + nt) % nt;
        for (long k = -u.kmax(); k <= u.kmax(); ++k) {
            const long kk = (k % ns + ns) % ns;
            const cd z = u.at(0, j, k) + cd(0.0, 1.0) * u.at(1, j, k);
            data[static_cast<size_t>(jj) * ns + kk] = z;
        }
    }
    transform::backward_2d(data, nt, ns);
    return data;
}

FourierField from_complex_grid(const std::vector<cd>& grid, int nt, int ns,
                               int jmax, int kmax) {
    if (nt < 2 * jmax + 1 || ns < 2 * kmax + 1)
        throw std::invalid_argument("from_complex_grid: grid too small for truncation");
    std::vector<cd> data = grid;
    transform::forward_2d(data, nt, ns);
    FourierField out(jmax, kmax);
    for (long j = -jmax; j <= jmax; ++j) {
        const long jp = (j % nt + nt) % nt;
        const long jn = (-j % nt + nt) % nt;
        for (long k = -kmax; k <= kmax; ++k) {
            const long kp = (k % ns + ns) % ns;
            const long kn = (-k % ns + ns) % ns;
            const cd a = data[static_cast<size_t>(jp) * ns + kp];
            const cd b = data[static_cast<size_t>(jn) * ns + kn];
            out.set(0, j, k, 0.5 * (a + std::conj(b)));
            out.set(1, j, k, cd(0.0, -0.5) * (a - std::conj(b)));
        }
    }
    return out;
}

double max_abs(const FourierField& u, int oversample) {
    const auto [nt, ns] = grid_sizes(u.jmax(), u.kmax(), oversample);
    const auto grid = to_complex_grid(u, nt, ns);
    double m = 0.0;
    for (const cd& z : grid) m = std::max(m, std::abs(z));
    return m;
}

FourierField multiply(const FourierField& u, const FourierField& v, int oversample) {
    if (!u.same_shape(v)) throw std::invalid_argument("multiply: truncation mismatch");
    const auto [nt, ns] = grid_sizes(u.jmax(), u.kmax(), oversample);
    auto gu = to_complex_grid(u, nt, ns);
    const auto gv = to_complex_grid(v, nt, ns);
    for (size_t i = 0; i < gu.size(); ++i) gu[i] *= gv[i];
    return from_complex_grid(gu, nt, ns, u.jmax(), u.kmax());
}

FourierField eval_nonlinearity(const FourierField& u, double a2inv,
                               int oversample, double guard) {
    const auto [nt, ns] = grid_sizes(u.jmax(), u.kmax(), oversample);
    auto grid = to_complex_grid(u, nt, ns);
    double sup = 0.0;
    for (const cd& z : grid) sup = std::max(sup, std::abs(z));
    if (sup >= guard)
        throw AmplitudeTooLarge("eval_nonlinearity: sup|u| = " + std::to_string(sup) +
                                " >= guard " + std::to_string(guard));
    for (cd& z : grid) {
        const cd ubar = std::conj(z);
        z = a2inv * ubar * ubar / (1.0 - ubar);
    }
    return from_complex_grid(grid, nt, ns, u.jmax(), u.kmax());
}

FourierField diff_op(const FourierField& u, DiffOp op) {
    FourierField out = u;
    for (int l = 0; l < 2; ++l) {
        for (long j = -u.jmax(); j <= u.jmax(); ++j) {
            for (long k = -u.kmax(); k <= u.kmax(); ++k) {
                double m = 0.0;
                switch (op) {
                    case DiffOp::ds2: m = -static_cast<double>(k) * k; break;
                    case DiffOp::ds4: m = static_cast<double>(k) * k * k * k; break;
                    case DiffOp::dt2: m = -static_cast<double>(j) * j; break;
                }
                out.set(l, j, k, m * u.at(l, j, k));
            }
        }
    }
    return out;
}

namespace {

// Reality + evenness in j and k: the average over the reflection group of a
// real-valued field; coefficients become exactly real.
void project_real_even(FourierField& u) {
    for (int l = 0; l < 2; ++l) {
        for (long j = 0; j <= u.jmax(); ++j) {
            for (long k = 0; k <= u.kmax(); ++k) {
                const cd sum = u.at(l, j, k) + u.at(l, -j, k) + u.at(l, j, -k) +
                               u.at(l, -j, -k);
                // reality folds the conjugates in: real part of the average
                const double val = 0.25 * sum.real();
                u.set(l, j, k, val);
                u.set(l, -j, k, val);
                u.set(l, j, -k, val);
                u.set(l, -j, -k, val);
            }
        }
    }
}

}  // namespace

FourierField project_symmetry(const FourierField& u, const SymmetryClass& cls) {
    FourierField out = u;
    if (cls.kind == SymmetryKind::none) return out;
    enforce_reality(out);

    if (cls.kind == SymmetryKind::standing) {
        project_real_even(out);
        for (int l = 0; l < 2; ++l) {
            for (long j = -out.jmax(); j <= out.jmax(); ++j) {
                for (long k = -out.kmax(); k <= out.kmax(); ++k) {
                    bool keep = (k % cls.k0 == 0);
                    if (keep) {
                        const long kappa = k / cls.k0;
                        keep = ((j + kappa) % 2 == 0);
                    }
                    if (keep) {
                        if (cls.l0 == 0) {
                            if (l == 1) keep = false;           // y vanishes
                        } else {
                            if (l == 0 && (j % 2 != 0)) keep = false;  // x on even j
                            if (l == 1 && (j % 2 == 0)) keep = false;  // y on odd j
                        }
                    }
                    if (!keep) out.set(l, j, k, cd(0.0, 0.0));
                }
            }
        }
        out.tag = cls;
        return out;
    }

    // traveling: support on the line k = j k0, coefficients real via the
    // (t,s) -> (-t,-s) average, polarization component 1 - l0.
    const int pc = 1 - cls.l0;
    for (int l = 0; l < 2; ++l) {
        for (long j = -out.jmax(); j <= out.jmax(); ++j) {
            for (long k = -out.kmax(); k <= out.kmax(); ++k) {
                bool keep = (k == j * cls.k0);
                if (keep) {
                    if (pc == 0) {
                        if (l == 1) keep = false;
                    } else {
                        if (l == 0 && (j % 2 != 0)) keep = false;
                        if (l == 1 && (j % 2 == 0)) keep = false;
                    }
                }
                if (!keep) {
                    out.set(l, j, k, cd(0.0, 0.0));
                } else {
                    const double val = 0.5 * (out.at(l, j, k) + out.at(l, -j, -k)).real();
                    out.set(l, j, k, val);
                    out.set(l, -j, -k, val);
                }
            }
        }
    }
    out.tag = cls;
    return out;
}

}  // namespace filament::field
