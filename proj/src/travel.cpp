#include "filament/travel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "filament/errors.hpp"
#include "filament/transform.hpp"

namespace filament::travel {

double nu0(double a, int l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    const double rad = 1.0 + sign / (a * a);
    if (rad <= 0.0)
        throw DegenerateFrequency("nu0: 1 + (-1)^l a^{-2} <= 0 for a = " +
                                  std::to_string(a) + ", l = " + std::to_string(l));
    return std::sqrt(rad);
}

double lambda_j(long j, double nu, double a, int l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return static_cast<double>(j) * j - nu * nu + sign / (a * a);
}

namespace {

// Active cosine coefficients for frequency label l. The branch lives in
// component pc = 1 - l; its t-harmonic parity follows the half-period
// conjugation generator: pc = 1 puts x on even and y on odd modes, pc = 0
// forces y = 0 with x unrestricted.
struct ActiveSet {
    std::vector<std::pair<int, int>> entries;  // (component, mode)
    int pc;

    ActiveSet(int l, int modes) : pc(1 - (l % 2)) {
        if (pc == 1) {
            for (int m = 2; m <= modes; m += 2) entries.emplace_back(0, m);
            for (int m = 1; m <= modes; m += 2) entries.emplace_back(1, m);
        } else {
            for (int m = 1; m <= modes; ++m) entries.emplace_back(0, m);
        }
    }
};

std::vector<cd> vbar_grid(const TravelProfile& p, int n) {
    std::vector<cd> data(n, cd(0, 0));
    for (int m = 0; m <= p.modes; ++m) {
        const cd c = 0.5 * cd(p.xc[m], -p.yc[m]);
        if (m == 0) {
            data[0] += cd(p.xc[0], -p.yc[0]);
            continue;
        }
        data[m % n] += c;
        data[(n - m % n) % n] += c;
    }
    transform::backward_1d(data, n);
    return data;
}

// Rows of the zero-mean profile equation in the active order, lock appended.
std::vector<double> rows_impl(const TravelProfile& p, const ActiveSet& act,
                              double b_lock, const TravelConfig& cfg) {
    const double a2inv = 1.0 / (p.a * p.a);
    const int n = transform::next_fast_size(cfg.oversample * (2 * p.modes + 1));
    auto data = vbar_grid(p, n);
    double sup = 0.0;
    for (const cd& z : data) sup = std::max(sup, std::abs(z));
    if (sup >= cfg.guard * p.a)
        throw AmplitudeTooLarge("travel: sup|V| = " + std::to_string(sup) +
                                " >= " + std::to_string(cfg.guard * p.a));
    for (cd& z : data) z = a2inv * z * z / (p.a + z);
    transform::forward_1d(data, n);

    std::vector<double> rows;
    rows.reserve(act.entries.size() + 1);
    for (auto [comp, m] : act.entries) {
        const cd rm = data[m];
        if (comp == 0)
            rows.push_back((static_cast<double>(m) * m - p.nu * p.nu - a2inv) * p.xc[m] +
                           2.0 * rm.real());
        else
            rows.push_back((static_cast<double>(m) * m - p.nu * p.nu + a2inv) * p.yc[m] +
                           2.0 * rm.imag());
    }
    rows.push_back((act.pc == 1 ? p.yc[1] : p.xc[1]) - b_lock);
    return rows;
}

// Dense Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                std::vector<double> rhs) {
    const size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300)
            throw NewtonFailed("travel: singular Newton system");
        std::swap(a[col], a[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t r = n; r-- > 0;) {
        double acc = rhs[r];
        for (size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

double& coeff_ref(TravelProfile& p, int comp, int m) {
    return comp == 0 ? p.xc[m] : p.yc[m];
}

TravelProfile newton_solve(TravelProfile p, double b, const ActiveSet& act,
                           const TravelConfig& cfg) {
    const size_t n = act.entries.size() + 1;
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        auto r0 = rows_impl(p, act, b, cfg);
        double rmax = 0.0;
        for (double v : r0) rmax = std::max(rmax, std::abs(v));
        if (rmax < cfg.newton_tol) {
            p.b = b;
            return p;
        }
        // finite-difference Jacobian, column per unknown (coefficients, then nu)
        std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
        for (size_t col = 0; col < n; ++col) {
            TravelProfile q = p;
            double* slot = (col + 1 == n)
                               ? &q.nu
                               : &coeff_ref(q, act.entries[col].first,
                                            act.entries[col].second);
            const double h = cfg.fd_step * std::max(1.0, std::abs(*slot));
            *slot += h;
            const auto r1 = rows_impl(q, act, b, cfg);
            for (size_t row = 0; row < n; ++row) jac[row][col] = (r1[row] - r0[row]) / h;
        }
        const auto step = solve_dense(std::move(jac), r0);
        for (size_t col = 0; col + 1 < n; ++col)
            coeff_ref(p, act.entries[col].first, act.entries[col].second) -= step[col];
        p.nu -= step[n - 1];
    }
    throw NewtonFailed("travel: Newton did not converge at b = " + std::to_string(b));
}

}  // namespace

std::vector<double> galerkin_residual(const TravelProfile& p, double b_lock,
                                      const TravelConfig& cfg) {
    return rows_impl(p, ActiveSet(p.l, p.modes), b_lock, cfg);
}

std::vector<TravelProfile> solve_travel_branch(double a, int l,
                                               const std::vector<double>& b_grid,
                                               const TravelConfig& cfg) {
    if (b_grid.empty() || b_grid.front() != 0.0 ||
        !std::is_sorted(b_grid.begin(), b_grid.end()))
        throw std::invalid_argument("solve_travel_branch: b_grid must start at 0 and increase");
    const double freq0 = nu0(a, l);
    const ActiveSet act(l, cfg.modes);

    TravelProfile p;
    p.modes = cfg.modes;
    p.xc.assign(cfg.modes + 1, 0.0);
    p.yc.assign(cfg.modes + 1, 0.0);
    p.nu = freq0;
    p.a = a;
    p.l = l % 2;

    std::vector<TravelProfile> out;
    for (double b : b_grid) {
        if (b == 0.0) {
            TravelProfile trivial = p;
            trivial.b = 0.0;
            trivial.residual = 0.0;
            out.push_back(trivial);
            continue;
        }
        // seed the lock coefficient so the first Newton step is well scaled
        coeff_ref(p, act.pc == 1 ? 1 : 0, 1) = b;
        p = newton_solve(p, b, act, cfg);
        p.residual = travel_residual(p, transform::next_fast_size(8 * (cfg.modes + 1)));
        out.push_back(p);
    }
    return out;
}

double travel_residual(const TravelProfile& p, int fine_n) {
    const double a2inv = 1.0 / (p.a * p.a);
    std::vector<cd> v(fine_n, cd(0, 0)), vpp(fine_n, cd(0, 0));
    for (int m = 0; m <= p.modes; ++m) {
        const cd c = (m == 0) ? cd(p.xc[0], p.yc[0]) : 0.5 * cd(p.xc[m], p.yc[m]);
        const long bin = m % fine_n;
        const long nbin = (fine_n - bin) % fine_n;
        v[bin] += c;
        vpp[bin] += -static_cast<double>(m) * m * c;
        if (m != 0) {
            v[nbin] += c;
            vpp[nbin] += -static_cast<double>(m) * m * c;
        }
    }
    transform::backward_1d(v, fine_n);
    transform::backward_1d(vpp, fine_n);

    std::vector<cd> g(fine_n);
    cd mean(0, 0);
    for (int i = 0; i < fine_n; ++i) {
        const cd vb = std::conj(v[i]);
        const cd r = a2inv * vb * vb / (p.a + vb);
        g[i] = -vpp[i] - p.nu * p.nu * v[i] - a2inv * vb + r;
        mean += g[i];
    }
    mean /= static_cast<double>(fine_n);
    double sup = 0.0;
    for (const cd& z : g) sup = std::max(sup, std::abs(z - mean));
    return sup;
}

}  // namespace filament::travel
