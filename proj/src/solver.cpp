#include "filament/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "filament/errors.hpp"
#include "filament/transform.hpp"

namespace filament::solver {

namespace {

constexpr double kLambdaFloor = 1e-9;  // |lambda| below this outside the kernel
                                       // means the distance left the invertible
                                       // neighborhood

double lambda_d(long j, long k, int l, double nu, double a2inv) {
    const double nj = nu * static_cast<double>(j);
    const double k2 = static_cast<double>(k) * k;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return nj * nj - k2 * k2 + sign * a2inv * k2;
}

struct KernelMask {
    int jmax = 0, kmax = 0;
    std::array<std::vector<char>, 2> mask;

    KernelMask(const std::vector<lattice::LatticeSite>& kernel, int jm, int km)
        : jmax(jm), kmax(km) {
        const size_t n = static_cast<size_t>(2 * jm + 1) * (2 * km + 1);
        mask[0].assign(n, 0);
        mask[1].assign(n, 0);
        for (const auto& s : kernel) {
            if (std::abs(s.j) <= jm && std::abs(s.k) <= km)
                mask[s.l][index(s.j, s.k)] = 1;
        }
    }
    size_t index(long j, long k) const {
        return static_cast<size_t>(j + jmax) * (2 * kmax + 1) + (k + kmax);
    }
    bool is_kernel(int l, long j, long k) const { return mask[l][index(j, k)] != 0; }
};

field::SymmetryClass standing_class(const lattice::BifurcationSite& site) {
    return {field::SymmetryKind::standing, site.k0, site.l0, site.j0};
}

// Shared state for one (site, cfg) solve: kernel over the solve truncation,
// nonlinearity bridge, fused inverse.
struct RangeOperator {
    const lattice::BifurcationSite& site;
    const SolverConfig& cfg;
    double nu;
    std::vector<lattice::LatticeSite> kernel;
    KernelMask mask;
    field::SymmetryClass cls;

    RangeOperator(const lattice::BifurcationSite& s, const SolverConfig& c)
        : site(s), cfg(c), nu(static_cast<double>(s.freq.p) / s.freq.q),
          kernel(lattice::kernel_set(s.freq, s.a2inv,
                                     lattice::Cutoff{c.jmax, c.kmax})),
          mask(kernel, c.jmax, c.kmax), cls(standing_class(s)) {
        if (s.j0 != 1)
            throw std::invalid_argument("solver: branch solves require j0 = 1");
        // the reduction needs a simple kernel: refuse resonant amplitudes,
        // whether certified at the site's own cutoff or visible in this box
        if (!s.nonresonant)
            throw ResonantAmplitude(
                "amplitude is resonant within its certification cutoff" +
                (s.resonance_witness
                     ? ", witness (" + std::to_string(s.resonance_witness->j) + "," +
                           std::to_string(s.resonance_witness->k) + "," +
                           std::to_string(s.resonance_witness->l) + ")"
                     : std::string()));
        for (const auto& z : kernel) {
            if (std::abs(z.j) == s.j0 && std::abs(z.k) == s.k0 && z.l == s.l0) continue;
            throw ResonantAmplitude("kernel inside the solve truncation contains (" +
                                    std::to_string(z.j) + "," + std::to_string(z.k) +
                                    "," + std::to_string(z.l) + ")");
        }
    }

    // M(u) = a * g(-u/a, a2inv): the pointwise nonlinearity of the additive
    // perturbation, M(u) = a^{-3} realify(ubar^2) + O(u^3). Coefficients below
    // the collocation round-off floor are flushed to exact zero: their true
    // magnitude is spectrally far below round-off, and keeping the noise would
    // dominate every H^s residual through the k^2 (j^2+k^2+1)^s weights.
    FourierField nonlinearity(const FourierField& u, double a) const {
        FourierField scaled = (-1.0 / a) * u;
        FourierField g = field::eval_nonlinearity(scaled, 1.0 / (a * a),
                                                  cfg.oversample, cfg.guard);
        g *= a;
        double cmax = 0.0;
        for (int l = 0; l < 2; ++l)
            for (const cd& c : g.plane(l)) cmax = std::max(cmax, std::abs(c));
        const double floor = 1e-14 * cmax;
        for (int l = 0; l < 2; ++l)
            for (cd& c : g.plane(l))
                if (std::abs(c) < floor) c = cd(0.0, 0.0);
        return g;
    }

    // -(PLP)^{-1} d_s^2 applied through the fused multiplier k^2/lambda(a).
    FourierField neg_inverse_ds2(const FourierField& f, double a) const {
        const double a2inv = 1.0 / (a * a);
        FourierField out(cfg.jmax, cfg.kmax);
        for (int l = 0; l < 2; ++l) {
            for (long j = -cfg.jmax; j <= cfg.jmax; ++j) {
                for (long k = -cfg.kmax; k <= cfg.kmax; ++k) {
                    if (j == 0 && k == 0) continue;
                    if (mask.is_kernel(l, j, k)) continue;
                    const double lam = lambda_d(j, k, l, nu, a2inv);
                    if (std::abs(lam) < kLambdaFloor)
                        throw SingularSite(
                            "eigenvalue vanished at a non-kernel site (j=" +
                            std::to_string(j) + ", k=" + std::to_string(k) +
                            ", l=" + std::to_string(l) + ")");
                    const double k2 = static_cast<double>(k) * k;
                    out.set(l, j, k, (k2 / lam) * f.at(l, j, k));
                }
            }
        }
        return out;
    }

    FourierField picard_map(const FourierField& v_plus_w, double a) const {
        FourierField m = nonlinearity(v_plus_w, a);
        FourierField kw = neg_inverse_ds2(m, a);
        return field::project_symmetry(kw, cls);
    }

    // || PLPw + P d_s^2 M(v+w) ||_{H^s}
    double residual_norm(const FourierField& w, const FourierField& v, double a) const {
        const double a2inv = 1.0 / (a * a);
        FourierField m = nonlinearity(v + w, a);
        double sum = 0.0;
        for (int l = 0; l < 2; ++l) {
            for (long j = -cfg.jmax; j <= cfg.jmax; ++j) {
                for (long k = -cfg.kmax; k <= cfg.kmax; ++k) {
                    if (j == 0 && k == 0) continue;
                    if (mask.is_kernel(l, j, k)) continue;
                    const double lam = lambda_d(j, k, l, nu, a2inv);
                    const double k2 = static_cast<double>(k) * k;
                    const cd r = lam * w.at(l, j, k) - k2 * m.at(l, j, k);
                    const double wt = std::pow(
                        static_cast<double>(j) * j + static_cast<double>(k) * k + 1.0,
                        cfg.sobolev_s);
                    sum += std::norm(r) * wt;
                }
            }
        }
        return std::sqrt(sum);
    }
};

double fit_slope(const std::vector<std::pair<double, double>>& xy) {
    // least squares slope of log y vs log x
    if (xy.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(xy.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<cd> grid_eval(const SpectralGrid2D& g, int nt, int ns) {
    // exact pointwise evaluation on the nt x ns grid; wrapped bins accumulate
    std::vector<cd> data(static_cast<size_t>(nt) * ns, cd(0.0, 0.0));
    for (long j = -g.jmax; j <= g.jmax; ++j) {
        const long jj = (j % nt + nt) % nt;
        for (long k = -g.kmax; k <= g.kmax; ++k) {
            const long kk = (k % ns + ns) % ns;
            data[static_cast<size_t>(jj) * ns + kk] += g.at(j, k);
        }
    }
    transform::backward_2d(data, nt, ns);
    return data;
}

SpectralGrid2D complexify(const FourierField& u) {
    SpectralGrid2D g(u.jmax(), u.kmax());
    for (long j = -u.jmax(); j <= u.jmax(); ++j)
        for (long k = -u.kmax(); k <= u.kmax(); ++k)
            g.set(j, k, u.at(0, j, k) + cd(0, 1) * u.at(1, j, k));
    return g;
}

double sup_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

void SolverConfig::validate() const {
    if (sobolev_s < 6.0)
        throw std::invalid_argument("SolverConfig: sobolev_s must be >= 6");
    if (tol <= 0 || residual_tol <= 0 || secant_tol <= 0)
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    if (oversample < 2)
        throw std::invalid_argument("SolverConfig: oversample must be >= 2");
    if (max_iter < 1 || jmax < 1 || kmax < 1)
        throw std::invalid_argument("SolverConfig: max_iter, jmax, kmax must be >= 1");
}

FourierField kernel_mode(const lattice::BifurcationSite& site, double b, int jmax,
                         int kmax) {
    FourierField v(jmax, kmax);
    v.set_pair(site.l0, site.j0, site.k0, cd(b / 4.0, 0.0));
    v.set_pair(site.l0, site.j0, -site.k0, cd(b / 4.0, 0.0));
    v.tag = standing_class(site);
    return v;
}

FourierField apply_L(const FourierField& u, const lattice::RationalFrequency& freq,
                     const Rational& a2inv) {
    FourierField out = u;
    for (int l = 0; l < 2; ++l) {
        for (long j = -u.jmax(); j <= u.jmax(); ++j) {
            for (long k = -u.kmax(); k <= u.kmax(); ++k) {
                if (j == 0 && k == 0) {
                    out.set(l, 0, 0, cd(0, 0));
                    continue;
                }
                const double lam =
                    to_double(lattice::eigenvalue({j, k, l}, freq, a2inv));
                out.set(l, j, k, lam * u.at(l, j, k));
            }
        }
    }
    return out;
}

FourierField apply_inverse_PLP_ds2(const FourierField& u,
                                   const lattice::RationalFrequency& freq,
                                   const Rational& a2inv,
                                   const std::vector<lattice::LatticeSite>& kernel) {
    KernelMask mask(kernel, u.jmax(), u.kmax());
    FourierField out(u.jmax(), u.kmax());
    for (int l = 0; l < 2; ++l) {
        for (long j = -u.jmax(); j <= u.jmax(); ++j) {
            for (long k = -u.kmax(); k <= u.kmax(); ++k) {
                if (j == 0 && k == 0) continue;
                if (mask.is_kernel(l, j, k)) continue;
                const Rational lam = lattice::eigenvalue({j, k, l}, freq, a2inv);
                if (lam == 0)
                    throw SingularSite("zero eigenvalue outside the declared kernel at (j=" +
                                       std::to_string(j) + ", k=" + std::to_string(k) +
                                       ", l=" + std::to_string(l) + ")");
                const double mult = -static_cast<double>(k) * k / to_double(lam);
                out.set(l, j, k, mult * u.at(l, j, k));
            }
        }
    }
    return out;
}

RangeSolution solve_range(double b, double a, const lattice::BifurcationSite& site,
                          const SolverConfig& cfg, const FourierField* warm) {
    if (a <= 0) throw std::invalid_argument("solve_range: a must be > 0");
    cfg.validate();
    RangeOperator op(site, cfg);
    const FourierField v = kernel_mode(site, b, cfg.jmax, cfg.kmax);

    FourierField w = (warm && warm->same_shape(v)) ? *warm
                                                   : FourierField(cfg.jmax, cfg.kmax);
    RangeSolution out;
    double best = std::numeric_limits<double>::infinity();
    double prev_delta = std::numeric_limits<double>::infinity();
    int worse_streak = 0;
    int tail_left = 40;
    for (int iter = 1; iter <= cfg.max_iter + tail_left; ++iter) {
        FourierField next = op.picard_map(v + w, a);
        const double delta = field::sobolev_norm(next - w, cfg.sobolev_s);
        w = std::move(next);
        out.iterations = iter;
        if (delta == 0.0) break;
        if (delta < cfg.tol) {
            // polish the tail: the residual weighs increments by lambda, so
            // keep contracting until the increment hits its round-off plateau
            if (--tail_left <= 0 || delta > 0.7 * prev_delta) break;
        } else {
            if (delta < best) {
                best = delta;
                worse_streak = 0;
            } else if (++worse_streak >= 10 &&
                       delta > std::max(100.0 * best, 1e3 * cfg.tol)) {
                throw ContractionFailed("range iteration diverged at b=" +
                                        std::to_string(b) + ", a=" + std::to_string(a));
            }
            if (iter >= cfg.max_iter)
                throw ContractionFailed("range iteration hit max_iter at b=" +
                                        std::to_string(b) + ", a=" + std::to_string(a));
        }
        prev_delta = delta;
    }
    out.range_residual = op.residual_norm(w, v, a);
    if (out.range_residual > cfg.residual_tol) {
        char msg[120];
        std::snprintf(msg, sizeof msg,
                      "range residual %.3e above the acceptance threshold %.3e at b=%g",
                      out.range_residual, cfg.residual_tol, b);
        throw ContractionFailed(msg);
    }
    out.w = std::move(w);
    return out;
}

double bifurcation_value(double b, double a, const lattice::BifurcationSite& site,
                         const SolverConfig& cfg, RangeSolution* range_out) {
    RangeOperator op(site, cfg);
    const FourierField* warm = nullptr;
    if (range_out && range_out->w.same_shape(FourierField(cfg.jmax, cfg.kmax)))
        warm = &range_out->w;
    RangeSolution rs = solve_range(b, a, site, cfg, warm);

    const FourierField v = kernel_mode(site, b, cfg.jmax, cfg.kmax);
    FourierField m = op.nonlinearity(v + rs.w, a);
    const double k2 = static_cast<double>(site.k0) * site.k0;
    // (d_s^2 M)-hat at the kernel site, times <phi,phi>^{-1} = 4
    const double nl = 4.0 * (-k2) * m.at(site.l0, site.j0, site.k0).real();
    const double lam = lambda_d(site.j0, site.k0, site.l0,
                                static_cast<double>(site.freq.p) / site.freq.q,
                                1.0 / (a * a));
    if (range_out) *range_out = std::move(rs);
    return lam * b + nl;
}

namespace {

// d lambda/d a at the kernel site: the transversality slope of B at w = 0.
double lambda_slope(const lattice::BifurcationSite& site, double a) {
    const double sign = (site.l0 % 2 == 0) ? 1.0 : -1.0;
    return sign * (-2.0 / (a * a * a)) * static_cast<double>(site.k0) * site.k0;
}

BranchPoint oddness_image(BranchPoint pt) {
    // u(-b)(t,s) = u(b)(t + pi, s): flip odd t-harmonics
    for (auto* f : {&pt.v, &pt.w}) {
        for (int l = 0; l < 2; ++l)
            for (long j = -f->jmax(); j <= f->jmax(); ++j)
                if (j % 2 != 0)
                    for (long k = -f->kmax(); k <= f->kmax(); ++k)
                        f->set(l, j, k, -f->at(l, j, k));
    }
    pt.b = -pt.b;
    return pt;
}

}  // namespace

BranchPoint solve_branch_point(double b, double a_init,
                               const lattice::BifurcationSite& site,
                               const SolverConfig& cfg, const FourierField* warm) {
    if (b < 0) return oddness_image(solve_branch_point(-b, a_init, site, cfg, warm));

    RangeOperator op(site, cfg);
    BranchPoint pt;
    pt.site = site;
    pt.b = b;

    if (b == 0.0) {
        pt.a = site.a0();
        pt.v = kernel_mode(site, 0.0, cfg.jmax, cfg.kmax);
        pt.w = FourierField(cfg.jmax, cfg.kmax);
        pt.iterations = 0;
        return pt;
    }

    const double a0 = site.a0();
    const double lo = a0 * (1.0 - cfg.secant_bracket);
    const double hi = a0 * (1.0 + cfg.secant_bracket);
    auto clamp_count = 0;

    RangeSolution rs;
    double x0 = std::clamp(a_init, lo, hi);
    double f0 = bifurcation_value(b, x0, site, cfg, &rs);
    double x_acc = x0;
    RangeSolution rs_acc = rs;

    if (std::abs(f0) >= cfg.secant_tol) {
        // first step from the analytic transversality slope, then secant
        double x1 = x0 - f0 / (lambda_slope(site, x0) * b);
        x1 = std::clamp(x1, lo, hi);
        bool done = false;
        for (int it = 0; it < cfg.secant_max_iter; ++it) {
            double f1 = bifurcation_value(b, x1, site, cfg, &rs);
            if (std::abs(f1) < cfg.secant_tol) {
                x_acc = x1;
                rs_acc = rs;
                done = true;
                break;
            }
            double x2;
            if (f1 != f0 && std::isfinite(f1)) {
                x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            } else {
                x2 = x1 - f1 / (lambda_slope(site, x1) * b);
            }
            if (!std::isfinite(x2))
                throw RootNotFound("secant produced a non-finite distance at b=" +
                                   std::to_string(b));
            const double clamped = std::clamp(x2, lo, hi);
            if (clamped != x2 && ++clamp_count > 2)
                throw RootNotFound("distance left the local bracket at b=" +
                                   std::to_string(b));
            x0 = x1;
            f0 = f1;
            x1 = clamped;
        }
        if (!done)
            throw RootNotFound("secant failed to reach tolerance at b=" +
                               std::to_string(b));
    }

    pt.a = x_acc;
    pt.v = kernel_mode(site, b, cfg.jmax, cfg.kmax);
    pt.w = rs_acc.w;
    pt.range_residual = rs_acc.range_residual;
    pt.iterations = rs_acc.iterations;

    // || L u + d_s^2 M(u) ||_{H^s} over the whole truncation
    {
        FourierField u = pt.u();
        FourierField m = op.nonlinearity(u, pt.a);
        const double a2inv = 1.0 / (pt.a * pt.a);
        const double nu = static_cast<double>(site.freq.p) / site.freq.q;
        double sum = 0.0;
        for (int l = 0; l < 2; ++l) {
            for (long j = -cfg.jmax; j <= cfg.jmax; ++j) {
                for (long k = -cfg.kmax; k <= cfg.kmax; ++k) {
                    if (j == 0 && k == 0) continue;
                    const double lam = lambda_d(j, k, l, nu, a2inv);
                    const double k2 = static_cast<double>(k) * k;
                    const cd r = lam * u.at(l, j, k) - k2 * m.at(l, j, k);
                    const double wt = std::pow(
                        static_cast<double>(j) * j + static_cast<double>(k) * k + 1.0,
                        cfg.sobolev_s);
                    sum += std::norm(r) * wt;
                }
            }
        }
        pt.full_residual = std::sqrt(sum);
    }
    return pt;
}

Branch continue_branch(const lattice::BifurcationSite& site,
                       const std::vector<double>& b_grid, const SolverConfig& cfg) {
    if (b_grid.empty() || b_grid.front() != 0.0 ||
        !std::is_sorted(b_grid.begin(), b_grid.end()) ||
        std::adjacent_find(b_grid.begin(), b_grid.end()) != b_grid.end())
        throw std::invalid_argument("continue_branch: b_grid must start at 0 and increase");

    Branch branch;
    branch.site = site;
    branch.points.push_back(solve_branch_point(0.0, site.a0(), site, cfg));

    size_t next = 1;
    int halvings = 0;
    while (next < b_grid.size()) {
        const BranchPoint& last = branch.points.back();
        const double target = b_grid[next];
        const double attempt =
            (halvings == 0) ? target : last.b + (target - last.b);  // target after halving inserts
        try {
            BranchPoint pt = solve_branch_point(attempt, last.a, site, cfg, &last.w);
            branch.points.push_back(std::move(pt));
            if (attempt == target) {
                ++next;
                halvings = 0;
            }
        } catch (const NumericalError& err) {
            if (halvings >= cfg.max_halvings) {
                branch.truncated = true;
                branch.message = std::string("branch truncated at b = ") +
                                 std::to_string(last.b) + ": " + err.what();
                break;
            }
            ++halvings;
            const double mid = 0.5 * (last.b + target);
            try {
                BranchPoint pt = solve_branch_point(mid, last.a, site, cfg, &last.w);
                branch.points.push_back(std::move(pt));
            } catch (const NumericalError& err2) {
                branch.truncated = true;
                branch.message = std::string("branch truncated at b = ") +
                                 std::to_string(last.b) + ": " + err2.what();
                break;
            }
        }
    }

    std::vector<std::pair<double, double>> wfit, afit;
    const double a0 = site.a0();
    for (const auto& pt : branch.points) {
        if (pt.b <= 0.0) continue;
        const double wn = field::sobolev_norm(pt.w, cfg.sobolev_s);
        if (wn > 1e-14) wfit.emplace_back(pt.b, wn);
        const double da = std::abs(pt.a - a0);
        if (da > 1e-13) afit.emplace_back(pt.b, da);
    }
    branch.w_scaling_exponent = fit_slope(wfit);
    branch.a_scaling_exponent = fit_slope(afit);
    return branch;
}

double SymmetryReport::max() const {
    return std::max(std::max(even_t, even_s), std::max(periodic_s, conj_shift));
}

AssembledSolution assemble_solution(const BranchPoint& pt, const SolverConfig& cfg) {
    AssembledSolution sol;
    sol.site = pt.site;
    sol.a = pt.a;
    sol.b = pt.b;
    sol.period = 2.0 * std::numbers::pi * pt.site.freq.q / pt.site.freq.p;
    sol.u = pt.u();

    const int jm = sol.u.jmax(), km = sol.u.kmax();
    const double nu = static_cast<double>(pt.site.freq.p) / pt.site.freq.q;
    const auto [nt, ns] = field::grid_sizes(jm, km, cfg.oversample);

    // w1 and d_s^2 w1 on the oversampled grid
    SpectralGrid2D z = complexify(sol.u);
    SpectralGrid2D zss(jm, km);
    for (long j = -jm; j <= jm; ++j)
        for (long k = -km; k <= km; ++k)
            zss.set(j, k, -static_cast<double>(k) * k * z.at(j, k));
    auto gz = grid_eval(z, nt, ns);
    auto gss = grid_eval(zss, nt, ns);

    double min_abs = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < gz.size(); ++i) {
        const cd w1 = sol.a + gz[i];
        min_abs = std::min(min_abs, std::abs(w1));
    }
    sol.min_abs_w1 = min_abs;
    const double guard = cfg.collision_guard_rel * pt.site.a0();
    if (min_abs < guard)
        throw CollisionDetected("min |w1| = " + std::to_string(min_abs) +
                                " below guard " + std::to_string(guard));

    // Phi = d_s^2 w1 - |w1|^{-2} w1 ; d_t w2 = i Phi
    std::vector<cd> phi(gz.size());
    for (size_t i = 0; i < gz.size(); ++i) {
        const cd w1 = sol.a + gz[i];
        phi[i] = gss[i] - 1.0 / std::conj(w1);
    }
    transform::forward_2d(phi, nt, ns);

    auto phi_hat = [&](long j, long k) {
        const long jj = (j % nt + nt) % nt;
        const long kk = (k % ns + ns) % ns;
        return phi[static_cast<size_t>(jj) * ns + kk];
    };

    sol.drift = cd(0, 1) * phi_hat(0, 0);
    sol.w2_periodic = SpectralGrid2D(jm, km);
    double mean_dev = 0.0;
    for (long j = -jm; j <= jm; ++j) {
        for (long k = -km; k <= km; ++k) {
            if (j == 0) {
                if (k != 0) mean_dev = std::max(mean_dev, std::abs(phi_hat(0, k)));
                continue;
            }
            sol.w2_periodic.set(j, k, phi_hat(j, k) / (nu * static_cast<double>(j)));
        }
    }
    sol.t_mean_consistency = mean_dev;
    sol.symmetry = symmetry_check(sol, 128, 128);
    return sol;
}

ResidualNorms full_residual(const AssembledSolution& sol, int fine_nt, int fine_ns) {
    const int jm = sol.u.jmax(), km = sol.u.kmax();
    const double nu = static_cast<double>(sol.site.freq.p) / sol.site.freq.q;

    SpectralGrid2D z = complexify(sol.u);
    SpectralGrid2D ztt(jm, km), zs(jm, km), zss(jm, km), z4(jm, km);
    for (long j = -jm; j <= jm; ++j) {
        for (long k = -km; k <= km; ++k) {
            const cd c = z.at(j, k);
            const double dk = static_cast<double>(k);
            ztt.set(j, k, -(nu * j) * (nu * j) * c);
            zs.set(j, k, cd(0, 1) * dk * c);
            zss.set(j, k, -dk * dk * c);
            z4.set(j, k, dk * dk * dk * dk * c);
        }
    }
    const auto gz = grid_eval(z, fine_nt, fine_ns);
    const auto gtt = grid_eval(ztt, fine_nt, fine_ns);
    const auto gs = grid_eval(zs, fine_nt, fine_ns);
    const auto gss = grid_eval(zss, fine_nt, fine_ns);
    const auto g4 = grid_eval(z4, fine_nt, fine_ns);

    ResidualNorms norms;
    double sum = 0.0;
    for (size_t i = 0; i < gz.size(); ++i) {
        const cd wbar = sol.a + std::conj(gz[i]);
        const cd wbar_s = std::conj(gs[i]);
        const cd wbar_ss = std::conj(gss[i]);
        // d_s^2 (1/wbar) = 2 (d_s wbar)^2 / wbar^3 - d_s^2 wbar / wbar^2
        const cd t3 = 2.0 * wbar_s * wbar_s / (wbar * wbar * wbar) -
                      wbar_ss / (wbar * wbar);
        const cd r = gtt[i] + g4[i] - t3;
        norms.sup = std::max(norms.sup, std::abs(r));
        sum += std::norm(r);
    }
    norms.l2 = std::sqrt(sum / static_cast<double>(gz.size()));
    return norms;
}

SymmetryReport symmetry_check(const AssembledSolution& sol, int nt, int ns) {
    const int jm = sol.u.jmax(), km = sol.u.kmax();
    SpectralGrid2D w1 = complexify(sol.u);
    w1.set(0, 0, w1.at(0, 0) + sol.a);

    SpectralGrid2D refl_t(jm, km), refl_s(jm, km), shift_s(jm, km), conj_shift(jm, km);
    const double theta = 2.0 * std::numbers::pi / static_cast<double>(sol.site.k0);
    for (long j = -jm; j <= jm; ++j) {
        for (long k = -km; k <= km; ++k) {
            const cd c = w1.at(j, k);
            refl_t.set(-j, k, c);
            refl_s.set(j, -k, c);
            shift_s.set(j, k, c * std::polar(1.0, k * theta));
            // conj w1(t + l0 q pi/p, s): conjugate then shift tau by l0 pi
            const double sign = (sol.site.l0 * j) % 2 == 0 ? 1.0 : -1.0;
            conj_shift.set(-j, -k, std::conj(c) * sign);
        }
    }

    const auto base = grid_eval(w1, nt, ns);
    SymmetryReport rep;
    rep.even_t = sup_diff(base, grid_eval(refl_t, nt, ns));
    rep.even_s = sup_diff(base, grid_eval(refl_s, nt, ns));
    rep.periodic_s = sup_diff(base, grid_eval(shift_s, nt, ns));
    rep.conj_shift = sup_diff(base, grid_eval(conj_shift, nt, ns));
    return rep;
}

}  // namespace filament::solver
