#include "filament/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "filament/errors.hpp"
#include "filament/transform.hpp"

namespace filament::evolve {

namespace {

struct GridWork {
    int kmax;
    int n;
    std::vector<cd> buf;

    explicit GridWork(int km, int oversample)
        : kmax(km), n(transform::next_fast_size(oversample * (2 * km + 1))),
          buf(n) {}

    // values of the field with coefficients hat on the collocation grid
    void to_grid(const std::vector<cd>& hat) {
        std::fill(buf.begin(), buf.end(), cd(0, 0));
        for (long k = -kmax; k <= kmax; ++k) {
            const long bin = (k % n + n) % n;
            buf[bin] += hat[k + kmax];
        }
        transform::backward_1d(buf, n);
    }

    // truncate grid values back to coefficients
    void to_hat(std::vector<cd>& hat) {
        transform::forward_1d(buf, n);
        for (long k = -kmax; k <= kmax; ++k) {
            const long bin = (k % n + n) % n;
            hat[k + kmax] = buf[bin];
        }
    }
};

double min_abs_on_grid(GridWork& work, const std::vector<cd>& w1_hat) {
    work.to_grid(w1_hat);
    double m = std::numeric_limits<double>::infinity();
    for (const cd& z : work.buf) m = std::min(m, std::abs(z));
    return m;
}

// nonlinear kick: w2 += -i h F(w1), F = |w1|^{-2} w1 = 1/conj(w1)
void kick(EvolutionState& s, double h, GridWork& work, double guard) {
    work.to_grid(s.w1_hat);
    double mn = std::numeric_limits<double>::infinity();
    for (cd& z : work.buf) {
        const double az = std::abs(z);
        mn = std::min(mn, az);
        z = 1.0 / std::conj(z);
    }
    if (mn < guard)
        throw CollisionDetected("min |w1| = " + std::to_string(mn) +
                                " fell below the collision guard " +
                                std::to_string(guard));
    std::vector<cd> fhat(s.w1_hat.size());
    work.to_hat(fhat);
    for (long k = -s.kmax; k <= s.kmax; ++k)
        s.set_w2(k, s.w2(k) + cd(0, -h) * fhat[k + s.kmax]);
}

// exact linear flow: d_t (w1,w2) = -i k^2 (w2,w1)
void drift(EvolutionState& s, double h) {
    for (long k = -s.kmax; k <= s.kmax; ++k) {
        const double k2 = static_cast<double>(k) * k;
        const double c = std::cos(k2 * h);
        const cd is = cd(0, -std::sin(k2 * h));
        const cd a = s.w1(k), b = s.w2(k);
        s.set_w1(k, c * a + is * b);
        s.set_w2(k, is * a + c * b);
    }
}

// one implicit midpoint step: (I - h/2 A) Y = state + h/2 N(Y), nonlinearity
// iterated, linear 2x2 solved exactly per mode; then state <- 2Y - state
void midpoint_step(EvolutionState& s, double h, GridWork& work, double guard,
                   const EvolveConfig& cfg) {
    EvolutionState y = s;
    std::vector<cd> fhat(s.w1_hat.size(), cd(0, 0));
    double change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.midpoint_max_iter && change > cfg.midpoint_tol; ++it) {
        work.to_grid(y.w1_hat);
        double mn = std::numeric_limits<double>::infinity();
        for (cd& z : work.buf) {
            mn = std::min(mn, std::abs(z));
            z = 1.0 / std::conj(z);
        }
        if (mn < guard)
            throw CollisionDetected("min |w1| fell below the collision guard");
        work.to_hat(fhat);
        change = 0.0;
        for (long k = -s.kmax; k <= s.kmax; ++k) {
            // rhs = state + h/2 (0, -i F); solve (I + i (h/2) k^2 sigma_x) Y = rhs
            const cd r1 = s.w1(k);
            const cd r2 = s.w2(k) + cd(0, -0.5 * h) * fhat[k + s.kmax];
            const double c = 0.5 * h * static_cast<double>(k) * k;
            const double det = 1.0 + c * c;
            const cd y1 = (r1 - cd(0, c) * r2) / det;
            const cd y2 = (r2 - cd(0, c) * r1) / det;
            change = std::max(change, std::abs(y1 - y.w1(k)));
            change = std::max(change, std::abs(y2 - y.w2(k)));
            y.set_w1(k, y1);
            y.set_w2(k, y2);
        }
    }
    if (change > cfg.midpoint_tol)
        throw StepRejected("implicit midpoint iteration stalled at t = " +
                           std::to_string(s.t));
    for (long k = -s.kmax; k <= s.kmax; ++k) {
        s.set_w1(k, 2.0 * y.w1(k) - s.w1(k));
        s.set_w2(k, 2.0 * y.w2(k) - s.w2(k));
    }
}

DiagnosticsRow diagnostics(const EvolutionState& s, GridWork& work) {
    DiagnosticsRow row;
    row.t = s.t;
    row.mean_w1 = s.w1(0);
    row.mean_w2 = s.w2(0);
    row.min_abs_w1 = min_abs_on_grid(work, s.w1_hat);
    for (long k = -s.kmax; k <= s.kmax; ++k)
        if (2 * std::abs(k) >= s.kmax) row.tail_energy += std::norm(s.w1(k));
    row.energy = hamiltonian(s);
    return row;
}

}  // namespace

EvolutionState straight_state(double a, int kmax) {
    EvolutionState s(kmax);
    s.set_w1(0, cd(a, 0.0));
    return s;
}

EvolutionState init_from_assembled(const solver::AssembledSolution& sol, int kmax) {
    EvolutionState s(kmax);
    const int jm = sol.u.jmax(), km = sol.u.kmax();
    for (long k = -std::min<long>(kmax, km); k <= std::min<long>(kmax, km); ++k) {
        cd z1(0, 0), z2(0, 0);
        for (long j = -jm; j <= jm; ++j) {
            z1 += sol.u.at(0, j, k) + cd(0, 1) * sol.u.at(1, j, k);
            z2 += sol.w2_periodic.at(j, k);
        }
        s.set_w1(k, z1);
        s.set_w2(k, z2);
    }
    s.set_w1(0, s.w1(0) + sol.a);
    GridWork work(kmax, 2);
    const double mn = min_abs_on_grid(work, s.w1_hat);
    if (mn < 0.1 * sol.site.a0())
        throw CollisionDetected("assembled state starts below the collision guard");
    return s;
}

EvolutionState init_from_travel(const travel::TravelProfile& p, int kmax) {
    EvolutionState s(kmax);
    s.set_w1(0, cd(p.a, 0.0));
    for (long k = 1; k <= std::min<long>(kmax, p.modes); ++k) {
        const cd vk = p.coeff(k);
        s.set_w1(k, vk);
        s.set_w1(-k, p.coeff(-k));
        // d_s^2 w2 = -i d_t w1 = -i nu V'(s) at t = 0
        s.set_w2(k, -p.nu * vk / static_cast<double>(k));
        s.set_w2(-k, p.nu * p.coeff(-k) / static_cast<double>(k));
    }
    return s;
}

IntegrateResult integrate(const EvolutionState& start, double T,
                          const EvolveConfig& cfg) {
    if (T == 0.0) return {start, {}};
    EvolveConfig c = cfg;
    if (c.dt <= 0.0) c.dt = std::abs(T) / 4096.0;
    const long steps = std::max<long>(1, std::llround(std::abs(T) / c.dt));
    const double h = T / static_cast<double>(steps);

    IntegrateResult out;
    out.state = start;
    EvolutionState& s = out.state;
    GridWork work(s.kmax, c.oversample);

    double guard = c.collision_guard;
    if (guard <= 0.0) guard = 0.1 * std::abs(s.w1(0));

    out.series.push_back(diagnostics(s, work));
    for (long step = 0; step < steps; ++step) {
        if (c.scheme == Scheme::exponential) {
            kick(s, 0.5 * h, work, guard);
            drift(s, h);
            kick(s, 0.5 * h, work, guard);
        } else {
            midpoint_step(s, h, work, guard, c);
        }
        s.t += h;
        if ((step + 1) % c.diag_every == 0 || step + 1 == steps)
            out.series.push_back(diagnostics(s, work));
    }
    return out;
}

double reversibility_check(const EvolutionState& start, double T,
                           const EvolveConfig& cfg) {
    IntegrateResult fwd = integrate(start, T, cfg);
    IntegrateResult back = integrate(fwd.state, -T, cfg);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < start.w1_hat.size(); ++i) {
        num += std::norm(back.state.w1_hat[i] - start.w1_hat[i]);
        num += std::norm(back.state.w2_hat[i] - start.w2_hat[i]);
        den += std::norm(start.w1_hat[i]) + std::norm(start.w2_hat[i]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

double hamiltonian(const EvolutionState& s, int oversample) {
    double quad = 0.0;
    for (long k = -s.kmax; k <= s.kmax; ++k) {
        const double k2 = static_cast<double>(k) * k;
        quad += 0.5 * k2 * (std::norm(s.w1(k)) + std::norm(s.w2(k)));
    }
    GridWork work(s.kmax, oversample);
    work.to_grid(s.w1_hat);
    double pot = 0.0;
    for (const cd& z : work.buf) pot += std::log(std::abs(z));
    pot /= static_cast<double>(work.n);
    return quad + pot;
}

double min_abs_w1(const EvolutionState& s, int oversample) {
    GridWork work(s.kmax, oversample);
    return min_abs_on_grid(work, s.w1_hat);
}

double w1_return_error(const EvolutionState& s0, const EvolutionState& s1) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < s0.w1_hat.size(); ++i) {
        num += std::norm(s1.w1_hat[i] - s0.w1_hat[i]);
        den += std::norm(s0.w1_hat[i]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace filament::evolve
