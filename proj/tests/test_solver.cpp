#include <doctest.h>

#include <cmath>
#include <numbers>

#include "filament/errors.hpp"
#include "filament/solver.hpp"

using namespace filament;
using namespace filament::solver;
using filament::field::cd;
using filament::field::FourierField;

namespace {

lattice::BifurcationSite instance_a(int jmax = 64, int kmax = 32) {
    return lattice::make_bifurcation_site(lattice::RationalFrequency(1, 2), 1, 1, 0,
                                          {jmax, kmax});
}

lattice::BifurcationSite instance_c(int jmax = 64, int kmax = 32) {
    return lattice::make_bifurcation_site(lattice::RationalFrequency(3, 2), 1, 1, 1,
                                          {jmax, kmax});
}

SolverConfig small_cfg() {
    SolverConfig cfg;
    cfg.jmax = 32;
    cfg.kmax = 32;
    return cfg;
}

double fit_slope(const std::vector<std::pair<double, double>>& xy) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        sx += std::log(x);
        sy += std::log(y);
        sxx += std::log(x) * std::log(x);
        sxy += std::log(x) * std::log(y);
    }
    const double n = static_cast<double>(xy.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("apply_L examples at instance A") {
    const auto site = instance_a();
    const auto freq = site.freq;

    FourierField kern = kernel_mode(site, 1.0, 8, 8);
    FourierField lk = apply_L(kern, freq, site.a2inv);
    CHECK(field::sobolev_norm(lk, 0.0) == 0.0);  // exact kernel mode

    FourierField u(8, 8);  // cos 3t cos s e0
    u.set_pair(0, 3, 1, cd(0.25, 0));
    u.set_pair(0, 3, -1, cd(0.25, 0));
    FourierField lu = apply_L(u, freq, site.a2inv);
    CHECK(lu.at(0, 3, 1).real() == doctest::Approx(2.0 * 0.25).epsilon(1e-14));

    FourierField v(8, 8);  // cos s e0, j = 0
    v.set_pair(0, 0, 1, cd(0.5, 0));
    FourierField lv = apply_L(v, freq, site.a2inv);
    CHECK(lv.at(0, 0, 1).real() == doctest::Approx(-0.25 * 0.5).epsilon(1e-14));
}

TEST_CASE("apply_inverse_PLP_ds2") {
    const auto site = instance_a();
    const auto kernel = lattice::kernel_set(site.freq, site.a2inv, {8, 8});

    SUBCASE("multiplier example on cos s") {
        FourierField v(8, 8);
        v.set_pair(0, 0, 1, cd(0.5, 0));
        FourierField out = apply_inverse_PLP_ds2(v, site.freq, site.a2inv, kernel);
        CHECK(out.at(0, 0, 1).real() == doctest::Approx(4.0 * 0.5).epsilon(1e-13));
    }
    SUBCASE("kernel mode is projected out") {
        FourierField kern = kernel_mode(site, 1.0, 8, 8);
        FourierField out = apply_inverse_PLP_ds2(kern, site.freq, site.a2inv, kernel);
        CHECK(field::sobolev_norm(out, 0.0) == 0.0);
    }
    SUBCASE("L composed with the inverse is ds2 on the range") {
        FourierField u(8, 8);
        // P-supported standing-type field with a few modes
        u.set_pair(0, 2, 2, cd(0.3, 0));
        u.set_pair(0, 2, -2, cd(0.3, 0));
        u.set_pair(0, 0, 2, cd(-0.1, 0));
        u.set_pair(1, 3, 1, cd(0.2, 0));
        u.set_pair(1, 3, -1, cd(0.2, 0));
        FourierField inv = apply_inverse_PLP_ds2(u, site.freq, site.a2inv, kernel);
        FourierField linv = apply_L(inv, site.freq, site.a2inv);
        FourierField want = field::diff_op(u, field::DiffOp::ds2);
        CHECK(field::sobolev_norm(linv - want, 0.0) < 1e-13);
    }
    SUBCASE("undeclared zero eigenvalue is an error") {
        FourierField u(8, 8);
        u.set(0, 1, 1, cd(1, 0));
        CHECK_THROWS_AS(apply_inverse_PLP_ds2(u, site.freq, site.a2inv, {}), SingularSite);
    }
}

TEST_CASE("solve_range") {
    const auto site = instance_a();
    const auto cfg = small_cfg();
    const double a0 = site.a0();

    SUBCASE("trivial at b = 0") {
        auto rs = solve_range(0.0, a0, site, cfg);
        CHECK(rs.iterations == 1);
        CHECK(field::sobolev_norm(rs.w, cfg.sobolev_s) == 0.0);
        CHECK(rs.range_residual == 0.0);
    }
    SUBCASE("quadratic scaling of the range part") {
        std::vector<std::pair<double, double>> pts;
        for (double b : {0.0125, 0.025, 0.05, 0.1}) {
            auto rs = solve_range(b, a0, site, cfg);
            pts.emplace_back(b, field::sobolev_norm(rs.w, cfg.sobolev_s));
        }
        const double slope = fit_slope(pts);
        CHECK(slope > 1.9);
        CHECK(slope < 2.1);
    }
    SUBCASE("residual at tolerance") {
        auto rs = solve_range(0.05, a0, site, cfg);
        CHECK(rs.range_residual < 1e-10);
        // w is in the range complement: kernel coefficients vanish
        CHECK(std::abs(rs.w.at(0, 1, 1)) == 0.0);
        CHECK(std::abs(rs.w.at(0, 0, 0)) == 0.0);
    }
}

TEST_CASE("bifurcation_value structure") {
    const auto site = instance_a();
    const auto cfg = small_cfg();
    const double a0 = site.a0();

    SUBCASE("B(0, a) = 0") {
        CHECK(bifurcation_value(0.0, a0 * 1.02, site, cfg) == 0.0);
    }
    SUBCASE("odd in b") {
        const double bp = bifurcation_value(0.05, a0, site, cfg);
        const double bm = bifurcation_value(-0.05, a0, site, cfg);
        CHECK(bp == doctest::Approx(-bm).epsilon(1e-10));
        CHECK(std::abs(bp) > 1e-9);  // cubic term is visible
    }
    SUBCASE("transversality slope in a") {
        const double b = 0.02, h = 1e-5;
        const double d = (bifurcation_value(b, a0 + h, site, cfg) -
                          bifurcation_value(b, a0 - h, site, cfg)) /
                         (2 * h);
        const double expect = -2.0 / (a0 * a0 * a0) * b;  // l0 = 0, k0 = 1
        CHECK(d == doctest::Approx(expect).epsilon(0.01));
    }
}

TEST_CASE("solve_branch_point") {
    const auto site = instance_a();
    const auto cfg = small_cfg();
    const double a0 = site.a0();

    SUBCASE("b = 0 lands on the trivial solution") {
        auto pt = solve_branch_point(0.0, a0 * 1.05, site, cfg);
        CHECK(pt.a == a0);
        CHECK(field::sobolev_norm(pt.w, 0.0) == 0.0);
    }
    SUBCASE("kernel normalization lock and leading-order shape") {
        const double b = 0.025;
        auto pt = solve_branch_point(b, a0, site, cfg);
        CHECK(pt.u().at(0, 1, 1).real() == doctest::Approx(b / 4).epsilon(1e-12));
        FourierField lead = kernel_mode(site, b, cfg.jmax, cfg.kmax);
        // deviation from the kernel mode, relative to the mode's own norm
        const double unit = field::sobolev_norm(kernel_mode(site, 1.0, cfg.jmax, cfg.kmax),
                                                cfg.sobolev_s);
        CHECK(field::sobolev_norm(pt.u() - lead, cfg.sobolev_s) / unit <= 0.05 * b);
        CHECK(field::max_abs(pt.u() - lead) <= 0.05 * b);  // sup-norm form
        CHECK(std::abs(pt.a - a0) < 0.01);
        CHECK(pt.full_residual < 1e-9);
    }
    SUBCASE("negative b maps through the oddness symmetry") {
        auto pp = solve_branch_point(0.05, a0, site, cfg);
        auto pm = solve_branch_point(-0.05, a0, site, cfg);
        CHECK(pm.b == -0.05);
        CHECK(pm.a == doctest::Approx(pp.a).epsilon(1e-12));
        CHECK(pm.u().at(0, 1, 1).real() == doctest::Approx(-0.05 / 4).epsilon(1e-12));
    }
}

TEST_CASE("continue_branch") {
    const auto site = instance_a();
    const auto cfg = small_cfg();

    SUBCASE("trivial grid") {
        auto br = continue_branch(site, {0.0}, cfg);
        CHECK(br.points.size() == 1);
        CHECK(!br.truncated);
    }
    SUBCASE("instance A sweep with quadratic fits") {
        auto br = continue_branch(site, {0.0, 0.0125, 0.025, 0.05, 0.1}, cfg);
        REQUIRE(br.points.size() == 5);
        CHECK(!br.truncated);
        for (size_t i = 1; i < br.points.size(); ++i) {
            CHECK(br.points[i].b > br.points[i - 1].b);
            CHECK(br.points[i].range_residual < 1e-10);
        }
        CHECK(br.w_scaling_exponent == doctest::Approx(2.0).epsilon(0.05));
        CHECK(br.a_scaling_exponent == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("bad grids are rejected") {
        CHECK_THROWS_AS(continue_branch(site, {0.1, 0.2}, cfg), std::invalid_argument);
        CHECK_THROWS_AS(continue_branch(site, {0.0, 0.2, 0.1}, cfg), std::invalid_argument);
    }
}

TEST_CASE("bifurcation value is unchanged without the symmetry reduction") {
    // re-run the fixed point with the public exact-arithmetic inverse and no
    // projection onto Fix(S); the reduced and full-space B must agree
    const auto site = instance_a();
    SolverConfig cfg = small_cfg();
    cfg.jmax = cfg.kmax = 16;
    const double b = 0.05, a = site.a0();
    const auto kernel = lattice::kernel_set(site.freq, site.a2inv,
                                            {cfg.jmax, cfg.kmax});

    auto nonlin = [&](const FourierField& u) {
        FourierField g = field::eval_nonlinearity((-1.0 / a) * u, 1.0 / (a * a));
        return a * std::move(g);
    };
    FourierField v = kernel_mode(site, b, cfg.jmax, cfg.kmax);
    FourierField w(cfg.jmax, cfg.kmax);
    for (int it = 0; it < 40; ++it)
        w = -1.0 * apply_inverse_PLP_ds2(nonlin(v + w), site.freq, site.a2inv, kernel);
    FourierField m = nonlin(v + w);
    const double k2 = 1.0;
    const double b_full = 4.0 * (-k2) * m.at(0, 1, 1).real();  // lambda(a0) = 0
    const double b_reduced = bifurcation_value(b, a, site, cfg);
    CHECK(std::abs(b_full - b_reduced) < 1e-12);
}

TEST_CASE("solver error paths") {
    const auto site = instance_a();
    const auto cfg = small_cfg();
    const double a0 = site.a0();

    SUBCASE("amplitude outside the contraction regime") {
        // sup|v|/a crosses the analyticity guard before the iteration starts
        CHECK_THROWS_AS(solve_range(1.2, a0, site, cfg), filament::NumericalError);
    }
    SUBCASE("root confined to a too-narrow bracket") {
        SolverConfig tight = cfg;
        tight.secant_bracket = 1e-9;  // a(b) - a0 = O(b^2) exceeds this at b = 0.1
        CHECK_THROWS_AS(solve_branch_point(0.1, a0, site, tight), RootNotFound);
    }
    SUBCASE("collision guard on assembly") {
        BranchPoint pt;
        pt.site = site;
        pt.b = 2.5;
        pt.a = a0;
        pt.v = kernel_mode(site, 2.5, 8, 8);  // w1 dips through zero
        pt.w = FourierField(8, 8);
        CHECK_THROWS_AS(assemble_solution(pt, cfg), CollisionDetected);
    }
    SUBCASE("config validation") {
        SolverConfig bad = cfg;
        bad.sobolev_s = 2.0;
        CHECK_THROWS_AS(solve_range(0.01, a0, site, bad), std::invalid_argument);
        bad = cfg;
        bad.oversample = 1;
        CHECK_THROWS_AS(solve_range(0.01, a0, site, bad), std::invalid_argument);
    }
    SUBCASE("resonant amplitude is refused") {
        const auto res_site = lattice::make_bifurcation_site(
            lattice::RationalFrequency(2, 1), 1, 1, 1, {64, 32});
        CHECK(!res_site.nonresonant);
        CHECK_THROWS_AS(solve_range(0.01, res_site.a0(), res_site, cfg),
                        filament::ResonantAmplitude);
    }
    SUBCASE("branch truncates instead of throwing") {
        auto br = continue_branch(site, {0.0, 0.05, 1.4}, cfg);
        CHECK(br.truncated);
        CHECK(!br.message.empty());
        CHECK(br.points.back().b >= 0.05);
    }
}

TEST_CASE("branch point is insensitive to the truncation") {
    const auto site = instance_a();
    SolverConfig c32 = small_cfg();
    SolverConfig c64 = small_cfg();
    c64.jmax = c64.kmax = 64;
    auto p32 = solve_branch_point(0.05, site.a0(), site, c32);
    auto p64 = solve_branch_point(0.05, site.a0(), site, c64);
    CHECK(std::abs(p32.a - p64.a) < 1e-12);
    double sup = 0.0;
    FourierField u32 = p32.u(), u64 = p64.u();
    for (int l = 0; l < 2; ++l)
        for (long j = -32; j <= 32; ++j)
            for (long k = -32; k <= 32; ++k)
                sup = std::max(sup, std::abs(u32.at(l, j, k) - u64.at(l, j, k)));
    CHECK(sup < 1e-12);  // spectral content beyond the smaller box is negligible
}

TEST_CASE("assemble_solution") {
    const auto site = instance_a();
    const auto cfg = small_cfg();
    const double a0 = site.a0();

    SUBCASE("straight pair at b = 0") {
        auto pt = solve_branch_point(0.0, a0, site, cfg);
        auto sol = assemble_solution(pt, cfg);
        CHECK(sol.drift.real() == doctest::Approx(0.0));
        CHECK(sol.drift.imag() == doctest::Approx(-1.0 / a0).epsilon(1e-13));
        CHECK(sol.min_abs_w1 == doctest::Approx(a0).epsilon(1e-13));
        CHECK(sol.symmetry.max() < 1e-13);
        auto norms = full_residual(sol, 128, 128);
        CHECK(norms.sup < 1e-14);
    }
    SUBCASE("instance A at b = 0.05") {
        auto pt = solve_branch_point(0.05, a0, site, cfg);
        auto sol = assemble_solution(pt, cfg);
        CHECK(sol.period == doctest::Approx(4 * std::numbers::pi));
        CHECK(sol.symmetry.max() < 1e-10);
        CHECK(sol.t_mean_consistency < 1e-10);

        // leading order: w1 - [a0 + b cos(t/2) cos s] = O(b^2) in sup norm
        const int n = 64;
        double dev = 0.0;
        SpectralGrid2D w1(sol.u.jmax(), sol.u.kmax());
        for (long j = -w1.jmax; j <= w1.jmax; ++j)
            for (long k = -w1.kmax; k <= w1.kmax; ++k)
                w1.set(j, k, sol.u.at(0, j, k) + cd(0, 1) * sol.u.at(1, j, k));
        for (int it = 0; it < n; ++it)
            for (int is = 0; is < n; ++is) {
                const double tau = 2 * std::numbers::pi * it / n;
                const double s = 2 * std::numbers::pi * is / n;
                cd val(0, 0);
                for (long j = -w1.jmax; j <= w1.jmax; ++j)
                    for (long k = -w1.kmax; k <= w1.kmax; ++k)
                        val += w1.at(j, k) * std::polar(1.0, j * tau + k * s);
                const cd model = sol.a + 0.05 * std::cos(tau) * std::cos(s);
                dev = std::max(dev, std::abs(val + sol.a - model));
            }
        CHECK(dev < 2.5 * 0.05 * 0.05);  // O(b^2) with a modest constant

        auto norms = full_residual(sol, 256, 256);
        CHECK(norms.sup < 1e-8);
    }
    SUBCASE("figure-eight identities for instance C") {
        const auto c_site = instance_c();
        auto pt = solve_branch_point(0.04, c_site.a0(), c_site, cfg);
        auto sol = assemble_solution(pt, cfg);
        CHECK(sol.symmetry.conj_shift < 1e-10);
        // the branch really has a y component at leading order
        CHECK(std::abs(pt.u().at(1, 1, 1).real() - 0.04 / 4) < 1e-12);
        CHECK(field::sobolev_norm(pt.w, 0.0) > 1e-6);
        auto norms = full_residual(sol, 256, 256);
        CHECK(norms.sup < 1e-8);
    }
}
