#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "filament/errors.hpp"
#include "filament/field.hpp"

using namespace filament;
using namespace filament::field;

namespace {

FourierField random_real_field(int jmax, int kmax, uint32_t seed, double scale) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    FourierField u(jmax, kmax);
    for (int l = 0; l < 2; ++l)
        for (long j = 0; j <= jmax; ++j)
            for (long k = -kmax; k <= kmax; ++k) {
                if (j == 0 && k < 0) continue;
                cd v(dist(rng), dist(rng));
                if (j == 0 && k == 0) v = cd(dist(rng), 0.0);
                u.set_pair(l, j, k, v);
            }
    return u;
}

// direct convolution of the complexified coefficients, truncated to the box
FourierField conv_oracle(const FourierField& u, const FourierField& v) {
    const int J = u.jmax(), K = u.kmax();
    auto zu = [&](long j, long k) { return u.at(0, j, k) + cd(0, 1) * u.at(1, j, k); };
    auto zv = [&](long j, long k) { return v.at(0, j, k) + cd(0, 1) * v.at(1, j, k); };
    FourierField out(J, K);
    for (long j = -J; j <= J; ++j)
        for (long k = -K; k <= K; ++k) {
            cd acc(0, 0);
            for (long j1 = std::max<long>(-J, j - J); j1 <= std::min<long>(J, j + J); ++j1)
                for (long k1 = std::max<long>(-K, k - K); k1 <= std::min<long>(K, k + K); ++k1)
                    acc += zu(j1, k1) * zv(j - j1, k - k1);
            out.set(0, j, k, acc);
        }
    // split the complex result into the two real components
    FourierField split(J, K);
    for (long j = -J; j <= J; ++j)
        for (long k = -K; k <= K; ++k) {
            const cd a = out.at(0, j, k);
            const cd b = out.at(0, -j, -k);
            split.set(0, j, k, 0.5 * (a + std::conj(b)));
            split.set(1, j, k, cd(0, -0.5) * (a - std::conj(b)));
        }
    return split;
}

double max_coeff_diff(const FourierField& a, const FourierField& b) {
    double m = 0.0;
    for (int l = 0; l < 2; ++l)
        for (long j = -a.jmax(); j <= a.jmax(); ++j)
            for (long k = -a.kmax(); k <= a.kmax(); ++k)
                m = std::max(m, std::abs(a.at(l, j, k) - b.at(l, j, k)));
    return m;
}

bool reality_holds(const FourierField& u) {
    for (int l = 0; l < 2; ++l)
        for (long j = -u.jmax(); j <= u.jmax(); ++j)
            for (long k = -u.kmax(); k <= u.kmax(); ++k)
                if (std::abs(u.at(l, j, k) - std::conj(u.at(l, -j, -k))) > 1e-14)
                    return false;
    return true;
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

FourierField cos_t_cos_s_mode(int jmax, int kmax, int l, double amp) {
    FourierField u(jmax, kmax);
    u.set_pair(l, 1, 1, cd(amp / 4, 0));
    u.set_pair(l, 1, -1, cd(amp / 4, 0));
    return u;
}

}  // namespace

TEST_CASE("sobolev norm examples") {
    FourierField u = cos_t_cos_s_mode(4, 4, 0, 1.0);
    CHECK(sobolev_norm(u, 0.0) * sobolev_norm(u, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(sobolev_norm(u, 2.0) * sobolev_norm(u, 2.0) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(sobolev_norm(FourierField(4, 4), 6.0) == 0.0);
}

TEST_CASE("multiply: double angle identity") {
    FourierField u(4, 4);
    u.set_pair(0, 1, 0, cd(0.5, 0));  // cos t
    FourierField p = multiply(u, u);
    CHECK(p.at(0, 0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.at(0, 2, 0).real() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::abs(p.at(0, 1, 0)) < 1e-15);
    CHECK(std::abs(p.at(1, 2, 0)) < 1e-15);
}

TEST_CASE("multiply: zero and truncation mismatch") {
    FourierField u = random_real_field(4, 4, 11, 0.3);
    FourierField z(4, 4);
    CHECK(sobolev_norm(multiply(u, z), 0.0) == 0.0);
    FourierField other(5, 4);
    CHECK_THROWS_AS(multiply(u, other), std::invalid_argument);
}

TEST_CASE("multiply matches the convolution oracle") {
    for (uint32_t seed : {1u, 2u, 3u}) {
        FourierField u = random_real_field(8, 8, seed, 0.2);
        FourierField v = random_real_field(8, 8, seed + 100, 0.2);
        CHECK(max_coeff_diff(multiply(u, v), conv_oracle(u, v)) < 1e-13);
        CHECK(reality_holds(multiply(u, v)));
    }
}

TEST_CASE("banach algebra ratio on random fields") {
    double worst = 0.0;
    for (uint32_t seed : {5u, 6u, 7u, 8u}) {
        FourierField u = random_real_field(8, 8, seed, 0.1);
        FourierField v = random_real_field(8, 8, seed + 50, 0.1);
        const double ratio = sobolev_norm(multiply(u, v), 6.0) /
                             (sobolev_norm(u, 6.0) * sobolev_norm(v, 6.0));
        worst = std::max(worst, ratio);
    }
    INFO("measured algebra constant on random fields: ", worst);
    CHECK(worst < 2.0);
}

TEST_CASE("eval_nonlinearity closed forms") {
    SUBCASE("real constant") {
        FourierField u(4, 4);
        u.set(0, 0, 0, cd(0.1, 0));
        FourierField g = eval_nonlinearity(u, 1.0);
        CHECK(g.at(0, 0, 0).real() == doctest::Approx(0.01 / 0.9).epsilon(1e-13));
        CHECK(std::abs(g.at(1, 0, 0)) < 1e-15);
    }
    SUBCASE("imaginary constant against the complex oracle") {
        const double c = 0.1, a2inv = 1.0;
        FourierField u(4, 4);
        u.set(1, 0, 0, cd(c, 0));
        FourierField g = eval_nonlinearity(u, a2inv);
        // oracle: ubar = -ic, g = a2inv ubar^2/(1-ubar)
        const cd ubar(0, -c);
        const cd expect = a2inv * ubar * ubar / (1.0 - ubar);
        CHECK(g.at(0, 0, 0).real() == doctest::Approx(expect.real()).epsilon(1e-13));
        CHECK(g.at(1, 0, 0).real() == doctest::Approx(expect.imag()).epsilon(1e-13));
        // hand-expanded: (-c^2/(1+c^2), +c^3/(1+c^2))
        CHECK(expect.real() == doctest::Approx(-c * c / (1 + c * c)).epsilon(1e-14));
        CHECK(expect.imag() == doctest::Approx(c * c * c / (1 + c * c)).epsilon(1e-14));
    }
    SUBCASE("guard") {
        FourierField u(4, 4);
        u.set(0, 0, 0, cd(0.95, 0));
        CHECK_THROWS_AS(eval_nonlinearity(u, 1.0), AmplitudeTooLarge);
    }
}

TEST_CASE("eval_nonlinearity series consistency") {
    std::vector<std::pair<double, double>> pts;
    for (double b : {0.02, 0.04, 0.08}) {
        FourierField u = cos_t_cos_s_mode(8, 8, 0, b);
        FourierField g = eval_nonlinearity(u, 1.0);
        FourierField u2 = multiply(u, u);
        FourierField u3 = multiply(u2, u);
        const double err = sobolev_norm(g - (u2 + u3), 6.0);
        pts.emplace_back(b, err);
    }
    CHECK(fit_slope(pts) > 3.5);  // remainder is O(|u|^4)
}

TEST_CASE("eval_nonlinearity quadratic smallness") {
    std::vector<std::pair<double, double>> pts;
    for (double b : {0.02, 0.04, 0.08, 0.16}) {
        FourierField u = cos_t_cos_s_mode(8, 8, 0, b);
        pts.emplace_back(sobolev_norm(u, 6.0), sobolev_norm(eval_nonlinearity(u, 1.0), 6.0));
    }
    const double slope = fit_slope(pts);
    CHECK(slope > 1.9);
    CHECK(slope < 2.3);
}

TEST_CASE("diff ops") {
    FourierField u(4, 4);
    u.set_pair(0, 0, 1, cd(0.5, 0));  // cos s
    FourierField d = diff_op(u, DiffOp::ds2);
    CHECK(d.at(0, 0, 1).real() == doctest::Approx(-0.5));

    FourierField v(4, 4);
    v.set_pair(0, 0, 2, cd(0.5, 0));  // cos 2s
    CHECK(diff_op(v, DiffOp::ds4).at(0, 0, 2).real() == doctest::Approx(8.0));

    FourierField w(4, 4);
    w.set_pair(0, 3, 0, cd(0, -0.5));  // sin 3t
    FourierField dw = diff_op(w, DiffOp::dt2);
    CHECK(dw.at(0, 3, 0).imag() == doctest::Approx(4.5));  // -9 * (-1/2)
}

TEST_CASE("project_symmetry standing") {
    const SymmetryClass cls{SymmetryKind::standing, 1, 0, 1};
    SUBCASE("fixed mode is unchanged") {
        FourierField u = cos_t_cos_s_mode(4, 4, 0, 1.0);
        CHECK(max_coeff_diff(project_symmetry(u, cls), u) < 1e-15);
    }
    SUBCASE("odd-in-t mode is annihilated") {
        FourierField u(4, 4);
        u.set_pair(0, 1, 1, cd(0, -0.25));  // sin t cos s
        u.set_pair(0, 1, -1, cd(0, -0.25));
        CHECK(sobolev_norm(project_symmetry(u, cls), 0.0) < 1e-15);
    }
    SUBCASE("idempotent and norm non-increasing on random fields") {
        for (uint32_t seed : {21u, 22u}) {
            FourierField u = random_real_field(6, 6, seed, 0.5);
            FourierField p1 = project_symmetry(u, cls);
            FourierField p2 = project_symmetry(p1, cls);
            CHECK(max_coeff_diff(p1, p2) < 1e-14);
            CHECK(sobolev_norm(p1, 4.0) <= sobolev_norm(u, 4.0) * (1 + 1e-14));
            CHECK(reality_holds(p1));
        }
    }
    SUBCASE("l0 = 1 component masks") {
        const SymmetryClass cls1{SymmetryKind::standing, 1, 1, 1};
        FourierField u = random_real_field(6, 6, 33, 0.5);
        FourierField p = project_symmetry(u, cls1);
        for (long j = -6; j <= 6; ++j)
            for (long k = -6; k <= 6; ++k) {
                if (j % 2 != 0) CHECK(std::abs(p.at(0, j, k)) == 0.0);
                if (j % 2 == 0) CHECK(std::abs(p.at(1, j, k)) == 0.0);
                if ((j + k) % 2 != 0) {
                    CHECK(std::abs(p.at(0, j, k)) == 0.0);
                    CHECK(std::abs(p.at(1, j, k)) == 0.0);
                }
            }
    }
}

TEST_CASE("project_symmetry standing commutes with ds2 and the nonlinearity") {
    const SymmetryClass cls{SymmetryKind::standing, 1, 0, 1};
    FourierField u = random_real_field(6, 6, 44, 0.01);
    // commutes with the diagonal multiplier
    CHECK(max_coeff_diff(project_symmetry(diff_op(u, DiffOp::ds2), cls),
                         diff_op(project_symmetry(u, cls), DiffOp::ds2)) < 1e-13);
    // g maps Fix(S) into Fix(S): projecting after g changes nothing
    FourierField pu = project_symmetry(u, cls);
    FourierField g = eval_nonlinearity(pu, 1.0);
    CHECK(max_coeff_diff(g, project_symmetry(g, cls)) < 1e-12);
}

TEST_CASE("project_symmetry traveling") {
    const SymmetryClass cls{SymmetryKind::traveling, 1, 0, 1};  // branch in y
    FourierField u = random_real_field(6, 6, 55, 0.5);
    FourierField p = project_symmetry(u, cls);
    for (long j = -6; j <= 6; ++j)
        for (long k = -6; k <= 6; ++k) {
            if (k != j) {
                CHECK(std::abs(p.at(0, j, k)) == 0.0);
                CHECK(std::abs(p.at(1, j, k)) == 0.0);
            }
        }
    // diagonal, x on even modes, y on odd modes for l0 = 0
    for (long j = -6; j <= 6; ++j) {
        if (j % 2 != 0) CHECK(std::abs(p.at(0, j, j)) == 0.0);
        else CHECK(std::abs(p.at(1, j, j)) == 0.0);
    }
    FourierField p2 = project_symmetry(p, cls);
    CHECK(max_coeff_diff(p, p2) < 1e-14);
}

TEST_CASE("reality is preserved by the grid round trip") {
    FourierField u = random_real_field(8, 8, 66, 0.4);
    auto [nt, ns] = grid_sizes(8, 8, 2);
    FourierField back = from_complex_grid(to_complex_grid(u, nt, ns), nt, ns, 8, 8);
    CHECK(max_coeff_diff(u, back) < 1e-14);
    CHECK(reality_holds(back));
}
