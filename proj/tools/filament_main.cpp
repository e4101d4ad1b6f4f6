// filament — command line driver for the vortex-filament-pair wave toolkit.
//
// Subcommands:
//   spectrum    exact eigenvalue table, kernel set and gap report
//   amplitudes  candidate atlas of bifurcation amplitudes for fixed q
//   branch      standing-wave branch continuation with snapshots
//   evolve      time-domain integration of a state snapshot
//   travel      traveling-wave branch at fixed distance
//
// Exit codes: 0 success, 2 usage, 3 domain error, 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "filament/errors.hpp"
#include "filament/evolve.hpp"
#include "filament/io.hpp"
#include "filament/lattice.hpp"
#include "filament/solver.hpp"
#include "filament/travel.hpp"

namespace fs = std::filesystem;
using namespace filament;
using filament::field::cd;

namespace {

struct RunContext {
    io::RunManifest manifest;
    fs::path outdir;
    std::string digest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    RunContext(const std::string& command, int argc, char** argv,
               const std::string& out) {
        manifest.command = command;
        for (int i = 1; i < argc; ++i) manifest.args.emplace_back(argv[i]);
        outdir = out;
        fs::create_directories(outdir);
    }

    void seal_config() { digest = manifest.digest(); }

    std::string path(const std::string& name) const { return (outdir / name).string(); }

    void record_output(const std::string& p) {
        manifest.outputs[fs::path(p).filename().string()] = io::sha256_file(p);
    }

    void finish() {
        manifest.wall_clock_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        manifest.write(path("manifest.json"));
    }
};

lattice::Cutoff parse_cutoff(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("cutoff must be JxK, e.g. 64x32");
    return {std::stol(text.substr(0, x)), std::stol(text.substr(x + 1))};
}

std::vector<double> parse_b_grid(const std::string& grid, double bmax, int steps) {
    std::vector<double> out;
    if (!grid.empty()) {
        std::string token;
        std::istringstream ss(grid);
        while (std::getline(ss, token, ',')) out.push_back(std::stod(token));
    } else {
        for (int i = 0; i <= steps; ++i) out.push_back(bmax * i / steps);
    }
    if (out.empty() || out.front() != 0.0) out.insert(out.begin(), 0.0);
    return out;
}

std::string site_string(const lattice::LatticeSite& s) {
    return "(" + std::to_string(s.j) + "," + std::to_string(s.k) + "," +
           std::to_string(s.l) + ")";
}

nlohmann::ordered_json site_json(const lattice::LatticeSite& s) {
    return {s.j, s.k, s.l};
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
    long p = 1, q = 1, j0 = 1, k0 = 1;
    int l0 = 0;
    std::string a2inv_text;
    std::string cutoff_text = "64x32";
    std::string out = ".";
};

int cmd_spectrum(const SpectrumArgs& args, int argc, char** argv) {
    const lattice::RationalFrequency freq(args.p, args.q);
    const lattice::Cutoff cutoff = parse_cutoff(args.cutoff_text);

    RunContext ctx("spectrum", argc, argv, args.out);
    ctx.manifest.config["p"] = std::to_string(args.p);
    ctx.manifest.config["q"] = std::to_string(args.q);
    ctx.manifest.config["cutoff"] = args.cutoff_text;

    Rational a2inv;
    std::optional<lattice::BifurcationSite> site;
    if (!args.a2inv_text.empty()) {
        a2inv = parse_rational(args.a2inv_text);
        if (a2inv <= 0) throw std::invalid_argument("--a2inv must be positive");
        ctx.manifest.config["a2inv"] = to_string(a2inv);
    } else {
        site = lattice::make_bifurcation_site(freq, args.j0, args.k0, args.l0, cutoff);
        a2inv = site->a2inv;
        ctx.manifest.config["j0"] = std::to_string(args.j0);
        ctx.manifest.config["k0"] = std::to_string(args.k0);
        ctx.manifest.config["l0"] = std::to_string(args.l0);
    }
    ctx.seal_config();

    const auto kernel = lattice::kernel_set(freq, a2inv, cutoff);
    const auto gap = lattice::gap_report(freq, a2inv, kernel, cutoff);

    io::CsvWriter csv(ctx.digest, {"j", "k", "l", "lambda"});
    for (long j = 0; j <= cutoff.jmax; ++j)
        for (long k = 0; k <= cutoff.kmax; ++k) {
            if (j == 0 && k == 0) continue;
            for (int l = 0; l < 2; ++l)
                csv.row({std::to_string(j), std::to_string(k), std::to_string(l),
                         to_string(lattice::eigenvalue({j, k, l}, freq, a2inv))});
        }
    csv.write(ctx.path("eigenvalues.csv"));
    ctx.record_output(ctx.path("eigenvalues.csv"));

    nlohmann::ordered_json j;
    j["manifest_digest"] = ctx.digest;
    j["nu"] = std::to_string(args.p) + "/" + std::to_string(args.q);
    j["a2inv"] = to_string(a2inv);
    j["a0"] = 1.0 / std::sqrt(to_double(a2inv));
    nlohmann::ordered_json kj = nlohmann::ordered_json::array();
    for (const auto& s : kernel) kj.push_back(site_json(s));
    j["kernel"] = std::move(kj);
    if (site) {
        j["site"] = site_json({site->j0, site->k0, site->l0});
        j["nonresonant"] = site->nonresonant;
        j["witness"] = site->resonance_witness ? site_json(*site->resonance_witness)
                                               : nlohmann::ordered_json(nullptr);
        j["interval_condition"] = site->interval_condition;
        j["period_over_pi"] = to_string(site->period_over_pi());
        if (!site->nonresonant)
            std::cerr << "warning: amplitude is resonant within the cutoff, witness "
                      << site_string(*site->resonance_witness) << "\n";
    }
    j["gap"] = {{"min_abs_lambda", to_string(gap.min_abs_lambda)},
                {"argmin_site", site_json(gap.argmin_site)},
                {"min_ratio", to_string(gap.min_ratio)},
                {"argmin_ratio_site", site_json(gap.argmin_ratio_site)},
                {"denominator_bound", gap.denominator_bound.get_str()}};
    io::write_text_file(ctx.path("spectrum.json"), j.dump(2) + "\n");
    ctx.record_output(ctx.path("spectrum.json"));
    ctx.finish();
    return 0;
}

// -------------------------------------------------------------- amplitudes

struct AmplitudesArgs {
    long q = 2, kmax = 4, pmax = 16;
    std::string cutoff_text = "64x32";
    std::string out = ".";
};

int cmd_amplitudes(const AmplitudesArgs& args, int argc, char** argv) {
    const lattice::Cutoff cutoff = parse_cutoff(args.cutoff_text);
    RunContext ctx("amplitudes", argc, argv, args.out);
    ctx.manifest.config["q"] = std::to_string(args.q);
    ctx.manifest.config["kmax"] = std::to_string(args.kmax);
    ctx.manifest.config["pmax"] = std::to_string(args.pmax);
    ctx.manifest.config["cutoff"] = args.cutoff_text;
    ctx.seal_config();

    const auto list =
        lattice::enumerate_candidates(args.q, args.kmax, args.pmax, cutoff);

    io::CsvWriter csv(ctx.digest,
                      {"a2inv", "a0", "p", "q", "j0", "k0", "l0", "nonresonant",
                       "witness", "kernel_size", "period_over_pi", "period",
                       "interval_condition"});
    for (const auto& c : list) {
        csv.row({to_string(c.a2inv), io::fmt(c.a0()), std::to_string(c.freq.p),
                 std::to_string(c.freq.q), std::to_string(c.j0), std::to_string(c.k0),
                 std::to_string(c.l0), c.nonresonant ? "1" : "0",
                 c.resonance_witness ? site_string(*c.resonance_witness) : "",
                 std::to_string(c.kernel.size()), to_string(c.period_over_pi()),
                 io::fmt(std::numbers::pi * to_double(c.period_over_pi())),
                 c.interval_condition ? "1" : "0"});
    }
    csv.write(ctx.path("candidates.csv"));
    ctx.record_output(ctx.path("candidates.csv"));
    ctx.finish();
    return 0;
}

// ------------------------------------------------------------------ branch

struct BranchArgs {
    long p = 1, q = 2, j0 = 1, k0 = 1;
    int l0 = 0;
    std::string b_grid_text;
    double bmax = 0.1;
    int steps = 4;
    std::string cutoff_text = "64x32";
    solver::SolverConfig solver;
    bool snapshots = true;
    std::string out = ".";
};

int cmd_branch(const BranchArgs& args, int argc, char** argv) {
    const lattice::RationalFrequency freq(args.p, args.q);
    const lattice::Cutoff cutoff = parse_cutoff(args.cutoff_text);
    const auto site =
        lattice::make_bifurcation_site(freq, args.j0, args.k0, args.l0, cutoff);
    const auto b_grid = parse_b_grid(args.b_grid_text, args.bmax, args.steps);

    RunContext ctx("branch", argc, argv, args.out);
    ctx.manifest.config["p"] = std::to_string(args.p);
    ctx.manifest.config["q"] = std::to_string(args.q);
    ctx.manifest.config["k0"] = std::to_string(args.k0);
    ctx.manifest.config["l0"] = std::to_string(args.l0);
    ctx.manifest.config["jmax"] = std::to_string(args.solver.jmax);
    ctx.manifest.config["kmax"] = std::to_string(args.solver.kmax);
    ctx.manifest.config["tol"] = io::fmt(args.solver.tol);
    {
        std::string bs;
        for (double b : b_grid) bs += (bs.empty() ? "" : ",") + io::fmt(b);
        ctx.manifest.config["b_grid"] = bs;
    }
    ctx.seal_config();

    auto branch = solver::continue_branch(site, b_grid, args.solver);
    if (branch.truncated) std::cerr << "warning: " << branch.message << "\n";

    io::CsvWriter csv(ctx.digest, {"b", "a", "range_residual", "full_residual",
                                   "iterations", "w_norm_hs"});
    for (const auto& pt : branch.points)
        csv.row({io::fmt(pt.b), io::fmt(pt.a), io::fmt(pt.range_residual),
                 io::fmt(pt.full_residual), std::to_string(pt.iterations),
                 io::fmt(field::sobolev_norm(pt.w, args.solver.sobolev_s))});
    csv.write(ctx.path("branch.csv"));
    ctx.record_output(ctx.path("branch.csv"));

    nlohmann::ordered_json fit;
    fit["manifest_digest"] = ctx.digest;
    fit["site"] = {{"p", args.p},         {"q", args.q},
                   {"j0", args.j0},       {"k0", args.k0},
                   {"l0", args.l0},       {"a2inv", to_string(site.a2inv)},
                   {"a0", site.a0()},     {"nonresonant", site.nonresonant}};
    fit["w_scaling_exponent"] = branch.w_scaling_exponent;
    fit["a_scaling_exponent"] = branch.a_scaling_exponent;
    fit["truncated"] = branch.truncated;
    fit["message"] = branch.message;
    fit["points"] = branch.points.size();
    io::write_text_file(ctx.path("fit.json"), fit.dump(2) + "\n");
    ctx.record_output(ctx.path("fit.json"));

    if (args.snapshots) {
        for (size_t i = 0; i < branch.points.size(); ++i) {
            const auto& pt = branch.points[i];
            char name[64];
            std::snprintf(name, sizeof name, "u_%04zu.json", i);
            field::FourierField u = pt.u();
            io::save_field(ctx.path(name), u, ctx.digest);
            ctx.record_output(ctx.path(name));

            auto sol = solver::assemble_solution(pt, args.solver);
            std::snprintf(name, sizeof name, "state_%04zu.json", i);
            auto state = evolve::init_from_assembled(sol, args.solver.kmax);
            io::save_state(ctx.path(name), state, ctx.digest, sol.period);
            ctx.record_output(ctx.path(name));
        }
    }
    ctx.finish();
    return 0;
}

// ------------------------------------------------------------------ evolve

struct EvolveArgs {
    std::string state_path;
    double straight_a = 0.0;
    double cos_eps = 0.0;
    long cos_k = 1;
    int kmax = 64;
    double time = 0.0;
    double periods = 0.0;
    double dt = 0.0;
    std::string scheme = "exponential";
    int diag_every = 16;
    bool reversibility = false;
    std::string out = ".";
};

int cmd_evolve(const EvolveArgs& args, int argc, char** argv) {
    RunContext ctx("evolve", argc, argv, args.out);

    evolve::EvolutionState state;
    double period = 0.0;
    if (!args.state_path.empty()) {
        state = io::load_state(args.state_path);
        period = io::load_state_period(args.state_path);
        ctx.manifest.inputs[args.state_path] = io::sha256_file(args.state_path);
    } else if (args.straight_a > 0.0) {
        state = evolve::straight_state(args.straight_a, args.kmax);
        if (args.cos_eps != 0.0) {
            state.set_w1(args.cos_k, cd(args.straight_a * args.cos_eps / 2, 0));
            state.set_w1(-args.cos_k, cd(args.straight_a * args.cos_eps / 2, 0));
        }
    } else {
        throw std::invalid_argument("evolve needs --state or --straight-a");
    }

    double T = args.time;
    if (T <= 0.0) {
        if (args.periods <= 0.0 || period <= 0.0)
            throw std::invalid_argument(
                "evolve needs --time, or --periods with a snapshot that carries a period");
        T = args.periods * period;
    }

    evolve::EvolveConfig cfg;
    cfg.dt = (args.dt > 0.0) ? args.dt : T / 4096.0;
    cfg.diag_every = args.diag_every;
    if (args.scheme == "exponential") cfg.scheme = evolve::Scheme::exponential;
    else if (args.scheme == "implicit-midpoint") cfg.scheme = evolve::Scheme::midpoint;
    else throw std::invalid_argument("unknown scheme: " + args.scheme);

    ctx.manifest.config["time"] = io::fmt(T);
    ctx.manifest.config["dt"] = io::fmt(cfg.dt);
    ctx.manifest.config["scheme"] = args.scheme;
    ctx.seal_config();

    auto res = evolve::integrate(state, T, cfg);

    io::CsvWriter csv(ctx.digest, {"t", "re_mean_w1", "im_mean_w1", "re_mean_w2",
                                   "im_mean_w2", "min_abs_w1", "tail_energy",
                                   "energy"});
    for (const auto& row : res.series)
        csv.row({io::fmt(row.t), io::fmt(row.mean_w1.real()),
                 io::fmt(row.mean_w1.imag()), io::fmt(row.mean_w2.real()),
                 io::fmt(row.mean_w2.imag()), io::fmt(row.min_abs_w1),
                 io::fmt(row.tail_energy), io::fmt(row.energy)});
    csv.write(ctx.path("diagnostics.csv"));
    ctx.record_output(ctx.path("diagnostics.csv"));

    io::save_state(ctx.path("final_state.json"), res.state, ctx.digest, period);
    ctx.record_output(ctx.path("final_state.json"));

    nlohmann::ordered_json summary;
    summary["manifest_digest"] = ctx.digest;
    summary["time"] = T;
    summary["dt"] = cfg.dt;
    summary["scheme"] = args.scheme;
    summary["return_error_rel"] = evolve::w1_return_error(state, res.state);
    if (args.reversibility)
        summary["reversibility_error"] = evolve::reversibility_check(state, T, cfg);
    io::write_text_file(ctx.path("summary.json"), summary.dump(2) + "\n");
    ctx.record_output(ctx.path("summary.json"));
    ctx.finish();
    return 0;
}

// ------------------------------------------------------------------ travel

struct TravelArgs {
    double a = 2.0;
    int l = 0;
    std::string b_grid_text;
    double bmax = 0.1;
    int steps = 4;
    int modes = 32;
    std::string out = ".";
};

int cmd_travel(const TravelArgs& args, int argc, char** argv) {
    RunContext ctx("travel", argc, argv, args.out);
    ctx.manifest.config["a"] = io::fmt(args.a);
    ctx.manifest.config["l"] = std::to_string(args.l);
    ctx.manifest.config["modes"] = std::to_string(args.modes);
    ctx.seal_config();

    const double freq0 = travel::nu0(args.a, args.l);  // throws on degenerate input
    travel::TravelConfig cfg;
    cfg.modes = args.modes;
    const auto b_grid = parse_b_grid(args.b_grid_text, args.bmax, args.steps);
    auto branch = travel::solve_travel_branch(args.a, args.l, b_grid, cfg);

    io::CsvWriter csv(ctx.digest, {"b", "nu", "residual", "modes"});
    for (const auto& p : branch)
        csv.row({io::fmt(p.b), io::fmt(p.nu), io::fmt(p.residual),
                 std::to_string(p.modes)});
    csv.write(ctx.path("travel.csv"));
    ctx.record_output(ctx.path("travel.csv"));

    for (size_t i = 0; i < branch.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "profile_%04zu.json", i);
        io::save_profile(ctx.path(name), branch[i], ctx.digest);
        ctx.record_output(ctx.path(name));
    }

    nlohmann::ordered_json summary;
    summary["manifest_digest"] = ctx.digest;
    summary["nu0"] = freq0;
    summary["a"] = args.a;
    summary["l"] = args.l;
    summary["points"] = branch.size();
    io::write_text_file(ctx.path("summary.json"), summary.dump(2) + "\n");
    ctx.record_output(ctx.path("summary.json"));
    ctx.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "standing and traveling waves of the counter-rotating vortex filament pair"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("FILAMENT_OUT_DIR");
    const std::string default_out = env_out ? env_out : ".";

    SpectrumArgs sp;
    sp.out = default_out;
    auto* spectrum =
        app.add_subcommand("spectrum", "eigenvalues, kernel set and gap report");
    spectrum->set_config("--config", "", "flat key=value configuration file (CLI overrides)");
    spectrum->add_option("--p", sp.p, "frequency numerator");
    spectrum->add_option("--q", sp.q, "frequency denominator");
    spectrum->add_option("--j0", sp.j0, "seed t-harmonic (default 1)");
    spectrum->add_option("--k0", sp.k0, "seed s-harmonic");
    spectrum->add_option("--l0", sp.l0, "seed polarization (0 or 1)");
    spectrum->add_option("--a2inv", sp.a2inv_text,
                         "amplitude a^-2 as n/d (overrides the seed)");
    spectrum->add_option("--cutoff", sp.cutoff_text, "lattice box JxK");
    spectrum->add_option("--out", sp.out, "output directory");

    AmplitudesArgs am;
    am.out = default_out;
    auto* amplitudes =
        app.add_subcommand("amplitudes", "candidate bifurcation amplitudes for fixed q");
    amplitudes->set_config("--config", "", "flat key=value configuration file (CLI overrides)");
    amplitudes->add_option("--q", am.q, "frequency denominator");
    amplitudes->add_option("--kmax", am.kmax, "largest seed s-harmonic");
    amplitudes->add_option("--pmax", am.pmax, "largest frequency numerator");
    amplitudes->add_option("--cutoff", am.cutoff_text, "lattice box JxK");
    amplitudes->add_option("--out", am.out, "output directory");

    BranchArgs br;
    br.out = default_out;
    auto* branch = app.add_subcommand("branch", "standing-wave branch continuation");
    branch->set_config("--config", "", "flat key=value configuration file (CLI overrides)");
    branch->add_option("--p", br.p, "frequency numerator");
    branch->add_option("--q", br.q, "frequency denominator");
    branch->add_option("--k0", br.k0, "seed s-harmonic");
    branch->add_option("--l0", br.l0, "seed polarization");
    branch->add_option("--b-grid", br.b_grid_text, "comma list of amplitudes (0 prepended)");
    branch->add_option("--bmax", br.bmax, "largest amplitude for a linear grid");
    branch->add_option("--steps", br.steps, "number of linear grid steps");
    branch->add_option("--cutoff", br.cutoff_text, "certification box JxK");
    branch->add_option("--jmax", br.solver.jmax, "solve truncation in t-harmonics");
    branch->add_option("--kmax", br.solver.kmax, "solve truncation in s-harmonics");
    branch->add_option("--tol", br.solver.tol, "contraction increment tolerance");
    branch->add_option("--residual-tol", br.solver.residual_tol,
                       "acceptance threshold for the range residual");
    branch->add_option("--max-iter", br.solver.max_iter, "contraction iteration cap");
    branch->add_option("--oversample", br.solver.oversample, "collocation oversampling");
    branch->add_option("--sobolev-s", br.solver.sobolev_s, "Sobolev index");
    branch->add_option("--secant-tol", br.solver.secant_tol, "|B| tolerance");
    branch->add_flag("--snapshots,!--no-snapshots", br.snapshots,
                     "write per-point field and state snapshots (default on)");
    branch->add_option("--out", br.out, "output directory");

    EvolveArgs ev;
    ev.out = default_out;
    auto* evolve_cmd = app.add_subcommand("evolve", "time-domain integration");
    evolve_cmd->set_config("--config", "", "flat key=value configuration file (CLI overrides)");
    evolve_cmd->add_option("--state", ev.state_path, "evolution-state snapshot to start from");
    evolve_cmd->add_option("--straight-a", ev.straight_a,
                           "start from the straight pair at distance a");
    evolve_cmd->add_option("--cos-eps", ev.cos_eps,
                           "relative cos(k s) perturbation of the straight pair");
    evolve_cmd->add_option("--cos-k", ev.cos_k, "perturbation wavenumber");
    evolve_cmd->add_option("--kmax", ev.kmax, "spectral truncation for generated states");
    evolve_cmd->add_option("--time", ev.time, "integration time");
    evolve_cmd->add_option("--periods", ev.periods, "integration time in snapshot periods");
    evolve_cmd->add_option("--dt", ev.dt, "time step (default time/4096)");
    evolve_cmd->add_option("--scheme", ev.scheme, "exponential | implicit-midpoint");
    evolve_cmd->add_option("--diag-every", ev.diag_every, "diagnostics cadence in steps");
    evolve_cmd->add_flag("--reversibility", ev.reversibility,
                         "also run the reversibility check");
    evolve_cmd->add_option("--out", ev.out, "output directory");

    TravelArgs tr;
    tr.out = default_out;
    auto* travel_cmd = app.add_subcommand("travel", "traveling-wave branch");
    travel_cmd->set_config("--config", "", "flat key=value configuration file (CLI overrides)");
    travel_cmd->add_option("--a", tr.a, "filament distance");
    travel_cmd->add_option("--l", tr.l, "frequency label (0 or 1)");
    travel_cmd->add_option("--b-grid", tr.b_grid_text, "comma list of amplitudes (0 prepended)");
    travel_cmd->add_option("--bmax", tr.bmax, "largest amplitude for a linear grid");
    travel_cmd->add_option("--steps", tr.steps, "number of linear grid steps");
    travel_cmd->add_option("--modes", tr.modes, "cosine modes of the profile");
    travel_cmd->add_option("--out", tr.out, "output directory");

    try {
        app.parse(argc, argv);
        if (spectrum->parsed()) return cmd_spectrum(sp, argc, argv);
        if (amplitudes->parsed()) return cmd_amplitudes(am, argc, argv);
        if (branch->parsed()) return cmd_branch(br, argc, argv);
        if (evolve_cmd->parsed()) return cmd_evolve(ev, argc, argv);
        if (travel_cmd->parsed()) return cmd_travel(tr, argc, argv);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
