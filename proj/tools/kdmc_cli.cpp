// Command-line driver: single runs, the two convergence sweeps, and
// histogram comparison.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kdmc/config.hpp"
#include "kdmc/harness.hpp"
#include "kdmc/tally.hpp"

namespace fs = std::filesystem;
using namespace kdmc;

namespace
{
constexpr int exit_runtime = 1;
constexpr int exit_invalid = 2;

struct CommonOptions
{
    std::string config;
    std::string out{"."};
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> particles;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "Configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--particles", o.particles, "Number of particles")
        ->check(CLI::PositiveNumber);
}

// Base set-up, then the file, then command-line overrides; validated as a whole
RunConfig load_config(RunConfig base, CommonOptions const& o)
{
    base.workers = std::max(1u, std::thread::hardware_concurrency());
    if (!o.config.empty())
    {
        base = apply_config(parse_config_file(o.config), base);
    }
    if (o.seed) base.seed = *o.seed;
    if (o.threads) base.workers = *o.threads;
    if (o.particles) base.particles = *o.particles;
    base.validate();
    return base;
}

fs::path prepare_out(std::string const& dir)
{
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::ofstream open_out(fs::path const& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
    {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return os;
}

//---------------------------------------------------------------------------//
int cmd_run(CommonOptions const& o, std::optional<std::string> const& mode)
{
    RunConfig cfg = load_config(kinetic_limit_config(10'000'000), o);
    if (mode)
    {
        cfg.mode = transport_mode_from_string(*mode);
    }
    fs::path const out = prepare_out(o.out);

    RunResult const r = run_simulation(cfg);
    double const absorbed = r.histogram.absorbed_mass() / r.histogram.total_mass();
    write_histogram((out / "histogram.csv").string(), r.histogram);

    std::string const summary = fmt::format(
        "mode = {}\nparticles = {}\nseed = {}\nworkers = {}\n"
        "absorbed_fraction = {}\nwall_seconds = {}\ncollisions = {}\nsteps = {}\n",
        to_string(cfg.mode), cfg.particles, cfg.seed, cfg.workers, format_value(absorbed),
        format_value(r.wall_seconds), r.collisions, r.steps);
    open_out(out / "summary.txt") << summary;
    std::cout << summary;
    return 0;
}

//---------------------------------------------------------------------------//
std::vector<double> select(std::vector<SweepPoint> const& pts,
                           double lo,
                           double hi,
                           bool want_error)
{
    std::vector<double> v;
    for (auto const& p : pts)
    {
        if (p.row.parameter >= lo && p.row.parameter <= hi)
        {
            v.push_back(want_error ? p.row.error : p.row.parameter);
        }
    }
    return v;
}

void print_point(SweepPoint const& p, char const* key)
{
    std::cout << fmt::format("{} = {:<12.6g} error = {:<12.5e} kinetic = {:.3f} s  kdmc = {:.3f} s\n",
                             key, p.row.parameter, p.row.error, p.row.time_kinetic,
                             p.row.time_kdmc)
              << std::flush;
}

int cmd_sweep_kinetic(CommonOptions const& o, unsigned repetitions)
{
    RunConfig const base = load_config(kinetic_limit_config(10'000'000), o);
    fs::path const out = prepare_out(o.out);
    auto const dts = default_dt_values();

    SweepOptions opts{repetitions, [](SweepPoint const& p) { print_point(p, "delta_t"); }};
    auto const pts = sweep_kinetic_limit(base, dts, opts);

    auto conv = open_out(out / "kinetic_convergence.csv");
    write_convergence_csv(conv, "delta_t", pts);
    auto rt = open_out(out / "kinetic_runtime.csv");
    write_runtime_csv(rt, "delta_t", pts);

    // The three coarsest time steps lie before the sampling plateau
    std::vector<double> xs, errs;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, pts.size()); ++k)
    {
        xs.push_back(pts[k].row.parameter);
        errs.push_back(pts[k].row.error);
    }
    if (xs.size() >= 2)
    {
        std::cout << fmt::format("fitted order (three coarsest delta_t): {:.4f}\n",
                                 estimate_order(xs, errs));
    }
    return 0;
}

int cmd_sweep_diffusive(CommonOptions const& o, unsigned repetitions, unsigned per_octave)
{
    RunConfig const base = load_config(diffusive_limit_config(1'000'000), o);
    fs::path const out = prepare_out(o.out);
    auto const eps = default_eps_values(per_octave);

    SweepOptions opts{repetitions, [](SweepPoint const& p) { print_point(p, "Rcx"); }};
    auto const pts = sweep_diffusive_limit(base, eps, opts);

    auto conv = open_out(out / "diffusive_convergence.csv");
    write_convergence_csv(conv, "Rcx", pts);
    auto rt = open_out(out / "diffusive_runtime.csv");
    write_runtime_csv(rt, "Rcx", pts);
    auto prof = open_out(out / "diffusive_profiles.csv");
    write_profiles_csv(prof, pts);

    auto const xs = select(pts, 16, 256, false);
    auto const errs = select(pts, 16, 256, true);
    if (xs.size() >= 2)
    {
        std::cout << fmt::format("fitted order (Rcx in [16, 256]): {:.4f}\n",
                                 estimate_order(xs, errs));
    }
    return 0;
}

//---------------------------------------------------------------------------//
int cmd_compare(std::string const& a_path, std::string const& b_path, std::string const& out_dir)
{
    Histogram2D const a = read_histogram_file(a_path);
    Histogram2D const b = read_histogram_file(b_path);
    if (a.nx() != b.nx() || a.ny() != b.ny())
    {
        throw ParameterError(fmt::format("histogram shapes differ: {}x{} vs {}x{}",
                                         a.nx(), a.ny(), b.nx(), b.ny()));
    }
    fs::path const out = prepare_out(out_dir);

    Profile1D const pa = fold_about_center(reduce_x_average(a));
    Profile1D const pb = fold_about_center(reduce_x_average(b));
    write_histogram((out / "difference.csv").string(), pointwise_diff(a, b));
    write_profile((out / "difference_profile.csv").string(), pointwise_diff(pa, pb));
    std::cout << "l2_norm = " << format_value(l2_diff(pa, pb)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic and kinetic-diffusion Monte Carlo for 2D BGK neutral transport"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::optional<std::string> mode;
    auto* run = app.add_subcommand("run", "Simulate one configuration and write its histogram");
    add_common(run, run_opts);
    run->add_option("--mode", mode, "Transport mode")
        ->check(CLI::IsMember({"kinetic", "kdmc"}));

    auto* sweep = app.add_subcommand("sweep", "Convergence and runtime sweeps");
    sweep->require_subcommand(1);
    CommonOptions kin_opts;
    CommonOptions diff_opts;
    unsigned kin_reps = 1;
    unsigned diff_reps = 1;
    unsigned per_octave = 2;
    auto* kin = sweep->add_subcommand("kinetic", "Time-step sweep in the low-collisional regime");
    add_common(kin, kin_opts);
    kin->add_option("--repetitions", kin_reps, "Timing repetitions (minimum kept)")
        ->check(CLI::PositiveNumber);
    auto* diff = sweep->add_subcommand("diffusive", "Collision-rate sweep towards the diffusive limit");
    add_common(diff, diff_opts);
    diff->add_option("--repetitions", diff_reps, "Timing repetitions (minimum kept)")
        ->check(CLI::PositiveNumber);
    diff->add_option("--eps-per-octave", per_octave, "Scaling points per factor two in eps")
        ->capture_default_str();

    std::string hist_a, hist_b;
    std::string compare_out{"."};
    auto* compare = app.add_subcommand("compare", "Pointwise difference of two histograms");
    compare->add_option("first", hist_a, "Reference histogram (kinetic)")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("second", hist_b, "Approximate histogram (KDMC)")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--out", compare_out, "Output directory")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::Success const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return exit_invalid;
    }

    try
    {
        if (run->parsed()) return cmd_run(run_opts, mode);
        if (kin->parsed()) return cmd_sweep_kinetic(kin_opts, kin_reps);
        if (diff->parsed()) return cmd_sweep_diffusive(diff_opts, diff_reps, per_octave);
        if (compare->parsed()) return cmd_compare(hist_a, hist_b, compare_out);
    }
    catch (ConfigError const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (std::invalid_argument const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_runtime;
}
