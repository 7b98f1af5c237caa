#include "kdmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include <fmt/format.h>

namespace kdmc
{
char const* to_string(TransportMode mode)
{
    return mode == TransportMode::kinetic ? "kinetic" : "kdmc";
}

TransportMode transport_mode_from_string(std::string const& s)
{
    if (s == "kinetic")
    {
        return TransportMode::kinetic;
    }
    if (s == "kdmc")
    {
        return TransportMode::kdmc;
    }
    throw ParameterError("unknown transport mode '" + s + "' (expected kinetic or kdmc)");
}

void RunConfig::validate() const
{
    if (particles < 1)
    {
        throw ParameterError("particle count must be at least 1");
    }
    if (workers < 1)
    {
        throw ParameterError("worker count must be at least 1");
    }
    if (block_size < 1)
    {
        throw ParameterError("block size must be at least 1");
    }
    if (nx < 1 || ny < 1)
    {
        throw ParameterError("tally grid must have at least one cell per axis");
    }
    step.validate();
    if (!domain.contains(source.position))
    {
        throw ParameterError("source must lie strictly inside the domain");
    }
    if (!(source.emission.temperature >= 0) || !is_finite(source.emission.drift))
    {
        throw ParameterError("invalid source emission Maxwellian");
    }
}

//---------------------------------------------------------------------------//
namespace
{
struct WorkerTally
{
    Histogram2D histogram;
    std::uint64_t collisions{0};
    std::uint64_t steps{0};
};

void run_block(RunConfig const& cfg,
               std::uint64_t begin,
               std::uint64_t end,
               WorkerTally& tally)
{
    auto const simulate
        = cfg.mode == TransportMode::kinetic ? &simulate_kinetic : &simulate_kdmc;
    for (std::uint64_t i = begin; i < end; ++i)
    {
        RngStream rng = derive_stream(cfg.seed, i);
        Particle const p = sample_source(rng, cfg.source);
        TrajectoryOutcome const out = simulate(p, cfg.background, cfg.domain, cfg.step, rng);
        tally.histogram.deposit(out);
        tally.collisions += out.collision_count;
        tally.steps += out.step_count;
    }
}
}  // namespace

RunResult run_simulation(RunConfig const& cfg)
{
    cfg.validate();

    unsigned const workers = cfg.workers;
    std::vector<WorkerTally> tallies(
        workers, WorkerTally{Histogram2D(cfg.nx, cfg.ny, cfg.domain)});
    std::uint64_t const n_blocks = (cfg.particles + cfg.block_size - 1) / cfg.block_size;
    std::atomic<std::uint64_t> next_block{0};

    auto worker = [&](WorkerTally& tally) {
        while (true)
        {
            std::uint64_t const b = next_block.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks)
            {
                return;
            }
            std::uint64_t const begin = b * cfg.block_size;
            std::uint64_t const end = std::min(begin + cfg.block_size, cfg.particles);
            run_block(cfg, begin, end, tally);
        }
    };

    auto const start = std::chrono::steady_clock::now();
    if (workers == 1)
    {
        worker(tallies.front());
    }
    else
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (auto& t : tallies)
        {
            threads.emplace_back(worker, std::ref(t));
        }
    }
    auto const stop = std::chrono::steady_clock::now();

    RunResult result{std::move(tallies.front().histogram)};
    result.collisions = tallies.front().collisions;
    result.steps = tallies.front().steps;
    for (std::size_t w = 1; w < tallies.size(); ++w)
    {
        result.histogram.merge(tallies[w].histogram);
        result.collisions += tallies[w].collisions;
        result.steps += tallies[w].steps;
    }
    result.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return result;
}

//---------------------------------------------------------------------------//
RunConfig kinetic_limit_config(std::uint64_t particles)
{
    RunConfig cfg;
    cfg.particles = particles;
    cfg.step = StepConfig{1.0, 1.0};
    cfg.source = SourceSpec{cfg.domain.center(),
                            Maxwellian{temperature_from_mean_speed(0.15625), {}}};
    cfg.background = Background::homogeneous(
        0.78125, Maxwellian{temperature_from_mean_speed(0.013847), {}});
    return cfg;
}

RunConfig diffusive_limit_config(std::uint64_t particles)
{
    RunConfig cfg;
    cfg.particles = particles;
    cfg.step = StepConfig{1.0, 4.0};
    cfg.source = SourceSpec{cfg.domain.center(),
                            Maxwellian{temperature_from_mean_speed(0.0625), {}}};
    apply_diffusive_scaling(cfg, 1.0);
    return cfg;
}

void apply_diffusive_scaling(RunConfig& cfg, double eps)
{
    if (!(eps > 0) || eps > 1)
    {
        throw ParameterError("diffusive scaling parameter must lie in (0, 1]");
    }
    // 1 / (128 eps^2), via log2 so that powers of two stay exact
    double const rate = std::exp2(-7.0 - 2.0 * std::log2(eps));
    double const speed = std::sqrt(std::numbers::pi / 10) / 512 / eps;
    cfg.background
        = Background::homogeneous(rate, Maxwellian{temperature_from_mean_speed(speed), {}});
}

std::vector<double> default_dt_values()
{
    return {1.0, 0.5, 0.25, 0.125, 0.0625};
}

std::vector<double> default_eps_values(unsigned per_octave)
{
    if (per_octave < 2 || per_octave % 2 != 0)
    {
        throw ParameterError("eps subdivisions per octave must be even and at least 2");
    }
    std::vector<double> eps;
    unsigned const last = 15 * per_octave / 2;
    for (unsigned k = 0; k <= last; ++k)
    {
        eps.push_back(std::exp2(-static_cast<double>(k) / per_octave));
    }
    return eps;
}

namespace
{
RunResult timed_run(RunConfig const& cfg, unsigned repetitions)
{
    RunResult best = run_simulation(cfg);
    for (unsigned r = 1; r < repetitions; ++r)
    {
        best.wall_seconds = std::min(best.wall_seconds, run_simulation(cfg).wall_seconds);
    }
    return best;
}

SweepPoint compare_runs(double parameter, RunResult kinetic, RunResult kdmc)
{
    SweepPoint pt{SweepRow{parameter}, std::move(kinetic), std::move(kdmc), {}};
    Profile1D const ref = folded_profile(pt.kinetic.histogram);
    Profile1D const approx = folded_profile(pt.kdmc.histogram);
    pt.row.error = l2_diff(ref, approx);
    pt.row.time_kinetic = pt.kinetic.wall_seconds;
    pt.row.time_kdmc = pt.kdmc.wall_seconds;
    pt.folded_difference = pointwise_diff(ref, approx);
    return pt;
}
}  // namespace

std::vector<SweepPoint> sweep_kinetic_limit(RunConfig const& base,
                                            std::span<double const> dt_values,
                                            SweepOptions const& options)
{
    if (dt_values.empty())
    {
        throw ParameterError("time step sweep needs at least one value");
    }
    if (!std::is_sorted(dt_values.begin(), dt_values.end(), std::greater<>{}))
    {
        throw ParameterError("time step values must be descending");
    }
    unsigned const reps = std::max(options.repetitions, 1u);

    RunConfig kinetic_cfg = base;
    kinetic_cfg.mode = TransportMode::kinetic;
    RunResult const reference = timed_run(kinetic_cfg, reps);

    std::vector<SweepPoint> points;
    for (double dt : dt_values)
    {
        RunConfig cfg = base;
        cfg.mode = TransportMode::kdmc;
        cfg.step.dt = dt;
        points.push_back(compare_runs(dt, reference, timed_run(cfg, reps)));
        if (options.on_point)
        {
            options.on_point(points.back());
        }
    }
    return points;
}

std::vector<SweepPoint> sweep_diffusive_limit(RunConfig const& base,
                                              std::span<double const> eps_values,
                                              SweepOptions const& options)
{
    if (eps_values.empty())
    {
        throw ParameterError("scaling sweep needs at least one value");
    }
    unsigned const reps = std::max(options.repetitions, 1u);

    std::vector<SweepPoint> points;
    for (double eps : eps_values)
    {
        RunConfig cfg = base;
        apply_diffusive_scaling(cfg, eps);
        double const rate = cfg.background.lookup(cfg.source.position).rate;

        cfg.mode = TransportMode::kinetic;
        RunResult kinetic = timed_run(cfg, reps);
        cfg.mode = TransportMode::kdmc;
        RunResult kdmc = timed_run(cfg, reps);
        points.push_back(compare_runs(rate, std::move(kinetic), std::move(kdmc)));
        if (options.on_point)
        {
            options.on_point(points.back());
        }
    }
    return points;
}

double estimate_order(std::span<double const> xs, std::span<double const> errors)
{
    if (xs.size() != errors.size() || xs.size() < 2)
    {
        throw ParameterError("order estimate needs at least two (x, error) pairs");
    }
    double const n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (!(xs[i] > 0) || !(errors[i] > 0))
        {
            throw ParameterError("order estimate needs positive values");
        }
        sx += std::log(xs[i]);
        sy += std::log(errors[i]);
    }
    double const mx = sx / n;
    double const my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        double const dx = std::log(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(errors[i]) - my);
    }
    if (sxx == 0)
    {
        throw ParameterError("order estimate needs at least two distinct x values");
    }
    return sxy / sxx;
}

//---------------------------------------------------------------------------//
void write_convergence_csv(std::ostream& os,
                           std::string const& key,
                           std::span<SweepPoint const> points)
{
    std::string out = key + ",error\n";
    for (auto const& pt : points)
    {
        out += fmt::format("{},{}\n", format_value(pt.row.parameter), format_value(pt.row.error));
    }
    os << out;
}

void write_runtime_csv(std::ostream& os,
                       std::string const& key,
                       std::span<SweepPoint const> points)
{
    std::string out = key + ",time_kinetic,time_kdmc\n";
    for (auto const& pt : points)
    {
        out += fmt::format("{},{},{}\n",
                           format_value(pt.row.parameter),
                           format_value(pt.row.time_kinetic),
                           format_value(pt.row.time_kdmc));
    }
    os << out;
}

void write_profiles_csv(std::ostream& os, std::span<SweepPoint const> points)
{
    std::string out = "x";
    for (auto const& pt : points)
    {
        out += "," + format_value(pt.row.parameter);
    }
    out += '\n';
    std::size_t const n = points.empty() ? 0 : points.front().folded_difference.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        out += format_value(points.front().folded_difference.coordinates[i]);
        for (auto const& pt : points)
        {
            out += "," + format_value(pt.folded_difference.values.at(i));
        }
        out += '\n';
    }
    os << out;
}

}  // namespace kdmc
