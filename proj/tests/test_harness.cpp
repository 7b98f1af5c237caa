#include "kdmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"

using namespace kdmc;

namespace
{
RunConfig small_kinetic(std::uint64_t n)
{
    RunConfig cfg = kinetic_limit_config(n);
    cfg.nx = 32;
    cfg.ny = 32;
    cfg.block_size = 512;
    return cfg;
}

std::string first_line(std::string const& s)
{
    return s.substr(0, s.find('\n'));
}

std::size_t line_count(std::string const& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}
}  // namespace

TEST_CASE("transport mode names")
{
    CHECK(std::string(to_string(TransportMode::kinetic)) == "kinetic");
    CHECK(transport_mode_from_string("kdmc") == TransportMode::kdmc);
    CHECK_THROWS_AS(transport_mode_from_string("fast"), ParameterError);
}

TEST_CASE("run configuration validation")
{
    RunConfig cfg = small_kinetic(10);
    CHECK_NOTHROW(cfg.validate());

    auto broken = cfg;
    broken.particles = 0;
    CHECK_THROWS_AS(broken.validate(), ParameterError);
    broken = cfg;
    broken.workers = 0;
    CHECK_THROWS_AS(broken.validate(), ParameterError);
    broken = cfg;
    broken.source.position = {1.0, 0.5};
    CHECK_THROWS_AS(broken.validate(), ParameterError);
    broken = cfg;
    broken.step.t_end = 0;
    CHECK_THROWS_AS(run_simulation(broken), ParameterError);
}

TEST_CASE("single deterministic particle")
{
    RunConfig cfg;
    cfg.particles = 1;
    cfg.source = SourceSpec{{0.5, 0.5}, Maxwellian{0, {0.1, -0.2}}};
    cfg.background = Background::homogeneous(0, {});
    cfg.step = StepConfig{1, 1};
    auto const r = run_simulation(cfg);
    // Endpoint (0.6, 0.3) on the 128 x 128 tally
    CHECK(r.histogram(76, 38) == 1);
    CHECK(r.histogram.total_mass() == 1);
    CHECK(r.collisions == 0);
    CHECK(r.steps == 1);
    CHECK(r.wall_seconds >= 0);
}

TEST_CASE("worker-count invariance")
{
    for (auto mode : {TransportMode::kinetic, TransportMode::kdmc})
    {
        CAPTURE(to_string(mode));
        RunConfig cfg = small_kinetic(20'000);
        cfg.mode = mode;
        cfg.step.dt = 0.25;

        cfg.workers = 1;
        auto const serial = run_simulation(cfg);
        std::string const ref = histogram_to_string(serial.histogram);
        CHECK(serial.histogram.total_mass() == 20'000);
        CHECK(serial.histogram.deposited_mass() + serial.histogram.absorbed_mass() == 20'000);

        for (unsigned w : {4u, 8u})
        {
            cfg.workers = w;
            auto const par = run_simulation(cfg);
            CHECK(histogram_to_string(par.histogram) == ref);
            CHECK(par.collisions == serial.collisions);
            CHECK(par.steps == serial.steps);
        }

        // Block size changes the schedule, not the result
        cfg.workers = 3;
        cfg.block_size = 777;
        CHECK(histogram_to_string(run_simulation(cfg).histogram) == ref);
    }
}

TEST_CASE("seeds select independent ensembles")
{
    RunConfig cfg = small_kinetic(2000);
    auto const a = run_simulation(cfg);
    cfg.seed = 2;
    auto const b = run_simulation(cfg);
    CHECK(a.histogram.mass() != b.histogram.mass());
}

TEST_CASE("experiment set-ups")
{
    auto const kin = kinetic_limit_config(100);
    CHECK(kin.step.t_end == 1);
    CHECK(kin.source.position == Vec2{0.5, 0.5});
    CHECK(mean_speed_from_temperature(kin.source.emission.temperature)
          == doctest::Approx(0.15625));
    auto const kin_bg = kin.background.lookup({0.5, 0.5});
    CHECK(kin_bg.rate == 0.78125);
    CHECK(mean_speed_from_temperature(kin_bg.maxwellian.temperature)
          == doctest::Approx(0.013847));
    CHECK(kin.nx == 128);
    CHECK(kin.ny == 128);

    auto diff = diffusive_limit_config(100);
    CHECK(diff.step.dt == 1);
    CHECK(diff.step.t_end == 4);
    CHECK(mean_speed_from_temperature(diff.source.emission.temperature)
          == doctest::Approx(0.0625));
    CHECK(diff.background.lookup({}).rate == doctest::Approx(1.0 / 128).epsilon(1e-15));

    apply_diffusive_scaling(diff, std::exp2(-7.5));
    auto const f = diff.background.lookup({});
    CHECK(f.rate == doctest::Approx(256).epsilon(1e-13));
    CHECK(mean_speed_from_temperature(f.maxwellian.temperature)
          == doctest::Approx(0.19817).epsilon(1e-4));
    CHECK(f.maxwellian.temperature == doctest::Approx(0.025).epsilon(1e-12));
    CHECK_THROWS_AS(apply_diffusive_scaling(diff, 0), ParameterError);
    CHECK_THROWS_AS(apply_diffusive_scaling(diff, 1.5), ParameterError);
}

TEST_CASE("default sweep grids")
{
    CHECK(default_dt_values() == std::vector<double>{1, 0.5, 0.25, 0.125, 0.0625});

    auto const eps = default_eps_values();
    REQUIRE(eps.size() == 16);
    CHECK(eps.front() == 1);
    CHECK(eps.back() == doctest::Approx(std::exp2(-7.5)));
    CHECK(1 / (128 * eps[14] * eps[14]) == doctest::Approx(128));

    auto const fine = default_eps_values(4);
    REQUIRE(fine.size() == 31);
    CHECK(fine.back() == doctest::Approx(std::exp2(-7.5)));
    // Contains the rate 2^3.5 between the half-octave points
    CHECK(1 / (128 * fine[21] * fine[21]) == doctest::Approx(11.3137).epsilon(1e-4));
    CHECK_THROWS_AS(default_eps_values(3), ParameterError);
}

TEST_CASE("order estimate")
{
    std::vector<double> const xs{1, 0.5, 0.25};
    std::vector<double> cubic, linear, flat;
    for (double x : xs)
    {
        cubic.push_back(7 * x * x * x);
        linear.push_back(0.3 * x);
        flat.push_back(2e-6);
    }
    CHECK(std::abs(estimate_order(xs, cubic) - 3) < 1e-12);
    CHECK(estimate_order(xs, linear) == doctest::Approx(1));
    CHECK(std::abs(estimate_order(xs, flat)) < 1e-12);

    std::vector<double> const rates{16, 64, 256};
    std::vector<double> const inverse{1.0 / 16, 1.0 / 64, 1.0 / 256};
    CHECK(estimate_order(rates, inverse) == doctest::Approx(-1));

    CHECK_THROWS_AS(estimate_order(std::vector<double>{1}, std::vector<double>{1}),
                    ParameterError);
    CHECK_THROWS_AS(estimate_order(xs, std::vector<double>{1, 0, 1}), ParameterError);
    CHECK_THROWS_AS(estimate_order(std::vector<double>{1, -1, 2}, linear), ParameterError);
}

TEST_CASE("kinetic-limit sweep")
{
    RunConfig const base = small_kinetic(4000);
    std::vector<double> const dts{1, 0.5, 0.25};
    int callbacks = 0;
    SweepOptions opts;
    opts.on_point = [&](SweepPoint const&) { ++callbacks; };
    auto const pts = sweep_kinetic_limit(base, dts, opts);
    REQUIRE(pts.size() == 3);
    CHECK(callbacks == 3);
    for (std::size_t k = 0; k < pts.size(); ++k)
    {
        CHECK(pts[k].row.parameter == dts[k]);
        CHECK(pts[k].row.error >= 0);
        CHECK(pts[k].row.time_kinetic > 0);
        CHECK(pts[k].row.time_kdmc > 0);
        // One kinetic reference serves every row
        CHECK(pts[k].row.time_kinetic == pts[0].row.time_kinetic);
        CHECK(pts[k].kinetic.histogram.mass() == pts[0].kinetic.histogram.mass());
        CHECK(pts[k].folded_difference.size() == 16);
        CHECK(pts[k].row.error == doctest::Approx(l2_diff(
                  folded_profile(pts[k].kinetic.histogram),
                  folded_profile(pts[k].kdmc.histogram))));
    }

    std::ostringstream conv, rt;
    write_convergence_csv(conv, "delta_t", pts);
    write_runtime_csv(rt, "delta_t", pts);
    CHECK(first_line(conv.str()) == "delta_t,error");
    CHECK(first_line(rt.str()) == "delta_t,time_kinetic,time_kdmc");
    CHECK(line_count(conv.str()) == 4);
    CHECK(conv.str().find("\n0.5,") != std::string::npos);

    CHECK_THROWS_AS(sweep_kinetic_limit(base, std::vector<double>{0.5, 1}), ParameterError);
    CHECK_THROWS_AS(sweep_kinetic_limit(base, std::vector<double>{}), ParameterError);
}

TEST_CASE("diffusive-limit sweep")
{
    RunConfig base = diffusive_limit_config(2000);
    base.nx = 16;
    base.ny = 16;
    std::vector<double> const eps{1, std::exp2(-2)};
    auto const pts = sweep_diffusive_limit(base, eps);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].row.parameter == doctest::Approx(1.0 / 128));
    CHECK(pts[1].row.parameter == doctest::Approx(1.0 / 8));
    // More collisions per particle at the larger rate
    CHECK(pts[1].kinetic.collisions > pts[0].kinetic.collisions);

    std::ostringstream conv, rt, prof;
    write_convergence_csv(conv, "Rcx", pts);
    write_runtime_csv(rt, "Rcx", pts);
    write_profiles_csv(prof, pts);
    CHECK(first_line(conv.str()) == "Rcx,error");
    CHECK(first_line(rt.str()) == "Rcx,time_kinetic,time_kdmc");
    CHECK(first_line(prof.str()) == "x,0.0078125,0.125");
    CHECK(line_count(prof.str()) == 1 + 8);
    CHECK(prof.str().find("\n0.03125,") != std::string::npos);

    CHECK_THROWS_AS(sweep_diffusive_limit(base, std::vector<double>{2.0}), ParameterError);
}
