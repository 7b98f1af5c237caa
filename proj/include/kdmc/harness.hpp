#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdmc/background.hpp"
#include "kdmc/core.hpp"
#include "kdmc/sampling.hpp"
#include "kdmc/tally.hpp"
#include "kdmc/transport.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
enum class TransportMode
{
    kinetic,
    kdmc,
};

char const* to_string(TransportMode mode);
TransportMode transport_mode_from_string(std::string const& s);

//---------------------------------------------------------------------------//
struct RunConfig
{
    TransportMode mode{TransportMode::kinetic};
    std::uint64_t particles{1};
    std::uint64_t seed{1};
    unsigned workers{1};
    std::uint64_t block_size{1u << 16};
    StepConfig step{};
    SourceSpec source{};
    Background background{Background::homogeneous(0, {})};
    Domain domain{};
    std::size_t nx{128};
    std::size_t ny{128};

    //! Throws ParameterError on the first violated constraint
    void validate() const;
};

//---------------------------------------------------------------------------//
struct RunResult
{
    Histogram2D histogram;       //!< Raw (unnormalized) tally
    double wall_seconds{0};      //!< Transport and tally loop only
    std::uint64_t collisions{0};
    std::uint64_t steps{0};
};

/*!
 * Simulate \c cfg.particles trajectories and tally their final positions.
 *
 * Particle i draws from derive_stream(seed, i). Blocks of particle indices are
 * claimed dynamically by the workers, each of which owns a private histogram;
 * the result is bit-identical for any worker count.
 */
RunResult run_simulation(RunConfig const& cfg);

//---------------------------------------------------------------------------//
// Experiment sweeps
//---------------------------------------------------------------------------//
struct SweepRow
{
    double parameter{0};  //!< dt [s] or collision rate [1/s]
    double error{0};      //!< l2 distance of folded profiles
    double time_kinetic{0};
    double time_kdmc{0};
};

struct SweepPoint
{
    SweepRow row;
    RunResult kinetic;
    RunResult kdmc;
    Profile1D folded_difference;  //!< kinetic - KDMC
};

struct SweepOptions
{
    unsigned repetitions{1};  //!< Timing repetitions; the minimum is kept
    std::function<void(SweepPoint const&)> on_point;
};

//! Configuration of the low-collisional experiment for a given particle count
RunConfig kinetic_limit_config(std::uint64_t particles);

//! Base configuration of the high-collisional experiment (rate set per point)
RunConfig diffusive_limit_config(std::uint64_t particles);

//! Set rate 1/(128 eps^2) and mean post-collisional speed sqrt(pi/10)/(512 eps)
void apply_diffusive_scaling(RunConfig& cfg, double eps);

//! Time steps 2^0 ... 2^-4
std::vector<double> default_dt_values();

//! eps = 2^(-k / per_octave) for k = 0 .. 7.5 per_octave, i.e. eps in [2^-7.5, 1]
std::vector<double> default_eps_values(unsigned per_octave = 2);

/*!
 * Compare KDMC against a single kinetic reference for each time step.
 *
 * The kinetic run does not depend on dt and is simulated once; its time is
 * reported in every row. \c dt_values must be non-empty and descending.
 */
std::vector<SweepPoint> sweep_kinetic_limit(RunConfig const& base,
                                            std::span<double const> dt_values,
                                            SweepOptions const& options = {});

/*!
 * Compare KDMC and kinetic transport along the diffusive scaling in eps.
 * Rows are keyed by the collision rate.
 */
std::vector<SweepPoint> sweep_diffusive_limit(RunConfig const& base,
                                              std::span<double const> eps_values,
                                              SweepOptions const& options = {});

//! Least-squares slope of log(error) against log(x)
double estimate_order(std::span<double const> xs, std::span<double const> errors);

//---------------------------------------------------------------------------//
// CSV output
//---------------------------------------------------------------------------//
void write_convergence_csv(std::ostream& os,
                           std::string const& key,
                           std::span<SweepPoint const> points);
void write_runtime_csv(std::ostream& os,
                       std::string const& key,
                       std::span<SweepPoint const> points);
//! Header "x,<rate1>,<rate2>,..." and one row per folded cell
void write_profiles_csv(std::ostream& os, std::span<SweepPoint const> points);

}  // namespace kdmc
