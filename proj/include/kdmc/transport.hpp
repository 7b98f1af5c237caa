#pragma once

#include <cstdint>
#include <optional>

#include "kdmc/background.hpp"
#include "kdmc/core.hpp"
#include "kdmc/rng.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
struct StepConfig
{
    double dt{1};     //!< KDMC time step [s]; unused by kinetic transport
    double t_end{1};  //!< Observation time [s]

    void validate() const;
};

//---------------------------------------------------------------------------//
enum class TrajectoryStatus
{
    survived,
    absorbed,
};

struct TrajectoryOutcome
{
    Vec2 final_position{};
    TrajectoryStatus status{TrajectoryStatus::survived};
    std::uint64_t collision_count{0};
    std::uint64_t step_count{0};
};

//---------------------------------------------------------------------------//
struct FlightResult
{
    Vec2 endpoint{};
    bool absorbed{false};
    std::optional<Vec2> absorption_point;
};

/*!
 * Straight flight of duration \c dtau with velocity \c v from the particle
 * position.
 *
 * If the segment leaves the domain, the first boundary intersection is
 * reported. Simultaneous x- and y-face hits resolve to the x-face.
 */
FlightResult kinetic_flight(Particle const& p, Vec2 v, double dtau, Domain const& domain);

//! Remainder of the time step after a kinetic flight: dt - (tau mod dt)
double diffusive_time(double tau, double dt);

//---------------------------------------------------------------------------//
/*!
 * Fully resolved kinetic trajectory until \c cfg.t_end.
 *
 * Every charge-exchange collision is sampled; the final flight is truncated
 * at the end time.
 */
TrajectoryOutcome simulate_kinetic(Particle p,
                                   Background const& bg,
                                   Domain const& domain,
                                   StepConfig const& cfg,
                                   RngStream& rng);

/*!
 * Kinetic-diffusion trajectory until \c cfg.t_end.
 *
 * Each step is one kinetic flight up to the first collision followed by a
 * normally distributed increment that fills the remainder of the current
 * time step. Diffusive increments are absorbed only if their endpoint lies
 * outside the domain.
 *
 * Flight times and velocities come from \c rng in the same order as in
 * simulate_kinetic; the normal deviates of the diffusive increments come from
 * a separate substream of \c rng.
 */
TrajectoryOutcome simulate_kdmc(Particle p,
                                Background const& bg,
                                Domain const& domain,
                                StepConfig const& cfg,
                                RngStream& rng);

/*!
 * Background fields for a diffusive sub-step starting at \c x_kin.
 *
 * The endpoint is estimated with the mean displacement (zero covariance)
 * using the fields at \c x_prev; the fields are then taken at the midpoint
 * between \c x_kin and that estimate.
 */
BackgroundFields midpoint_fields(Background const& bg,
                                 Vec2 x_prev,
                                 Vec2 x_kin,
                                 Vec2 v_next,
                                 double theta);

}  // namespace kdmc
